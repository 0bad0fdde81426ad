"""Texture-feature extraction and MLP classification of mammogram mass crops.

The pipeline: read PGM mammograms, crop annotated mass regions, compute
seven first-order texture statistics per region, train a single-hidden-
layer sigmoid network on the labeled feature vectors, and evaluate
benign/malignant decisions with confusion-matrix metrics.
"""

from .evaluation import ConfusionMatrix, MetricsReport, classify, confusion, metrics
from .features import FeatureRecord, Histogram256, compute_features, histogram
from .mlp import LabeledSample, MlpModel, Topology, backprop_gradient, forward, hidden_units, mse
from .pgm import GrayImage, read_pgm, write_pgm
from .roi import MaskedRegion, RoiAnnotation, crop_region, parse_annotations
from .training import SplitSpec, TrainConfig, TrainReport, encode_targets, split, train

__version__ = "0.1.0"

__all__ = [
    "ConfusionMatrix",
    "FeatureRecord",
    "GrayImage",
    "Histogram256",
    "LabeledSample",
    "MaskedRegion",
    "MetricsReport",
    "MlpModel",
    "RoiAnnotation",
    "SplitSpec",
    "Topology",
    "TrainConfig",
    "TrainReport",
    "backprop_gradient",
    "classify",
    "compute_features",
    "confusion",
    "crop_region",
    "encode_targets",
    "forward",
    "hidden_units",
    "histogram",
    "metrics",
    "mse",
    "parse_annotations",
    "read_pgm",
    "split",
    "train",
    "write_pgm",
]
