"""First-order statistical texture features of a masked grayscale region.

Seven descriptors are computed from the region's intensity distribution,
after normalizing each 8-bit pixel to q = p / 255:

    mean        mu    = (1/n) * sum(q)
    std         sigma = sqrt((1/n) * sum((q - mu)^2))        (population form)
    smoothness  R     = 1 - 1 / (1 + sigma^2)
    entropy     h     = -sum_k Pr_k * log2(Pr_k)             (bits, 256 levels)
    skewness    S     = (1/n) * sum(((q - mu) / sigma)^3)
    kurtosis    K     = (1/n) * sum(((q - mu) / sigma)^4) - 3 (0 for a normal)
    uniformity  U     = sum_k Pr_k^2

Only pixels marked true in the region mask participate. Histogram
probabilities Pr_k use the 256 raw 8-bit levels; since the q bins are an
equal-width relabeling of the raw levels, entropy and uniformity are
identical either way. Constant regions have sigma = 0, where skewness and
kurtosis are defined to be 0 (the symmetric, peak-neutral value).
"""

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .roi import MaskedRegion

FEATURE_NAMES = ("mean", "std", "smoothness", "entropy", "skewness", "kurtosis", "uniformity")
FEATURE_CSV_HEADER = ("id",) + FEATURE_NAMES + ("label",)

LABEL_BENIGN = 0
LABEL_MALIGNANT = 1

# below this, a region counts as constant and S = K = 0
SIGMA_FLOOR = 1e-12


class FeatureCsvError(Exception):
    """Unreadable feature CSV; message carries file and line context."""


@dataclass
class Histogram256:
    """Counts of the 256 raw gray levels over the masked pixels."""

    counts: np.ndarray  # int64, length 256
    total: int

    def probabilities(self) -> np.ndarray:
        return self.counts / self.total


@dataclass
class FeatureRecord:
    """The seven features of one region plus an optional 0/1 severity label."""

    id: str
    mean: float
    std: float
    smoothness: float
    entropy: float
    skewness: float
    kurtosis: float
    uniformity: float
    label: int | None = None

    def vector(self) -> np.ndarray:
        """Feature values in the fixed classifier input order."""
        return np.array(
            [self.mean, self.std, self.smoothness, self.entropy,
             self.skewness, self.kurtosis, self.uniformity],
            dtype=np.float64,
        )


def histogram(region: MaskedRegion) -> Histogram256:
    """Histogram of raw 8-bit values over the masked pixels."""
    values = region.image.pixels[region.mask]
    counts = np.bincount(values, minlength=256).astype(np.int64)
    return Histogram256(counts, int(values.size))


def compute_features(region: MaskedRegion, id: str) -> FeatureRecord:
    """Compute the seven descriptors for a masked region (label left unset)."""
    values = region.image.pixels[region.mask]
    n = values.size
    q = values.astype(np.float64) / 255.0

    mu = float(q.sum() / n)
    var = float(((q - mu) ** 2).sum() / n)
    sigma = float(np.sqrt(var))
    smoothness = 1.0 - 1.0 / (1.0 + var)

    pr = histogram(region).probabilities()
    nz = pr[pr > 0.0]
    entropy = float(-(nz * np.log2(nz)).sum()) + 0.0  # +0.0 folds -0.0 into 0.0
    uniformity = float((pr * pr).sum())

    if sigma < SIGMA_FLOOR:
        skewness = 0.0
        kurtosis = 0.0
    else:
        t = (q - mu) / sigma
        skewness = float((t**3).sum() / n)
        kurtosis = float((t**4).sum() / n) - 3.0

    return FeatureRecord(id, mu, sigma, smoothness, entropy, skewness, kurtosis, uniformity)


def _format_real(x: float) -> str:
    return format(float(x), ".17g")


def write_feature_csv(records, dest) -> None:
    """Write records to ``dest`` (path or text file object).

    Header is fixed; reals carry 17 significant digits so values round-trip
    exactly; the label cell is empty for unlabeled records.
    """
    if isinstance(dest, (str, Path)):
        with open(dest, "w", newline="") as fh:
            write_feature_csv(records, fh)
        return
    writer = csv.writer(dest, lineterminator="\n")
    writer.writerow(FEATURE_CSV_HEADER)
    for rec in records:
        row = [rec.id] + [_format_real(v) for v in rec.vector()]
        row.append("" if rec.label is None else str(int(rec.label)))
        writer.writerow(row)


def read_feature_csv(source) -> list[FeatureRecord]:
    """Read a feature CSV written by write_feature_csv."""
    if isinstance(source, (str, Path)):
        with open(source, "r", newline="") as fh:
            try:
                return read_feature_csv(fh)
            except FeatureCsvError as err:
                raise FeatureCsvError(f"{source}: {err}") from None

    reader = csv.reader(source)
    header = next(reader, None)
    if header is None or tuple(header) != FEATURE_CSV_HEADER:
        raise FeatureCsvError(f"bad header {header!r}")
    records = []
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(FEATURE_CSV_HEADER):
            raise FeatureCsvError(f"line {line_no}: expected {len(FEATURE_CSV_HEADER)} cells, got {len(row)}")
        try:
            values = [float(cell) for cell in row[1:8]]
            label = None if row[8] == "" else int(row[8])
        except ValueError as err:
            raise FeatureCsvError(f"line {line_no}: {err}") from None
        if label is not None and label not in (LABEL_BENIGN, LABEL_MALIGNANT):
            raise FeatureCsvError(f"line {line_no}: label must be 0 or 1, got {label}")
        records.append(FeatureRecord(row[0], *values, label=label))
    return records
