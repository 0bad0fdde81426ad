"""MIAS-style annotation records and mass-region cropping.

Annotation files are plain text, one whitespace-separated record per line:

    mdb001 G CIRC B 535 425 197
    mdb003 D NORM

i.e. image id, tissue code (F/G/D), abnormality class, and, for abnormal
records, a severity code (B/M) followed by the circle centre x, centre y
and radius. '#' lines are ignored. MIAS coordinates use a bottom-left
origin by default; cropping can remap them to the top-left raster origin.
"""

from dataclasses import dataclass

import numpy as np

from .pgm import GrayImage

TISSUE_CODES = {"F": "fatty", "G": "fatty-glandular", "D": "dense"}
SEVERITY_CODES = {"B": "benign", "M": "malignant"}
NORMAL_CLASS = "NORM"


class AnnotationError(Exception):
    """A single unusable annotation line; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no
        self.message = message


class BadTissueCode(AnnotationError):
    pass


class BadSeverityCode(AnnotationError):
    pass


class NonNumericGeometry(AnnotationError):
    pass


class CropError(Exception):
    pass


class CenterOutOfBounds(CropError):
    pass


class EmptyRegion(CropError):
    pass


@dataclass
class RoiAnnotation:
    """One annotation record; geometry fields are None for normal tissue."""

    id: str
    tissue: str
    abnormality: str
    severity: str  # "benign" | "malignant" | "none"
    center_x: int | None = None
    center_y: int | None = None
    radius: int | None = None

    @property
    def has_geometry(self) -> bool:
        return self.center_x is not None


@dataclass(eq=False)
class MaskedRegion:
    """A cropped square plus a boolean participation mask of equal shape."""

    image: GrayImage
    mask: np.ndarray  # bool, shape (height, width)
    active_count: int

    def __post_init__(self):
        self.mask = np.asarray(self.mask, dtype=bool)
        if self.mask.shape != self.image.pixels.shape:
            raise ValueError("mask shape must match image shape")
        if self.active_count != int(self.mask.sum()) or self.active_count < 1:
            raise ValueError("active_count must equal the number of masked pixels (>= 1)")


def _parse_line(line_no: int, tokens: list[str]) -> RoiAnnotation:
    if len(tokens) < 3:
        raise AnnotationError(line_no, f"expected at least 3 fields, got {len(tokens)}")
    rec_id, tissue_code, abnormality = tokens[0], tokens[1], tokens[2]
    if tissue_code not in TISSUE_CODES:
        raise BadTissueCode(line_no, f"unknown tissue code {tissue_code!r}")
    tissue = TISSUE_CODES[tissue_code]

    if abnormality == NORMAL_CLASS:
        if len(tokens) > 3:
            raise AnnotationError(line_no, "normal record carries extra fields")
        return RoiAnnotation(rec_id, tissue, abnormality, "none")

    if len(tokens) < 4:
        raise BadSeverityCode(line_no, "abnormal record is missing a severity code")
    if tokens[3] not in SEVERITY_CODES:
        raise BadSeverityCode(line_no, f"unknown severity code {tokens[3]!r}")
    severity = SEVERITY_CODES[tokens[3]]

    if len(tokens) != 7:
        raise NonNumericGeometry(
            line_no, f"expected centre x, centre y, radius after severity, got {len(tokens) - 4} fields"
        )
    try:
        cx, cy, radius = int(tokens[4]), int(tokens[5]), int(tokens[6])
    except ValueError:
        raise NonNumericGeometry(
            line_no, f"non-numeric geometry {' '.join(tokens[4:7])!r}"
        ) from None
    if cx < 0 or cy < 0:
        raise NonNumericGeometry(line_no, "negative circle centre")
    if radius <= 0:
        raise NonNumericGeometry(line_no, f"radius must be positive, got {radius}")
    return RoiAnnotation(rec_id, tissue, abnormality, severity, cx, cy, radius)


def parse_annotations(text: str) -> tuple[list[RoiAnnotation], list[AnnotationError]]:
    """Parse an annotation file.

    Returns (records, errors): malformed lines become AnnotationError
    entries carrying their line number instead of aborting the whole
    parse, so one bad record never hides the rest of the file.
    """
    records: list[RoiAnnotation] = []
    errors: list[AnnotationError] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            records.append(_parse_line(line_no, stripped.split()))
        except AnnotationError as err:
            errors.append(err)
    return records, errors


def crop_region(
    img: GrayImage,
    ann: RoiAnnotation,
    mask_mode: str = "circle",
    y_origin: str = "bottom",
) -> MaskedRegion:
    """Crop the axis-aligned square around an annotated circle.

    The square [cx-r, cx+r] x [cy-r, cy+r] is intersected with the image
    bounds. In "circle" mode the mask marks pixels whose Euclidean distance
    from the centre is <= r (boundary included); in "square" mode every
    cropped pixel participates. With y_origin="bottom" the annotation row
    is remapped as cy' = height - 1 - cy before cropping, matching the
    MIAS convention of measuring from the bottom-left corner.
    """
    if mask_mode not in ("circle", "square"):
        raise ValueError(f"unknown mask_mode {mask_mode!r}")
    if y_origin not in ("top", "bottom"):
        raise ValueError(f"unknown y_origin {y_origin!r}")
    if not ann.has_geometry:
        raise CropError(f"annotation {ann.id!r} carries no geometry")

    cx = ann.center_x
    cy = ann.center_y if y_origin == "top" else img.height - 1 - ann.center_y
    if not (0 <= cx < img.width and 0 <= cy < img.height):
        raise CenterOutOfBounds(
            f"centre ({cx}, {cy}) lies outside {img.width}x{img.height} image"
        )
    r = ann.radius
    x0, x1 = max(cx - r, 0), min(cx + r, img.width - 1)
    y0, y1 = max(cy - r, 0), min(cy + r, img.height - 1)
    if x0 > x1 or y0 > y1:
        raise EmptyRegion("crop square does not intersect the image")

    sub = img.pixels[y0 : y1 + 1, x0 : x1 + 1].copy()
    cropped = GrayImage(x1 - x0 + 1, y1 - y0 + 1, sub)
    if mask_mode == "square":
        mask = np.ones(sub.shape, dtype=bool)
    else:
        ys = np.arange(y0, y1 + 1)[:, None] - cy
        xs = np.arange(x0, x1 + 1)[None, :] - cx
        mask = (xs * xs + ys * ys) <= r * r
    return MaskedRegion(cropped, mask, int(mask.sum()))
