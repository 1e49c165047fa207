"""Point ingestion onto a fixed pixel grid and Gaussian density smoothing.

Points live in data units; the grid is addressed as (x, y) pixels with
x = column, y = row, pixel (0, 0) covering the (x_min, y_min) corner of the
viewport. Density values are stored row-major, index = y * width + x.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import convolve1d

from .errors import DataError, NoDataError, ParameterError

# Gaussian kernels are truncated at this many standard deviations and
# renormalized to sum 1. The dense oracle must use the same constant.
KERNEL_TRUNCATE_SIGMAS = 4.0

# Fallback smoothing bandwidth: 1% of the larger grid dimension.
DEFAULT_BANDWIDTH_FRACTION = 0.01

# Extra data-space margin added around the point bounding box by default.
DEFAULT_PADDING_FRACTION = 0.05


@dataclass(frozen=True)
class Point2D:
    """One projected data point; weight scales its contribution to the grid."""

    x: float
    y: float
    weight: float = 1.0
    text: str | None = None


@dataclass(frozen=True)
class PointBatch:
    """Column-oriented twin of a Point2D sequence, for bulk operations."""

    xs: np.ndarray
    ys: np.ndarray
    weights: np.ndarray
    texts: list[str | None] | None = None

    def __len__(self) -> int:
        return int(self.xs.shape[0])

    @classmethod
    def from_points(cls, points) -> "PointBatch":
        xs = np.fromiter((p.x for p in points), dtype=np.float64, count=len(points))
        ys = np.fromiter((p.y for p in points), dtype=np.float64, count=len(points))
        ws = np.fromiter((p.weight for p in points), dtype=np.float64, count=len(points))
        texts = [p.text for p in points]
        if all(t is None for t in texts):
            texts = None
        return cls(xs, ys, ws, texts)


def as_batch(points) -> PointBatch:
    """Accept either a PointBatch or any sequence of Point2D."""
    if isinstance(points, PointBatch):
        return points
    return PointBatch.from_points(list(points))


@dataclass(frozen=True)
class Viewport:
    """Axis-aligned data-space window mapped onto a width x height pixel grid.

    Pixel (px, py) covers the half-open data rectangle
    [x_min + px*sx, x_min + (px+1)*sx) x [y_min + py*sy, y_min + (py+1)*sy),
    with sx = (x_max - x_min) / width and sy likewise.
    """

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    width: int
    height: int

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ParameterError(
                f"viewport extents must be increasing, got x [{self.x_min}, {self.x_max}],"
                f" y [{self.y_min}, {self.y_max}]"
            )
        if self.width < 1 or self.height < 1:
            raise ParameterError("viewport must be at least 1x1 pixels")

    @property
    def sx(self) -> float:
        return (self.x_max - self.x_min) / self.width

    @property
    def sy(self) -> float:
        return (self.y_max - self.y_min) / self.height

    def pixel_to_data_x(self, px) -> float:
        return self.x_min + px * self.sx

    def pixel_to_data_y(self, py) -> float:
        return self.y_min + py * self.sy

    def to_dict(self) -> dict:
        return {
            "x_min": self.x_min,
            "x_max": self.x_max,
            "y_min": self.y_min,
            "y_max": self.y_max,
            "width": self.width,
            "height": self.height,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Viewport":
        return cls(d["x_min"], d["x_max"], d["y_min"], d["y_max"],
                   int(d["width"]), int(d["height"]))


@dataclass
class DensityMap:
    """Non-negative density values on a viewport grid, shape (height, width)."""

    viewport: Viewport
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        h, w = self.viewport.height, self.viewport.width
        if self.values.shape != (h, w):
            raise DataError(
                f"density values shape {self.values.shape} does not match viewport ({h}, {w})"
            )
        if not np.isfinite(self.values).all():
            raise DataError("density values must be finite")
        if (self.values < 0).any():
            raise DataError("density values must be non-negative")

    @property
    def width(self) -> int:
        return self.viewport.width

    @property
    def height(self) -> int:
        return self.viewport.height


def auto_viewport(points, width: int, height: int,
                  padding_fraction: float = DEFAULT_PADDING_FRACTION) -> Viewport:
    """Bounding box of the points, expanded by padding_fraction per side.

    An axis where every coordinate coincides is widened symmetrically by
    0.5 data units instead.
    """
    if width < 1 or height < 1:
        raise ParameterError("grid dimensions must be >= 1")
    if not (0 <= padding_fraction < 1):
        raise ParameterError("padding_fraction must be in [0, 1)")
    batch = as_batch(points)
    finite = np.isfinite(batch.xs) & np.isfinite(batch.ys)
    if len(batch) == 0 or not finite.any():
        raise NoDataError("no data: cannot derive a viewport from an empty point set")
    xs, ys = batch.xs[finite], batch.ys[finite]

    def _axis(lo: float, hi: float) -> tuple[float, float]:
        if lo == hi:
            return lo - 0.5, hi + 0.5
        pad = (hi - lo) * padding_fraction
        return lo - pad, hi + pad

    x_min, x_max = _axis(float(xs.min()), float(xs.max()))
    y_min, y_max = _axis(float(ys.min()), float(ys.max()))
    return Viewport(x_min, x_max, y_min, y_max, width, height)


def bin_points(points, viewport: Viewport) -> DensityMap:
    """Accumulate point weights into the pixel grid.

    Points outside the viewport are dropped; points exactly on the x_max/y_max
    edge land in the last column/row. Non-finite coordinates are skipped with
    a counted warning. The grid total equals the total in-viewport weight.
    """
    batch = as_batch(points)
    w, h = viewport.width, viewport.height
    if len(batch) == 0:
        return DensityMap(viewport, np.zeros((h, w)))
    if (batch.weights < 0).any():
        raise DataError("point weights must be non-negative")

    finite = (np.isfinite(batch.xs) & np.isfinite(batch.ys)
              & np.isfinite(batch.weights))
    n_bad = int(len(batch) - finite.sum())
    if n_bad:
        warnings.warn(f"bin_points: skipped {n_bad} point(s) with non-finite values")

    xs, ys, ws = batch.xs[finite], batch.ys[finite], batch.weights[finite]
    inside = ((xs >= viewport.x_min) & (xs <= viewport.x_max)
              & (ys >= viewport.y_min) & (ys <= viewport.y_max))
    xs, ys, ws = xs[inside], ys[inside], ws[inside]

    px = np.floor((xs - viewport.x_min) / viewport.sx).astype(np.int64)
    py = np.floor((ys - viewport.y_min) / viewport.sy).astype(np.int64)
    np.clip(px, 0, w - 1, out=px)
    np.clip(py, 0, h - 1, out=py)
    grid = np.bincount(py * w + px, weights=ws, minlength=w * h)
    return DensityMap(viewport, grid.reshape(h, w))


def gaussian_kernel(sigma: float) -> np.ndarray:
    """Discrete Gaussian taps truncated at KERNEL_TRUNCATE_SIGMAS, summing to 1."""
    if sigma <= 0:
        raise ParameterError("gaussian_kernel requires sigma > 0")
    radius = int(math.ceil(KERNEL_TRUNCATE_SIGMAS * sigma))
    t = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(t * t) / (2.0 * sigma * sigma))
    return k / k.sum()


def smooth(counts: DensityMap, bandwidth_px: float) -> DensityMap:
    """Convolve the grid with an isotropic Gaussian of std bandwidth_px pixels.

    Separable x-then-y passes with zero padding at the borders; bandwidth 0
    returns an unchanged copy. Mass is conserved up to border leakage.
    """
    if bandwidth_px < 0:
        raise ParameterError("bandwidth_px must be >= 0")
    if bandwidth_px == 0:
        return DensityMap(counts.viewport, counts.values.copy())
    k = gaussian_kernel(bandwidth_px)
    out = convolve1d(counts.values, k, axis=1, mode="constant", cval=0.0)
    out = convolve1d(out, k, axis=0, mode="constant", cval=0.0)
    return DensityMap(counts.viewport, out)


def default_bandwidth(viewport: Viewport) -> float:
    return DEFAULT_BANDWIDTH_FRACTION * max(viewport.width, viewport.height)
