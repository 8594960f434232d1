"""Axis-aligned boxes, run-length-encoded binary masks, and overlap primitives.

Boxes are continuous center-format values. The project-wide pixel convention
is that a box with integer top-left corner (x, y) and integer size (w, h)
covers the pixel columns x..x+w-1 and rows y..y+h-1, which gives the center
mapping cx = x + (w - 1) / 2. Under this convention the continuous extent of
a box along x is the half-open interval [cx - (w - 1)/2, cx - (w - 1)/2 + w),
so box-box IoU of integral boxes equals the pixel-count IoU of their
rasterizations.

Masks are binary bitmaps stored as alternating run lengths in row-major
order, always starting with a run of zeros (possibly of length 0). Canonical
masks contain no other zero-length runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class BBox:
    """Axis-aligned box in center format; `empty` marks the no-box value."""

    cx: float
    cy: float
    w: float
    h: float
    empty: bool = False

    def __post_init__(self):
        if self.empty:
            return
        if not all(math.isfinite(v) for v in (self.cx, self.cy, self.w, self.h)):
            raise ValueError(f"non-finite box fields: {self}")
        if self.w <= 0 or self.h <= 0:
            raise ValueError(f"non-empty box must have positive size, got w={self.w} h={self.h}")

    @staticmethod
    def make_empty() -> "BBox":
        return BBox(0.0, 0.0, 0.0, 0.0, empty=True)

    @staticmethod
    def from_xywh(x: float, y: float, w: float, h: float) -> "BBox":
        """Top-left integer-pixel format to center format (cx = x + (w-1)/2)."""
        if w <= 0 or h <= 0:
            return BBox.make_empty()
        return BBox(x + (w - 1) / 2, y + (h - 1) / 2, w, h)

    def to_xywh(self) -> tuple[float, float, float, float]:
        if self.empty:
            return (0.0, 0.0, 0.0, 0.0)
        return (self.cx - (self.w - 1) / 2, self.cy - (self.h - 1) / 2, self.w, self.h)

    @property
    def area(self) -> float:
        return 0.0 if self.empty else self.w * self.h

    @property
    def x_min(self) -> float:
        """Index of the first covered pixel column (for integral boxes)."""
        return self.cx - (self.w - 1) / 2

    @property
    def y_min(self) -> float:
        return self.cy - (self.h - 1) / 2

    @property
    def x_max(self) -> float:
        """Index of the last covered pixel column (for integral boxes)."""
        return self.cx + (self.w - 1) / 2

    @property
    def y_max(self) -> float:
        return self.cy + (self.h - 1) / 2


def iou(a: BBox, b: BBox) -> float:
    """Intersection over union of two boxes; 0 if either is empty."""
    if a.empty or b.empty:
        return 0.0
    ax, ay = a.x_min, a.y_min
    bx, by = b.x_min, b.y_min
    iw = min(ax + a.w, bx + b.w) - max(ax, bx)
    if iw <= 0.0:
        return 0.0
    ih = min(ay + a.h, by + b.h) - max(ay, by)
    if ih <= 0.0:
        return 0.0
    inter = iw * ih
    return inter / (a.w * a.h + b.w * b.h - inter)


def center_distance(a: BBox, b: BBox) -> float:
    """Euclidean distance between box centers, in pixels."""
    if a.empty or b.empty:
        raise ValueError("center distance undefined for empty boxes")
    return math.hypot(a.cx - b.cx, a.cy - b.cy)


def normalized_center_distance(pred: BBox, gt: BBox) -> float:
    """Center offset normalized per-axis by the ground-truth box size."""
    if gt.empty:
        raise ValueError("normalized distance needs a non-empty ground-truth box")
    if pred.empty:
        raise ValueError("normalized distance undefined for an empty prediction")
    return math.hypot((pred.cx - gt.cx) / gt.w, (pred.cy - gt.cy) / gt.h)


@dataclass(frozen=True)
class RleMask:
    """Row-major run-length mask; runs alternate 0s/1s starting with a 0-run."""

    grid_w: int
    grid_h: int
    runs: tuple[int, ...]

    def __post_init__(self):
        if self.grid_w <= 0 or self.grid_h <= 0:
            raise ValueError(f"grid must be positive, got {self.grid_w}x{self.grid_h}")
        total = 0
        for i, r in enumerate(self.runs):
            if r < 0:
                raise ValueError(f"negative run length at position {i}")
            if r == 0 and i > 0:
                raise ValueError(f"zero-length run at position {i} (only the leading run may be 0)")
            total += r
        if total != self.grid_w * self.grid_h:
            raise ValueError(
                f"run lengths sum to {total}, expected {self.grid_w * self.grid_h}"
            )

    def decode(self) -> np.ndarray:
        """Expand to a (grid_h, grid_w) boolean bitmap."""
        flat = np.zeros(self.grid_w * self.grid_h, dtype=bool)
        pos = 0
        for i, r in enumerate(self.runs):
            if i % 2 == 1:
                flat[pos:pos + r] = True
            pos += r
        return flat.reshape(self.grid_h, self.grid_w)

    def to_text(self) -> str:
        """Fixture form: "grid_w grid_h: r0 r1 r2 ..."."""
        return f"{self.grid_w} {self.grid_h}: " + " ".join(str(r) for r in self.runs)

    @staticmethod
    def from_text(text: str) -> "RleMask":
        head, _, tail = text.partition(":")
        parts = head.split()
        if len(parts) != 2 or not tail.strip():
            raise ValueError(f"malformed RLE text: {text!r}")
        try:
            gw, gh = int(parts[0]), int(parts[1])
            runs = tuple(int(t) for t in tail.split())
        except ValueError as exc:
            raise ValueError(f"malformed RLE text: {text!r}") from exc
        return RleMask(gw, gh, runs)


def encode_mask(bitmap: np.ndarray) -> RleMask:
    """Run-length encode a 2D boolean bitmap (canonical form)."""
    if bitmap.ndim != 2:
        raise ValueError(f"expected a 2D bitmap, got shape {bitmap.shape}")
    h, w = bitmap.shape
    flat = np.asarray(bitmap, dtype=bool).ravel()
    if flat.size == 0:
        raise ValueError("cannot encode an empty bitmap")
    # boundaries where the value changes; runs are the gaps between them
    changes = np.flatnonzero(flat[1:] != flat[:-1]) + 1
    bounds = np.empty(changes.size + 2, dtype=np.int64)
    bounds[0] = 0
    bounds[1:-1] = changes
    bounds[-1] = flat.size
    runs = np.diff(bounds)
    if flat[0]:
        runs = np.concatenate(([0], runs))
    return RleMask(w, h, tuple(int(r) for r in runs))


def rect_mask(grid_w: int, grid_h: int, x0: int, y0: int, w: int, h: int) -> RleMask:
    """Canonical RLE of a filled pixel rectangle (clipped to the grid)."""
    x0c, y0c = max(x0, 0), max(y0, 0)
    x1c, y1c = min(x0 + w, grid_w), min(y0 + h, grid_h)
    wc, hc = x1c - x0c, y1c - y0c
    if wc <= 0 or hc <= 0:
        return RleMask(grid_w, grid_h, (grid_w * grid_h,))
    runs = [y0c * grid_w + x0c]
    gap = grid_w - wc
    if gap == 0:
        # full-width rows merge into one run
        runs.append(wc * hc)
    else:
        for _ in range(hc - 1):
            runs.append(wc)
            runs.append(gap)
        runs.append(wc)
    tail = (grid_h - y1c) * grid_w + (grid_w - x1c)
    if tail > 0:
        runs.append(tail)
    return RleMask(grid_w, grid_h, tuple(runs))


def mask_to_bbox(m: RleMask) -> BBox:
    """Tight center-format box around the mask's 1-pixels; empty if none."""
    w = m.grid_w
    min_r = min_c = None
    max_r = max_c = 0
    pos = 0
    for i, r in enumerate(m.runs):
        if i % 2 == 1 and r > 0:
            last = pos + r - 1
            r0, r1 = pos // w, last // w
            if min_r is None:
                min_r = r0
            max_r = r1
            if r1 > r0 or r >= w:
                min_c, max_c = 0, w - 1
            else:
                s, e = pos % w, last % w
                min_c = s if min_c is None else min(min_c, s)
                max_c = max(max_c, e)
        pos += r
    if min_r is None:
        return BBox.make_empty()
    return BBox(
        (min_c + max_c) / 2,
        (min_r + max_r) / 2,
        max_c - min_c + 1,
        max_r - min_r + 1,
    )
