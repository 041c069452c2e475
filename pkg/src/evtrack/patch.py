"""Per-feature patch machinery: membership, bilinear accumulation, the
decaying history patch, the variance objective and its knot gradient.

Patch grids live in the feature's reference frame.  Grid index (i, j) is
offset (i - R, j - R) from the patch center, R = (d-1)/2, axis 0 along x.
The variance statistics run over the circular pixel mask only; splatted
mass outside the mask (or the grid) is kept out of the statistics but is
not an error.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .events import EventArray, as_event_array
from .spline import Se2Spline, basis_matrix, evaluate
from .se2 import apply


@lru_cache(maxsize=None)
def circular_mask(diameter: int) -> np.ndarray:
    """Boolean (d, d) mask of pixel centers within R of the patch center
    (integer test, boundary included)."""
    if diameter % 2 != 1 or diameter < 1:
        raise ValueError(f"patch diameter must be odd and positive, got {diameter}")
    r = (diameter - 1) // 2
    ij = np.arange(diameter) - r
    mask = ij[:, None] ** 2 + ij[None, :] ** 2 <= r * r
    mask.setflags(write=False)
    return mask


@dataclass(frozen=True)
class PatchGrid:
    """Accumulation grid of one feature's patch in its reference frame."""

    values: np.ndarray
    center: np.ndarray
    reference_time: float = 0.0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] % 2 != 1:
            raise ValueError(f"grid must be square with odd side, got {v.shape}")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float).reshape(2))

    @staticmethod
    def zeros(diameter: int, center, reference_time: float = 0.0) -> "PatchGrid":
        return PatchGrid(np.zeros((diameter, diameter)), center, reference_time)

    @property
    def diameter(self) -> int:
        return self.values.shape[0]

    @property
    def radius(self) -> int:
        return (self.diameter - 1) // 2

    @property
    def mask(self) -> np.ndarray:
        return circular_mask(self.diameter)

    @property
    def n_pixels(self) -> int:
        return int(self.mask.sum())


@dataclass(frozen=True)
class HistoryPatch:
    """Exponentially decayed accumulation of folded patch segments."""

    values: np.ndarray
    decay: float
    folded_until: float

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if not 0.0 <= self.decay <= 1.0:
            raise ValueError(f"decay must lie in [0, 1], got {self.decay}")

    @staticmethod
    def zeros(diameter: int, decay: float, start_time: float) -> "HistoryPatch":
        return HistoryPatch(np.zeros((diameter, diameter)), decay, start_time)


def bilinear_kernel(a, b) -> float:
    """max(0, 1-|a1-b1|) * max(0, 1-|a2-b2|); unit mass over the integer grid."""
    a = np.asarray(a, dtype=float).reshape(2)
    b = np.asarray(b, dtype=float).reshape(2)
    return float(max(0.0, 1.0 - abs(a[0] - b[0])) * max(0.0, 1.0 - abs(a[1] - b[1])))


def warp_event(spline: Se2Spline, event) -> np.ndarray:
    """Event position carried to the feature's reference frame."""
    return apply(evaluate(spline, event.t), (event.x, event.y))


def in_patch(spline: Se2Spline, event, center, radius: float) -> bool:
    """True iff the warped event lands strictly within ``radius`` of the
    patch center."""
    w = warp_event(spline, event)
    return bool(np.hypot(*(w - np.asarray(center, dtype=float))) < radius)


def accumulate(events, spline: Se2Spline, interval, grid: PatchGrid) -> PatchGrid:
    """Splat the in-patch events with timestamps in [interval[0], interval[1])
    into a copy of ``grid``.  Polarity is ignored (set signed=True to weight
    each event by its polarity instead)."""
    ev = as_event_array(events)
    lo, hi = float(interval[0]), float(interval[1])
    sel = (ev.t >= lo) & (ev.t < hi)
    ev = ev[sel]
    if len(ev):
        t0, t1 = ev.t.min(), ev.t.max()
        dom = spline.domain
        if t0 < dom[0] or t1 > dom[1]:
            raise ValueError(f"events span [{t0}, {t1}] outside spline domain {dom}")
        wx, wy = kernels.warp(ev.t, ev.x, ev.y, spline.knots, spline.t0,
                              spline.knot_interval, basis_matrix(spline.order))
        keep = np.hypot(wx - grid.center[0], wy - grid.center[1]) < grid.radius
        ev = ev[keep]
    values = grid.values + kernels.splat(
        ev.t, ev.x, ev.y, spline.knots, spline.t0, spline.knot_interval,
        basis_matrix(spline.order), grid.center[0], grid.center[1], grid.diameter,
    )
    return PatchGrid(values, grid.center, grid.reference_time)


def fold_history(history: HistoryPatch, segment_image: PatchGrid) -> HistoryPatch:
    """One step of the recurrence: new = segment + decay * old."""
    return HistoryPatch(
        segment_image.values + history.decay * history.values,
        history.decay,
        max(history.folded_until, segment_image.reference_time),
    )


def modified_image(active_image: PatchGrid, history: HistoryPatch) -> PatchGrid:
    if active_image.values.shape != history.values.shape:
        raise ValueError(
            f"grid shapes differ: {active_image.values.shape} vs {history.values.shape}"
        )
    return PatchGrid(
        active_image.values + history.values,
        active_image.center,
        active_image.reference_time,
    )


def masked_variance(values: np.ndarray, mask: np.ndarray) -> float:
    """Population variance over the masked pixels."""
    v = values[mask]
    return float(np.mean((v - v.mean()) ** 2))


def variance(grid: PatchGrid) -> float:
    """Contrast of the patch: variance of the masked pixel values."""
    return masked_variance(grid.values, grid.mask)


def _residual(istar: np.ndarray, mask: np.ndarray) -> tuple[float, np.ndarray, int]:
    """(variance, residual image zeroed outside mask, mask pixel count)."""
    n = int(mask.sum())
    mean = istar[mask].sum() / n
    res = np.where(mask, istar - mean, 0.0)
    sigma = float(np.sum(res[mask] ** 2) / n)
    return sigma, res, n


def objective_gradient(events, spline: Se2Spline, optimizable_knots, history: HistoryPatch,
                       center, diameter: int):
    """Patch variance of the modified image and its gradient w.r.t. the
    optimizable knot suffix.

    ``events`` are the feature's admitted active-window events (membership
    is the caller's bookkeeping, not re-tested here; mass that a candidate
    warp pushes off the grid simply drops out).  ``optimizable_knots`` must
    be a contiguous suffix of knot indices.  The history patch is a frozen
    additive term: it shifts the variance but contributes no gradient.

    Returns (value, gradient) with gradient of shape (len(optimizable_knots), 3).
    """
    opt = sorted(int(i) for i in optimizable_knots)
    if not opt:
        raise ValueError("optimizable knot set is empty")
    if opt != list(range(opt[0], spline.n_knots)):
        raise ValueError(
            f"optimizable knots {opt} are not a contiguous suffix of 0..{spline.n_knots - 1}"
        )
    ev = as_event_array(events)
    if len(ev):
        dom = spline.domain
        if ev.t.min() < dom[0] or ev.t.max() > dom[1]:
            raise ValueError("events fall outside the spline domain")
    first_opt = opt[0]
    mask = circular_mask(diameter)
    basis = basis_matrix(spline.order)
    cx, cy = float(center[0]), float(center[1])
    active = kernels.splat(ev.t, ev.x, ev.y, spline.knots, spline.t0,
                           spline.knot_interval, basis, cx, cy, diameter)
    sigma, res, n = _residual(active + history.values, mask)
    grad = kernels.splat_gradient(
        ev.t, ev.x, ev.y, spline.knots, spline.t0, spline.knot_interval,
        basis, cx, cy, diameter, res, 2.0 / n, first_opt,
    )
    return sigma, grad
