"""Uniform B-splines over (x, y, theta) knot vectors.

Knots are blended in plain vector space and the blended 3-vector is read as
an SE(2) pose afterwards, so the derivative of the curve w.r.t. knot i is
exactly basis_weight_i * I (no Lie-group correction terms).  Angles are kept
unwrapped so blending across +-pi stays continuous.

``order`` counts the knots supporting one segment (degree + 1).  Segment j
covers [t0 + j*dt, t0 + (j+1)*dt) and is supported by knots j .. j+order-1;
the overall domain is closed on the right, with the endpoint evaluated as
the u -> 1 limit of the last segment.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .se2 import Se2Pose


@lru_cache(maxsize=None)
def basis_matrix(order: int) -> np.ndarray:
    """Polynomial coefficients of the uniform B-spline blending weights.

    Returns M of shape (order, order) with weight_i(u) = sum_m M[i, m] * u**m,
    i ordered from the earliest supporting knot.  Built by running the
    Cox-de Boor recursion on the polynomial coefficients themselves with
    exact rational arithmetic, then converting once to float.
    """
    if order < 2:
        raise ValueError(f"spline order must be >= 2, got {order}")
    # polys[i] = coefficients (ascending powers of u) of basis function
    # N_{i-p,p} restricted to the segment [0, 1), for the current degree p.
    polys = [[Fraction(1)]]
    for p in range(1, order):
        prev = {i - (p - 1): poly for i, poly in enumerate(polys)}
        nxt = []
        for i in range(-p, 1):
            left = prev.get(i)
            right = prev.get(i + 1)
            coeffs = [Fraction(0)] * (p + 1)
            if left is not None:
                # (u - i)/p * left
                for m, c in enumerate(left):
                    coeffs[m + 1] += c / p
                    coeffs[m] += c * Fraction(-i, p)
            if right is not None:
                # (i + p + 1 - u)/p * right
                for m, c in enumerate(right):
                    coeffs[m] += c * Fraction(i + p + 1, p)
                    coeffs[m + 1] -= c / p
            nxt.append(coeffs)
        polys = nxt
    out = np.array([[float(c) for c in row] for row in polys])
    out.setflags(write=False)
    return out


def _weights(u: float, order: int) -> np.ndarray:
    # No range check: evaluation of a domain endpoint passes u = 1.0 as the
    # right limit of the final segment.
    return basis_matrix(order) @ (float(u) ** np.arange(order))


def basis_weights(u: float, order: int) -> np.ndarray:
    """Blending weights of the ``order`` knots supporting a segment, at
    normalized parameter u in [0, 1)."""
    if order < 2:
        raise ValueError(f"spline order must be >= 2, got {order}")
    if not 0.0 <= u < 1.0:
        raise ValueError(f"normalized parameter must lie in [0, 1), got {u}")
    return _weights(u, order)


def n_segments(n_knots: int, order: int) -> int:
    return n_knots - order + 1


def locate(t: float, t0: float, dt: float, n_knots: int, order: int) -> tuple[int, float]:
    """Map an absolute time to (segment index, normalized parameter).

    Raises ValueError outside the evaluable domain
    [t0, t0 + n_segments*dt]; the right endpoint maps to the last segment
    with u = 1.
    """
    nseg = n_segments(n_knots, order)
    s = (t - t0) / dt
    if s < 0.0 or s > nseg:
        raise ValueError(
            f"time {t} outside spline domain [{t0}, {t0 + nseg * dt}]"
        )
    j = int(np.floor(s))
    if j >= nseg:  # exact right endpoint
        return nseg - 1, 1.0
    return j, s - j


@dataclass(frozen=True)
class Se2Spline:
    """Immutable uniform B-spline over (x, y, theta) knots.

    ``knots`` has shape (N, 3); knot i sits at time t0 + i*knot_interval.
    """

    knots: np.ndarray
    knot_interval: float
    t0: float = 0.0
    order: int = 3

    def __post_init__(self):
        k = np.ascontiguousarray(np.asarray(self.knots, dtype=float))
        if k.ndim != 2 or k.shape[1] != 3:
            raise ValueError(f"knots must have shape (N, 3), got {k.shape}")
        if self.order < 2:
            raise ValueError(f"order must be >= 2, got {self.order}")
        if len(k) < self.order:
            raise ValueError(
                f"need at least {self.order} knots for order {self.order}, got {len(k)}"
            )
        if not self.knot_interval > 0:
            raise ValueError("knot_interval must be positive")
        k = k.copy()
        k.setflags(write=False)
        object.__setattr__(self, "knots", k)
        object.__setattr__(self, "knot_interval", float(self.knot_interval))
        object.__setattr__(self, "t0", float(self.t0))

    @property
    def n_knots(self) -> int:
        return len(self.knots)

    @property
    def domain(self) -> tuple[float, float]:
        nseg = n_segments(self.n_knots, self.order)
        return self.t0, self.t0 + nseg * self.knot_interval

    def blend(self, t: float) -> np.ndarray:
        """Blended (x, y, theta) 3-vector at time t."""
        j, u = locate(t, self.t0, self.knot_interval, self.n_knots, self.order)
        w = _weights(u, self.order)
        return w @ self.knots[j : j + self.order]


def evaluate(spline: Se2Spline, t: float) -> Se2Pose:
    v = spline.blend(t)
    return Se2Pose(v[:2], v[2])


def knot_jacobian_weights(spline: Se2Spline, t: float) -> dict[int, float]:
    """d(blended value)/d(knot i) is weight_i * I3; returns {i: weight_i}
    for the ``order`` knots supporting t."""
    j, u = locate(t, spline.t0, spline.knot_interval, spline.n_knots, spline.order)
    w = _weights(u, spline.order)
    return {j + i: float(w[i]) for i in range(spline.order)}


def append_knot(spline: Se2Spline, value) -> Se2Spline:
    """New spline with one more knot; earlier segments evaluate bit-identically."""
    value = np.asarray(value, dtype=float).reshape(1, 3)
    return Se2Spline(
        np.vstack([spline.knots, value]),
        spline.knot_interval,
        spline.t0,
        spline.order,
    )
