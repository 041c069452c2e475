"""Pure numpy implementations of the per-event hot kernels.

These are the import-time fallback for the compiled extension and the
reference its outputs are tested against.  All three entry points share the
same conventions:

* ``knots`` is the full (N, 3) knot array of a uniform spline starting at
  ``t0`` with spacing ``dt``; ``basis`` is the (order, order) polynomial
  coefficient matrix from :func:`evtrack.spline.basis_matrix`.
* Event times must lie inside the spline domain; the segment index is
  clamped so the domain's right endpoint evaluates as the u -> 1 limit.
* Patch grids are (d, d) with axis 0 along x, axis 1 along y; the patch
  center maps to index ((d-1)/2, (d-1)/2).
"""
from __future__ import annotations

import numpy as np


def _segments(t, t0, dt, n_knots, order):
    s = (np.asarray(t, dtype=float) - t0) / dt
    nseg = n_knots - order + 1
    j = np.floor(s).astype(np.int64)
    np.clip(j, 0, nseg - 1, out=j)
    return j, s - j


def _blend(t, x, y, knots, t0, dt, basis):
    """Per-event blended pose (px, py, theta) and the basis weights."""
    order = basis.shape[0]
    j, u = _segments(t, t0, dt, len(knots), order)
    powers = u[:, None] ** np.arange(order)[None, :]
    lam = powers @ basis.T  # (n, order)
    support = knots[j[:, None] + np.arange(order)[None, :]]  # (n, order, 3)
    pose = np.einsum("no,nok->nk", lam, support)
    return j, lam, pose


def warp(t, x, y, knots, t0, dt, basis):
    """Warped positions of events under the spline, as (wx, wy) arrays."""
    _, _, pose = _blend(t, x, y, knots, t0, dt, basis)
    c, s = np.cos(pose[:, 2]), np.sin(pose[:, 2])
    return c * x - s * y + pose[:, 0], s * x + c * y + pose[:, 1]


def splat(t, x, y, knots, t0, dt, basis, cx, cy, d):
    """Bilinear accumulation of warped events into a (d, d) patch grid.

    Mass falling outside the grid is dropped (events are not rejected).
    """
    grid = np.zeros(d * d)
    if len(t) == 0:
        return grid.reshape(d, d)
    r = (d - 1) // 2
    wx, wy = warp(t, x, y, knots, t0, dt, basis)
    qx = wx - cx + r
    qy = wy - cy + r
    ax = np.floor(qx).astype(np.int64)
    ay = np.floor(qy).astype(np.int64)
    fx = qx - ax
    fy = qy - ay
    for ox, oy, w in (
        (0, 0, (1 - fx) * (1 - fy)),
        (1, 0, fx * (1 - fy)),
        (0, 1, (1 - fx) * fy),
        (1, 1, fx * fy),
    ):
        ix = ax + ox
        iy = ay + oy
        ok = (ix >= 0) & (ix < d) & (iy >= 0) & (iy < d)
        if ok.any():
            grid += np.bincount(ix[ok] * d + iy[ok], weights=w[ok], minlength=d * d)
    return grid.reshape(d, d)


def splat_gradient(t, x, y, knots, t0, dt, basis, cx, cy, d, residual, scale, first_opt):
    """Gradient of scale * sum(residual * patch_image) w.r.t. knots.

    ``residual`` must be zero outside the variance mask; with
    residual = I* - mean(I*) and scale = 2/N this is the gradient of the
    patch variance.  Returns (n_knots - first_opt, 3); knots before
    ``first_opt`` are treated as fixed.

    The bilinear kernel's derivative at an exact integer offset uses the
    average of the one-sided slopes, which is zero along that axis.
    """
    order = basis.shape[0]
    n_opt = len(knots) - first_opt
    grad = np.zeros((n_opt, 3))
    if len(t) == 0:
        return grad
    r = (d - 1) // 2
    j, lam, pose = _blend(t, x, y, knots, t0, dt, basis)
    c, s = np.cos(pose[:, 2]), np.sin(pose[:, 2])
    rx = c * x - s * y  # warped position minus translation
    ry = s * x + c * y
    qx = rx + pose[:, 0] - cx + r
    qy = ry + pose[:, 1] - cy + r

    reach = (qx > -1) & (qx < d) & (qy > -1) & (qy < d)
    if not reach.any():
        return grad
    j, lam = j[reach], lam[reach]
    qx, qy, rx, ry = qx[reach], qy[reach], rx[reach], ry[reach]

    ax = np.floor(qx).astype(np.int64)
    ay = np.floor(qy).astype(np.int64)
    fx = qx - ax
    fy = qy - ay
    pad = np.zeros((d + 2, d + 2))
    pad[1 : d + 1, 1 : d + 1] = residual
    r00 = pad[ax + 1, ay + 1]
    r10 = pad[ax + 2, ay + 1]
    r01 = pad[ax + 1, ay + 2]
    r11 = pad[ax + 2, ay + 2]
    vx = (1 - fy) * (r10 - r00) + fy * (r11 - r01)
    vy = (1 - fx) * (r01 - r00) + fx * (r11 - r10)
    vx[fx == 0.0] = 0.0
    vy[fy == 0.0] = 0.0
    vth = vx * (-ry) + vy * rx

    for i in range(order):
        gi = j + i - first_opt
        ok = gi >= 0
        if not ok.any():
            continue
        w = lam[ok, i] * scale
        gio = gi[ok]
        grad[:, 0] += np.bincount(gio, weights=w * vx[ok], minlength=n_opt)
        grad[:, 1] += np.bincount(gio, weights=w * vy[ok], minlength=n_opt)
        grad[:, 2] += np.bincount(gio, weights=w * vth[ok], minlength=n_opt)
    return grad
