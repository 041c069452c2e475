# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled per-event kernels; mirrors kernels._reference exactly."""
from libc.math cimport cos, sin, floor

import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef inline void _pose_at(double t, double t0, double dt, int nseg, int order,
                          const double[:, ::1] knots, const double[:, ::1] basis,
                          double* lam, double* pose, Py_ssize_t* seg) nogil:
    cdef double s = (t - t0) / dt
    cdef Py_ssize_t j = <Py_ssize_t>floor(s)
    if j < 0:
        j = 0
    if j > nseg - 1:
        j = nseg - 1
    cdef double u = s - j
    cdef Py_ssize_t i, m
    cdef double w, up
    pose[0] = 0.0
    pose[1] = 0.0
    pose[2] = 0.0
    for i in range(order):
        w = 0.0
        up = 1.0
        for m in range(order):
            w += basis[i, m] * up
            up *= u
        lam[i] = w
        pose[0] += w * knots[j + i, 0]
        pose[1] += w * knots[j + i, 1]
        pose[2] += w * knots[j + i, 2]
    seg[0] = j


def warp(const double[::1] t, const double[::1] x, const double[::1] y,
         const double[:, ::1] knots, double t0, double dt,
         const double[:, ::1] basis):
    cdef Py_ssize_t n = t.shape[0]
    cdef int order = basis.shape[0]
    if order > 16:
        raise ValueError("kernel supports spline orders up to 16")
    cdef int nseg = knots.shape[0] - order + 1
    wx_arr = np.empty(n)
    wy_arr = np.empty(n)
    cdef double[::1] wx = wx_arr
    cdef double[::1] wy = wy_arr
    cdef double lam[16]
    cdef double pose[3]
    cdef Py_ssize_t k, j
    cdef double c, s
    with nogil:
        for k in range(n):
            _pose_at(t[k], t0, dt, nseg, order, knots, basis, lam, pose, &j)
            c = cos(pose[2])
            s = sin(pose[2])
            wx[k] = c * x[k] - s * y[k] + pose[0]
            wy[k] = s * x[k] + c * y[k] + pose[1]
    return wx_arr, wy_arr


def splat(const double[::1] t, const double[::1] x, const double[::1] y,
          const double[:, ::1] knots, double t0, double dt,
          const double[:, ::1] basis, double cx, double cy, int d):
    cdef Py_ssize_t n = t.shape[0]
    cdef int order = basis.shape[0]
    if order > 16:
        raise ValueError("kernel supports spline orders up to 16")
    cdef int nseg = knots.shape[0] - order + 1
    cdef int r = (d - 1) // 2
    grid_arr = np.zeros((d, d))
    cdef double[:, ::1] grid = grid_arr
    cdef double lam[16]
    cdef double pose[3]
    cdef Py_ssize_t k, j
    cdef double c, s, qx, qy, fx, fy
    cdef Py_ssize_t ax, ay
    with nogil:
        for k in range(n):
            _pose_at(t[k], t0, dt, nseg, order, knots, basis, lam, pose, &j)
            c = cos(pose[2])
            s = sin(pose[2])
            qx = c * x[k] - s * y[k] + pose[0] - cx + r
            qy = s * x[k] + c * y[k] + pose[1] - cy + r
            if qx <= -1.0 or qx >= d or qy <= -1.0 or qy >= d:
                continue
            ax = <Py_ssize_t>floor(qx)
            ay = <Py_ssize_t>floor(qy)
            fx = qx - ax
            fy = qy - ay
            if 0 <= ax < d:
                if 0 <= ay < d:
                    grid[ax, ay] += (1.0 - fx) * (1.0 - fy)
                if 0 <= ay + 1 < d:
                    grid[ax, ay + 1] += (1.0 - fx) * fy
            if 0 <= ax + 1 < d:
                if 0 <= ay < d:
                    grid[ax + 1, ay] += fx * (1.0 - fy)
                if 0 <= ay + 1 < d:
                    grid[ax + 1, ay + 1] += fx * fy
    return grid_arr


def splat_gradient(const double[::1] t, const double[::1] x, const double[::1] y,
                   const double[:, ::1] knots, double t0, double dt,
                   const double[:, ::1] basis, double cx, double cy, int d,
                   const double[:, ::1] residual, double scale, int first_opt):
    cdef Py_ssize_t n = t.shape[0]
    cdef int order = basis.shape[0]
    if order > 16:
        raise ValueError("kernel supports spline orders up to 16")
    cdef int nseg = knots.shape[0] - order + 1
    cdef int r = (d - 1) // 2
    cdef Py_ssize_t n_opt = knots.shape[0] - first_opt
    grad_arr = np.zeros((n_opt, 3))
    cdef double[:, ::1] grad = grad_arr
    cdef double lam[16]
    cdef double pose[3]
    cdef Py_ssize_t k, j, i, gi
    cdef double c, s, rx, ry, qx, qy, fx, fy
    cdef double r00, r10, r01, r11, vx, vy, vth, w
    cdef Py_ssize_t ax, ay
    with nogil:
        for k in range(n):
            _pose_at(t[k], t0, dt, nseg, order, knots, basis, lam, pose, &j)
            c = cos(pose[2])
            s = sin(pose[2])
            rx = c * x[k] - s * y[k]
            ry = s * x[k] + c * y[k]
            qx = rx + pose[0] - cx + r
            qy = ry + pose[1] - cy + r
            if qx <= -1.0 or qx >= d or qy <= -1.0 or qy >= d:
                continue
            ax = <Py_ssize_t>floor(qx)
            ay = <Py_ssize_t>floor(qy)
            fx = qx - ax
            fy = qy - ay
            r00 = residual[ax, ay] if (0 <= ax < d and 0 <= ay < d) else 0.0
            r10 = residual[ax + 1, ay] if (0 <= ax + 1 < d and 0 <= ay < d) else 0.0
            r01 = residual[ax, ay + 1] if (0 <= ax < d and 0 <= ay + 1 < d) else 0.0
            r11 = residual[ax + 1, ay + 1] if (0 <= ax + 1 < d and 0 <= ay + 1 < d) else 0.0
            vx = 0.0 if fx == 0.0 else (1.0 - fy) * (r10 - r00) + fy * (r11 - r01)
            vy = 0.0 if fy == 0.0 else (1.0 - fx) * (r01 - r00) + fx * (r11 - r10)
            vth = vx * (-ry) + vy * rx
            for i in range(order):
                gi = j + i - first_opt
                if gi >= 0:
                    w = lam[i] * scale
                    grad[gi, 0] += w * vx
                    grad[gi, 1] += w * vy
                    grad[gi, 2] += w * vth
    return grad_arr
