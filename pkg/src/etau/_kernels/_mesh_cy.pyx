# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel for discrete mesh area and gradient.

Mirrors mesh_numpy.area_and_grad exactly: one metric evaluation per
triangle at the barycenter, edge-vector Gram determinant for the area,
analytic gradient with the positional metric terms split one third per
vertex.  Kept in lockstep with the reference by the backend-agreement
tests.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()

DEF DEGEN_REL = 1e-14


def area_and_grad(double tau, vertices, triangles, bint want_grad=True):
    """Per-triangle areas, degeneracy flags, and optionally the area gradient."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] v = np.ascontiguousarray(vertices, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] tri = np.ascontiguousarray(triangles, dtype=np.int64)
    cdef Py_ssize_t m = tri.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] tri_areas = np.zeros(m, dtype=np.float64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] degenerate = np.zeros(m, dtype=np.uint8)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] grad
    if want_grad:
        grad = np.zeros((v.shape[0], 3), dtype=np.float64)
    else:
        grad = np.zeros((0, 3), dtype=np.float64)

    cdef Py_ssize_t i, k, i0, i1, i2
    cdef double cx, cy, lam, lam2, a, b
    cdef double g11, g12, g13, g22, g23
    cdef double e1x, e1y, e1t, e2x, e2y, e2t
    cdef double ge1x, ge1y, ge1t, ge2x, ge2y, ge2t
    cdef double q11, q12, q22, det, scale, area, factor
    cdef double dlam, da, db, hxx, hxy, hxt, hyy, hyt
    cdef double dq11, dq12, dq22, dd_x, dd_y
    cdef double d1x, d1y, d1t, d2x, d2y, d2t, px, py

    for i in range(m):
        i0 = tri[i, 0]
        i1 = tri[i, 1]
        i2 = tri[i, 2]
        e1x = v[i1, 0] - v[i0, 0]
        e1y = v[i1, 1] - v[i0, 1]
        e1t = v[i1, 2] - v[i0, 2]
        e2x = v[i2, 0] - v[i0, 0]
        e2y = v[i2, 1] - v[i0, 1]
        e2t = v[i2, 2] - v[i0, 2]
        cx = (v[i0, 0] + v[i1, 0] + v[i2, 0]) / 3.0
        cy = (v[i0, 1] + v[i1, 1] + v[i2, 1]) / 3.0

        lam = 2.0 / (1.0 - cx * cx - cy * cy)
        lam2 = lam * lam
        a = 2.0 * tau * lam * cy
        b = -2.0 * tau * lam * cx
        g11 = lam2 + a * a
        g12 = a * b
        g13 = a
        g22 = lam2 + b * b
        g23 = b

        ge1x = g11 * e1x + g12 * e1y + g13 * e1t
        ge1y = g12 * e1x + g22 * e1y + g23 * e1t
        ge1t = g13 * e1x + g23 * e1y + e1t
        ge2x = g11 * e2x + g12 * e2y + g13 * e2t
        ge2y = g12 * e2x + g22 * e2y + g23 * e2t
        ge2t = g13 * e2x + g23 * e2y + e2t

        q11 = e1x * ge1x + e1y * ge1y + e1t * ge1t
        q12 = e1x * ge2x + e1y * ge2y + e1t * ge2t
        q22 = e2x * ge2x + e2y * ge2y + e2t * ge2t
        det = q11 * q22 - q12 * q12
        scale = q11 * q22 + q12 * q12
        if det <= DEGEN_REL * scale or scale == 0.0:
            degenerate[i] = 1
            continue
        area = 0.5 * sqrt(det)
        tri_areas[i] = area
        if not want_grad:
            continue

        factor = 0.25 / sqrt(det)
        d1x = factor * (2.0 * q22 * ge1x - 2.0 * q12 * ge2x)
        d1y = factor * (2.0 * q22 * ge1y - 2.0 * q12 * ge2y)
        d1t = factor * (2.0 * q22 * ge1t - 2.0 * q12 * ge2t)
        d2x = factor * (2.0 * q11 * ge2x - 2.0 * q12 * ge1x)
        d2y = factor * (2.0 * q11 * ge2y - 2.0 * q12 * ge1y)
        d2t = factor * (2.0 * q11 * ge2t - 2.0 * q12 * ge1t)

        grad[i1, 0] += d1x
        grad[i1, 1] += d1y
        grad[i1, 2] += d1t
        grad[i2, 0] += d2x
        grad[i2, 1] += d2y
        grad[i2, 2] += d2t
        grad[i0, 0] -= d1x + d2x
        grad[i0, 1] -= d1y + d2y
        grad[i0, 2] -= d1t + d2t

        # x derivative of the metric at the barycenter
        dlam = lam2 * cx
        da = 2.0 * tau * cy * dlam
        db = -2.0 * tau * (lam + cx * dlam)
        hxx = 2.0 * lam * dlam + 2.0 * a * da
        hxy = da * b + a * db
        hxt = da
        hyy = 2.0 * lam * dlam + 2.0 * b * db
        hyt = db
        dq11 = (hxx * e1x * e1x + hyy * e1y * e1y
                + 2.0 * (hxy * e1x * e1y + hxt * e1x * e1t + hyt * e1y * e1t))
        dq12 = (hxx * e1x * e2x + hyy * e1y * e2y
                + hxy * (e1x * e2y + e1y * e2x)
                + hxt * (e1x * e2t + e1t * e2x)
                + hyt * (e1y * e2t + e1t * e2y))
        dq22 = (hxx * e2x * e2x + hyy * e2y * e2y
                + 2.0 * (hxy * e2x * e2y + hxt * e2x * e2t + hyt * e2y * e2t))
        dd_x = q22 * dq11 + q11 * dq22 - 2.0 * q12 * dq12

        # y derivative
        dlam = lam2 * cy
        da = 2.0 * tau * (lam + cy * dlam)
        db = -2.0 * tau * cx * dlam
        hxx = 2.0 * lam * dlam + 2.0 * a * da
        hxy = da * b + a * db
        hxt = da
        hyy = 2.0 * lam * dlam + 2.0 * b * db
        hyt = db
        dq11 = (hxx * e1x * e1x + hyy * e1y * e1y
                + 2.0 * (hxy * e1x * e1y + hxt * e1x * e1t + hyt * e1y * e1t))
        dq12 = (hxx * e1x * e2x + hyy * e1y * e2y
                + hxy * (e1x * e2y + e1y * e2x)
                + hxt * (e1x * e2t + e1t * e2x)
                + hyt * (e1y * e2t + e1t * e2y))
        dq22 = (hxx * e2x * e2x + hyy * e2y * e2y
                + 2.0 * (hxy * e2x * e2y + hxt * e2x * e2t + hyt * e2y * e2t))
        dd_y = q22 * dq11 + q11 * dq22 - 2.0 * q12 * dq12

        px = factor * dd_x / 3.0
        py = factor * dd_y / 3.0
        for k in range(3):
            grad[tri[i, k], 0] += px
            grad[tri[i, k], 1] += py

    if want_grad:
        return tri_areas, degenerate, grad
    return tri_areas, degenerate, None
