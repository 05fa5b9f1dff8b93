"""Shared finite-difference helpers for the test suite."""

import numpy as np


def fd_jacobian(fn, p, h=1e-7):
    """Central-difference Jacobian of fn: R^3 -> R^3 around the array p."""
    p = np.asarray(p, dtype=float)
    cols = []
    for k in range(3):
        dp = np.zeros(3)
        dp[k] = h
        cols.append((fn(p + dp) - fn(p - dp)) / (2.0 * h))
    return np.stack(cols, axis=1)


def fd_mesh_gradient(area_fn, vertices, indices, h=1e-6):
    """Central-difference gradient of a mesh area functional.

    Only the rows listed in `indices` are differentiated; returns an array
    of shape (len(indices), 3).
    """
    out = np.zeros((len(indices), 3))
    for row, vi in enumerate(indices):
        for c in range(3):
            vp = vertices.copy()
            vm = vertices.copy()
            vp[vi, c] += h
            vm[vi, c] -= h
            out[row, c] = (area_fn(vp) - area_fn(vm)) / (2.0 * h)
    return out
