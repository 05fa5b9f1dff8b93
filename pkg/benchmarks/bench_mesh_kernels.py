"""Compare the mesh kernels: compiled extension versus numpy reference.

Run as a script; prints per-backend timings for the area-plus-gradient
evaluation at a few mesh sizes and the agreement between results.
"""

from __future__ import annotations

import math
import time

import numpy as np

from etau import _kernels
from etau.catenoid import CatenoidProfile, TruncatedCatenoid, annulus_vertex_grid
from etau.models import AmbientSpace
from etau.plateau import mesh_from_grid


def build_mesh(n_rows: int, n_theta: int):
    amb = AmbientSpace(0.5)
    trunc = TruncatedCatenoid(CatenoidProfile(amb, 10.0), 3.5)
    return mesh_from_grid(annulus_vertex_grid(trunc, n_rows, n_theta))


def time_backend(fn, vertices, triangles, repeats: int) -> float:
    best = math.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn(0.5, vertices, triangles, True)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    backends = _kernels.available_backends()
    print(f"backends: {', '.join(backends)} (active: {_kernels.ACTIVE_BACKEND})")
    for n_rows, n_theta in [(17, 48), (33, 96), (65, 192)]:
        mesh = build_mesh(n_rows, n_theta)
        n_tri = len(mesh.triangles)
        results = {}
        timings = {}
        for name in backends:
            fn = _kernels.get_backend(name)
            timings[name] = time_backend(fn, mesh.vertices, mesh.triangles, 5)
            results[name] = fn(0.5, mesh.vertices, mesh.triangles, True)
        line = f"{n_tri:7d} triangles:"
        for name in backends:
            line += f"  {name} {timings[name] * 1e3:8.3f} ms"
        if len(backends) == 2:
            a, b = (results[n] for n in backends)
            darea = abs(float(np.sum(a[0])) - float(np.sum(b[0])))
            dgrad = float(np.max(np.abs(a[2] - b[2])))
            slow, fast = sorted(timings.values(), reverse=True)
            line += f"  speedup {slow / fast:6.2f}x  |darea| {darea:.2e}  |dgrad| {dgrad:.2e}"
        print(line)


if __name__ == "__main__":
    main()
