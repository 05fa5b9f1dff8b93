"""Deterministic adaptive quadrature and monotone root finding.

The integrator is plain adaptive bisection driven by an embedded
Gauss(7)/Kronrod(15) pair: each interval is evaluated once with both rules,
the difference serves as the error estimate, and the interval with the worst
estimate is split next.  Everything is deterministic: fixed nodes, a fixed
tie-breaking order on the heap, no randomness.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .errors import DomainError, UsageError

# Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (positive half; symmetric).
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
# 7-point Gauss weights; nodes are _XGK[1], _XGK[3], _XGK[5], _XGK[7].
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)

EVALS_PER_PANEL = 15


@dataclass(frozen=True)
class ToleranceConfig:
    """Shared tolerance knobs for quadrature and bisection."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_evals: int = 200_000


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int
    converged: bool


def _as_tolerances(tol) -> ToleranceConfig:
    if tol is None:
        return ToleranceConfig()
    if isinstance(tol, ToleranceConfig):
        return tol
    t = float(tol)
    if t <= 0:
        raise UsageError("tolerance must be positive, got %g" % t)
    return ToleranceConfig(abs_tol=t, rel_tol=t)


def _panel(f, a: float, b: float):
    """One Gauss-Kronrod pass over [a, b] -> (kronrod, |kronrod - gauss|)."""
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    fc = f(c)
    if not math.isfinite(fc):
        raise DomainError("integrand returned non-finite value at x=%r" % c)
    kron = _WGK[7] * fc
    gauss = _WG[3] * fc
    for i in range(7):
        x = h * _XGK[i]
        f1 = f(c - x)
        f2 = f(c + x)
        if not (math.isfinite(f1) and math.isfinite(f2)):
            bad = c - x if not math.isfinite(f1) else c + x
            raise DomainError("integrand returned non-finite value at x=%r" % bad)
        s = f1 + f2
        kron += _WGK[i] * s
        if i % 2 == 1:
            gauss += _WG[i // 2] * s
    kron *= h
    gauss *= h
    return kron, abs(kron - gauss)


def integrate(f, a: float, b: float, tol=None) -> QuadratureResult:
    """Integrate f over [a, b] adaptively.

    Returns a QuadratureResult; `converged` is False when the evaluation
    budget ran out before the requested tolerance was met.  Integrands
    returning NaN or infinity raise DomainError.
    """
    tols = _as_tolerances(tol)
    a = float(a)
    b = float(b)
    if a == b:
        return QuadratureResult(0.0, 0.0, 0, True)
    sign = 1.0
    if b < a:
        a, b = b, a
        sign = -1.0

    value, err = _panel(f, a, b)
    evals = EVALS_PER_PANEL
    seq = 0
    # heap entries: (-err, seq, a, b, value, err); settled intervals keep
    # contributing to the running totals but are no longer split.
    heap = [(-err, seq, a, b, value, err)]
    total_value = value
    total_err = err
    scale = max(abs(a), abs(b), 1.0)

    while True:
        target = max(tols.abs_tol, tols.rel_tol * abs(total_value))
        if total_err <= target:
            return QuadratureResult(sign * total_value, total_err, evals, True)
        if not heap:
            # every interval is at the subdivision floor
            return QuadratureResult(sign * total_value, total_err, evals, False)
        if evals + 2 * EVALS_PER_PANEL > tols.max_evals:
            return QuadratureResult(sign * total_value, total_err, evals, False)
        _, _, ia, ib, ival, ierr = heapq.heappop(heap)
        mid = 0.5 * (ia + ib)
        if mid - ia < 1e-15 * scale or ib - mid < 1e-15 * scale:
            # cannot split further in double precision; keep its contribution
            if not heap:
                return QuadratureResult(sign * total_value, total_err, evals, False)
            continue
        v1, e1 = _panel(f, ia, mid)
        v2, e2 = _panel(f, mid, ib)
        evals += 2 * EVALS_PER_PANEL
        total_value += v1 + v2 - ival
        total_err += e1 + e2 - ierr
        seq += 1
        heapq.heappush(heap, (-e1, seq, ia, mid, v1, e1))
        seq += 1
        heapq.heappush(heap, (-e2, seq, mid, ib, v2, e2))


def integrate_to_infinity(f, a: float, tail_bound, tol=None) -> QuadratureResult:
    """Integrate f over [a, oo) given a decreasing bound on the neglected tail.

    `tail_bound(T)` must bound |integral of f over [T, oo)| from above.  The
    truncation point is pushed out by doubling until the bound drops below
    half the absolute tolerance; the bound is then folded into the reported
    error estimate.
    """
    tols = _as_tolerances(tol)
    a = float(a)
    half = 0.5 * tols.abs_tol
    span = 1.0
    tail = float(tail_bound(a + span))
    while tail > half:
        span *= 2.0
        if span > 2.0**60:
            raise DomainError("tail bound does not fall below %g" % half)
        tail = float(tail_bound(a + span))
        if not math.isfinite(tail):
            raise DomainError("tail bound returned non-finite value")
    inner = integrate(f, a, a + span, ToleranceConfig(half, tols.rel_tol, tols.max_evals))
    return QuadratureResult(
        inner.value,
        inner.error_estimate + tail,
        inner.evaluations,
        inner.converged,
    )


def bisect_monotone(g, lo: float, hi: float, target: float = 0.0, tol: float = 1e-10) -> float:
    """Solve g(x) = target for monotone g on [lo, hi] by bisection.

    Stops when |g(x) - target| <= tol or the bracket width falls below tol.
    Raises UsageError when [lo, hi] does not bracket the target.
    """
    lo = float(lo)
    hi = float(hi)
    if not lo < hi:
        raise UsageError("need lo < hi, got [%g, %g]" % (lo, hi))
    glo = g(lo) - target
    ghi = g(hi) - target
    if glo == 0.0:
        return lo
    if ghi == 0.0:
        return hi
    if glo * ghi > 0:
        raise UsageError(
            "[%g, %g] does not bracket the target: g-target = %g, %g" % (lo, hi, glo, ghi)
        )
    increasing = ghi > 0
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        gm = g(mid) - target
        if abs(gm) <= tol or hi - lo < tol:
            return mid
        if (gm > 0) == increasing:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
