"""Adaptive quadrature on finite intervals plus an open-(0,1) integrator.

The panel rule is the embedded 7-point Gauss / 15-point Kronrod pair; the
difference between the two rule values is the panel error estimate.  The
adaptive driver always splits the panel with the largest estimate (ties go
to the leftmost), so runs are deterministic.

integrate_open01 handles integrands only defined on the open unit interval
by integrating over [eps, 1-eps] for a fixed shrinking ladder of eps and
extrapolating the tail; if the values keep growing (relative change above
1% at the last refinement) the integral is reported as +inf.  Divergence
is a value here, not an error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from heapq import heappush, heappop
from typing import Callable

from .errors import DomcertError
from .expr import EvalError


class QuadratureError(DomcertError):
    """reason is 'budget' (panel limit hit) or 'eval' (integrand fault)."""

    def __init__(self, reason: str, message: str):
        self.reason = reason
        super().__init__(message)


@dataclass(frozen=True)
class QuadResult:
    value: float
    error_estimate: float
    subdivisions: int


# 15-point Kronrod nodes (positive half, descending) with Kronrod weights;
# every second node starting at index 1 is also a 7-point Gauss node.
_XGK = (
    0.99145537112081264,
    0.94910791234275852,
    0.86486442335976907,
    0.74153118559939444,
    0.58608723546769113,
    0.40584515137739717,
    0.20778495500789847,
)
_WGK = (
    0.022935322010529225,
    0.063092092629978553,
    0.10479001032225018,
    0.14065325971552592,
    0.16900472663926790,
    0.19035057806478541,
    0.20443294007529889,
)
_WG = (
    0.12948496616886969,
    0.27970539148927664,
    0.38183005050511894,
)
# Center weights chosen so each rule integrates a constant exactly
# (weights sum to exactly 2.0 in double precision).
_WGK_CENTER = 2.0 - 2.0 * math.fsum(_WGK)
_WG_CENTER = 2.0 - 2.0 * math.fsum(_WG)


def _panel(fun, a: float, b: float) -> tuple[float, float]:
    """One Gauss-Kronrod pass over [a, b]: (kronrod value, error estimate)."""
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    acc_k = 0.0
    acc_g = 0.0
    # symmetric pairs first, center last: keeps constants exact by
    # construction of the center weights above
    for i in range(7):
        dx = h * _XGK[i]
        fs = fun(c - dx) + fun(c + dx)
        acc_k += _WGK[i] * fs
        if i % 2 == 1:
            acc_g += _WG[i // 2] * fs
    fc = fun(c)
    acc_k += _WGK_CENTER * fc
    acc_g += _WG_CENTER * fc
    return h * acc_k, abs(h * (acc_k - acc_g))


def _guarded(fun: Callable[[float], float], a: float, b: float):
    """Wrap an integrand: faults within a hair of a/b retry one nudge inside."""
    nudge = 1e-12 * (b - a)

    def wrapped(x: float) -> float:
        try:
            return fun(x)
        except (EvalError, ArithmeticError, ValueError) as exc:
            if abs(x - a) <= nudge or abs(b - x) <= nudge:
                retry = a + nudge if abs(x - a) <= nudge else b - nudge
                try:
                    return fun(retry)
                except (EvalError, ArithmeticError, ValueError) as exc2:
                    raise QuadratureError(
                        "eval", f"integrand failed at x={retry!r}: {exc2}"
                    ) from exc2
            raise QuadratureError("eval", f"integrand failed at x={x!r}: {exc}") from exc

    return wrapped


def integrate(
    fun: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-10,
    max_panels: int = 1_000_000,
) -> QuadResult:
    """Adaptively integrate fun over [a, b] to the requested tolerance.

    Returns a QuadResult whose error_estimate is the summed panel
    estimates.  Raises QuadratureError('budget') when the panel limit is
    reached first and QuadratureError('eval') when the integrand faults
    at an interior node.
    """
    if not (math.isfinite(a) and math.isfinite(b) and a < b):
        raise ValueError(f"need finite a < b, got [{a!r}, {b!r}]")
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    fn = _guarded(fun, a, b)

    value, err = _panel(fn, a, b)
    # heap entries: (-error, left, right, value, error); leftmost wins ties
    heap: list[tuple[float, float, float, float, float]] = []
    heappush(heap, (-err, a, b, value, err))
    total_err = err
    panels = 1
    frozen: list[tuple[float, float, float, float, float]] = []
    frozen_err = 0.0

    while total_err + frozen_err > tol and heap:
        if panels >= max_panels:
            raise QuadratureError(
                "budget",
                f"panel budget {max_panels} exhausted with error "
                f"{total_err + frozen_err!r} > tol {tol!r}",
            )
        entry = heappop(heap)
        _, pa, pb, pv, pe = entry
        mid = 0.5 * (pa + pb)
        if not pa < mid < pb:
            # cannot split further at double precision; park the panel
            frozen.append(entry)
            frozen_err += pe
            total_err -= pe
            continue
        lv, le = _panel(fn, pa, mid)
        rv, re_ = _panel(fn, mid, pb)
        heappush(heap, (-le, pa, mid, lv, le))
        heappush(heap, (-re_, mid, pb, rv, re_))
        total_err += le + re_ - pe
        panels += 1

    pieces = sorted(heap + frozen, key=lambda p: p[1])
    total_value = math.fsum(p[3] for p in pieces)
    total_error = math.fsum(p[4] for p in pieces)
    return QuadResult(total_value, total_error, len(pieces))


_LADDER = (1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12)


def integrate_open01(
    fun: Callable[[float], float],
    tol: float = 1e-10,
    max_panels: int = 1_000_000,
) -> QuadResult:
    """Integrate over the open interval (0, 1), tolerating endpoint blowup.

    A divergent integral comes back as QuadResult(inf, inf, n); check
    math.isinf(result.value) rather than expecting an exception.
    """
    results = [
        integrate(fun, eps, 1.0 - eps, tol, max_panels=max_panels) for eps in _LADDER
    ]
    values = [r.value for r in results]
    subdivisions = sum(r.subdivisions for r in results)

    d_last = values[-1] - values[-2]
    if abs(d_last) > 0.01 * max(abs(values[-1]), 1e-300):
        return QuadResult(math.inf, math.inf, subdivisions)

    # geometric tail extrapolation from the last two refinements
    d_prev = values[-2] - values[-3]
    tail = 0.0
    if d_last != 0.0 and d_prev != 0.0:
        rho = abs(d_last) / abs(d_prev)
        if rho < 0.9:
            tail = d_last * rho / (1.0 - rho)
    value = values[-1] + tail
    err = results[-1].error_estimate + abs(d_last) + abs(tail)
    return QuadResult(value, err, subdivisions)
