"""Weighting kernels h on the open unit interval.

Built-in kinds and their cached constants:

    kind         h(t)    h(1/2)   1/(2 h(1/2))   integral over (0,1)
    linear       t       1/2      1              1/2
    power        t^s     2^-s     2^(s-1)        1/(s+1)     (0 < s < 1)
    reciprocal   1/t     2        1/4            +inf
    one          1       1        1/2            1

Custom kernels are arbitrary positive expressions in t; positivity and
evaluability are spot-checked on a fixed 4097-point Chebyshev grid at
construction, and the integral is computed numerically (possibly +inf).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomcertError
from .expr import EvalError, Expr
from .quadrature import QuadratureError, integrate_open01

KINDS = ("linear", "power", "reciprocal", "one", "custom")

PROBE_POINTS = 4097
_probe_cache: list[float] | None = None


class KernelError(DomcertError):
    """reason is 'invalid', 'nonpositive' or 'domain'."""

    def __init__(self, reason: str, message: str):
        self.reason = reason
        super().__init__(message)


def chebyshev_points(n: int, lo: float, hi: float) -> list[float]:
    """n Chebyshev-spaced points strictly inside (lo, hi), ascending."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    pts = [mid + half * math.cos(math.pi * (2 * j - 1) / (2 * n)) for j in range(1, n + 1)]
    pts.reverse()
    return pts


def _probe_grid() -> list[float]:
    global _probe_cache
    if _probe_cache is None:
        _probe_cache = chebyshev_points(PROBE_POINTS, 0.0, 1.0)
    return _probe_cache


@dataclass(frozen=True)
class Kernel:
    kind: str
    s: float | None = None
    expr: Expr | None = None
    half_value: float = 1.0
    integral: float = 1.0
    integral_error: float = 0.0

    def value(self, t: float) -> float:
        """h(t) for t in the open unit interval; always positive."""
        if not 0.0 < t < 1.0:
            raise EvalError("domain", f"kernel argument {t!r} outside (0, 1)")
        if self.kind == "linear":
            return t
        if self.kind == "power":
            return t ** self.s
        if self.kind == "reciprocal":
            return 1.0 / t
        if self.kind == "one":
            return 1.0
        v = self.expr.evaluate(t)
        if v <= 0.0:
            raise KernelError(
                "nonpositive", f"custom kernel {self.expr.source!r} is {v!r} at t={t!r}"
            )
        return v

    @property
    def midpoint_coefficient(self) -> float:
        """1 / (2 h(1/2)), the weight on the midpoint value in the bounds."""
        if self.kind == "linear":
            return 1.0
        if self.kind == "power":
            return 2.0 ** (self.s - 1.0)
        if self.kind == "reciprocal":
            return 0.25
        if self.kind == "one":
            return 0.5
        return 1.0 / (2.0 * self.half_value)

    @property
    def divergent(self) -> bool:
        return math.isinf(self.integral)

    def describe(self) -> str:
        if self.kind == "linear":
            return "linear: h(t) = t"
        if self.kind == "power":
            return f"power: h(t) = t^{self.s!r}"
        if self.kind == "reciprocal":
            return "reciprocal: h(t) = 1/t"
        if self.kind == "one":
            return "one: h(t) = 1"
        return f"custom: h(t) = {self.expr.source}"


def make_kernel(
    kind: str,
    s: float | None = None,
    expr: Expr | None = None,
    quad_tol: float = 1e-10,
) -> Kernel:
    """Construct a kernel; validates parameters and custom positivity."""
    if kind not in KINDS:
        raise KernelError("invalid", f"unknown kernel kind {kind!r}")

    if kind == "linear":
        return Kernel("linear", half_value=0.5, integral=0.5)
    if kind == "one":
        return Kernel("one", half_value=1.0, integral=1.0)
    if kind == "reciprocal":
        return Kernel("reciprocal", half_value=2.0, integral=math.inf)
    if kind == "power":
        if s is None or not (0.0 < s < 1.0):
            raise KernelError("invalid", f"power kernel needs 0 < s < 1, got {s!r}")
        return Kernel("power", s=s, half_value=0.5 ** s, integral=1.0 / (s + 1.0))

    if expr is None:
        raise KernelError("invalid", "custom kernel needs an expression")
    if expr.var_name not in (None, "t"):
        raise KernelError(
            "invalid", f"custom kernels use the variable t, got '{expr.var_name}'"
        )
    for t in _probe_grid():
        try:
            v = expr.evaluate(t)
        except EvalError as exc:
            raise KernelError(
                "domain", f"custom kernel {expr.source!r} fails at t={t!r}: {exc}"
            ) from exc
        if v <= 0.0:
            raise KernelError(
                "nonpositive",
                f"custom kernel {expr.source!r} is {v!r} at t={t!r}; kernels must be positive",
            )
    half = expr.evaluate(0.5)
    try:
        result = integrate_open01(expr.evaluate, quad_tol)
    except QuadratureError as exc:
        if exc.reason == "eval":
            raise KernelError(
                "domain", f"custom kernel {expr.source!r} fails inside (0,1): {exc}"
            ) from exc
        raise
    return Kernel(
        "custom",
        expr=expr,
        half_value=half,
        integral=result.value,
        integral_error=0.0 if math.isinf(result.value) else result.error_estimate,
    )


def kernel_value(k: Kernel, t: float) -> float:
    return k.value(t)


def kernel_integral(k: Kernel) -> tuple[float, float]:
    """(integral over (0,1), error estimate); the value may be +inf."""
    return k.integral, k.integral_error
