"""Hermite-Hadamard style two-sided bound verification for dominated pairs.

With W = phi(b) - phi(a), m = (phi(a) + phi(b))/2, c = 1/(2 h(1/2)) and
H = integral of h over (0, 1), the verified statements are

    midpoint:  |mean(f) - c f(m)|            <=  mean(g) - c g(m)
    endpoint:  |(f(phi a) + f(phi b)) H - mean(f)|
                                              <=  (g(phi a) + g(phi b)) H - mean(g)

where mean(u) is the integral average of u over the image of phi.  Both
right sides can only be trusted when g actually belongs to the kernel's
convexity class; a negative right side therefore produces a warning, not
an error.  When H diverges the endpoint statement carries no information
and the report is marked vacuous with rhs = +inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .convexity import FunctionPair
from .errors import DomcertError
from .geometry import AffineMap
from .kernels import Kernel, make_kernel
from .quadrature import integrate, integrate_open01

NEGATIVE_RHS_WARNING = (
    "right side is negative: the dominator may violate its convexity precondition"
)
NEG_VALUES_WARNING = "{role} is negative at a probed point (codomain should be [0, inf))"


class ReportError(DomcertError):
    """reason is 'degenerate' or 'kernel-symmetry'."""

    def __init__(self, reason: str, message: str):
        self.reason = reason
        super().__init__(message)


@dataclass
class HHReport:
    bound_kind: str  # 'midpoint' or 'endpoint'
    lhs: float
    rhs: float
    margin: float
    holds: bool
    vacuous: bool
    quad_error: float
    warnings: list[str] = field(default_factory=list)
    inputs_echo: dict = field(default_factory=dict)


@dataclass
class SpecialCaseEntry:
    label: str
    report: HHReport


def _echo(pair: FunctionPair, h: Kernel, phi: AffineMap) -> dict:
    return {
        "f": pair.f.source,
        "g": pair.g.source,
        "kernel": h.describe(),
        "phi": phi.describe(),
        "interval": [phi.domain.a, phi.domain.b],
    }


def _image_bounds(phi: AffineMap) -> tuple[float, float]:
    if phi.image_width == 0.0:
        raise ReportError(
            "degenerate",
            f"phi has a single-point image at {phi.image_a!r}; bounds are undefined",
        )
    lo, hi = phi.image_a, phi.image_b
    if lo > hi:
        lo, hi = hi, lo
    return lo, hi


def _means(pair: FunctionPair, lo: float, hi: float, tol: float):
    rf = integrate(pair.f.evaluate, lo, hi, tol)
    rg = integrate(pair.g.evaluate, lo, hi, tol)
    width = hi - lo
    return rf.value / width, rg.value / width, (rf.error_estimate + rg.error_estimate) / width


def _holds(lhs: float, rhs: float, atol: float, rtol: float) -> tuple[float, bool]:
    if math.isinf(rhs) and rhs > 0.0:
        # an infinite bound cannot be violated, whatever the left side
        return math.inf, True
    margin = rhs - lhs
    scale = max(abs(lhs), abs(rhs))
    if math.isinf(scale):
        return margin, margin > 0.0
    return margin, margin >= -(atol + rtol * scale)


def hh_midpoint_report(
    pair: FunctionPair,
    h: Kernel,
    phi: AffineMap,
    tol: float = 1e-10,
    atol: float = 1e-9,
    rtol: float = 1e-9,
) -> HHReport:
    """Check the midpoint-form bound; tol is the total quadrature budget."""
    lo, hi = _image_bounds(phi)
    mean_f, mean_g, quad_err = _means(pair, lo, hi, tol / 4.0)
    m = 0.5 * (phi.image_a + phi.image_b)
    c = h.midpoint_coefficient
    fm = pair.f.evaluate(m)
    gm = pair.g.evaluate(m)
    lhs = abs(mean_f - c * fm)
    rhs = mean_g - c * gm

    warnings = []
    if fm < 0.0:
        warnings.append(NEG_VALUES_WARNING.format(role="f"))
    if gm < 0.0:
        warnings.append(NEG_VALUES_WARNING.format(role="g"))
    if rhs < 0.0:
        warnings.append(NEGATIVE_RHS_WARNING)
    margin, holds = _holds(lhs, rhs, atol, rtol)
    return HHReport(
        bound_kind="midpoint",
        lhs=lhs,
        rhs=rhs,
        margin=margin,
        holds=holds,
        vacuous=False,
        quad_error=quad_err,
        warnings=warnings,
        inputs_echo=_echo(pair, h, phi),
    )


def _check_custom_symmetry(h: Kernel, tol: float, atol: float, rtol: float) -> None:
    # the endpoint weight is derived assuming integral h(t) == integral h(1-t);
    # true for any integrable h, so a mismatch means the cached integral is bad
    reflected = integrate_open01(lambda u: h.value(1.0 - u), tol)
    fwd_div = math.isinf(h.integral)
    ref_div = math.isinf(reflected.value)
    if fwd_div and ref_div:
        return
    if fwd_div != ref_div:
        raise ReportError(
            "kernel-symmetry",
            "kernel integral and its reflection disagree on divergence: "
            f"{h.integral!r} vs {reflected.value!r}",
        )
    budget = (
        h.integral_error
        + reflected.error_estimate
        + atol
        + rtol * max(abs(h.integral), abs(reflected.value))
    )
    if abs(h.integral - reflected.value) > budget:
        raise ReportError(
            "kernel-symmetry",
            f"kernel integral {h.integral!r} and reflected integral "
            f"{reflected.value!r} differ beyond combined error {budget!r}",
        )


def hh_endpoint_report(
    pair: FunctionPair,
    h: Kernel,
    phi: AffineMap,
    tol: float = 1e-10,
    atol: float = 1e-9,
    rtol: float = 1e-9,
) -> HHReport:
    """Check the endpoint-form bound; vacuous when the kernel integral diverges."""
    lo, hi = _image_bounds(phi)
    if h.kind == "custom":
        _check_custom_symmetry(h, tol, atol, rtol)
    mean_f, mean_g, quad_err = _means(pair, lo, hi, tol / 4.0)
    sf = pair.f.evaluate(phi.image_a) + pair.f.evaluate(phi.image_b)
    sg = pair.g.evaluate(phi.image_a) + pair.g.evaluate(phi.image_b)

    warnings = []
    if sf < 0.0:
        warnings.append(NEG_VALUES_WARNING.format(role="f"))
    if sg < 0.0:
        warnings.append(NEG_VALUES_WARNING.format(role="g"))

    if math.isinf(h.integral):
        # an endpoint sum of exactly zero kills the divergent term (the
        # weighted integrand is identically zero), otherwise the side is +inf
        lhs = math.inf if sf > 0.0 else abs(0.0 - mean_f)
        rhs = math.inf if sg > 0.0 else 0.0 - mean_g
        vacuous = math.isinf(rhs)
    else:
        lhs = abs(sf * h.integral - mean_f)
        rhs = sg * h.integral - mean_g
        vacuous = False
        quad_err = quad_err + h.integral_error * (abs(sf) + abs(sg))

    if rhs < 0.0:
        warnings.append(NEGATIVE_RHS_WARNING)
    margin, holds = _holds(lhs, rhs, atol, rtol)
    return HHReport(
        bound_kind="endpoint",
        lhs=lhs,
        rhs=rhs,
        margin=margin,
        holds=holds,
        vacuous=vacuous,
        quad_error=quad_err,
        warnings=warnings,
        inputs_echo=_echo(pair, h, phi),
    )


_SPECIAL_KINDS = ("linear", "power", "reciprocal", "one")


def special_case_report(
    pair: FunctionPair,
    phi: AffineMap,
    which: str = "all",
    s: float | None = None,
    tol: float = 1e-10,
    atol: float = 1e-9,
    rtol: float = 1e-9,
) -> list[SpecialCaseEntry]:
    """Run the bounds for the named built-in kernels.

    which is one of the built-in kinds or 'all'.  Each selected kernel
    contributes a midpoint entry, plus an endpoint entry only when its
    integral is finite (so 'reciprocal' yields a single entry).
    """
    if which == "all":
        kinds = _SPECIAL_KINDS
    elif which in _SPECIAL_KINDS:
        kinds = (which,)
    else:
        raise ValueError(f"unknown special case {which!r}")

    entries = []
    for kind in kinds:
        k = make_kernel(kind, s=s if kind == "power" else None)
        name = f"power(s={k.s!r})" if kind == "power" else kind
        entries.append(
            SpecialCaseEntry(
                label=f"{name}/midpoint",
                report=hh_midpoint_report(pair, k, phi, tol, atol, rtol),
            )
        )
        if not k.divergent:
            entries.append(
                SpecialCaseEntry(
                    label=f"{name}/endpoint",
                    report=hh_endpoint_report(pair, k, phi, tol, atol, rtol),
                )
            )
    return entries
