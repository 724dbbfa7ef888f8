"""Sampled convexity and dominance checks.

For a kernel h, a map phi and a point triple (x, y, t) the *defect* of a
function u is

    h(t) u(phi(x)) + h(1-t) u(phi(y)) - u(t phi(x) + (1-t) phi(y))

u belongs to the kernel's convexity class exactly when every defect is
nonnegative.  A pair (f, g) is *dominated* when |defect of f| <= defect
of g pointwise; the *dominance gap* is defect_g - |defect_f|, so the pair
is dominated exactly when every gap is nonnegative.

Checks sample a finite plan (grid or seeded random triples) and certify
only "holds on these samples": they can refute, never prove.  A value is
a violation only when it is below -(atol + rtol * scale) with scale the
larger magnitude of the two inequality sides at the witness; near-zero
negatives inside that band are reported as warnings.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .errors import DomcertError
from .expr import EvalError, Expr, combine, constant
from .geometry import AffineMap, Interval
from .kernels import Kernel, chebyshev_points

NEG_VALUES_WARNING = "{role} takes negative sampled values (codomain should be [0, inf))"
WITHIN_TOL_WARNING = "worst sampled value is negative but within tolerance"

HOLDS = "holds-on-samples"
VIOLATED = "violated"


class PreconditionError(DomcertError):
    pass


@dataclass(frozen=True)
class SamplePlan:
    """Where a check looks: a full grid or seeded uniform random triples.

    Grid plans place x and y uniformly on [a, b] including the endpoints
    and t on a Chebyshev-spaced grid in [t_clamp, 1 - t_clamp] with the
    midpoint t = 1/2 always added.  Random plans draw (x, y, t) uniformly,
    reproducibly for a fixed seed.
    """

    strategy: str = "grid"
    n_x: int = 21
    n_y: int = 21
    n_t: int = 19
    count: int = 1000
    seed: int = 0
    t_clamp: float = 1e-6
    atol: float = 1e-9
    rtol: float = 1e-9

    def __post_init__(self):
        if self.strategy not in ("grid", "random"):
            raise ValueError(f"unknown sampling strategy {self.strategy!r}")
        if self.strategy == "grid" and min(self.n_x, self.n_y, self.n_t) < 1:
            raise ValueError("grid sample counts must be at least 1")
        if self.strategy == "random" and self.count < 1:
            raise ValueError("random sample count must be at least 1")
        if not 0.0 < self.t_clamp < 0.5:
            raise ValueError(f"t_clamp must be in (0, 0.5), got {self.t_clamp!r}")
        if self.atol < 0.0 or self.rtol < 0.0:
            raise ValueError("tolerances must be nonnegative")

    @classmethod
    def grid(cls, n_x: int = 21, n_y: int = 21, n_t: int = 19, **kw) -> "SamplePlan":
        return cls(strategy="grid", n_x=n_x, n_y=n_y, n_t=n_t, **kw)

    @classmethod
    def random(cls, count: int, seed: int = 0, **kw) -> "SamplePlan":
        return cls(strategy="random", count=count, seed=seed, **kw)


@dataclass(frozen=True)
class FunctionPair:
    f: Expr
    g: Expr


@dataclass
class CheckReport:
    verdict: str
    samples_checked: int
    worst_gap: float
    witness: tuple[float, float, float]
    witness_lhs: float
    witness_rhs: float
    warnings: list[str] = field(default_factory=list)
    rows: list | None = field(default=None, repr=False, compare=False)

    def holds(self) -> bool:
        return self.verdict == HOLDS


@dataclass
class EquivalenceReport:
    """Three equivalent characterizations of dominance, each sampled.

    statement_holds lines up as: (1) |defect_f| <= defect_g everywhere,
    (2) g - f and g + f both in the convexity class, (3) the half-sum /
    half-difference representation built from decompose() is in the class.
    """

    dominance: CheckReport
    sum_convex: CheckReport
    diff_convex: CheckReport
    l_convex: CheckReport
    k_convex: CheckReport
    statement_holds: tuple[bool, bool, bool]
    agreement: bool


# ---------------------------------------------------------------------------
# Pointwise defects.  The grid sweeps below cache per-axis products but MUST
# keep the same operation order as these scalar forms so that a reported
# witness re-evaluates bit-identically.
# ---------------------------------------------------------------------------


def _defect_parts(ev, ht, h1t, t, omt, px, py, vpx, vpy):
    rhs = ht * vpx + h1t * vpy
    lhs = ev(t * px + omt * py)
    return rhs - lhs, lhs, rhs


def h_convex_defect(f: Expr, h: Kernel, x: float, y: float, alpha: float) -> float:
    """Defect of f at (x, y, alpha) with the identity map."""
    omt = 1.0 - alpha
    ev = f.evaluate
    return _defect_parts(
        ev, h.value(alpha), h.value(omt), alpha, omt, x, y, ev(x), ev(y)
    )[0]


def phi_h_defect(
    f: Expr, h: Kernel, phi: AffineMap, x: float, y: float, t: float
) -> float:
    """Defect of f at (x, y, t) through the map phi."""
    omt = 1.0 - t
    px, py = phi.apply(x), phi.apply(y)
    ev = f.evaluate
    return _defect_parts(ev, h.value(t), h.value(omt), t, omt, px, py, ev(px), ev(py))[0]


def _gap_parts(
    pair: FunctionPair, h: Kernel, phi: AffineMap, x: float, y: float, t: float
) -> tuple[float, float, float]:
    omt = 1.0 - t
    ht, h1t = h.value(t), h.value(omt)
    px, py = phi.apply(x), phi.apply(y)
    fe, ge = pair.f.evaluate, pair.g.evaluate
    mid = t * px + omt * py
    df = (ht * fe(px) + h1t * fe(py)) - fe(mid)
    dg = (ht * ge(px) + h1t * ge(py)) - ge(mid)
    lhs = abs(df)
    return dg - lhs, lhs, dg


def dominance_gap(
    pair: FunctionPair, h: Kernel, phi: AffineMap, x: float, y: float, t: float
) -> float:
    """defect_g - |defect_f| at one triple; nonnegative iff dominated there."""
    return _gap_parts(pair, h, phi, x, y, t)[0]


def _violates(gap: float, lhs: float, rhs: float, atol: float, rtol: float) -> bool:
    return gap < -(atol + rtol * max(abs(lhs), abs(rhs)))


# ---------------------------------------------------------------------------
# Sample generation
# ---------------------------------------------------------------------------


def _linspace(a: float, b: float, n: int) -> list[float]:
    if n == 1:
        return [a]
    last = n - 1
    out = []
    for i in range(n):
        u = i / last
        v = a * (1.0 - u) + b * u
        out.append(min(max(v, a), b))
    return out


def _t_grid(plan: SamplePlan) -> list[float]:
    lo = plan.t_clamp
    hi = 1.0 - plan.t_clamp
    pts = chebyshev_points(plan.n_t, lo, hi)
    if 0.5 not in pts:
        pts.append(0.5)
        pts.sort()
    return pts


def grid_axes(
    plan: SamplePlan, interval: Interval
) -> tuple[list[float], list[float], list[float]]:
    return (
        _linspace(interval.a, interval.b, plan.n_x),
        _linspace(interval.a, interval.b, plan.n_y),
        _t_grid(plan),
    )


def _random_triples(plan: SamplePlan, interval: Interval) -> list[tuple[float, float, float]]:
    rng = random.Random(plan.seed)
    a, b = interval.a, interval.b
    lo, hi = plan.t_clamp, 1.0 - plan.t_clamp
    return [
        (rng.uniform(a, b), rng.uniform(a, b), rng.uniform(lo, hi))
        for _ in range(plan.count)
    ]


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------


@dataclass
class _SweepData:
    worst: float
    witness: tuple[float, float, float]
    lhs: float
    rhs: float
    samples: int
    neg_f: bool
    neg_g: bool
    rows: list | None


def _convexity_sweep(
    u: Expr,
    h: Kernel,
    phi: AffineMap,
    interval: Interval,
    plan: SamplePlan,
    collect: bool = False,
) -> _SweepData:
    ev = u.evaluate
    hv = h.value
    worst = math.inf
    wit = (math.nan, math.nan, math.nan)
    wl = wr = math.nan
    neg = False
    rows: list | None = [] if collect else None
    samples = 0
    x = y = t = None
    try:
        if plan.strategy == "grid":
            xs, ys, ts = grid_axes(plan, interval)
            pxs = [phi.apply(v) for v in xs]
            pys = [phi.apply(v) for v in ys]
            ux = [ev(p) for p in pxs]
            uy = [ev(p) for p in pys]
            if min(ux) < 0.0 or min(uy) < 0.0:
                neg = True
            omts = [1.0 - tv for tv in ts]
            hts = [hv(tv) for tv in ts]
            h1ts = [hv(ov) for ov in omts]
            n_t = range(len(ts))
            tys = [[omts[k] * py for k in n_t] for py in pys]
            hys = [[h1ts[k] * vy for k in n_t] for vy in uy]
            for i, x in enumerate(xs):
                px, vx = pxs[i], ux[i]
                txi = [ts[k] * px for k in n_t]
                hxi = [hts[k] * vx for k in n_t]
                for j, y in enumerate(ys):
                    tyj = tys[j]
                    hyj = hys[j]
                    for k in n_t:
                        t = ts[k]
                        lhs = ev(txi[k] + tyj[k])
                        d = (hxi[k] + hyj[k]) - lhs
                        if lhs < 0.0:
                            neg = True
                        if d < worst or (d == worst and (x, y, t) < wit):
                            worst, wit = d, (x, y, t)
                            wl, wr = lhs, hxi[k] + hyj[k]
                        if collect:
                            rows.append((x, y, t, d))
                        samples += 1
        else:
            for x, y, t in _random_triples(plan, interval):
                omt = 1.0 - t
                px, py = phi.apply(x), phi.apply(y)
                vpx, vpy = ev(px), ev(py)
                if vpx < 0.0 or vpy < 0.0:
                    neg = True
                d, lhs, rhs = _defect_parts(ev, hv(t), hv(omt), t, omt, px, py, vpx, vpy)
                if lhs < 0.0:
                    neg = True
                if d < worst or (d == worst and (x, y, t) < wit):
                    worst, wit, wl, wr = d, (x, y, t), lhs, rhs
                if collect:
                    rows.append((x, y, t, d))
                samples += 1
    except EvalError as exc:
        raise EvalError(
            exc.kind, f"{exc} while checking sample (x={x!r}, y={y!r}, t={t!r})"
        ) from exc
    return _SweepData(worst, wit, wl, wr, samples, neg, False, rows)


def _dominance_sweep(
    pair: FunctionPair,
    h: Kernel,
    phi: AffineMap,
    interval: Interval,
    plan: SamplePlan,
    collect: bool = False,
) -> _SweepData:
    fe, ge = pair.f.evaluate, pair.g.evaluate
    hv = h.value
    worst = math.inf
    wit = (math.nan, math.nan, math.nan)
    wl = wr = math.nan
    neg_f = neg_g = False
    rows: list | None = [] if collect else None
    samples = 0
    x = y = t = None
    try:
        if plan.strategy == "grid":
            xs, ys, ts = grid_axes(plan, interval)
            pxs = [phi.apply(v) for v in xs]
            pys = [phi.apply(v) for v in ys]
            fx = [fe(p) for p in pxs]
            fy = [fe(p) for p in pys]
            gx = [ge(p) for p in pxs]
            gy = [ge(p) for p in pys]
            if min(fx) < 0.0 or min(fy) < 0.0:
                neg_f = True
            if min(gx) < 0.0 or min(gy) < 0.0:
                neg_g = True
            omts = [1.0 - tv for tv in ts]
            hts = [hv(tv) for tv in ts]
            h1ts = [hv(ov) for ov in omts]
            n_t = range(len(ts))
            tys = [[omts[k] * py for k in n_t] for py in pys]
            hfy = [[h1ts[k] * vy for k in n_t] for vy in fy]
            hgy = [[h1ts[k] * vy for k in n_t] for vy in gy]
            for i, x in enumerate(xs):
                px = pxs[i]
                txi = [ts[k] * px for k in n_t]
                hfx = [hts[k] * fx[i] for k in n_t]
                hgx = [hts[k] * gx[i] for k in n_t]
                for j, y in enumerate(ys):
                    tyj = tys[j]
                    hfyj = hfy[j]
                    hgyj = hgy[j]
                    for k in n_t:
                        t = ts[k]
                        mid = txi[k] + tyj[k]
                        fm = fe(mid)
                        gm = ge(mid)
                        if fm < 0.0:
                            neg_f = True
                        if gm < 0.0:
                            neg_g = True
                        df = (hfx[k] + hfyj[k]) - fm
                        dg = (hgx[k] + hgyj[k]) - gm
                        lhs = abs(df)
                        gap = dg - lhs
                        if gap < worst or (gap == worst and (x, y, t) < wit):
                            worst, wit, wl, wr = gap, (x, y, t), lhs, dg
                        if collect:
                            rows.append((x, y, t, gap, lhs, dg))
                        samples += 1
        else:
            for x, y, t in _random_triples(plan, interval):
                omt = 1.0 - t
                ht, h1t = hv(t), hv(omt)
                px, py = phi.apply(x), phi.apply(y)
                fpx, fpy = fe(px), fe(py)
                gpx, gpy = ge(px), ge(py)
                if fpx < 0.0 or fpy < 0.0:
                    neg_f = True
                if gpx < 0.0 or gpy < 0.0:
                    neg_g = True
                mid = t * px + omt * py
                fm = fe(mid)
                gm = ge(mid)
                if fm < 0.0:
                    neg_f = True
                if gm < 0.0:
                    neg_g = True
                df = (ht * fpx + h1t * fpy) - fm
                dg = (ht * gpx + h1t * gpy) - gm
                lhs = abs(df)
                gap = dg - lhs
                if gap < worst or (gap == worst and (x, y, t) < wit):
                    worst, wit, wl, wr = gap, (x, y, t), lhs, dg
                if collect:
                    rows.append((x, y, t, gap, lhs, dg))
                samples += 1
    except EvalError as exc:
        raise EvalError(
            exc.kind, f"{exc} while checking sample (x={x!r}, y={y!r}, t={t!r})"
        ) from exc
    return _SweepData(worst, wit, wl, wr, samples, neg_f, neg_g, rows)


def _finish_report(data: _SweepData, plan: SamplePlan, neg_roles: list[str]) -> CheckReport:
    warnings = []
    for role, flagged in zip(neg_roles, (data.neg_f, data.neg_g)):
        if flagged:
            warnings.append(NEG_VALUES_WARNING.format(role=role))
    threshold = plan.atol + plan.rtol * max(abs(data.lhs), abs(data.rhs))
    if data.worst < -threshold:
        verdict = VIOLATED
    else:
        verdict = HOLDS
        if data.worst < 0.0:
            warnings.append(WITHIN_TOL_WARNING)
    return CheckReport(
        verdict,
        data.samples,
        data.worst,
        data.witness,
        data.lhs,
        data.rhs,
        warnings,
        rows=data.rows,
    )


# ---------------------------------------------------------------------------
# Public checks
# ---------------------------------------------------------------------------


def check_phi_h_convex(
    f: Expr,
    h: Kernel,
    phi: AffineMap,
    interval: Interval,
    plan: SamplePlan,
    collect_samples: bool = False,
) -> CheckReport:
    """Sample the convexity defect of f; worst_gap is the minimum defect."""
    data = _convexity_sweep(f, h, phi, interval, plan, collect=collect_samples)
    return _finish_report(data, plan, ["function"])


def _dominance_report(
    pair: FunctionPair,
    h: Kernel,
    phi: AffineMap,
    interval: Interval,
    plan: SamplePlan,
    collect_samples: bool = False,
) -> CheckReport:
    data = _dominance_sweep(pair, h, phi, interval, plan, collect=collect_samples)
    return _finish_report(data, plan, ["f", "g"])


def check_dominated(
    pair: FunctionPair,
    h: Kernel,
    phi: AffineMap,
    interval: Interval,
    plan: SamplePlan,
    collect_samples: bool = False,
) -> CheckReport:
    """Sample the dominance gap of (f, g); g must pass its own convexity check.

    Raises PreconditionError when the dominator g is itself refuted on the
    same plan, since the dominance statement presumes g in the class.
    """
    gate = check_phi_h_convex(pair.g, h, phi, interval, plan)
    if gate.verdict == VIOLATED:
        raise PreconditionError(
            "dominator g fails its convexity check: worst defect "
            f"{gate.worst_gap!r} at (x, y, t) = {gate.witness!r}"
        )
    return _dominance_report(pair, h, phi, interval, plan, collect_samples)


def decompose(pair: FunctionPair) -> tuple[Expr, Expr]:
    """Return (l, k) = (g + f, g - f) as expression trees, unsimplified."""
    l = combine("+", pair.g, pair.f)
    k = combine("-", pair.g, pair.f)
    return l, k


def compose(l: Expr, k: Expr) -> FunctionPair:
    """Inverse of decompose: f = (l - k)/2 and g = (l + k)/2 as trees."""
    two = constant(2.0)
    f = combine("/", combine("-", l, k), two)
    g = combine("/", combine("+", l, k), two)
    return FunctionPair(f, g)


def equivalence_report(
    pair: FunctionPair,
    h: Kernel,
    phi: AffineMap,
    interval: Interval,
    plan: SamplePlan,
) -> EquivalenceReport:
    """Evaluate the three equivalent dominance characterizations on one plan.

    Unlike check_dominated, g's own convexity is not a gate here; it is
    part of what the statements themselves measure.
    """
    dom = _dominance_report(pair, h, phi, interval, plan)
    sum_check = check_phi_h_convex(combine("+", pair.g, pair.f), h, phi, interval, plan)
    diff_check = check_phi_h_convex(combine("-", pair.g, pair.f), h, phi, interval, plan)
    l, k = decompose(pair)
    l_check = check_phi_h_convex(l, h, phi, interval, plan)
    k_check = check_phi_h_convex(k, h, phi, interval, plan)
    statements = (
        dom.holds(),
        diff_check.holds() and sum_check.holds(),
        l_check.holds() and k_check.holds(),
    )
    return EquivalenceReport(
        dominance=dom,
        sum_convex=sum_check,
        diff_convex=diff_check,
        l_convex=l_check,
        k_convex=k_check,
        statement_holds=statements,
        agreement=statements[0] == statements[1] == statements[2],
    )
