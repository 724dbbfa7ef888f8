"""Counterexample search over the dominance gap.

Sweeps a sample plan, keeps every triple whose gap is below the violation
threshold, and optionally sharpens the ten worst samples with a clamped
coordinate-descent (step-halving) refinement.  Everything is deterministic
for a fixed plan, including the random strategy via its seed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .convexity import (
    FunctionPair,
    SamplePlan,
    _dominance_sweep,
    _gap_parts,
    _violates,
)
from .geometry import AffineMap, Interval
from .kernels import Kernel

REFINE_SEEDS = 10
REFINE_ITERATIONS = 50


@dataclass(frozen=True)
class ViolationRecord:
    x: float
    y: float
    t: float
    gap: float
    lhs_abs: float
    rhs: float


def _refine_seed(
    gap_fn,
    x: float,
    y: float,
    t: float,
    interval: Interval,
    t_clamp: float,
) -> tuple[float, float, float]:
    """Greedy pattern search for a smaller gap, clamped to the sample box."""
    a, b = interval.a, interval.b
    t_lo, t_hi = t_clamp, 1.0 - t_clamp
    step_xy = (b - a) / 8.0
    step_t = (t_hi - t_lo) / 8.0
    best = gap_fn(x, y, t)
    for _ in range(REFINE_ITERATIONS):
        candidates = (
            (min(max(x + step_xy, a), b), y, t),
            (min(max(x - step_xy, a), b), y, t),
            (x, min(max(y + step_xy, a), b), t),
            (x, min(max(y - step_xy, a), b), t),
            (x, y, min(max(t + step_t, t_lo), t_hi)),
            (x, y, min(max(t - step_t, t_lo), t_hi)),
        )
        moved = False
        for cx, cy, ct in candidates:
            v = gap_fn(cx, cy, ct)
            if v < best:
                best, x, y, t = v, cx, cy, ct
                moved = True
        if not moved:
            step_xy *= 0.5
            step_t *= 0.5
            if step_xy < 1e-13 * (b - a):
                break
    return x, y, t


def search_violations(
    pair: FunctionPair,
    h: Kernel,
    phi: AffineMap,
    interval: Interval,
    plan: SamplePlan,
    refine: bool = False,
) -> list[ViolationRecord]:
    """All sampled violations, sorted by gap then (x, y, t) ascending."""
    data = _dominance_sweep(pair, h, phi, interval, plan, collect=True)
    rows = data.rows or []

    found: dict[tuple[float, float, float], ViolationRecord] = {}
    for x, y, t, gap, lhs, rhs in rows:
        if _violates(gap, lhs, rhs, plan.atol, plan.rtol):
            found[(x, y, t)] = ViolationRecord(x, y, t, gap, lhs, rhs)

    if refine and rows:
        def gap_fn(x, y, t):
            return _gap_parts(pair, h, phi, x, y, t)[0]

        seeds = sorted(rows, key=lambda r: (r[3], r[0], r[1], r[2]))[:REFINE_SEEDS]
        for sx, sy, st, _, _, _ in seeds:
            rx, ry, rt = _refine_seed(gap_fn, sx, sy, st, interval, plan.t_clamp)
            gap, lhs, rhs = _gap_parts(pair, h, phi, rx, ry, rt)
            if not _violates(gap, lhs, rhs, plan.atol, plan.rtol):
                continue
            if (rx, ry, rt) != (sx, sy, st):
                # the refined point replaces the seed it sharpened
                found.pop((sx, sy, st), None)
            found[(rx, ry, rt)] = ViolationRecord(rx, ry, rt, gap, lhs, rhs)

    return sorted(found.values(), key=lambda r: (r.gap, r.x, r.y, r.t))
