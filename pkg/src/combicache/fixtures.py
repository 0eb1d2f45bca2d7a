"""Regression table over fixed reference configurations."""
from __future__ import annotations

import time
from math import comb
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .bounds import (
    REFERENCE_VALUES,
    cutset_bound,
    lower_convex_envelope,
    remark1_check,
    thm1_points,
    thm2_optimality_check,
)
from .combinatorics import lemma1_G, lemma1_G_bruteforce
from .delivery import build_delivery, load_report
from .placement import asym_coded_placement, asym_uncoded_placement, required_block_size
from .serialize import fmt
from .topology import build
from .verify import simulate


@dataclass
class FixtureResult:
    name: str
    ok: bool
    detail: str
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return {"name": self.name, "ok": self.ok, "detail": self.detail,
                "seconds": round(self.seconds, 3)}


def _h5r3_uncoded() -> tuple[bool, str]:
    net = build(5, 3)
    layout = asym_uncoded_placement(net, 10)
    d = tuple(range(1, 11))
    load = load_report(build_delivery(net, layout, d)).max_link_load
    run = simulate(net, layout, d, 1000 * required_block_size(layout), seed=1)
    u1 = sorted(net.users_of_relay(1))
    ok = layout.M == 7 and load == Fraction(1, 10) and run.ok and u1 == list(range(1, 7))
    ref = REFERENCE_VALUES["baseline_load_H5_r3_N10_M7"]["value"]
    return ok, f"M={fmt(layout.M)} load={fmt(load)} recovered={run.recovered}/10 baseline={ref}"


def _h4r2_coded() -> tuple[bool, str]:
    net = build(4, 2)
    layout = asym_coded_placement(net, 6, 2)
    d = tuple(range(1, 7))
    load = load_report(build_delivery(net, layout, d)).max_link_load
    run = simulate(net, layout, d, 10 * required_block_size(layout), seed=1)
    ok = (layout.M == Fraction(6, 5) and load == Fraction(3, 5) and run.ok
          and (layout.n, layout.subpacketization) == (6, 5))
    base = REFERENCE_VALUES["baseline_load_H4_r2_N6_M6/5"]["value"]
    enh = REFERENCE_VALUES["enhanced_cutset_H4_r2_N6_M6/5"]["value"]
    unc = REFERENCE_VALUES["uncoded_placement_bound_H4_r2_N6_M6/5"]["value"]
    return ok, (f"M={fmt(layout.M)} load={fmt(load)} recovered={run.recovered}/6 "
                f"baseline={fmt(base)} enhanced-bound={fmt(enh)} uncoded-bound={fmt(unc)}")


def _corner() -> tuple[bool, str]:
    bad = []
    count = 0
    for H in range(2, 9):
        for r in range(1, H + 1):
            count += 1
            rep = thm2_optimality_check(H, r, comb(H, r))
            if not rep.ok:
                bad.append((H, r))
    return not bad, f"{count} (H, r) pairs, failures={bad}"


def _baseline_memory() -> tuple[bool, str]:
    bad = []
    for H in range(3, 11):
        for r in range(2, H):
            bad.extend((H, r, row.g) for row in remark1_check(H, r).failures)
    return not bad, f"claimed-regime failures (H, r, g)={bad}"


def _cached_count() -> tuple[bool, str]:
    checked = 0
    bad = []
    for H in range(2, 7):
        for r in range(2, H + 1):
            net = build(H, r)
            for q in range(1, net.K2 + 1):
                if comb(net.K2, q) > 20000:
                    continue
                for k in (1, net.K):
                    checked += 1
                    if lemma1_G(H, r, q) != lemma1_G_bruteforce(net, q, k):
                        bad.append((H, r, q, k))
    return not bad, f"{checked} cases, mismatches={bad}"


def _h6r2_curve() -> tuple[bool, str]:
    H, r, N = 6, 2, 15
    env = lower_convex_envelope(thm1_points(H, r, N), N)
    on_curve = any(p.M == 10 and p.R == Fraction(1, 6) for p in env.points)
    grid = [Fraction(10) + Fraction(i, 4) for i in range(21)]
    meets = all(env.value_at(M) == cutset_bound(H, r, N, M) for M in grid)
    return on_curve and meets, f"(10, 1/6) on envelope={on_curve}; envelope = bound on [10, 15]: {meets}"


FIXTURES: dict[str, Callable[[], tuple[bool, str]]] = {
    "h5r3": _h5r3_uncoded,
    "h4r2": _h4r2_coded,
    "corner": _corner,
    "baseline": _baseline_memory,
    "cached-count": _cached_count,
    "h6r2-curve": _h6r2_curve,
}


def run_fixtures(only: list[str] | None = None) -> list[FixtureResult]:
    names = only or list(FIXTURES)
    out = []
    for name in names:
        if name not in FIXTURES:
            raise KeyError(name)
        t0 = time.perf_counter()
        ok, detail = FIXTURES[name]()
        out.append(FixtureResult(name, ok, detail, time.perf_counter() - t0))
    return out
