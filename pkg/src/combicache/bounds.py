"""Tradeoff points, baseline and converse loads, and exact lower convex
envelopes in the (M, R) plane."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .combinatorics import binom
from .errors import ParameterError
from .placement import thm1_memory, thm3_memory

log = logging.getLogger(__name__)

# Reference values for two small configurations. They come from bounds
# and baselines this package does not implement and are only displayed or
# compared against, never computed.
REFERENCE_VALUES = {
    "baseline_load_H5_r3_N10_M7": {
        "value": "0.118",
        "what": "per-relay MDS baseline load at H=5, r=3, N=10, M=7 (given to 3 decimals)",
    },
    "baseline_load_H4_r2_N6_M6/5": {
        "value": Fraction(9, 10),
        "what": "per-relay MDS baseline load at H=4, r=2, N=6, M=6/5",
    },
    "enhanced_cutset_H4_r2_N6_M6/5": {
        "value": Fraction(3, 5),
        "what": "enhanced cut-set converse at H=4, r=2, N=6, M=6/5",
    },
    "uncoded_placement_bound_H4_r2_N6_M6/5": {
        "value": Fraction(157, 255),
        "what": "converse under uncoded placement at H=4, r=2, N=6, M=6/5",
    },
}


@dataclass(frozen=True)
class TradeoffPoint:
    M: Fraction
    R: Fraction
    scheme: str
    g: int | None = None
    t: int | None = None
    anchor: bool = False

    def __post_init__(self):
        if self.M < 0 or self.R < 0:
            raise ParameterError(f"negative coordinate in ({self.M}, {self.R})")


@dataclass
class TradeoffCurve:
    points: list[TradeoffPoint]
    envelope: bool = False

    def value_at(self, M: Fraction) -> Fraction:
        """Piecewise-linear interpolation; only defined inside the M range."""
        pts = self.points
        if not pts[0].M <= M <= pts[-1].M:
            raise ValueError(f"M={M} outside [{pts[0].M}, {pts[-1].M}]")
        for a, b in zip(pts, pts[1:]):
            if a.M <= M <= b.M:
                return a.R + (b.R - a.R) * (M - a.M) / (b.M - a.M)
        return pts[0].R


def _net_sizes(H: int, r: int) -> tuple[int, int, int]:
    if not 1 <= r <= H:
        raise ParameterError(f"need 1 <= r <= H, got H={H}, r={r}")
    return binom(H, r), binom(H - 1, r - 1), binom(H, r - 1)


def routing_load(H: int, r: int, N: int, M: Fraction) -> Fraction:
    K = binom(H, r)
    return Fraction(K, H) * (1 - Fraction(M) / N)


def cutset_bound(H: int, r: int, N: int, M: Fraction) -> Fraction:
    M = Fraction(M)
    if not 0 <= M <= N:
        raise ParameterError(f"M={M} outside [0, {N}]")
    return (1 - M / N) / r


def anchors(H: int, r: int, N: int) -> list[TradeoffPoint]:
    K = binom(H, r)
    return [
        TradeoffPoint(Fraction(0), Fraction(K, H), "routing", anchor=True),
        TradeoffPoint(Fraction(N), Fraction(0), "full-cache", anchor=True),
    ]


def _gain_points(H, r, N, memory, scheme) -> list[TradeoffPoint]:
    K, K1, _ = _net_sizes(H, r)
    if K1 < 2:
        log.info("no coded caching gain >= 2 exists for H=%d, r=%d", H, r)
        return []
    pts = []
    for g in range(2, K1 + 1):
        M = memory(H, r, N, g)
        pts.append(TradeoffPoint(M, routing_load(H, r, N, M) / g, scheme, g=g))
    return pts + anchors(H, r, N)


def thm1_points(H: int, r: int, N: int) -> list[TradeoffPoint]:
    """Corner points of the asymmetric coded scheme, one per gain g, plus the
    routing and full-cache anchors."""
    return _gain_points(H, r, N, thm1_memory, "thm1")


def thm3_points(H: int, r: int, N: int) -> list[TradeoffPoint]:
    return _gain_points(H, r, N, thm3_memory, "thm3")


def zewail_memory(H: int, r: int, N: int, g: int) -> Fraction:
    return Fraction(H * (g - 1) * N, r * binom(H, r))


def zewail_curve(H: int, r: int, N: int) -> list[TradeoffPoint]:
    """Formula-level points of the per-relay MDS baseline; gains needing more
    than N files of cache are dropped."""
    _, K1, _ = _net_sizes(H, r)
    pts = []
    for g in range(2, K1 + 1):
        M = zewail_memory(H, r, N, g)
        if M > N:
            log.info("baseline gain %d needs M=%s > N=%d; infeasible", g, M, N)
            continue
        pts.append(TradeoffPoint(M, routing_load(H, r, N, M) / g, "zewail", g=g))
    return pts


def _cross(a: TradeoffPoint, b: TradeoffPoint, c: TradeoffPoint) -> Fraction:
    return (b.M - a.M) * (c.R - a.R) - (b.R - a.R) * (c.M - a.M)


def lower_convex_envelope(points: Iterable[TradeoffPoint], N: int | None = None) -> TradeoffCurve:
    pts = list(points)
    if not pts:
        raise ParameterError("envelope of an empty point set")
    if N is not None and any(not 0 <= p.M <= N for p in pts):
        raise ParameterError(f"points must satisfy 0 <= M <= {N}")
    best: dict[Fraction, TradeoffPoint] = {}
    for p in pts:
        if p.M not in best or p.R < best[p.M].R:
            best[p.M] = p
    hull: list[TradeoffPoint] = []
    for p in sorted(best.values(), key=lambda p: p.M):
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) <= 0:
            hull.pop()
        hull.append(p)
    return TradeoffCurve(hull, envelope=True)


@dataclass
class Remark1Row:
    g: int
    proposed: Fraction
    baseline: Fraction
    claimed: bool

    @property
    def smaller(self) -> bool:
        return self.proposed < self.baseline


@dataclass
class Remark1Report:
    H: int
    r: int
    rows: list[Remark1Row]

    @property
    def ok(self) -> bool:
        return all(row.smaller for row in self.rows if row.claimed)

    @property
    def failures(self) -> list[Remark1Row]:
        return [row for row in self.rows if row.claimed and not row.smaller]


def claimed_dominance(H: int, r: int, g: int) -> bool:
    """Gains for which the coded scheme is asserted to need less memory than
    the per-relay MDS baseline."""
    if r == 2:
        return True
    if r < 2:
        return False
    K1 = binom(H - 1, r - 1)
    return g >= K1 - H // (r - 1) + 1


def remark1_check(H: int, r: int) -> Remark1Report:
    """Compare minimum cache sizes (per file of library) at every gain."""
    _, K1, _ = _net_sizes(H, r)
    rows = [
        Remark1Row(g, thm1_memory(H, r, 1, g), zewail_memory(H, r, 1, g), claimed_dominance(H, r, g))
        for g in range(2, K1 + 1)
    ]
    return Remark1Report(H, r, rows)


@dataclass
class OptimalityReport:
    H: int
    r: int
    N: int
    point: tuple[Fraction, Fraction] | None
    expected: tuple[Fraction, Fraction] | None
    bound: Fraction | None
    envelope_linear: bool
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        if self.point is None:
            return self.envelope_linear
        return self.point == self.expected and self.point[1] == self.bound and self.envelope_linear


def thm2_optimality_check(H: int, r: int, N: int) -> OptimalityReport:
    K, K1, _ = _net_sizes(H, r)
    expected = (Fraction((K - H + r - 1) * N, K), Fraction(H - r + 1, r * K))
    if K1 < 2:
        # single user (r = H) or r = 1: no coded point, only the memory range exists
        ok = 0 <= expected[0] <= N
        return OptimalityReport(H, r, N, None, expected, cutset_bound(H, r, N, expected[0]) if ok else None,
                                ok, ["no gain >= 2; memory-range check only"])
    pts = thm1_points(H, r, N)
    corner = next(p for p in pts if p.g == K1)
    point = (corner.M, corner.R)
    bound = cutset_bound(H, r, N, corner.M)
    env = lower_convex_envelope(pts, N)
    tail = [p for p in env.points if p.M >= corner.M]
    linear = (
        len(tail) == 2
        and tail[0].M == corner.M and tail[0].R == corner.R
        and tail[-1].M == N and tail[-1].R == 0
        and (tail[-1].R - tail[0].R) / (tail[-1].M - tail[0].M) == Fraction(-1, r * N)
    )
    return OptimalityReport(H, r, N, point, expected, bound, linear)


def curve_rows(H: int, r: int, N: int, schemes: Sequence[str]) -> list[dict]:
    """Rows for the tradeoff CSV: requested schemes plus the envelopes of the
    achievable ones."""
    K = binom(H, r)
    rows: list[dict] = []

    def emit(points, name):
        for p in points:
            rows.append({"scheme": name, "g": p.g, "M": p.M, "R": p.R})

    for s in schemes:
        if s in ("thm1", "thm3"):
            pts = thm1_points(H, r, N) if s == "thm1" else thm3_points(H, r, N)
            emit([p for p in pts if not p.anchor], s)
            emit(lower_convex_envelope(pts, N).points, f"{s}_envelope")
        elif s == "zewail":
            pts = zewail_curve(H, r, N)
            emit(pts, s)
            emit(lower_convex_envelope(pts + anchors(H, r, N), N).points, "zewail_envelope")
        elif s == "routing":
            emit([TradeoffPoint(Fraction(0), Fraction(K, H), "routing"),
                  TradeoffPoint(Fraction(N), Fraction(0), "routing")], s)
        elif s == "cutset":
            grid = sorted({Fraction(0), Fraction(N)}
                          | {p.M for p in thm1_points(H, r, N)})
            emit([TradeoffPoint(M, cutset_bound(H, r, N, M), "cutset") for M in grid], s)
        else:
            raise ParameterError(f"unknown curve scheme {s!r}")
    return rows
