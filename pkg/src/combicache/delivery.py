"""Delivery: T-set filling, XOR multicast messages per relay, and exact
per-link load accounting."""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

from .combinatorics import Collection, max_enum
from .errors import EnumerationCapError, ParameterError
from .placement import PlacementLayout, SymbolId
from .serialize import rational
from .topology import CombinationNetwork, relays_of_user, users_of_relay

log = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class PieceRef:
    """Part ``part`` of ``parts`` equal slices of one coded symbol."""

    symbol: SymbolId
    part: int = 0
    parts: int = 1


@dataclass
class TSet:
    relay: int
    user: int
    known_by: frozenset[int]
    pieces: list[PieceRef] = field(default_factory=list)

    def length(self, piece_len: Fraction) -> Fraction:
        return sum((piece_len / p.parts for p in self.pieces), Fraction(0))


@dataclass(frozen=True)
class MulticastMessage:
    relay: int
    targets: tuple[int, ...]
    tsets: tuple[TSet, ...]
    length: Fraction

    @property
    def degree(self) -> int:
        """Number of T-sets XORed together."""
        return len(self.tsets)


@dataclass
class DeliveryPlan:
    net: CombinationNetwork
    layout: PlacementLayout
    demand: tuple[int, ...]
    messages: list[MulticastMessage]
    srds_divergences: list[tuple] = field(default_factory=list)

    def messages_for(self, k: int) -> list[MulticastMessage]:
        return [m for m in self.messages if k in m.targets]


@dataclass
class LoadReport:
    R_h: list[Fraction]
    R_hk: dict[tuple[int, int], Fraction]
    max_link_load: Fraction
    measured_gain: Fraction | None
    demand: tuple[int, ...] | None = None

    def to_dict(self) -> dict:
        return {
            "R_h": [rational(x) for x in self.R_h],
            "R_hk": [
                {"relay": h, "user": k, "load": rational(v)}
                for (h, k), v in sorted(self.R_hk.items())
            ],
            "max": rational(self.max_link_load),
            "gain": rational(self.measured_gain),
            "demand": list(self.demand) if self.demand is not None else None,
        }


def srds_best_relays(net: CombinationNetwork, k: int, W: Iterable[int]) -> frozenset[int]:
    """Relays of user k attached to the most users in W (full argmax set)."""
    W = frozenset(W)
    if k in W:
        raise ParameterError(f"user {k} already holds the subfile")
    scores = {h: len(users_of_relay(net, h) & W) for h in relays_of_user(net, k)}
    best = max(scores.values())
    return frozenset(h for h, s in scores.items() if s == best)


def construct_q_prime(net: CombinationNetwork, k: int, h: int, J: Iterable[int]) -> Collection:
    """Collection keying the symbol user k receives from relay h inside the
    multicast to J; its holders among U_h are exactly J minus k."""
    J = frozenset(J)
    Hk = relays_of_user(net, k)
    Uh = users_of_relay(net, h)
    if h not in Hk:
        raise ParameterError(f"relay {h} is not connected to user {k}")
    if k not in J or not J <= Uh:
        raise ParameterError("J must contain k and lie within U_h")
    subsets = {tuple(sorted(relays_of_user(net, u) - {h})) for u in Uh - J}
    subsets.add(tuple(sorted(Hk - {h})))
    return tuple(sorted(subsets))


def srds_regime(net: CombinationNetwork, g: int) -> bool:
    """True when the relay used for each symbol is also the SRDS argmax."""
    return g > net.K1 - (net.H - net.r + 1) + 1


def _check_demand(net, layout, d) -> tuple[int, ...]:
    d = tuple(int(x) for x in d)
    if len(d) != net.K:
        raise ParameterError(f"demand needs {net.K} entries, got {len(d)}")
    if any(not 1 <= x <= layout.N for x in d):
        raise ParameterError(f"demands must lie in 1..{layout.N}")
    return d


def build_delivery(net: CombinationNetwork, layout: PlacementLayout, d: Sequence[int],
                   diagnose: bool = False) -> DeliveryPlan:
    if (net.H, net.r) != (layout.net.H, layout.net.r):
        raise ParameterError("layout was built for a different network")
    d = _check_demand(net, layout, d)
    if layout.scheme == "man":
        return _srds_delivery(net, layout, d)
    return _asym_delivery(net, layout, d, diagnose)


def _srds_delivery(net, layout, d) -> DeliveryPlan:
    tsets: dict[tuple[int, int, frozenset], TSet] = {}
    for k in range(1, net.K + 1):
        for W in layout.keys:
            members = layout.cached_by[W]
            if k in members:
                continue
            relays = sorted(srds_best_relays(net, k, members))
            for part, h in enumerate(relays):
                known = members & users_of_relay(net, h)
                slot = tsets.setdefault((h, k, known), TSet(h, k, known))
                slot.pieces.append(PieceRef(SymbolId(d[k - 1], W), part, len(relays)))

    by_relay: dict[int, set[tuple[int, ...]]] = {h: set() for h in net.relays}
    for (h, k, known), ts in tsets.items():
        ts.pieces.sort()
        by_relay[h].add(tuple(sorted(known | {k})))

    messages = []
    for h in net.relays:
        for J in sorted(by_relay[h]):
            members = [tsets[(h, k, frozenset(J) - {k})] for k in J
                       if (h, k, frozenset(J) - {k}) in tsets]
            length = max(ts.length(layout.piece_len) for ts in members)
            messages.append(MulticastMessage(h, J, tuple(members), length))
    return DeliveryPlan(net, layout, d, messages)


def _asym_delivery(net, layout, d, diagnose) -> DeliveryPlan:
    g = layout.g
    messages = []
    divergences = []
    for h in net.relays:
        for J in combinations(sorted(users_of_relay(net, h)), g):
            members = []
            for k in J:
                Q = construct_q_prime(net, k, h, J)
                if Q not in layout.index:
                    raise ParameterError(f"collection {Q} has no symbol in this layout")
                known = frozenset(J) - {k}
                members.append(TSet(h, k, known, [PieceRef(SymbolId(d[k - 1], Q))]))
                if diagnose:
                    best = srds_best_relays(net, k, layout.cached_by[Q])
                    if best != {h}:
                        divergences.append((k, h, J, tuple(sorted(best))))
            messages.append(MulticastMessage(h, J, tuple(members), layout.piece_len))
    if divergences:
        log.info("%d T-set assignments differ from the SRDS argmax", len(divergences))
    return DeliveryPlan(net, layout, d, messages, divergences)


def load_report(plan: DeliveryPlan) -> LoadReport:
    net, layout = plan.net, plan.layout
    R_h = [Fraction(0)] * net.H
    R_hk = {(h, k): Fraction(0) for h in net.relays for k in sorted(users_of_relay(net, h))}
    for m in plan.messages:
        R_h[m.relay - 1] += m.length
        for k in m.targets:
            R_hk[(m.relay, k)] += m.length
    peak = max([*R_h, *R_hk.values()], default=Fraction(0))
    gain = None
    if peak:
        gain = Fraction(net.K, net.H) * (1 - layout.M / layout.N) / peak
    return LoadReport(R_h, R_hk, peak, gain, plan.demand)


def demand_vectors(net: CombinationNetwork, N: int, policy: str) -> Iterable[tuple[int, ...]]:
    """Demand vectors for ``all``, ``distinct`` or ``sample:<n>:<seed>``."""
    if policy == "all":
        total = N ** net.K
        if total > max_enum():
            raise EnumerationCapError(f"N^K = {total} demand vectors exceeds cap")
        return product(range(1, N + 1), repeat=net.K)
    if policy == "distinct":
        if N < net.K:
            raise ParameterError(f"distinct demands need N >= K ({N} < {net.K})")
        return [tuple(range(1, net.K + 1))]
    if policy.startswith("sample:"):
        try:
            _, count, seed = policy.split(":")
            count, seed = int(count), int(seed)
        except ValueError:
            raise ParameterError(f"bad demand policy {policy!r}") from None
        rng = random.Random(seed)
        return [tuple(rng.randint(1, N) for _ in range(net.K)) for _ in range(count)]
    raise ParameterError(f"unknown demand policy {policy!r}")


def worst_case_load(net: CombinationNetwork, layout: PlacementLayout,
                    demand_policy: str = "distinct") -> LoadReport:
    worst = None
    for d in demand_vectors(net, layout.N, demand_policy):
        report = load_report(build_delivery(net, layout, d))
        if worst is None or report.max_link_load > worst.max_link_load:
            worst = report
    if worst is None:
        raise ParameterError("no demand vectors evaluated")
    return worst
