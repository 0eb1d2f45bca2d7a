"""Relay-subset collections, their per-user classes, and the count used by
the improved placement."""
from __future__ import annotations

import enum
import os
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterator

from .errors import EnumerationCapError, ParameterError
from .topology import CombinationNetwork, common_users, relays_of_user

RelaySubset = tuple[int, ...]
Collection = tuple[RelaySubset, ...]

DEFAULT_MAX_ENUM = 10**7


def max_enum() -> int:
    """Enumeration cap, overridable with ``COMBICACHE_MAX_ENUM``."""
    raw = os.environ.get("COMBICACHE_MAX_ENUM")
    return int(raw) if raw else DEFAULT_MAX_ENUM


def binom(x: int, y: int) -> int:
    """Binomial coefficient, zero whenever x < 0, y < 0 or x < y."""
    if x < 0 or y < 0 or x < y:
        return 0
    return comb(x, y)


class CollectionClass(enum.Enum):
    CACHED = "Cached"
    DELIVERED = "Delivered"
    IGNORED = "Ignored"


def relay_subsets(net: CombinationNetwork) -> list[RelaySubset]:
    """All (r-1)-subsets of relays in lexicographic order."""
    return list(combinations(net.relays, net.r - 1))


def enumerate_collections(net: CombinationNetwork, q: int) -> Iterator[Collection]:
    if not 1 <= q <= net.K2:
        raise ParameterError(f"q={q} out of range 1..{net.K2}")
    return combinations(relay_subsets(net), q)


def relay_union(Q: Collection) -> frozenset[int]:
    return frozenset(h for Y in Q for h in Y)


def cached_by(net: CombinationNetwork, Q: Collection) -> frozenset[int]:
    """Users outside every P_Y, Y in Q: the holders of the symbol keyed by Q."""
    covered: set[int] = set()
    for Y in Q:
        covered |= _subset_users(net, Y)
    return frozenset(range(1, net.K + 1)) - covered


def _subset_users(net: CombinationNetwork, Y: RelaySubset) -> frozenset[int]:
    if not Y:
        return frozenset(range(1, net.K + 1))
    return common_users(net, Y)


def classify(net: CombinationNetwork, Q: Collection, k: int) -> CollectionClass:
    Hk = relays_of_user(net, k)
    inside = sum(1 for Y in Q if Hk.issuperset(Y))
    if inside == 0:
        return CollectionClass.CACHED
    if Hk <= relay_union(Q):
        return CollectionClass.IGNORED
    return CollectionClass.DELIVERED


@lru_cache(maxsize=None)
def lemma1_G(H: int, r: int, q: int) -> int:
    """Per-user number of collections of q (r-1)-subsets whose union is not
    all of [H] and that contain no subset of the user's relays.

    Inclusion-exclusion over the size ``a`` of the relay set that bounds the
    union, split by how much of the user's relay set it contains.
    """
    total = 0
    for a in range(r - 1, H):
        inner = binom(a, r - 1)
        x1 = binom(H - r, a - r) * binom(inner - r, q)
        y1 = r * binom(H - r, a - r + 1) * binom(inner - 1, q)
        z1 = (binom(H, a) - r * binom(H - r, a - r + 1) - binom(H - r, a - r)) * binom(inner, q)
        total += (x1 + y1 + z1) * (-1) ** (H - a + 1)
    return total


def lemma1_G_bruteforce(net: CombinationNetwork, q: int, k: int, cap: int | None = None) -> int:
    """Direct count of the collections ``lemma1_G`` describes, for user k."""
    cap = max_enum() if cap is None else cap
    n = binom(net.K2, q)
    if n > cap:
        raise EnumerationCapError(f"C({net.K2},{q}) = {n} collections exceeds cap {cap}")
    everything = frozenset(net.relays)
    Hk = relays_of_user(net, k)
    count = 0
    for Q in enumerate_collections(net, q):
        if relay_union(Q) == everything:
            continue
        if any(Hk.issuperset(Y) for Y in Q):
            continue
        count += 1
    return count


def lemma1_G_bruteforce_all(net: CombinationNetwork, q: int, cap: int | None = None) -> dict[int, int]:
    """``lemma1_G_bruteforce`` for every user from one pass over the collections."""
    cap = max_enum() if cap is None else cap
    n = binom(net.K2, q)
    if n > cap:
        raise EnumerationCapError(f"C({net.K2},{q}) = {n} collections exceeds cap {cap}")
    full = (1 << net.H) - 1
    subsets = relay_subsets(net)
    relay_mask = [sum(1 << (h - 1) for h in Y) for Y in subsets]
    user_mask = [sum(1 << (u - 1) for u in _subset_users(net, Y)) for Y in subsets]
    histogram: dict[int, int] = {}
    for Q in combinations(range(len(subsets)), q):
        union = covered = 0
        for i in Q:
            union |= relay_mask[i]
            covered |= user_mask[i]
        if union != full:
            histogram[covered] = histogram.get(covered, 0) + 1
    return {
        k: sum(c for mask, c in histogram.items() if not mask >> (k - 1) & 1)
        for k in range(1, net.K + 1)
    }


def class_census(net: CombinationNetwork, q: int, k: int) -> dict[CollectionClass, int]:
    counts = {c: 0 for c in CollectionClass}
    for Q in enumerate_collections(net, q):
        counts[classify(net, Q, k)] += 1
    return counts


__all__ = [
    "Collection",
    "CollectionClass",
    "RelaySubset",
    "binom",
    "cached_by",
    "class_census",
    "classify",
    "enumerate_collections",
    "lemma1_G",
    "lemma1_G_bruteforce",
    "lemma1_G_bruteforce_all",
    "max_enum",
    "relay_subsets",
    "relay_union",
]
