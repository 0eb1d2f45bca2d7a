"""Combination network topology.

A server feeds ``H`` relays; each of the ``K = C(H, r)`` users is attached to
a distinct ``r``-subset of relays. Users are numbered 1..K by the
lexicographic rank of their relay subset, relays 1..H.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable

from .errors import ParameterError

MAX_USERS = 1_000_000


@dataclass(frozen=True)
class CombinationNetwork:
    H: int
    r: int
    users: tuple[tuple[int, ...], ...]
    _relay_users: tuple[frozenset[int], ...] = field(repr=False, compare=False)
    _user_relays: tuple[frozenset[int], ...] = field(repr=False, compare=False)

    @property
    def K(self) -> int:
        return len(self.users)

    @property
    def K1(self) -> int:
        """Users per relay, C(H-1, r-1)."""
        return comb(self.H - 1, self.r - 1)

    @property
    def K2(self) -> int:
        """Number of (r-1)-subsets of relays, C(H, r-1)."""
        return comb(self.H, self.r - 1)

    @property
    def relays(self) -> range:
        return range(1, self.H + 1)

    def users_of_relay(self, h: int) -> frozenset[int]:
        return users_of_relay(self, h)

    def relays_of_user(self, k: int) -> frozenset[int]:
        return relays_of_user(self, k)

    def common_users(self, J: Iterable[int]) -> frozenset[int]:
        return common_users(self, J)

    def to_dict(self) -> dict:
        return {"H": self.H, "r": self.r, "users": [list(u) for u in self.users]}


def build(H: int, r: int) -> CombinationNetwork:
    if not (isinstance(H, int) and isinstance(r, int)) or not 1 <= r <= H:
        raise ParameterError(f"need 1 <= r <= H, got H={H}, r={r}")
    if comb(H, r) > MAX_USERS:
        raise ParameterError(f"C({H},{r}) = {comb(H, r)} users is too large")
    users = tuple(combinations(range(1, H + 1), r))
    relay_users: list[set[int]] = [set() for _ in range(H)]
    for k, subset in enumerate(users, start=1):
        for h in subset:
            relay_users[h - 1].add(k)
    return CombinationNetwork(
        H=H,
        r=r,
        users=users,
        _relay_users=tuple(frozenset(s) for s in relay_users),
        _user_relays=tuple(frozenset(u) for u in users),
    )


def users_of_relay(net: CombinationNetwork, h: int) -> frozenset[int]:
    if not 1 <= h <= net.H:
        raise ParameterError(f"relay {h} out of range 1..{net.H}")
    return net._relay_users[h - 1]


def relays_of_user(net: CombinationNetwork, k: int) -> frozenset[int]:
    if not 1 <= k <= net.K:
        raise ParameterError(f"user {k} out of range 1..{net.K}")
    return net._user_relays[k - 1]


def common_users(net: CombinationNetwork, J: Iterable[int]) -> frozenset[int]:
    """Users connected to every relay in ``J``."""
    J = list(J)
    if not J:
        raise ParameterError("relay set must be nonempty")
    out = users_of_relay(net, J[0])
    for h in J[1:]:
        out = out & users_of_relay(net, h)
    return out
