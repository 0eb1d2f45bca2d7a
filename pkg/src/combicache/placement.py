"""Cache placement layouts: MAN, asymmetric uncoded, asymmetric MDS-coded and
the improved coded placement, plus bit-level cache filling."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import lcm
from typing import Hashable, NamedTuple, Sequence

from .combinatorics import (
    binom,
    cached_by,
    enumerate_collections,
    lemma1_G,
    max_enum,
    relay_subsets,
    relay_union,
)
from .errors import EnumerationCapError, ParameterError
from .gf import ORDER, SYMBOL_BYTES
from .mdscodec import MdsCode, get_code
from .topology import CombinationNetwork

SCHEMES = ("man", "asym", "coded", "improved")


class SymbolId(NamedTuple):
    file: int
    key: Hashable


@dataclass(frozen=True, eq=False)
class PlacementLayout:
    """Which coded symbol of every file sits in which user caches.

    ``keys[j]`` names coded symbol ``j``; for MAN layouts a key is the sorted
    tuple of caching users, otherwise it is a canonical collection of relay
    subsets. The first ``subpacketization`` symbols are the systematic ones.
    """

    scheme: str
    net: CombinationNetwork
    N: int
    keys: tuple
    cached_by: dict
    subpacketization: int
    g: int | None = None
    t: int | None = None
    q: int | None = None
    mds: MdsCode | None = None
    index: dict = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {key: j for j, key in enumerate(self.keys)})

    @property
    def n(self) -> int:
        return len(self.keys)

    @property
    def piece_len(self) -> Fraction:
        """Length of one coded symbol as a fraction of the file size."""
        return Fraction(1, self.subpacketization)

    @cached_property
    def user_symbols(self) -> dict[int, tuple]:
        out: dict[int, list] = {k: [] for k in range(1, self.net.K + 1)}
        for key in self.keys:
            for k in self.cached_by[key]:
                out[k].append(key)
        return {k: tuple(v) for k, v in out.items()}

    def cached_count(self, k: int) -> int:
        return len(self.user_symbols[k])

    @cached_property
    def M(self) -> Fraction:
        counts = {self.cached_count(k) for k in range(1, self.net.K + 1)}
        if len(counts) != 1:
            raise AssertionError(f"unequal per-user memory: {sorted(counts)}")
        return self.N * counts.pop() * self.piece_len

    def symbols(self, file: int) -> list[tuple[SymbolId, frozenset[int]]]:
        return [(SymbolId(file, key), self.cached_by[key]) for key in self.keys]

    def summary(self) -> dict:
        return {
            "scheme": self.scheme,
            "H": self.net.H,
            "r": self.net.r,
            "N": self.N,
            "g": self.g,
            "t": self.t,
            "q": self.q,
            "subpacketization": self.subpacketization,
            "mds": {"n": self.n, "k": self.subpacketization},
            "M": self.M,
        }

    def to_dict(self, with_symbols: bool = True) -> dict:
        from .serialize import rational

        out = self.summary()
        out["M"] = rational(self.M)
        if with_symbols:
            out["symbols"] = [
                {"file": i, "key": _key_json(key), "cached_by": sorted(self.cached_by[key])}
                for i in range(1, self.N + 1)
                for key in self.keys
            ]
        return out


def _key_json(key):
    return [list(part) if isinstance(part, tuple) else part for part in key]


def _check_N(N: int) -> None:
    if not isinstance(N, int) or N < 1:
        raise ParameterError(f"N must be a positive integer, got {N}")


def _check_g(net: CombinationNetwork, g: int) -> int:
    if not 2 <= g <= net.K1:
        raise ParameterError(f"g={g} out of range 2..K'={net.K1}")
    return net.K1 - g + 1


def man_placement(net: CombinationNetwork, N: int, t: int) -> PlacementLayout:
    _check_N(N)
    if not 0 <= t <= net.K:
        raise ParameterError(f"t={t} out of range 0..{net.K}")
    n = binom(net.K, t)
    if n > max_enum():
        raise EnumerationCapError(f"C({net.K},{t}) = {n} subfiles exceeds cap")
    keys = tuple(combinations(range(1, net.K + 1), t))
    return PlacementLayout(
        scheme="man",
        net=net,
        N=N,
        keys=keys,
        cached_by={W: frozenset(W) for W in keys},
        subpacketization=len(keys),
        t=t,
    )


def asym_uncoded_placement(net: CombinationNetwork, N: int) -> PlacementLayout:
    _check_N(N)
    keys = tuple((Y,) for Y in relay_subsets(net))
    return PlacementLayout(
        scheme="asym",
        net=net,
        N=N,
        keys=keys,
        cached_by={Q: cached_by(net, Q) for Q in keys},
        subpacketization=len(keys),
        g=net.K1,
        q=1,
    )


def _coded_layout(net, N, g, scheme, keep) -> PlacementLayout:
    q = _check_g(net, g)
    total = binom(net.K2, q)
    if total > max_enum():
        raise EnumerationCapError(f"C({net.K2},{q}) = {total} collections exceeds cap")
    if scheme == "coded" and total > ORDER:
        raise ParameterError(f"{total} coded symbols exceed the GF(2^16) code length limit")
    keys = tuple(Q for Q in enumerate_collections(net, q) if keep(Q))
    if len(keys) > ORDER:
        raise ParameterError(f"{len(keys)} coded symbols exceed the GF(2^16) code length limit")
    delivered = net.r * binom(net.K1 - 1, q - 1)
    if scheme == "coded":
        k_sub = binom(net.K2 - net.r, q) + delivered
    else:
        k_sub = lemma1_G(net.H, net.r, q) + delivered
    return PlacementLayout(
        scheme=scheme,
        net=net,
        N=N,
        keys=keys,
        cached_by={Q: cached_by(net, Q) for Q in keys},
        subpacketization=k_sub,
        g=g,
        q=q,
        mds=get_code(len(keys), k_sub) if len(keys) > k_sub else None,
    )


def asym_coded_placement(net: CombinationNetwork, N: int, g: int) -> PlacementLayout:
    _check_N(N)
    return _coded_layout(net, N, g, "coded", lambda Q: True)


def improved_placement(net: CombinationNetwork, N: int, g: int) -> PlacementLayout:
    _check_N(N)
    everything = frozenset(net.relays)
    return _coded_layout(net, N, g, "improved", lambda Q: relay_union(Q) != everything)


def make_layout(net: CombinationNetwork, N: int, scheme: str, g: int | None = None,
                t: int | None = None) -> PlacementLayout:
    if scheme == "man":
        if t is None:
            raise ParameterError("MAN placement needs t")
        return man_placement(net, N, t)
    if scheme == "asym":
        return asym_uncoded_placement(net, N)
    if g is None:
        raise ParameterError(f"scheme {scheme!r} needs g")
    if scheme == "coded":
        return asym_coded_placement(net, N, g)
    if scheme == "improved":
        return improved_placement(net, N, g)
    raise ParameterError(f"unknown scheme {scheme!r}; choose from {', '.join(SCHEMES)}")


def srds_split_factor(layout: PlacementLayout) -> int:
    """lcm of the number of pieces any needed symbol is split into."""
    if layout.scheme != "man":
        return 1
    from .delivery import srds_best_relays

    net = layout.net
    factor = 1
    seen: set[int] = set()
    for W in layout.keys:
        members = layout.cached_by[W]
        for k in range(1, net.K + 1):
            if k in members:
                continue
            size = len(srds_best_relays(net, k, members))
            if size not in seen:
                seen.add(size)
                factor = lcm(factor, size)
    return factor


def required_block_size(layout: PlacementLayout, net: CombinationNetwork | None = None) -> int:
    """Smallest file size in bytes that every split in the scheme divides."""
    if net is not None and net is not layout.net and (net.H, net.r) != (layout.net.H, layout.net.r):
        raise ParameterError("layout built for a different network")
    return layout.subpacketization * srds_split_factor(layout) * SYMBOL_BYTES


@dataclass
class CacheContent:
    users: dict[int, dict[SymbolId, bytes]]
    symbol_bytes: int

    def size(self, k: int) -> int:
        return sum(len(v) for v in self.users[k].values())


def encode_file(layout: PlacementLayout, data: bytes) -> list[bytes]:
    """Split a file into source pieces and expand to all coded symbols."""
    k = layout.subpacketization
    if len(data) % k:
        raise ParameterError(f"file length {len(data)} not divisible by {k} pieces")
    step = len(data) // k
    source = [data[i * step:(i + 1) * step] for i in range(k)]
    if layout.mds is None:
        return source
    from .mdscodec import mds_encode

    return mds_encode(layout.mds, source)


def encode_library(layout: PlacementLayout, files: Sequence[bytes]) -> dict[int, list[bytes]]:
    """All coded symbols of every file, indexed like ``layout.keys``."""
    if len(files) != layout.N:
        raise ParameterError(f"expected {layout.N} files, got {len(files)}")
    B0 = required_block_size(layout)
    sizes = {len(f) for f in files}
    if len(sizes) != 1 or next(iter(sizes)) % B0:
        raise ParameterError(f"all files must have one length that is a multiple of {B0} bytes")
    return {i: encode_file(layout, data) for i, data in enumerate(files, start=1)}


def fill_caches(layout: PlacementLayout, coded: dict[int, list[bytes]]) -> CacheContent:
    users: dict[int, dict[SymbolId, bytes]] = {k: {} for k in range(1, layout.net.K + 1)}
    for i, symbols in coded.items():
        for key, sym in zip(layout.keys, symbols):
            for k in layout.cached_by[key]:
                users[k][SymbolId(i, key)] = sym
    width = len(coded[1][0]) if coded and coded[1] else 0
    return CacheContent(users=users, symbol_bytes=width)


def place_bits(layout: PlacementLayout, files: Sequence[bytes]) -> CacheContent:
    return fill_caches(layout, encode_library(layout, files))


def zewail_min_memory(net: CombinationNetwork, N: int, g: int) -> Fraction:
    """Cache size the per-relay MDS baseline needs for gain g; may exceed N,
    in which case that gain is infeasible for it."""
    _check_g(net, g)
    return Fraction(net.H * (g - 1) * N, net.r * net.K)


def thm1_memory(H: int, r: int, N: int, g: int) -> Fraction:
    K1, K2 = binom(H - 1, r - 1), binom(H, r - 1)
    q = K1 - g + 1
    cached = binom(K2 - r, q)
    return Fraction(N * cached, cached + r * binom(K1 - 1, q - 1))


def thm3_memory(H: int, r: int, N: int, g: int) -> Fraction:
    K1 = binom(H - 1, r - 1)
    q = K1 - g + 1
    G = lemma1_G(H, r, q)
    return Fraction(N * G, G + r * binom(K1 - 1, q - 1))
