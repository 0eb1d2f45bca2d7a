"""Systematic MDS erasure code over GF(2^16).

Source symbol ``i`` is the value at point ``i`` of the unique polynomial of
degree < k through the source; coded symbol ``j`` is its value at point ``j``.
Any k coded symbols pin down the polynomial, so any k of them decode.
Symbols are byte strings of even length read as little-endian 16-bit words.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import CodecError
from .gf import EXP, GROUP, LOG, ORDER, SYMBOL_BYTES
from .kernels import gf_matmul


def interpolation_matrix(src: Sequence[int], dst: Sequence[int]) -> np.ndarray:
    """Matrix taking values at ``src`` points to values at ``dst`` points.

    Entry (i, m) is the Lagrange basis polynomial of src[m] evaluated at
    dst[i]. All points must be distinct within ``src``.
    """
    s = np.asarray(src, dtype=np.int64)
    d = np.asarray(dst, dtype=np.int64)
    diff = s[:, None] ^ s[None, :]
    np.fill_diagonal(diff, 1)
    log_w = (-LOG[diff].sum(axis=1)) % GROUP

    out = np.zeros((len(d), len(s)), dtype=np.uint16)
    position = {int(p): m for m, p in enumerate(s)}
    hit = np.array([int(p) in position for p in d], dtype=bool)
    for i in np.flatnonzero(hit):
        out[i, position[int(d[i])]] = 1
    rest = np.flatnonzero(~hit)
    if rest.size:
        dd = d[rest][:, None] ^ s[None, :]
        log_dd = LOG[dd]
        log_p = log_dd.sum(axis=1)
        out[rest] = EXP[(log_w[None, :] + log_p[:, None] - log_dd) % GROUP]
    return out


@dataclass(frozen=True)
class MdsCode:
    n: int
    k: int

    def __post_init__(self):
        if not 1 <= self.k <= self.n <= ORDER:
            raise CodecError(f"need 1 <= k <= n <= {ORDER}, got ({self.n}, {self.k})")

    @cached_property
    def parity(self) -> np.ndarray:
        """(n-k) x k coefficients producing the non-systematic symbols."""
        return interpolation_matrix(range(self.k), range(self.k, self.n))

    def generator(self) -> np.ndarray:
        """k x n generator; the first k columns are the identity."""
        g = np.zeros((self.k, self.n), dtype=np.uint16)
        g[:, : self.k] = np.eye(self.k, dtype=np.uint16)
        g[:, self.k :] = self.parity.T
        return g

    def encode_words(self, source: np.ndarray) -> np.ndarray:
        """(k, L) words -> (n, L) words."""
        if source.shape[0] != self.k:
            raise CodecError(f"expected {self.k} source rows, got {source.shape[0]}")
        source = np.ascontiguousarray(source, dtype=np.uint16)
        if self.n == self.k:
            return source.copy()
        return np.concatenate([source, gf_matmul(np.ascontiguousarray(self.parity), source)])

    def decode_words(self, indices: Sequence[int], rows: np.ndarray) -> np.ndarray:
        """Recover (k, L) source words from k coded rows at ``indices``."""
        if list(indices) == list(range(self.k)):
            return np.array(rows, dtype=np.uint16)
        coef = interpolation_matrix(indices, range(self.k))
        return gf_matmul(coef, np.ascontiguousarray(rows, dtype=np.uint16))


@lru_cache(maxsize=64)
def get_code(n: int, k: int) -> MdsCode:
    return MdsCode(n, k)


def _to_words(symbols: Sequence[bytes]) -> np.ndarray:
    lengths = {len(s) for s in symbols}
    if len(lengths) != 1:
        raise CodecError("symbol vectors must have equal lengths")
    (length,) = lengths
    if length % SYMBOL_BYTES:
        raise CodecError(f"symbol length {length} is not a multiple of {SYMBOL_BYTES} bytes")
    buf = np.frombuffer(b"".join(symbols), dtype="<u2")
    return buf.reshape(len(symbols), length // SYMBOL_BYTES)


def _to_bytes(words: np.ndarray) -> list[bytes]:
    words = np.asarray(words, dtype="<u2")
    return [row.tobytes() for row in words]


def mds_encode(code: MdsCode, source: Sequence[bytes]) -> list[bytes]:
    if len(source) != code.k:
        raise CodecError(f"expected {code.k} source symbols, got {len(source)}")
    if code.n == code.k:
        _to_words(source)
        return list(source)
    return list(source) + _to_bytes(gf_matmul(np.ascontiguousarray(code.parity), _to_words(source)))


def mds_decode(
    code: MdsCode, available: Mapping[int, bytes] | Iterable[tuple[int, bytes]]
) -> list[bytes]:
    pairs = list(available.items()) if isinstance(available, Mapping) else list(available)
    indices = [i for i, _ in pairs]
    if len(set(indices)) != len(indices):
        raise CodecError("duplicate symbol indices")
    if any(not 0 <= i < code.n for i in indices):
        raise CodecError(f"symbol index out of range 0..{code.n - 1}")
    if len(pairs) < code.k:
        raise CodecError(f"need {code.k} symbols, got {len(pairs)}")
    chosen = sorted(pairs)[: code.k]
    idx = [i for i, _ in chosen]
    words = _to_words([s for _, s in chosen])
    return _to_bytes(code.decode_words(idx, words))
