"""GF(2^16) arithmetic via log/antilog tables.

Elements are ints 0..65535 in polynomial basis modulo ``PRIMITIVE_POLY``
(x^16 + x^12 + x^3 + x + 1). Addition is XOR.
"""
from __future__ import annotations

import numpy as np

PRIMITIVE_POLY = 0x1100B
ORDER = 1 << 16
GROUP = ORDER - 1
SYMBOL_BYTES = 2


def _tables() -> tuple[np.ndarray, np.ndarray]:
    exp = np.zeros(2 * GROUP, dtype=np.uint16)
    log = np.zeros(ORDER, dtype=np.int64)
    x = 1
    for i in range(GROUP):
        exp[i] = x
        log[x] = i
        x <<= 1
        if x & ORDER:
            x ^= PRIMITIVE_POLY
    if x != 1 or len(set(exp[:GROUP].tolist())) != GROUP:
        raise RuntimeError("polynomial is not primitive")
    exp[GROUP:] = exp[:GROUP]
    return exp, log


EXP, LOG = _tables()


def add(a: int, b: int) -> int:
    return a ^ b


def mul(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return int(EXP[LOG[a] + LOG[b]])


def inv(a: int) -> int:
    if a == 0:
        raise ZeroDivisionError("0 has no inverse in GF(2^16)")
    return int(EXP[(GROUP - LOG[a]) % GROUP])


def div(a: int, b: int) -> int:
    return mul(a, inv(b))


def clmul_mod(a: int, b: int) -> int:
    """Shift-and-add multiply, independent of the tables (test oracle)."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if a & ORDER:
            a ^= PRIMITIVE_POLY
    return out
