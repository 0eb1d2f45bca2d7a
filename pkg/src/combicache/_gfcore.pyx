# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled GF(2^16) matrix product over word vectors."""
import numpy as np

from libc.stdint cimport uint16_t, uint32_t

cdef uint32_t PRIMITIVE_POLY = 0x1100B
cdef uint16_t EXP[131070]
cdef uint32_t LOG[65536]


cdef void _init_tables() noexcept:
    cdef uint32_t x = 1
    cdef Py_ssize_t i
    LOG[0] = 0
    for i in range(65535):
        EXP[i] = <uint16_t>x
        LOG[x] = <uint32_t>i
        x <<= 1
        if x & 0x10000:
            x ^= PRIMITIVE_POLY
    for i in range(65535, 131070):
        EXP[i] = EXP[i - 65535]


_init_tables()

BACKEND = "cython"


def gf_matmul(const uint16_t[:, ::1] coef, const uint16_t[:, ::1] data):
    """out[i] = XOR over m of coef[i, m] * data[m]."""
    cdef Py_ssize_t a = coef.shape[0], b = coef.shape[1], L = data.shape[1]
    if data.shape[0] != b:
        raise ValueError("inner dimensions differ")
    out = np.zeros((a, L), dtype=np.uint16)
    cdef uint16_t[:, ::1] o = out
    cdef Py_ssize_t i, m, j
    cdef uint32_t lc
    cdef uint16_t c, v
    with nogil:
        for i in range(a):
            for m in range(b):
                c = coef[i, m]
                if c == 0:
                    continue
                lc = LOG[c]
                for j in range(L):
                    v = data[m, j]
                    if v != 0:
                        o[i, j] ^= EXP[lc + LOG[v]]
    return out
