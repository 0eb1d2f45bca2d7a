"""Numpy implementation of the GF(2^16) kernels, used when the compiled
core is unavailable."""
from __future__ import annotations

import numpy as np

from .gf import EXP, LOG

BACKEND = "numpy"


def gf_matmul(coef: np.ndarray, data: np.ndarray) -> np.ndarray:
    """out[i] = XOR over m of coef[i, m] * data[m]."""
    a, b = coef.shape
    if data.shape[0] != b:
        raise ValueError("inner dimensions differ")
    out = np.zeros((a, data.shape[1]), dtype=np.uint16)
    log_data = LOG[data]
    zero = data == 0
    for m in range(b):
        rows = np.flatnonzero(coef[:, m])
        if rows.size == 0:
            continue
        prod = EXP[LOG[coef[rows, m]][:, None] + log_data[m][None, :]]
        prod[:, zero[m]] = 0
        out[rows] ^= prod
    return out
