"""Compare the compiled and numpy GF(2^16) matmul backends.

    python3 benchmarks/bench_gf.py [--repeat 5]

Also times a full-library encode for a mid-sized coded layout with each
backend swapped in.
"""
import argparse
import timeit

import numpy as np

from combicache import _gfpy, mdscodec
from combicache.placement import asym_coded_placement, encode_library
from combicache.topology import build

try:
    from combicache import _gfcore
except ImportError:
    _gfcore = None

SHAPES = [(16, 16, 4096), (64, 64, 1024), (200, 100, 512), (1000, 600, 64)]


def bench_matmul(backend, repeat):
    rng = np.random.default_rng(0)
    rows = []
    for a, b, L in SHAPES:
        coef = rng.integers(0, 65536, (a, b), dtype=np.uint16)
        data = rng.integers(0, 65536, (b, L), dtype=np.uint16)
        t = min(timeit.repeat(lambda: backend.gf_matmul(coef, data), number=1, repeat=repeat))
        rows.append(((a, b, L), t))
    return rows


def bench_encode(backend, repeat):
    net = build(6, 3)
    layout = asym_coded_placement(net, 4, 7)
    B = 64 * layout.subpacketization * 2
    files = [bytes(np.random.default_rng(i).integers(0, 256, B, dtype=np.uint8)) for i in range(4)]
    saved = mdscodec.gf_matmul
    mdscodec.gf_matmul = backend.gf_matmul
    try:
        return layout, min(timeit.repeat(lambda: encode_library(layout, files), number=1, repeat=repeat))
    finally:
        mdscodec.gf_matmul = saved


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = [_gfpy] + ([_gfcore] if _gfcore else [])
    if _gfcore is None:
        print("compiled backend not built; numpy only")
    print(f"{'shape (a, b, L)':<22}" + "".join(f"{m.BACKEND:>12}" for m in backends) + "   speedup")
    results = {m.BACKEND: bench_matmul(m, args.repeat) for m in backends}
    for i, shape in enumerate(SHAPES):
        times = [results[m.BACKEND][i][1] for m in backends]
        speed = f"{times[0] / times[-1]:8.1f}x" if len(times) > 1 else ""
        print(f"{str(shape):<22}" + "".join(f"{t * 1e3:10.2f}ms" for t in times) + "  " + speed)
    for m in backends:
        layout, t = bench_encode(m, args.repeat)
        print(f"encode (6,3) g=7 ({layout.n},{layout.subpacketization}) x4 files "
              f"[{m.BACKEND}]: {t * 1e3:.1f}ms")


if __name__ == "__main__":
    main()
