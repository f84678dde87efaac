"""Compare the compiled and pure-Python GF(2) kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import time

import numpy as np

from cqca import _pykernels, lattice, tableau
from cqca.dynamics import _residue_terms

try:
    from cqca import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases():
    spec = lattice.preset("dense")
    g = tableau.random_product_state(64, 2, np.random.default_rng(1))
    for h in tableau.evolve(g, spec, 20):
        g = h
    code = tableau.StabilizerGroup.translation_invariant([{0: "Z"}], 40)
    for _ in range(20):
        code = tableau.step(code, spec)
    erased = np.array([np.random.default_rng([0, i]).choice(80, 20, replace=False) for i in range(2000)])
    terms = _residue_terms(lattice.build(spec), 11)
    return [
        ("cyclic_window_ranks L=128", lambda k: k.cyclic_window_ranks(g.gens, 2)),
        ("erasure_logical_dims L=80 x2000", lambda k: k.erasure_logical_dims(code.gens, erased)),
        ("recurrence_search dense m=11", lambda k: k.recurrence_search(terms, 4, 11, 1 << 20)),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'kernel':36s} {'python [s]':>11s} {'cython [s]':>11s} {'speedup':>8s}")
    for name, fn in cases():
        tp, outp = _time(lambda: fn(_pykernels), args.repeat)
        if _ckernels is None:
            print(f"{name:36s} {tp:11.4f} {'n/a':>11s}")
            continue
        tc, outc = _time(lambda: fn(_ckernels), args.repeat)
        same = np.array_equal(np.asarray(outp), np.asarray(outc))
        print(f"{name:36s} {tp:11.4f} {tc:11.4f} {tp / tc:7.1f}x" + ("" if same else "  MISMATCH"))


if __name__ == "__main__":
    main()
