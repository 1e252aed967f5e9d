"""Time the compiled kernels against the numpy fallback on identical inputs.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time
from math import comb

import numpy as np

from trisect import _pykernels, census, forms, geometry, kernels, trace_construct
from trisect.gf import GF


def _cases():
    rng = np.random.default_rng(0)
    for q, n in ((2, 9), (3, 7), (5, 6)):
        T = forms.random_form(n, GF(q), rng)
        t = T.field.tables()
        P = geometry.point_count(n, q)
        args = (T.tensor, t.add, t.mul, t.neg, t.inv, n, q, 0, P)
        yield f"kernel_dims n={n} q={q}", "kernel_dims", args
        yield f"line_keys   n={n} q={q}", "line_keys", args

    S = trace_construct.standard_spread(trace_construct.setup_for(3))
    t = S.field.tables()
    pl = np.empty(geometry.point_count(6, 3), dtype=np.int64)
    pl[S.point_indices().ravel()] = np.repeat(np.arange(len(S)), 4)
    yield "normal_spread q=3", "normal_spread", (S.rows(), pl, t.add, t.mul, t.neg, t.inv, 6, 3)

    F = GF(2)
    t = F.tables()
    m = comb(6, 3)
    Ws = [census.wedge_matrix(g, F) for g in census.gl_generators(6, 2)]
    yield "wedge_perm  n=6 q=2", "wedge_perm", (Ws[1], t.add, t.mul, 2, m)
    perms = np.stack([_pykernels.wedge_perm(W, t.add, t.mul, 2, m) for W in Ws])
    yield "orbit_labels n=6 q=2", "orbit_labels", (perms,)
    states = np.arange(2**10, dtype=np.int64)
    Cs = census.tensors_from_states(states, 5, F)
    yield "kernel_dims_many n=5 q=2 (1024 forms)", "kernel_dims_many", (Cs, t.add, t.mul, t.neg, t.inv, 5, 2)


def _best(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if kernels.compiled is None:
        print("compiled kernels not built; timing the fallback only")
    print(f"{'case':40s} {'python':>10s} {'cython':>10s} {'speedup':>8s}")
    for label, name, a in _cases():
        tp = _best(getattr(_pykernels, name), a, args.repeat)
        if kernels.compiled is None:
            print(f"{label:40s} {tp:10.4f} {'-':>10s} {'-':>8s}")
            continue
        tc = _best(getattr(kernels.compiled, name), a, args.repeat)
        print(f"{label:40s} {tp:10.4f} {tc:10.4f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
