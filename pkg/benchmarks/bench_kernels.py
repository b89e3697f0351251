"""Compiled kernels against their plain Python source.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel runs once untimed (so numba compiles or loads its cache) and is
then timed ``--repeat`` times through both paths; the best time is reported.
Without numba both columns time the same Python code.  The Python body of
``girth_objective`` still calls the compiled inner kernels, so its column
understates the gap; run the whole script under ``FLAGCAT_NO_NUMBA=1`` for a
fully interpreted baseline.
"""
import argparse
from timeit import default_timer as timer

import numpy as np

from flagcat import _accel, kernels
from flagcat.fixtures import fixture
from flagcat.metric import PEMetric, _tri_edges, angle_graph_structure
from flagcat.raag import ambient_for, path4


def _cases(rng):
    K = fixture("dunce_hat_flag")
    m = PEMetric.random(K, rng)
    lengths = np.array([m[e] for e in K.edges])
    logl = np.log(lengths)
    tri = _tri_edges(K)
    S = angle_graph_structure(K)
    ang, _, _ = kernels.triangle_angles(lengths, tri)
    w = ang[S.tri, S.corner]
    amb = ambient_for(path4())
    codes = rng.integers(0, 8, 4000).astype(np.int64)
    return {
        "triangle_angles": (kernels.triangle_angles, (lengths, tri)),
        "girth_kernel": (kernels.girth_kernel, (len(S.nodes), S.u, S.v, w)),
        "girth_objective": (kernels.girth_objective, (logl, tri, S.u, S.v, S.tri, S.corner, len(S.nodes))),
        "margin_penalty": (kernels.margin_penalty, (logl, tri, 1e-3)),
        "raag_reduce": (kernels.raag_reduce, (codes, amb.commute)),
    }


def _best(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = timer()
        fn(*args)
        best = min(best, timer() - t0)
    return best


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    print(f"numba available: {_accel.HAVE_NUMBA}")
    print(f"{'kernel':<18} {'compiled (ms)':>14} {'python (ms)':>12} {'speedup':>9}")
    for name, (fn, fargs) in _cases(np.random.default_rng(args.seed)).items():
        fn(*fargs)
        fast = _best(fn, fargs, args.repeat)
        slow = _best(_accel.python_impl(fn), fargs, args.repeat)
        print(f"{name:<18} {fast * 1e3:>14.3f} {slow * 1e3:>12.3f} {slow / fast:>8.1f}x")


if __name__ == "__main__":
    main()
