"""Command line interface: ``flagcat <command> ...``.

Exit codes: 0 for a positive verdict or plain success, 2 for a negative
verdict, 1 for any error (bad usage, unreadable file, invalid input).
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import __version__
from .complex import ComplexError, FlagComplex2, check_flag, format_complex, read_complex
from .fixtures import FIXTURE_NAMES, fixture
from .graph import GraphError, format_graph
from .homology import homology
from .metric import (
    DEFAULT_TOL,
    MetricError,
    build_L,
    build_T,
    check_cat1_L,
    check_link_condition,
    format_metric,
    read_metric,
    verify_T_link,
)
from .raag import WordError, distortion_table, presentation
from .search import CERT_DPS, SearchConfig, SearchError, k0_report, search_metric

EXIT_OK, EXIT_ERROR, EXIT_NEGATIVE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _write_json(path, payload):
    if not path:
        return
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load(args, need_metric=True):
    K = read_complex(args.complex)
    m = read_metric(args.metric, K) if need_metric else None
    return K, m


def _fmt(x) -> str:
    return repr(float(x)) if math.isfinite(x) else ("inf" if x > 0 else "-inf")


def _witness(w) -> str:
    return " ".join(">".join(x) if isinstance(x, tuple) else str(x) for x in w)


# ---------------------------------------------------------------------------
# commands


def cmd_check_flag(args):
    K = read_complex(args.complex)
    rep = check_flag(K)
    print(f"vertices {len(K.vertices)}  edges {len(K.edges)}  triangles {len(K.triangles)}  chi {K.euler_characteristic()}")
    print(f"flag: {'yes' if rep.is_flag else 'no'}")
    for kind, simplex in rep.violations:
        print(f"  {kind}: {' '.join(simplex)}")
    print(f"connected: {'yes' if rep.connected else 'no'}")
    print(f"free edges: {len(rep.free_edges)}")
    _write_json(args.json_out, {
        "is_flag": rep.is_flag,
        "violations": [[k, list(s)] for k, s in rep.violations],
        "free_edges": [list(e) for e in rep.free_edges],
        "connected": rep.connected,
    })
    return EXIT_OK if rep.is_flag else EXIT_NEGATIVE


def cmd_homology(args):
    K = read_complex(args.complex)
    H = homology(K)
    for line in H.describe():
        print(line)
    print(f"acyclic: {'yes' if H.is_acyclic else 'no'}")
    _write_json(args.json_out, {"betti": list(H.betti), "torsion": [list(t) for t in H.torsion], "acyclic": H.is_acyclic})
    if args.assert_acyclic and not H.is_acyclic:
        return EXIT_NEGATIVE
    return EXIT_OK


def cmd_linkcond(args):
    K, m = _load(args)
    verdicts = check_link_condition(K, m, args.tol)
    ok = all(v.passes for v in verdicts.values())
    for v, ver in verdicts.items():
        state = "vacuous" if ver.vacuous else ("pass" if ver.passes else "FAIL")
        extra = "" if ver.vacuous else f"  girth {_fmt(ver.length)}  slack {_fmt(ver.slack)}  cycle {_witness(ver.witness)}"
        print(f"{v}: {state}{' (boundary)' if ver.boundary else ''}{extra}")
    print(f"link condition: {'pass' if ok else 'FAIL'}")
    _write_json(args.json_out, {"passes": ok, "vertices": {str(v): ver.as_dict() for v, ver in verdicts.items()}})
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_cat1(args):
    K, m = _load(args)
    ver = check_cat1_L(K, m, args.tol)
    print(f"L(K): {2 * len(K.edges)} nodes, {6 * len(K.triangles)} edges")
    if ver.vacuous:
        print("L(K) has no cycles")
    else:
        print(f"girth {_fmt(ver.length)}  slack {_fmt(ver.slack)}{'  (boundary)' if ver.boundary else ''}")
        print(f"shortest circuit: {_witness(ver.witness)}")
    print(f"CAT(1): {'pass' if ver.passes else 'FAIL'}")
    _write_json(args.json_out, ver.as_dict())
    return EXIT_OK if ver.passes else EXIT_NEGATIVE


def cmd_build_l(args):
    K, m = _load(args)
    L = build_L(K, m)
    text = format_graph(L)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.out}: {len(L)} nodes, {L.n_edges} edges")
    else:
        sys.stdout.write(text)
    _write_json(args.json_out, {
        "nodes": [list(v) for v in L.nodes],
        "edges": [[list(u), list(v), w] for u, v, w in L.edges()],
    })
    return EXIT_OK


def cmd_build_t(args):
    K = read_complex(args.complex)
    T = build_T(K)
    print(f"T(K): 1 vertex, {len(T.generators)} edges, {len(T.faces)} faces, chi {T.euler_characteristic()}")
    for simplex, copy, word in T.faces:
        rel = " ".join(f"x({u},{v})" + ("" if e == 1 else "^-1") for (u, v), e in word)
        print(f"  face {' '.join(simplex)} #{copy}: {rel}")
    payload = {
        "generators": [list(g) for g in T.generators],
        "faces": [[list(s), c, [[list(g), e] for g, e in w]] for s, c, w in T.faces],
    }
    code = EXIT_OK
    if args.metric:
        m = read_metric(args.metric, K)
        iso = verify_T_link(K, m, args.tol)
        print(f"vertex link isometric to L(K): {'yes' if iso else 'NO'}")
        payload["link_isometric"] = iso
        code = EXIT_OK if iso else EXIT_NEGATIVE
    _write_json(args.json_out, payload)
    return code


def _search_config(args, mode):
    return SearchConfig(
        mode=mode,
        restarts=args.restarts,
        seed=args.seed,
        max_iters=args.max_iters,
        tol=args.tol,
        workers=args.workers,
    )


def cmd_search(args):
    K = read_complex(args.complex)
    res = search_metric(K, _search_config(args, args.mode))
    print(f"mode {args.mode}: {args.restarts} restarts, seed {args.seed}")
    print(f"best objective (girth - 2 pi) {_fmt(res.best_objective)} from restart {res.best_restart}")
    print(f"active circuit: {_witness(res.active_circuit)}")
    for lo, hi, n in res.margin_histogram():
        if n:
            print(f"  objective in [{lo:g}, {hi:g}): {n}")
    if res.certificate is not None:
        print(f"certificate at {CERT_DPS} digits: slack {_fmt(res.certificate.slack)} -> {'pass' if res.certificate.passes else 'FAIL'}")
    print(res.status())
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(format_metric(res.best_metric))
        print(f"wrote {args.out}")
    _write_json(args.json_out, res.as_dict())
    return EXIT_OK if res.feasible else EXIT_NEGATIVE


def cmd_presentation(args):
    K = read_complex(args.complex)
    P = presentation(K, args.mode, simply_connected=args.simply_connected, max_cycle=args.max_cycle, max_n=args.max_n)
    sys.stdout.write(P.to_text())
    _write_json(args.json_out, {
        "mode": P.mode,
        "label": P.label,
        "generators": [list(g) for g in P.generators],
        "relators": [[[list(g), n] for g, n in rel] for rel in P.relators],
    })
    return EXIT_OK


def cmd_distortion(args):
    rows = distortion_table(args.nmax)
    print(f"{'N':>4} {'free':>8} {'written':>8} {'geodesic':>9} {'ratio':>10}")
    for r in rows:
        print(f"{r.N:>4} {r.free_length:>8} {r.written_length:>8} {r.geodesic_length:>9} {r.ratio:>10.4f}")
    _write_json(args.json_out, [r.__dict__ for r in rows])
    return EXIT_OK


def cmd_reproduce_k0(args):
    cfg = _search_config(args, "global")
    rep = k0_report(samples=args.samples, seed=args.seed, search=cfg)
    sys.stdout.write(rep.to_text())
    _write_json(args.json_out, rep.as_dict())
    if not rep.ok:
        return EXIT_ERROR
    return EXIT_OK if rep.search.feasible else EXIT_NEGATIVE


def cmd_fixtures(args):
    root = args.dir
    os.makedirs(os.path.join(root, "fixtures"), exist_ok=True)
    os.makedirs(os.path.join(root, "metrics"), exist_ok=True)
    written = []
    for name in FIXTURE_NAMES:
        K = fixture(name)
        if not isinstance(K, FlagComplex2):
            continue  # delta complexes have no simplicial file form
        path = os.path.join(root, "fixtures", f"{name}.cx")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(format_complex(K))
        written.append(path)
    path = os.path.join(root, "metrics", "equilateral.len")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# every edge of the complex gets length 1\ndefault 1.0\n")
    written.append(path)
    for p in written:
        print(p)
    _write_json(args.json_out, {"written": written})
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="slack tolerance (default %(default)g)")
    common.add_argument("--seed", type=int, default=0, help="master random seed")
    common.add_argument("--json-out", metavar="PATH", help="also write a machine-readable report here")

    parser = _Parser(prog="flagcat", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    def add(name, func, help_, metric=None):
        p = sub.add_parser(name, parents=[common], help=help_, description=help_)
        if metric is not None:
            p.add_argument("complex", help="complex file (.cx)")
            if metric == "required":
                p.add_argument("metric", help="metric file (.len)")
            elif metric == "optional":
                p.add_argument("metric", nargs="?", help="metric file (.len)")
        p.set_defaults(func=func)
        return p

    add("check-flag", cmd_check_flag, "report flagness, free edges and connectivity", metric="none")
    p = add("homology", cmd_homology, "integer homology via Smith normal form", metric="none")
    p.add_argument("--assert-acyclic", action="store_true", help="exit 2 unless the complex is acyclic")
    add("linkcond", cmd_linkcond, "check the link condition at every vertex", metric="required")
    add("cat1", cmd_cat1, "check that L(K) has no circuit shorter than 2 pi", metric="required")
    p = add("build-l", cmd_build_l, "write the angle graph L(K)", metric="required")
    p.add_argument("--out", help="graph file to write (default: standard output)")
    add("build-t", cmd_build_t, "describe T(K); with a metric, compare its vertex link to L(K)", metric="optional")

    def search_flags(p):
        p.add_argument("--restarts", type=int, default=100)
        p.add_argument("--max-iters", type=int, default=2000)
        p.add_argument("--workers", type=int, default=1, help="processes for independent restarts")

    p = add("search", cmd_search, "search for a metric maximizing link or L(K) girth", metric="none")
    p.add_argument("--mode", choices=("links", "global"), default="global")
    p.add_argument("--out", help="write the best metric here")
    search_flags(p)
    p = add("presentation", cmd_presentation, "presentation of the length kernel", metric="none")
    p.add_argument("--mode", choices=("triangle", "cycles"), default="triangle")
    p.add_argument("--simply-connected", action="store_true", help="attest that the complex is simply connected")
    p.add_argument("--max-cycle", type=int, default=None)
    p.add_argument("--max-n", type=int, default=None)
    p = add("distortion", cmd_distortion, "distortion table for w_N in the path RAAG")
    p.add_argument("--nmax", type=int, default=10)
    p = add("reproduce-k0", cmd_reproduce_k0, "circuit identity and global search for K0")
    p.add_argument("--samples", type=int, default=20, help="random metrics for the circuit table")
    search_flags(p)
    p = add("fixtures", cmd_fixtures, "write bundled fixtures and the equilateral metric")
    p.add_argument("--dir", default=".", help="output directory (default: current)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_ERROR
    if args.command == "presentation" and args.mode == "cycles":
        args.max_cycle = 8 if args.max_cycle is None else args.max_cycle
        args.max_n = 2 if args.max_n is None else args.max_n
    try:
        return args.func(args)
    except (OSError, ComplexError, MetricError, GraphError, SearchError, WordError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
