"""``tri`` command line.

Exit codes: 0 success, 1 negative verdict, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import ancestral, bench, elimination, oracle, search
from .chordal import NotChordalError
from .model import NetworkError, moral_graph, parse_network, serialize_network
from .statespace import graph_state_space


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _net(path):
    return parse_network(_read(path))


def _tri(path, net):
    return elimination.read_triangulation(_read(path), net)


def cmd_triangulate(args):
    net = _net(args.net)
    spec = search.parse_spec(args.spec)
    res = search.run_pool(net, spec, jobs=args.jobs)
    text = elimination.write_triangulation(res.best, net)
    if args.out:
        _write(args.out, text)
        print(res.best_score)
    else:
        sys.stdout.write(text)
        print(f"statespace {res.best_score}", file=sys.stderr)
    return 0


def cmd_check_elim(args):
    net = _net(args.net)
    ok, witness = elimination.is_elimination_graph(_tri(args.tri, net))
    if not ok:
        print("not-elimination-graph")
        return 1
    names = net.names()
    print("elimination-graph\t" + ",".join(names[v] for v in witness))
    return 0


def cmd_statespace(args):
    net = _net(args.net)
    if args.tri:
        g = _tri(args.tri, net)
    else:
        g = moral_graph(net)
    try:
        print(graph_state_space(g, net, args.observed_as_unit))
    except NotChordalError:
        raise UsageError("moral graph is not chordal; supply a triangulation") from None
    return 0


def cmd_ancestral(args):
    net = _net(args.net)
    plan = ancestral.make_plan(moral_graph(net), net, args.mode, q=args.q, seed=args.seed)
    for line in ancestral.plan_lines(plan, net, args.mode):
        print(line)
    return 0


def cmd_minimalize(args):
    net = _net(args.net)
    t = elimination.minimalize(_tri(args.tri, net))
    _write(args.out, elimination.write_triangulation(t, net))
    return 0


def cmd_oracle(args):
    net = _net(args.net)
    rep = oracle.oracle_report(net, args.max_vertices, args.max_fill_pairs, args.observed_as_unit)
    sys.stdout.write(rep.tsv(net))
    if args.decide is not None:
        verdict = rep.best_tri_score < args.decide
        print(f"decide\t{args.decide}\t{str(verdict).lower()}")
        return 0 if verdict else 1
    return 0


def _gen_params(args, nodes_default):
    return bench.GenParams(nodes=args.nodes if args.nodes is not None else nodes_default,
                           max_in_degree=args.max_parents, p_det=args.pdet, p_obs=args.pobs,
                           obs_card=args.obs_card, det_card_cap=args.det_cap, seed=args.seed)


def cmd_gen(args):
    net = bench.gen_random_network(_gen_params(args, 30))
    _write(args.out, serialize_network(net))
    return 0


def cmd_bench(args):
    methods = [search.parse_spec(s) for s in args.methods.split(";") if s.strip()]
    if not methods:
        raise UsageError("--methods needs at least one spec")
    report = bench.run_benchmark(_gen_params(args, 15), args.graphs, methods, jobs=args.jobs)
    _write(args.out, report.to_tsv(table2=args.table2))
    if args.plot:
        from .plotting import plot_report
        plot_report(report, args.plot)
    return 0


def _gen_flags(p):
    p.add_argument("--nodes", type=int, default=None, help="nodes per network (gen: 30, bench: 15)")
    p.add_argument("--max-parents", type=int, default=4, help="maximum in-degree (default 4)")
    p.add_argument("--pdet", type=float, default=0.5, help="probability of determinism (default 0.5)")
    p.add_argument("--pobs", type=float, default=0.1, help="probability of being observed (default 0.1)")
    p.add_argument("--obs-card", type=int, default=50, help="observed cardinality (default 50)")
    p.add_argument("--det-cap", type=int, default=125, help="deterministic cardinality cap (default 125)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tri", description="Determinism-aware graph triangulation.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("triangulate", help="search for a low state-space triangulation")
    p.add_argument("net")
    p.add_argument("--spec", required=True, help="e.g. la:weight+fill,topx=2,extra=all,pool=100,seed=7")
    p.add_argument("--out")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_triangulate)

    p = sub.add_parser("check-elim", help="can elimination produce this triangulation?")
    p.add_argument("net")
    p.add_argument("tri")
    p.set_defaults(func=cmd_check_elim)

    p = sub.add_parser("statespace", help="state space of the moral graph or a triangulation")
    p.add_argument("net")
    p.add_argument("tri", nargs="?")
    p.add_argument("--observed-as-unit", action="store_true")
    p.set_defaults(func=cmd_statespace)

    p = sub.add_parser("ancestral", help="print an ancestral extra-edge plan")
    p.add_argument("net")
    p.add_argument("--mode", choices=ancestral.MODES, required=True)
    p.add_argument("--q", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_ancestral)

    p = sub.add_parser("minimalize", help="remove fill edges until the triangulation is minimal")
    p.add_argument("net")
    p.add_argument("tri")
    p.add_argument("--out")
    p.set_defaults(func=cmd_minimalize)

    p = sub.add_parser("oracle", help="exhaustive optimum over orders and triangulations")
    p.add_argument("net")
    p.add_argument("--decide", type=int, help="also decide: some triangulation below this value?")
    p.add_argument("--max-fill-pairs", type=int, default=oracle.DEFAULT_MAX_FILL_PAIRS)
    p.add_argument("--max-vertices", type=int, default=oracle.DEFAULT_MAX_VERTICES)
    p.add_argument("--observed-as-unit", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="generate a random network")
    p.add_argument("--seed", type=int, required=True)
    _gen_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="compare heuristics on random networks")
    p.add_argument("--graphs", type=int, default=100)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--methods", required=True, help="';'-separated spec strings")
    p.add_argument("--table2", action="store_true", help="add the per-determinism-count breakdown")
    p.add_argument("--out", required=True)
    p.add_argument("--plot", help="also write a PNG summary figure")
    p.add_argument("--jobs", type=int, default=1)
    _gen_flags(p)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, NetworkError, search.SpecError, oracle.OracleBoundError,
            elimination.TriangulationFormatError, NotChordalError, ValueError) as exc:
        print(f"tri: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
