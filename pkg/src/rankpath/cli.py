"""Command line: rankpath {solve,dp,reduce,oracle,gen,check} ...

Exit codes: 0 YES (or success), 1 NO (or failed check), 2 usage or parse
error, 3 incomplete.
"""

from __future__ import annotations

import argparse
import sys
from itertools import combinations

from .dp import DPConfig, solve_dp
from .framework import Framework
from .graph import TreeDecomposition, Incomplete, treewidth_decompose, validate_td
from .instances import InstanceError, gen_random_planar, gen_wall_instance, parse_instance, write_instance
from .matroid import MatroidError, representative_family, truncated_for, validate_axioms
from .oracle import OracleLimit, brute_force, check_representative
from .pipeline import Limits, solve_full
from .reducer import BelowThreshold, PathFound, constants_for, reduce_loop
from .wall import validate_wall

EXIT_YES, EXIT_NO, EXIT_USAGE, EXIT_INCOMPLETE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _fmt(seq) -> str:
    return " ".join(str(v) for v in seq) if seq else ""


def _emit(out, answer, path=None, ind=None, deletions=None):
    out.write(f"answer: {'YES' if answer else 'NO'}\n")
    out.write(f"path: {_fmt(path)}\n")
    out.write(f"independent_set: {_fmt(ind)}\n")
    out.write(f"deletions: {_fmt(deletions)}\n")


def _load(path, check_wall=True):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(str(exc)) from None
    return parse_instance(text, check_wall)


def _dp_config(args) -> DPConfig:
    return DPConfig(uniform_k_rep=args.uniform_k_rep, paper_literal_forget=args.paper_literal_forget,
                    paper_literal_root=getattr(args, "paper_literal_root", False),
                    randomized=args.randomized, seed=args.seed)


def _constants(args, k):
    try:
        return constants_for(k, args.constants)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _verify_line(out, F, answer, path, ind, args):
    if not args.verify:
        return
    ok = True
    if answer:
        ok = path is not None and F.verify(path, ind)
    try:
        ok = ok and brute_force(F).answer == answer
        how = "witness and oracle"
    except OracleLimit:
        how = "witness"
    out.write(f"verify: {'ok' if ok else 'MISMATCH'} ({how})\n")


def cmd_solve(args, out):
    bundle = _load(args.instance)
    F = bundle.framework
    consts = _constants(args, F.k)
    v = solve_full(bundle, consts, _dp_config(args), Limits(), args.verify_deletions)
    out.write(f"constants: {consts.describe()}\n")
    if v.answer is None:
        out.write("answer: INCOMPLETE\n")
        out.write(f"reason: {v.reason}\n")
        out.write(f"deletions: {_fmt(v.deletions)}\n")
        code = EXIT_INCOMPLETE
    else:
        _emit(out, v.answer, v.path, v.independent_set, v.deletions)
        _verify_line(out, F, v.answer, v.path, v.independent_set, args)
        code = EXIT_YES if v.answer else EXIT_NO
    if args.log:
        for line in v.log:
            out.write(f"log: {line}\n")
    return code


def cmd_dp(args, out):
    F = _load(args.instance).framework
    res = solve_dp(F, None, _dp_config(args))
    _emit(out, res.answer, res.path, res.independent_set, [])
    _verify_line(out, F, res.answer, res.path, res.independent_set, args)
    return EXIT_YES if res.answer else EXIT_NO


def cmd_oracle(args, out):
    F = _load(args.instance).framework
    try:
        res = brute_force(F, args.limit)
    except OracleLimit as exc:
        raise UsageError(str(exc)) from None
    _emit(out, res.answer, res.path if res.answer else None, res.independent_set, [])
    return EXIT_YES if res.answer else EXIT_NO


def cmd_reduce(args, out):
    bundle = _load(args.instance)
    F = bundle.framework
    if F.k < 2:
        raise UsageError("reduce needs k >= 2")
    consts = _constants(args, F.k)
    mismatches = []

    def check(before, after, v):
        lim = Limits()
        from .pipeline import _decide_small

        if _decide_small(before, lim) != _decide_small(after, lim):
            mismatches.append(v)

    res = reduce_loop(F, consts, bundle.wall, check if args.verify_deletions else None)
    out.write(f"constants: {consts.describe()}\n")
    o = res.outcome
    out.write(f"outcome: {type(o).__name__}\n")
    if isinstance(o, PathFound):
        out.write(f"path: {_fmt(o.path)}\n")
        out.write(f"independent_set: {_fmt(o.independent_set)}\n")
    elif isinstance(o, BelowThreshold):
        out.write(f"width: {o.decomposition.width}\n")
    elif isinstance(o, Incomplete):
        out.write(f"reason: {o.reason}\n")
    out.write(f"deletions: {_fmt(res.deletions)}\n")
    if args.verify_deletions:
        out.write(f"replay: {'ok' if not mismatches else 'MISMATCH ' + _fmt(mismatches)}\n")
    if args.log:
        for line in res.log:
            out.write(f"log: {line}\n")
    if isinstance(o, Incomplete):
        return EXIT_INCOMPLETE
    return EXIT_NO if mismatches else EXIT_YES


def cmd_gen(args, out):
    try:
        if args.kind == "planar":
            bundle = gen_random_planar(args.n, args.density, args.matroid, args.seed)
        else:
            bundle = gen_wall_instance(args.n, args.matroid, args.seed, args.subdivide)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out.write(write_instance(bundle))
    return EXIT_YES


def cmd_check(args, out):
    bundle = _load(args.instance, check_wall=False)
    F = bundle.framework
    G, M = F.graph, F.matroid
    problems = []
    if args.what == "td":
        td = treewidth_decompose(G, args.width if args.width is not None else G.n)
        if isinstance(td, TreeDecomposition):
            problems = validate_td(G, td)
            out.write(f"width: {td.width}\n")
        else:
            out.write(f"result: {td}\n")
    elif args.what == "wall":
        if bundle.wall is None:
            problems = ["no WALL block"]
        else:
            problems = validate_wall(G, bundle.wall)
            out.write(f"height: {bundle.wall.height}\n")
    elif args.what == "matroid":
        if M.n > 5:
            raise UsageError("axiom check needs at most 5 elements")
        inds = [X for size in range(M.n + 1) for X in combinations(M.ground, size) if M.is_independent(X)]
        if not validate_axioms(M.n, inds):
            problems = ["independence axioms violated"]
    elif args.what == "rep":
        p, q = args.p, args.q
        try:
            Mt = truncated_for(M, p + q)
            family = [X for X in combinations(M.ground, p) if M.is_independent(X)]
            sub = representative_family(Mt, family, p, q)
            out.write(f"family: {len(family)} kept: {len(sub)}\n")
            if not check_representative(M, family, sub, q):
                problems = ["subfamily is not representative"]
        except (MatroidError, OracleLimit) as exc:
            raise UsageError(str(exc)) from None
    for prob in problems:
        out.write(f"problem: {prob}\n")
    out.write(f"check: {'ok' if not problems else 'FAILED'}\n")
    return EXIT_YES if not problems else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--constants", default="relaxed", help="paper | relaxed | relaxed:b,x,z,q,r[,g]")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--verify", action="store_true", help="re-check witness, and against brute force when small")
    common.add_argument("--uniform-k-rep", action="store_true")
    common.add_argument("--paper-literal-forget", action="store_true")
    common.add_argument("--paper-literal-root", action="store_true")
    common.add_argument("--randomized", action="store_true", help="randomized truncation in the DP")

    p = argparse.ArgumentParser(prog="rankpath", description="max rank s-t paths in frameworks")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("solve", parents=[common], help="full pipeline")
    s.add_argument("instance")
    s.add_argument("--verify-deletions", action="store_true")
    s.add_argument("--log", action="store_true")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("dp", parents=[common], help="treewidth DP only")
    s.add_argument("instance")
    s.set_defaults(func=cmd_dp)

    s = sub.add_parser("reduce", parents=[common], help="wall reducer loop")
    s.add_argument("instance")
    s.add_argument("--verify-deletions", action="store_true")
    s.add_argument("--log", action="store_true")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("oracle", parents=[common], help="brute force")
    s.add_argument("instance")
    s.add_argument("--limit", type=int, default=15)
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("gen", parents=[common], help="generate an instance")
    s.add_argument("kind", choices=["planar", "wall"])
    s.add_argument("n", type=int, help="vertex count (planar) or wall height (wall)")
    s.add_argument("matroid", help="uniform:K | partition:C:K | random:R:K:FIELD | sparse:C:R:K:FIELD")
    s.add_argument("--density", type=float, default=0.5)
    s.add_argument("--subdivide", type=int, default=0)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("check", parents=[common], help="validators")
    s.add_argument("what", choices=["td", "wall", "matroid", "rep"])
    s.add_argument("instance")
    s.add_argument("--width", type=int)
    s.add_argument("--p", type=int, default=1)
    s.add_argument("--q", type=int, default=1)
    s.set_defaults(func=cmd_check)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else 0
    try:
        return args.func(args, out)
    except (InstanceError, UsageError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
