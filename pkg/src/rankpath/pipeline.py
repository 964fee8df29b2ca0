"""Full solver: decompose and run the DP when treewidth is small, otherwise
shrink the graph with the wall reducer and try again."""

from __future__ import annotations

from dataclasses import dataclass, field

from .dp import DPConfig, solve_dp
from .graph import Incomplete, TreeDecomposition, make_nice, treewidth_decompose
from .instances import InstanceBundle
from .oracle import OracleLimit, SearchBudget, brute_force, exact_search
from .reducer import BelowThreshold, Irrelevant, PathFound, ReductionConstants, reduce_once


@dataclass
class Limits:
    oracle_n: int = 14
    search_budget: int = 200_000
    max_steps: int | None = None
    dp_width: int = 10  # wider decompositions go to the budgeted exact search


@dataclass
class Verdict:
    answer: bool | None  # None when incomplete
    path: list | None = None
    independent_set: list = field(default_factory=list)
    deletions: list = field(default_factory=list)
    log: list = field(default_factory=list)
    reason: str = ""


def _decide_small(F, limits):
    """Ground truth for deletion replay: brute force on tiny graphs, the
    pruned exact search otherwise."""
    try:
        return brute_force(F, limits.oracle_n).answer
    except OracleLimit:
        return exact_search(F, limits.search_budget).answer


def _run_dp(F, td, cfg, log, deletions, limits):
    log.append(f"decomposition width {td.width}")
    if td.width > limits.dp_width:
        log.append(f"width above {limits.dp_width}: exact search instead of the DP")
        try:
            res = exact_search(F, limits.search_budget)
        except SearchBudget as exc:
            return Verdict(None, None, [], deletions, log, str(exc))
        return Verdict(res.answer, res.path, res.independent_set, deletions, log)
    ntd = make_nice(td, F.graph, F.s, F.t)
    res = solve_dp(F, ntd, cfg)
    return Verdict(res.answer, res.path, res.independent_set, deletions, log)


def solve_full(bundle: InstanceBundle, consts: ReductionConstants, cfg: DPConfig | None = None,
               limits: Limits | None = None, verify_deletions: bool = False) -> Verdict:
    cfg = cfg or DPConfig()
    limits = limits or Limits()
    F = bundle.framework
    wall = bundle.wall
    log = [f"constants {consts.describe()}"]
    deletions = []

    if F.k <= 1:
        log.append("k <= 1: block-chain search")
        res = exact_search(F, limits.search_budget)
        return Verdict(res.answer, res.path, res.independent_set, deletions, log)
    if F.matroid.rank_total < F.k:
        log.append("matroid rank below k")
        return Verdict(False, None, [], deletions, log)

    steps = 0
    while True:
        td = treewidth_decompose(F.graph, consts.g)
        if isinstance(td, TreeDecomposition):
            return _run_dp(F, td, cfg, log, deletions, limits)
        log.append(f"treewidth above {consts.g}: {type(td).__name__}")
        out = reduce_once(F, consts, wall)
        if isinstance(out, PathFound):
            log.append("path found through wall packing")
            return Verdict(True, out.path, out.independent_set, deletions, log)
        if isinstance(out, BelowThreshold):
            return _run_dp(F, out.decomposition, cfg, log, deletions, limits)
        if isinstance(out, Incomplete):
            log.append(f"incomplete: {out.reason}")
            return Verdict(None, None, [], deletions, log, out.reason)
        assert isinstance(out, Irrelevant)
        F2 = F.delete(out.vertex)
        if verify_deletions:
            same = _decide_small(F, limits) == _decide_small(F2, limits)
            log.append(f"replay {out.vertex}: {'ok' if same else 'MISMATCH'}")
        log.append(f"delete {out.vertex}: {out.note}")
        deletions.append(out.vertex)
        F = F2
        steps += 1
        if limits.max_steps is not None and steps >= limits.max_steps:
            return Verdict(None, None, [], deletions, log, "step limit reached")
