"""The fourteen MaxSAT algorithms behind a single ``solve`` entry point."""

from __future__ import annotations

import time

from ..wcnf import WcnfInstance
from .base import HardUnsat, Run, SolveReport, SolverConfig, Status, Timeout
from .cgbs import cgbs, dcgbs
from .msu import wmsu3, wmsu4
from .ror import wmsu1_ror
from .search import binary, binlin, bitbased, linear_sat, linear_unsat
from .wpm1 import fumalik, wpm1, wpm1_stratified
from .wpm2 import wpm2

ALGORITHMS = {
    "linear-unsat": linear_unsat,
    "linear-sat": linear_sat,
    "bin": binary,
    "binlin": binlin,
    "bitbased": bitbased,
    "fumalik": fumalik,
    "wpm1": wpm1,
    "wpm1-strat": wpm1_stratified,
    "wpm2": wpm2,
    "wmsu1-ror": wmsu1_ror,
    "wmsu3": wmsu3,
    "wmsu4": wmsu4,
    "cgbs": cgbs,
    "dcgbs": dcgbs,
}

# algorithms whose bound moves through reachable sums (``bound_step`` applies)
STEPPING = ("linear-unsat", "bin", "binlin", "wmsu3", "wmsu4", "cgbs")


def solve(instance: WcnfInstance, cfg: SolverConfig) -> SolveReport:
    """Run ``cfg.algorithm`` on ``instance``.

    Timeouts are cooperative: the report then carries the best model found
    so far (if any) with status TIMEOUT.
    """
    try:
        algo = ALGORITHMS[cfg.algorithm]
    except KeyError:
        raise ValueError(f"unknown algorithm {cfg.algorithm!r}; choose from {', '.join(ALGORITHMS)}") from None
    if cfg.stratification not in ("diversity", "next"):
        raise ValueError(f"unknown stratification rule {cfg.stratification!r}")
    if cfg.exactly_one not in ("pairwise", "sequential"):
        raise ValueError(f"unknown exactly-one encoding {cfg.exactly_one!r}")
    if cfg.bound_step not in ("subset-sum", "plus-one"):
        raise ValueError(f"unknown bound step {cfg.bound_step!r}")
    for name in ("timeout", "max_conflicts", "proof_budget"):
        limit = getattr(cfg, name)
        if limit is not None and limit <= 0:
            raise ValueError(f"{name} must be positive, got {limit!r}")
    if cfg.algorithm == "fumalik" and not instance.is_unweighted:
        raise ValueError("fumalik only handles unit soft weights; use wpm1 for weighted instances")
    if any(len(c) == 0 for c in instance.hard):
        return SolveReport(Status.HARD_UNSAT, stats={"sat_calls": 0, "seconds": 0.0})
    run = Run(instance, cfg, add_hard=cfg.algorithm != "wmsu1-ror")
    try:
        cost, model = algo(run)
        report = SolveReport(Status.OPTIMUM, cost, model)
    except HardUnsat:
        report = SolveReport(Status.HARD_UNSAT)
    except Timeout:
        report = SolveReport(Status.TIMEOUT, run.best_cost, run.best_model)
    report.trace = run.trace
    report.stats = dict(run.stats)
    report.stats.update(conflicts=run.sat.stats["conflicts"] + run.side_stats["conflicts"], decisions=run.sat.stats["decisions"],
                        seconds=time.monotonic() - run.started)
    return report


__all__ = ["ALGORITHMS", "STEPPING", "SolveReport", "SolverConfig", "Status", "solve"]
