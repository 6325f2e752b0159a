"""Core-guided relaxation in the Fu & Malik / WPM1 family.

Each unsatisfiable core is paid for with its minimum weight ``w_min``:
every soft clause in the core is split into a residual copy of weight
``w - w_min`` and a relaxed copy ``C ∨ b`` of weight ``w_min``, and an
exactly-one constraint is placed over the new ``b`` variables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional

from .base import HardUnsat, Run


@dataclass(eq=False)
class Piece:
    """A weighted clause of the working formula, guarded by ``selector``."""

    lits: tuple
    weight: int
    selector: int
    origin: int  # index of the input soft clause it descends from
    split: bool = False  # took part in a core after being created


def initial_pieces(run: Run) -> List[Piece]:
    return [Piece(run.inst.soft[i][0], run.weight(i), run.blocker(i), i) for i in run.soft_indices()]


def _next_stratum(pieces: List[Piece], w_max: int, rule: str = "diversity") -> int:
    """Lower the weight threshold.

    ``"next"`` steps to the next smaller weight.  ``"diversity"`` does the
    same unless the remaining weights are diverse (more distinct values
    than the square root of their count), in which case it jumps to the
    median distinct weight.
    """
    below = [p.weight for p in pieces if 0 < p.weight < w_max]
    if not below:
        return 0
    distinct = sorted(set(below), reverse=True)
    if rule == "diversity" and len(distinct) > math.sqrt(len(below)):
        return distinct[len(distinct) // 2]
    return distinct[0]


def _core_loop(run: Run, stratified: bool, share: bool):
    run.require_hard_sat()
    pieces = initial_pieces(run)
    by_sel = {p.selector: p for p in pieces}
    repeats = {}
    cost = 0
    w_max: Optional[int] = max((p.weight for p in pieces), default=0) if stratified else 0
    while True:
        active = [p for p in pieces if p.weight > 0 and p.weight >= w_max]
        out = run.call([-p.selector for p in active])
        if out.sat:
            run.log(result="SAT", cost=cost, w_max=w_max)
            if w_max == 0:
                value = run.cost_of(out)
                run.improve(value, out)
                return cost, run.model_of(out)
            w_max = _next_stratum(pieces, w_max, run.cfg.stratification)
            continue
        core = [by_sel[-lit] for lit in out.failed]
        if not core:
            raise HardUnsat()
        w_min = min(p.weight for p in core)
        key = frozenset(id(p) for p in core)
        copies = repeats.get(key) if share else None
        if copies is not None and not any(q.split for q in copies):
            # the same residual clauses failed again: reuse their blocking variables
            for p in core:
                p.weight -= w_min
            for q in copies:
                q.weight += w_min
            fresh = []
        else:
            fresh, copies = [], []
            for p in core:
                b = run.new_var()
                s = run.new_var()
                run.add([list(p.lits) + [b, s]])
                q = Piece(p.lits + (b,), w_min, s, p.origin)
                p.weight -= w_min
                p.split = True
                pieces.append(q)
                by_sel[s] = q
                copies.append(q)
                fresh.append(b)
            run.add(run.exactly_one(fresh))
            run.stats["blocking_vars"] += len(fresh)
            repeats[key] = copies
        cost += w_min
        pieces = [p for p in pieces if p.weight > 0]
        run.log(result="UNSAT", core=len(core), w_min=w_min, cost=cost, new_blocking=len(fresh),
                w_max=w_max, soft_weight=sum(p.weight for p in pieces))


def fumalik(run: Run):
    if not run.inst.is_unweighted:
        raise ValueError("fumalik only handles unit soft weights; use wpm1 for weighted instances")
    return _core_loop(run, stratified=False, share=False)


def wpm1(run: Run):
    return _core_loop(run, stratified=False, share=run.cfg.share_blocking)


def wpm1_stratified(run: Run):
    return _core_loop(run, stratified=True, share=run.cfg.share_blocking)
