"""Core-guided binary search: binary search over the cost, but soft clauses
are relaxed only once they appear in a core.  The disjoint-core variant
keeps a separate bound interval for each group of intersecting cores."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

from .base import HardUnsat, Run
from .msu import _Relaxation


def cgbs(run: Run):
    run.require_hard_sat()
    rel = _Relaxation(run)
    lb, ub = -1, 1 + sum(run.weight(i) for i in run.soft_indices())
    last = None
    while lb + 1 < ub:
        mid = (lb + ub) // 2
        root = rel.bound(mid)
        out = run.call(rel.assumptions(root))
        if out.sat:
            ub = run.cost_of(out)
            last = out
            run.improve(ub, out)
            run.log(lb=lb, mid=mid, ub=ub, result="SAT")
            continue
        new = rel.relax_core(out.failed)
        if not new:
            if root is None or root not in out.failed:
                raise HardUnsat()
            lb = max(lb, run.step(rel.weights(), mid) - 1)
        run.log(lb=lb, mid=mid, ub=ub, result="UNSAT", relaxed=len(new))
    return ub, run.model_of(last)


@dataclass(eq=False)
class Entry:
    """A group of intersecting cores: its soft clauses and its bound interval."""

    members: List[int]
    lb: int
    mid: int
    ub: int
    root: Optional[int] = None


def dcgbs(run: Run):
    """Disjoint-core binary search.

    After a model, each entry's upper bound is the weight it falsifies
    within its own members.  With ``cfg.dcgbs_global_ub`` every entry
    instead takes the model's total cost.  That variant can revisit the
    same bounds forever, so once a bound state repeats it switches to the
    per-entry bounds.
    """
    run.require_hard_sat()
    global_ub = run.cfg.dcgbs_global_ub
    rel = _Relaxation(run)
    entries: List[Entry] = []
    last = None
    seen = set()
    while True:
        for e in entries:
            e.mid = e.ub if e.lb + 1 == e.ub else (e.lb + e.ub) // 2
            e.root = run.at_most([(run.weight(i), run.blocker(i)) for i in e.members], e.mid)
        out = run.call(rel.assumptions(*(e.root for e in entries)))
        if out.sat:
            last = out
            total = run.cost_of(out)
            for e in entries:
                e.ub = total if global_ub else run.cost_of(out, e.members)
            run.improve(total, out)
            if global_ub:
                state = tuple((tuple(e.members), e.lb, e.ub) for e in entries)
                if state in seen:
                    global_ub = False
                    for e in entries:
                        e.ub = run.cost_of(out, e.members)
                    run.log(result="SAT", fallback="per-entry bounds")
                seen.add(state)
            run.log(result="SAT", entries=[(e.lb, e.mid, e.ub) for e in entries],
                    members=[sorted(e.members) for e in entries])
        else:
            failed = out.failed
            sub = [e for e in entries if e.root in failed]
            new = rel.relax_core(failed)
            if not new and len(sub) == 1:
                sub[0].lb = sub[0].mid
            elif not new and not sub:
                raise HardUnsat()
            else:
                merged = Entry(list(new), 0, 0, 1 + sum(run.weight(i) for i in new))
                for e in sub:
                    merged.members += e.members
                    merged.lb += e.lb
                    merged.ub += e.ub
                entries = [e for e in entries if e not in sub] + [merged]
            run.log(result="UNSAT", merged=len(sub), relaxed=len(new),
                    entries=[(e.lb, e.mid, e.ub) for e in entries], members=[sorted(e.members) for e in entries])
        if last is not None and all(e.ub <= e.lb + 1 for e in entries):
            value = run.cost_of(last)
            return value, run.model_of(last)
