"""MSU3/MSU4 style algorithms: one blocking variable per soft clause, added
only when the clause first shows up in a core, and a single PB constraint
over the blocking variables added so far."""

from __future__ import annotations

from .base import HardUnsat, Run


class _Relaxation:
    """Tracks which soft clauses have been relaxed (their selector is no longer assumed)."""

    def __init__(self, run: Run):
        self.run = run
        self.relaxed = []
        self.unrelaxed = {run.blocker(i): i for i in run.soft_indices()}

    def assumptions(self, *extra):
        return [-b for b in self.unrelaxed] + [x for x in extra if x is not None]

    def relax_core(self, failed) -> list:
        """Relax the unrelaxed soft clauses of a core; returns their indices."""
        new = [self.unrelaxed.pop(-lit) for lit in sorted(failed, key=abs) if -lit in self.unrelaxed]
        self.relaxed += new
        return new

    def terms(self):
        return [(self.run.weight(i), self.run.blocker(i)) for i in self.relaxed]

    def weights(self):
        return [self.run.weight(i) for i in self.relaxed]

    def bound(self, k):
        return self.run.at_most(self.terms(), k) if self.relaxed else None


def wmsu3(run: Run):
    run.require_hard_sat()
    rel = _Relaxation(run)
    lb = 0
    while True:
        root = rel.bound(lb)
        out = run.call(rel.assumptions(root))
        if out.sat:
            value = run.cost_of(out)
            run.improve(value, out)
            run.log(lb=lb, result="SAT", cost=value)
            return value, run.model_of(out)
        new = rel.relax_core(out.failed)
        if not new and (root is None or root not in out.failed):
            raise HardUnsat()
        lb = run.step(rel.weights(), lb)
        run.log(lb=lb, result="UNSAT", relaxed=len(new))


def wmsu4(run: Run):
    run.require_hard_sat()
    rel = _Relaxation(run)
    lb, ub = -1, 1 + sum(run.weight(i) for i in run.soft_indices())
    last = None
    while ub > lb + 1:
        out = run.call(rel.assumptions(rel.bound(ub - 1)))
        if out.sat:
            ub = run.cost_of(out)
            last = out
            run.improve(ub, out)
            run.log(lb=lb, ub=ub, result="SAT")
            continue
        new = rel.relax_core(out.failed)
        if not new:
            lb = ub - 1
        else:
            lb = run.step(rel.weights(), lb)
        run.log(lb=lb, ub=ub, result="UNSAT", relaxed=len(new))
    if last is None:
        raise HardUnsat()
    return ub, run.model_of(last)
