"""WPM2: every soft clause gets one blocking variable up front; cores merge
covers, and each cover carries an at-least bound (kept forever) and an
at-most bound (replaced whenever the cover grows)."""

from __future__ import annotations

from ..bounds import LinearBound, new_bound
from ..pb import normalize
from .base import HardUnsat, Run, Timeout


def wpm2(run: Run):
    run.require_hard_sat()
    idx = run.soft_indices()
    weights = {i: run.weight(i) for i in idx}
    block = {i: run.blocker(i) for i in idx}
    al = []
    am = {frozenset([i]): LinearBound(frozenset([i]), 0, "<=") for i in idx}
    am_lit = {frozenset([i]): -block[i] for i in idx}
    while True:
        lit_to_cover = {lit: cov for cov, lit in am_lit.items()}
        out = run.call(list(am_lit.values()))
        if out.sat:
            value = run.cost_of(out)
            run.improve(value, out)
            run.log(result="SAT", cost=value)
            return value, run.model_of(out)
        rc = {lit_to_cover[lit] for lit in out.failed}
        if not rc:
            raise HardUnsat()
        merged = frozenset().union(*rc)
        try:
            k = new_bound(al, [am[c] for c in rc], merged, weights, run._check_deadline, run.deadline,
                          run.conflicts_left(), run.side_stats)
        except TimeoutError:
            raise Timeout() from None
        for c in rc:
            del am[c]
            del am_lit[c]
        terms = [(weights[i], block[i]) for i in sorted(merged)]
        al.append(LinearBound(merged, k, ">="))
        (at_least,) = normalize(terms, ">=", k)
        run.add([[run.at_most(at_least.terms, at_least.bound)]])
        am[merged] = LinearBound(merged, k, "<=")
        am_lit[merged] = run.at_most(terms, k)
        run.log(result="UNSAT", covers_merged=len(rc), cover=sorted(merged), k=k,
                lower_bound=sum(c.bound for c in am.values()))
