"""Search over the cost with every soft clause relaxed up front:
linear (from below or above), binary, alternating binary/linear and
bit-by-bit."""

from __future__ import annotations

from .base import Run


def _relax_all(run: Run):
    idx = run.soft_indices()
    terms = [(run.weight(i), run.blocker(i)) for i in idx]
    ws = [w for w, _ in terms]
    return terms, ws


def linear_unsat(run: Run):
    """Raise a lower bound through reachable sums until the bound is satisfiable."""
    run.require_hard_sat()
    terms, ws = _relax_all(run)
    lb = 0
    while True:
        out = run.call([run.at_most(terms, lb)])
        run.log(lb=lb, result="SAT" if out.sat else "UNSAT")
        if out.sat:
            cost = run.cost_of(out)
            run.improve(cost, out)
            return cost, run.model_of(out)
        lb = run.step(ws, lb)


def linear_sat(run: Run):
    """Tighten an upper bound with each model until the bound becomes unsatisfiable."""
    run.require_hard_sat()
    terms, ws = _relax_all(run)
    ub = 1 + sum(ws)
    last = None
    run.log(ub=ub)
    while True:
        out = run.call([run.at_most(terms, ub - 1)])
        if not out.sat:
            run.log(ub=ub, result="UNSAT")
            return ub, run.model_of(last)
        ub = run.cost_of(out)
        last = out
        run.improve(ub, out)
        run.log(ub=ub, result="SAT")


def binary(run: Run):
    run.require_hard_sat()
    terms, ws = _relax_all(run)
    lb, ub = -1, 1 + sum(ws)
    last = None
    while ub > lb + 1:
        mid = (lb + ub) // 2
        out = run.call([run.at_most(terms, mid)])
        if out.sat:
            ub = run.cost_of(out)
            last = out
            run.improve(ub, out)
        else:
            lb = max(lb, run.step(ws, mid) - 1)
        run.log(lb=lb, mid=mid, ub=ub, result="SAT" if out.sat else "UNSAT")
    return ub, run.model_of(last)


def binlin(run: Run):
    """Binary search whose probes alternate with linear probes just below the upper bound."""
    run.require_hard_sat()
    terms, ws = _relax_all(run)
    lb, ub = -1, 1 + sum(ws)
    last = None
    mode = "binary"
    while ub > lb + 1:
        mid = (lb + ub) // 2 if mode == "binary" else ub - 1
        out = run.call([run.at_most(terms, mid)])
        if out.sat:
            ub = run.cost_of(out)
            last = out
            run.improve(ub, out)
        elif mode == "binary":
            lb = max(lb, run.step(ws, mid) - 1)
        else:
            lb = mid
        run.log(mode=mode, lb=lb, mid=mid, ub=ub, result="SAT" if out.sat else "UNSAT")
        mode = "linear" if mode == "binary" else "binary"
    return ub, run.model_of(last)


def bitbased(run: Run):
    """Fix the bits of the optimum from the most significant one downwards.

    Each call asks for a cost strictly below ``cost``.  When every call is
    unsatisfiable no model has been seen yet, so one unbounded call supplies
    the final (all-bits-set) model.
    """
    run.require_hard_sat()
    terms, ws = _relax_all(run)
    total = sum(ws)
    last = None
    if total > 0:
        k = total.bit_length() - 1
        bit = k
        cost = 1 << k
        while bit >= 0:
            out = run.call([run.at_most(terms, cost - 1)])
            run.log(bit=bit, cost=cost, result="SAT" if out.sat else "UNSAT")
            if out.sat:
                last = out
                value = run.cost_of(out)
                run.improve(value, out)
                lower = [j for j in range(bit) if value >> j & 1]
                bit = max(lower) if lower else -1
                if bit >= 0:
                    cost = (value >> bit) << bit
            else:
                bit -= 1
                if bit >= 0:
                    cost += 1 << bit
    if last is None:
        last = run.call()
        run.log(bit=-1, cost=None, result="SAT")
    value = run.cost_of(last)
    run.improve(value, last)
    return value, run.model_of(last)
