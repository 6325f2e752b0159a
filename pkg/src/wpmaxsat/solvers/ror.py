"""WMSU1 with read-once resolution.

Every clause of the working formula, hard ones included, sits behind its
own selector so that cores mention hard clauses too.  For each core a
resolution refutation is searched for; the parts of it that are read-once
are replayed with MaxSAT resolution, which moves weight into the lower
bound without blocking variables.  Whatever is left of the core is
relaxed the WPM1 way.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List

from ..maxres import TOP, WClause, Weight, get_proof, resolve_parts
from .base import HardUnsat, Run


@dataclass(eq=False)
class Item:
    lits: tuple
    weight: Weight
    selector: int

    @property
    def hard(self) -> bool:
        return self.weight is TOP


def wmsu1_ror(run: Run):
    active: Dict[int, Item] = {}

    def add_item(lits, weight) -> Item:
        s = run.new_var()
        run.add([list(lits) + [s]])
        item = Item(tuple(lits), weight, s)
        active[s] = item
        return item

    for clause in run.inst.hard:
        add_item(clause, TOP)
    lb = 0
    for i in run.soft_indices():
        clause, w = run.inst.soft[i]
        if clause:
            add_item(clause, w)
        else:
            lb += w

    out = run.call([-s for s, it in active.items() if it.hard])
    run.log(phase="hard-check", result="SAT" if out.sat else "UNSAT")
    if not out.sat:
        raise HardUnsat()

    while True:
        out = run.call([-s for s in active])
        if out.sat:
            value = run.cost_of(out)
            run.log(result="SAT", cost=lb)
            if value != lb:
                raise AssertionError(f"model cost {value} differs from the lower bound {lb}")
            run.improve(value, out)
            return lb, run.model_of(out)
        core = [active[-lit] for lit in out.failed]
        soft = [it for it in core if not it.hard]
        if not soft:
            raise HardUnsat()
        m = min(it.weight for it in soft)
        lb += m

        proof = get_proof([WClause(it.lits, it.weight) for it in core], run.cfg.proof_budget,
                          run._check_deadline)
        remaining = list(soft)  # soft clauses of the core still awaiting relaxation
        replayed = 0
        full = False
        if proof is not None and proof.steps:
            node: Dict[int, Item] = {cid: core[pos] for cid, pos in proof.sources.items()}
            for step in proof.steps:
                if not proof.is_ror(step.resolvent):
                    continue
                lits = proof.clauses[step.resolvent]
                if proof.is_hard(step.resolvent):
                    # implied by the hard clauses; only needed as a stepping stone
                    if lits:
                        node[step.resolvent] = Item(lits, TOP, 0)
                    continue
                left, right = node[step.left], node[step.right]
                parts = resolve_parts(WClause(left.lits, left.weight), WClause(right.lits, right.weight),
                                      step.pivot, m)
                for parent in (left, right):
                    if parent.hard:
                        continue
                    parent.weight -= m
                    if parent in remaining:
                        remaining.remove(parent)
                    if parent.weight == 0 and parent.selector in active:
                        del active[parent.selector]
                for comp in parts.compensation:
                    add_item(comp.lits, m)
                if lits:
                    item = add_item(lits, m)
                    node[step.resolvent] = item
                    remaining.append(item)
                replayed += 1
            full = proof.is_ror(proof.root)

        fresh: List[int] = []
        if not full:
            for it in remaining:
                b = run.new_var()
                add_item(it.lits + (b,), m)
                fresh.append(b)
                it.weight -= m
                if it.weight == 0:
                    del active[it.selector]
            if fresh:
                for j, clause in enumerate(run.exactly_one(fresh)):
                    if j % 4096 == 4095:
                        run._check_deadline()
                    add_item(clause, TOP)
                run.stats["blocking_vars"] += len(fresh)
        run.log(result="UNSAT", core=len(core), m=m, lb=lb, replayed=replayed,
                read_once=full, new_blocking=len(fresh))
