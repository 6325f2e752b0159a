"""Shared plumbing for the MaxSAT algorithms: configuration, reports and a
``Run`` object that owns the incremental SAT solver for one solve."""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

from ..bounds import step_function
from ..pb import EncodingContext, PbConstraint, encode_exactly_one, encode_pb_leq
from ..sat import SatOutcome, SatSolver, SatStatus
from ..wcnf import WcnfInstance, is_tautology


class Status(enum.Enum):
    OPTIMUM = "Optimum"
    HARD_UNSAT = "HardUnsat"
    TIMEOUT = "Timeout"


@dataclass
class SolverConfig:
    algorithm: str = "wpm1"
    bound_step: str = "subset-sum"  # or "plus-one"
    seed: int = 0
    timeout: Optional[float] = None  # seconds of wall time
    max_conflicts: Optional[int] = None  # total conflict budget for the run
    check: bool = False  # verify every SAT answer inside the engine
    proof_budget: int = 10_000  # resolution attempts per core (wmsu1-ror)
    share_blocking: bool = True  # reuse blocking variables for repeated cores (wpm1)
    stratification: str = "diversity"  # wpm1-strat: "diversity" or "next" (next smaller weight)
    exactly_one: str = "pairwise"  # or "sequential" (linear-size counter for large cores)
    dcgbs_global_ub: bool = False  # dcgbs: every entry takes the model's total cost as its UB
    on_improve: Optional[Callable[[int], None]] = field(default=None, repr=False)


@dataclass
class SolveReport:
    status: Status
    cost: Optional[int] = None
    model: Optional[Dict[int, bool]] = None
    trace: List[dict] = field(default_factory=list)
    stats: Dict[str, float] = field(default_factory=dict)


class Timeout(Exception):
    pass


class HardUnsat(Exception):
    pass


class Run:
    """State for one solve: the SAT engine, PB encodings, trace and best model."""

    def __init__(self, instance: WcnfInstance, cfg: SolverConfig, add_hard: bool = True):
        self.inst = instance
        self.cfg = cfg
        self.step = step_function(cfg.bound_step)
        self.started = time.monotonic()
        self.deadline = self.started + cfg.timeout if cfg.timeout is not None else None
        self.sat = SatSolver(seed=cfg.seed, check=cfg.check)
        self.sat.ensure_vars(instance.num_vars)
        if add_hard:
            for clause in instance.hard:
                self.sat.add_clause(clause)
        self.trace: List[dict] = []
        self.stats = {"sat_calls": 0, "pb_clauses": 0, "pb_vars": 0, "blocking_vars": 0}
        self.best_cost: Optional[int] = None
        self.best_model = None
        self._contexts: Dict[tuple, EncodingContext] = {}
        self._blockers: Dict[int, int] = {}
        self.side_stats = {"conflicts": 0}  # work done by auxiliary solvers (wpm2 bound search)

    # -- engine access ---------------------------------------------------------

    def new_var(self) -> int:
        return self.sat.new_var()

    def add(self, clauses: Sequence[Sequence[int]]) -> None:
        for j, c in enumerate(clauses):
            if j % 4096 == 4095:
                self._check_deadline()
            self.sat.add_clause(c)

    def conflicts_left(self) -> Optional[int]:
        """Remaining conflict budget of the run (None when unlimited)."""
        if self.cfg.max_conflicts is None:
            return None
        return self.cfg.max_conflicts - self.sat.stats["conflicts"] - self.side_stats["conflicts"]

    def call(self, assumptions: Sequence[int] = ()) -> SatOutcome:
        limit = self.conflicts_left()
        if limit is not None and limit <= 0:
            raise Timeout()
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise Timeout()
        self.stats["sat_calls"] += 1
        out = self.sat.solve(assumptions, conflict_limit=limit, deadline=self.deadline)
        if out.status is SatStatus.UNKNOWN:
            raise Timeout()
        return out

    def exactly_one(self, lits) -> List[List[int]]:
        if self.cfg.exactly_one == "sequential":
            return encode_exactly_one(lits, self.new_var)
        return encode_exactly_one(lits)

    def _check_deadline(self) -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise Timeout()

    def require_hard_sat(self) -> SatOutcome:
        """The common first step: stop with HardUnsat if the hard clauses conflict."""
        out = self.call()
        self.log(phase="hard-check", result="SAT" if out.sat else "UNSAT")
        if not out.sat:
            raise HardUnsat()
        return out

    # -- soft clauses ------------------------------------------------------------

    def soft_indices(self) -> List[int]:
        """Soft clauses that can be falsified (tautologies are never relaxed)."""
        return [i for i, (c, _) in enumerate(self.inst.soft) if not is_tautology(c)]

    def weight(self, i: int) -> int:
        return self.inst.soft[i][1]

    def blocker(self, i: int) -> int:
        """Blocking variable ``b_i`` of soft clause ``i``; adds ``C_i ∨ b_i`` on first use.

        While ``-b_i`` is assumed the clause behaves as unrelaxed, so the same
        variable doubles as the clause's selector.
        """
        b = self._blockers.get(i)
        if b is None:
            b = self.new_var()
            self._blockers[i] = b
            self.sat.add_clause(list(self.inst.soft[i][0]) + [b])
            self.stats["blocking_vars"] += 1
        return b

    def at_most(self, terms: Sequence[tuple], bound: int) -> int:
        """Literal equivalent to ``Σ w·lit ≤ bound``, sharing nodes per term list."""
        pb = PbConstraint.leq(terms, bound)
        ctx = self._contexts.get(pb.terms)
        if ctx is None:
            ctx = self._contexts[pb.terms] = EncodingContext(self.new_var)
        before = ctx.num_vars
        root, clauses = encode_pb_leq(pb, ctx, self._check_deadline)
        self.add(clauses)
        self.stats["pb_clauses"] += len(clauses)
        self.stats["pb_vars"] += ctx.num_vars - before
        return root

    # -- models --------------------------------------------------------------------

    def model_of(self, out: SatOutcome) -> Dict[int, bool]:
        return {v: out.model[v] for v in range(1, self.inst.num_vars + 1)}

    def cost_of(self, out: SatOutcome, indices: Optional[Sequence[int]] = None) -> int:
        """Weight of original soft clauses falsified by the SAT model."""
        model = out.model
        soft = self.inst.soft
        total = 0
        for i in (range(len(soft)) if indices is None else indices):
            clause, w = soft[i]
            for lit in clause:
                if model[lit] if lit > 0 else not model[-lit]:
                    break
            else:
                total += w
        return total

    def improve(self, cost: int, out: SatOutcome) -> None:
        if self.best_cost is None or cost < self.best_cost:
            self.best_cost = cost
            self.best_model = self.model_of(out)
            if self.cfg.on_improve is not None:
                self.cfg.on_improve(cost)

    def log(self, **record) -> None:
        record.setdefault("call", self.stats["sat_calls"])
        self.trace.append(record)
