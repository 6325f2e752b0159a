"""Incremental CDCL SAT solver with assumptions.

Two watched literals, activity-based branching with phase saving, Luby
restarts and activity-based learned clause deletion.  Unsatisfiable calls
under assumptions report the subset of assumptions responsible for the
conflict (the failed assumptions), which the MaxSAT algorithms use as
unsatisfiable cores.

Internally literal ``v`` is coded as ``2*v`` and ``-v`` as ``2*v + 1`` so
that negation is ``code ^ 1`` and per-literal state lives in flat lists.

>>> s = SatSolver()
>>> s.add_clauses([[1, 2], [-1, 2], [1, -2]])
True
>>> out = s.solve([-2])
>>> out.status, sorted(out.failed)
(<SatStatus.UNSAT: 'UNSAT'>, [-2])
"""

from __future__ import annotations

import enum
import heapq
import random
import time
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence


class SatStatus(enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    UNKNOWN = "UNKNOWN"  # a conflict or time budget ran out


@dataclass
class SatOutcome:
    status: SatStatus
    model: Optional[List[bool]] = None  # model[v] for v >= 1; model[0] unused
    failed: Optional[frozenset] = None  # failed assumption literals when UNSAT

    @property
    def sat(self) -> bool:
        return self.status is SatStatus.SAT

    def value(self, lit: int) -> bool:
        v = self.model[abs(lit)]
        return v if lit > 0 else not v


def _code(lit: int) -> int:
    return 2 * lit if lit > 0 else -2 * lit + 1


def _lit(code: int) -> int:
    return -(code >> 1) if code & 1 else code >> 1


def luby(i: int) -> int:
    """i-th element (0-based) of the Luby sequence 1 1 2 1 1 2 4 ..."""
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i = i % size
    return 1 << seq


class SatSolver:
    """Incremental CDCL solver.

    Clauses may be added between ``solve`` calls.  Variables are created on
    demand when a clause mentions them, or explicitly with ``new_var``.
    """

    def __init__(self, seed: int = 0, random_freq: float = 0.0, restart_base: int = 100,
                 var_decay: float = 0.95, clause_decay: float = 0.999, check: bool = False):
        self.rng = random.Random(seed)
        self.random_freq = random_freq
        self.restart_base = restart_base
        self.var_decay = var_decay
        self.clause_decay = clause_decay
        self.check = check

        self.num_vars = 0
        self.lval = [0, 0]
        self.level = [0]
        self.reason = [None]
        self.activity = [0.0]
        self.phase = [False]
        self.seen = [False]
        self.watches = [[], []]
        self.heap = []

        self.clauses = []
        self.learnts = []
        self.clause_act = {}
        self.trail = []
        self._simplified_at = -(10 ** 9)
        self.trail_lim = []
        self.qhead = 0
        self.ok = True
        self.var_inc = 1.0
        self.cla_inc = 1.0
        self.max_learnts = 2000.0
        self.original = [] if check else None

        self.stats = {"solves": 0, "conflicts": 0, "decisions": 0, "propagations": 0, "restarts": 0}

    # -- variables and clauses ---------------------------------------------

    def new_var(self) -> int:
        self.num_vars += 1
        v = self.num_vars
        self.lval += [0, 0]
        self.level.append(0)
        self.reason.append(None)
        self.activity.append(0.0)
        self.phase.append(False)
        self.seen.append(False)
        self.watches += [[], []]
        heapq.heappush(self.heap, (0.0, v))
        return v

    def ensure_vars(self, n: int) -> None:
        while self.num_vars < n:
            self.new_var()

    def add_clause(self, lits: Iterable[int]) -> bool:
        """Add a clause permanently.  Returns False once the formula is known UNSAT."""
        lits = list(lits)
        if self.original is not None:
            self.original.append(tuple(lits))
        if not self.ok:
            return False
        if self.trail_lim:
            self._cancel_until(0)
        top = max((abs(l) for l in lits), default=0)
        if top > self.num_vars:
            self.ensure_vars(top)
        lval = self.lval
        codes = []
        present = set()
        for lit in lits:
            if lit == 0:
                raise ValueError("0 is not a literal")
            c = _code(lit)
            if c ^ 1 in present or lval[c] == 1:
                return True  # tautology or satisfied at level 0
            if c in present or lval[c] == -1:
                continue
            present.add(c)
            codes.append(c)
        if not codes:
            self.ok = False
            return False
        if len(codes) == 1:
            self._assign(codes[0], None)
            if self._propagate() is not None:
                self.ok = False
            return self.ok
        self.clauses.append(codes)
        self.watches[codes[0]].append(codes)
        self.watches[codes[1]].append(codes)
        return True

    def add_clauses(self, clauses: Iterable[Iterable[int]]) -> bool:
        for c in clauses:
            self.add_clause(c)
        return self.ok

    # -- core machinery ------------------------------------------------------

    def _assign(self, code: int, reason) -> None:
        v = code >> 1
        self.lval[code] = 1
        self.lval[code ^ 1] = -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(code)

    def _propagate(self):
        lval = self.lval
        watches = self.watches
        trail = self.trail
        level = self.level
        reason = self.reason
        dl = len(self.trail_lim)
        qhead = self.qhead
        props = 0
        while qhead < len(trail):
            p = trail[qhead]
            qhead += 1
            props += 1
            false_lit = p ^ 1
            ws = watches[false_lit]
            kept = []
            n = len(ws)
            i = 0
            while i < n:
                c = ws[i]
                i += 1
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                first = c[0]
                if lval[first] == 1:
                    kept.append(c)
                    continue
                for k in range(2, len(c)):
                    lk = c[k]
                    if lval[lk] != -1:
                        c[1] = lk
                        c[k] = false_lit
                        watches[lk].append(c)
                        break
                else:
                    kept.append(c)
                    if lval[first] == -1:
                        kept.extend(ws[i:])
                        watches[false_lit] = kept
                        self.qhead = len(trail)
                        self.stats["propagations"] += props
                        return c
                    v = first >> 1
                    lval[first] = 1
                    lval[first ^ 1] = -1
                    level[v] = dl
                    reason[v] = c
                    trail.append(first)
            watches[false_lit] = kept
        self.qhead = qhead
        self.stats["propagations"] += props
        return None

    def _cancel_until(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        lval, phase, reason, heap, act = self.lval, self.phase, self.reason, self.heap, self.activity
        start = self.trail_lim[lvl]
        for idx in range(len(self.trail) - 1, start - 1, -1):
            c = self.trail[idx]
            v = c >> 1
            phase[v] = not (c & 1)
            lval[c] = 0
            lval[c ^ 1] = 0
            reason[v] = None
            heapq.heappush(heap, (-act[v], v))
        del self.trail[start:]
        del self.trail_lim[lvl:]
        self.qhead = start

    def _bump_var(self, v: int) -> None:
        act = self.activity
        act[v] += self.var_inc
        if act[v] > 1e100:
            for u in range(1, self.num_vars + 1):
                act[u] *= 1e-100
            self.var_inc *= 1e-100
            self._rebuild_heap()
        elif self.lval[2 * v] == 0:
            heapq.heappush(self.heap, (-act[v], v))

    def _rebuild_heap(self) -> None:
        lval, act = self.lval, self.activity
        self.heap = [(-act[v], v) for v in range(1, self.num_vars + 1) if lval[2 * v] == 0]
        heapq.heapify(self.heap)

    def _bump_clause(self, c) -> None:
        key = id(c)
        a = self.clause_act.get(key)
        if a is None:
            return
        a += self.cla_inc
        self.clause_act[key] = a
        if a > 1e20:
            for k in self.clause_act:
                self.clause_act[k] *= 1e-20
            self.cla_inc *= 1e-20

    def _analyze(self, confl):
        seen, level, reason, trail = self.seen, self.level, self.reason, self.trail
        dl = len(self.trail_lim)
        learnt = [0]
        to_clear = []
        path = 0
        p = -1
        idx = len(trail) - 1
        while True:
            self._bump_clause(confl)
            for q in (confl if p == -1 else confl[1:]):
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    self._bump_var(v)
                    seen[v] = True
                    to_clear.append(v)
                    if level[v] >= dl:
                        path += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            confl = reason[p >> 1]
            seen[p >> 1] = False
            path -= 1
            if path == 0:
                break
        learnt[0] = p ^ 1
        # drop literals implied by the rest of the clause (one-level check)
        if len(learnt) > 2:
            kept = [learnt[0]]
            for q in learnt[1:]:
                r = reason[q >> 1]
                if r is None:
                    kept.append(q)
                    continue
                for x in r[1:]:
                    if not seen[x >> 1] and level[x >> 1] > 0:
                        kept.append(q)
                        break
            learnt = kept
        for v in to_clear:
            seen[v] = False
        if len(learnt) == 1:
            return learnt, 0
        best = 1
        for i in range(2, len(learnt)):
            if level[learnt[i] >> 1] > level[learnt[best] >> 1]:
                best = i
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, level[learnt[1] >> 1]

    def _analyze_final(self, code: int) -> frozenset:
        """Assumptions that force ``code`` (an assumption literal) to be false."""
        out = {code}
        if not self.trail_lim:
            return frozenset(_lit(c) for c in out)
        seen, reason, level = self.seen, self.reason, self.level
        seen[code >> 1] = True
        for i in range(len(self.trail) - 1, self.trail_lim[0] - 1, -1):
            c = self.trail[i]
            v = c >> 1
            if seen[v]:
                r = reason[v]
                if r is None:
                    out.add(c)
                else:
                    for q in r[1:]:
                        if level[q >> 1] > 0:
                            seen[q >> 1] = True
                seen[v] = False
        seen[code >> 1] = False
        return frozenset(_lit(c) for c in out)

    def _pick_branch(self) -> int:
        lval = self.lval
        if self.random_freq > 0 and self.rng.random() < self.random_freq:
            free = [v for v in range(1, self.num_vars + 1) if lval[2 * v] == 0]
            if free:
                v = self.rng.choice(free)
                return 2 * v + (0 if self.phase[v] else 1)
        heap = self.heap
        while heap:
            _, v = heapq.heappop(heap)
            if lval[2 * v] == 0:
                return 2 * v + (0 if self.phase[v] else 1)
        return -1

    def _reduce_db(self) -> None:
        acts = self.clause_act
        self.learnts.sort(key=lambda c: (len(c) > 2, acts[id(c)]))
        half = len(self.learnts) // 2
        for c in self.learnts[:half]:
            if len(c) > 2:
                del acts[id(c)]
        self.learnts = [c for c in self.learnts if id(c) in acts]

    def _simplify(self) -> None:
        """At level 0: drop satisfied clauses, strip false literals, rebuild watches.

        Skipped until enough new literals are fixed to make a pass worthwhile.
        """
        if len(self.trail) - self._simplified_at <= self.num_vars // 20:
            return
        self._simplified_at = len(self.trail)
        lval = self.lval

        def clean(cs):
            out = []
            for c in cs:
                if any(lval[x] == 1 for x in c):
                    continue
                if any(lval[x] == -1 for x in c):
                    c[:] = [x for x in c if lval[x] == 0]
                out.append(c)
            return out

        self.clauses = clean(self.clauses)
        old = self.learnts
        self.learnts = clean(old)
        live = {id(c) for c in self.learnts}
        for c in old:
            if id(c) not in live:
                self.clause_act.pop(id(c), None)
        watches = [[] for _ in range(2 * self.num_vars + 2)]
        for cs in (self.clauses, self.learnts):
            for c in cs:
                watches[c[0]].append(c)
                watches[c[1]].append(c)
        self.watches = watches

    # -- public solve ----------------------------------------------------------

    def solve(self, assumptions: Sequence[int] = (), conflict_limit: Optional[int] = None,
              deadline: Optional[float] = None) -> SatOutcome:
        """Decide satisfiability under ``assumptions``.

        Returns SAT with a total model, UNSAT with the failed assumptions (a
        subset of ``assumptions``; empty when the clauses alone are UNSAT),
        or UNKNOWN when ``conflict_limit`` or the ``deadline``
        (a ``time.monotonic()`` value) is exceeded.
        """
        self.stats["solves"] += 1
        if assumptions:
            top = max(abs(a) for a in assumptions)
            if top > self.num_vars:
                self.ensure_vars(top)
        out = self._search([_code(a) for a in assumptions], conflict_limit, deadline)
        if self.check:
            self._verify(out, assumptions)
        return out

    def _search(self, assumps, conflict_limit, deadline) -> SatOutcome:
        if not self.ok:
            return SatOutcome(SatStatus.UNSAT, failed=frozenset())
        self._cancel_until(0)
        if self._propagate() is not None:
            self.ok = False
            return SatOutcome(SatStatus.UNSAT, failed=frozenset())
        self._simplify()
        self.max_learnts = max(self.max_learnts, len(self.clauses) / 3)
        conflicts = 0
        restart_idx = 0
        restart_at = luby(0) * self.restart_base
        since_restart = 0
        n_assumps = len(assumps)
        stats = self.stats
        while True:
            confl = self._propagate()
            if confl is not None:
                conflicts += 1
                since_restart += 1
                stats["conflicts"] += 1
                if not self.trail_lim:
                    self.ok = False
                    return SatOutcome(SatStatus.UNSAT, failed=frozenset())
                learnt, bt = self._analyze(confl)
                self._cancel_until(bt)
                if len(learnt) == 1:
                    self._assign(learnt[0], None)
                else:
                    self.learnts.append(learnt)
                    self.clause_act[id(learnt)] = self.cla_inc
                    self.watches[learnt[0]].append(learnt)
                    self.watches[learnt[1]].append(learnt)
                    self._assign(learnt[0], learnt)
                self.var_inc /= self.var_decay
                self.cla_inc /= self.clause_decay
                if conflict_limit is not None and conflicts >= conflict_limit:
                    self._cancel_until(0)
                    return SatOutcome(SatStatus.UNKNOWN)
                if deadline is not None and (conflicts & 63) == 0 and time.monotonic() > deadline:
                    self._cancel_until(0)
                    return SatOutcome(SatStatus.UNKNOWN)
                if since_restart >= restart_at:
                    stats["restarts"] += 1
                    self._cancel_until(0)
                    restart_idx += 1
                    restart_at = luby(restart_idx) * self.restart_base
                    since_restart = 0
                    if len(self.learnts) >= self.max_learnts:
                        if self._propagate() is not None:
                            self.ok = False
                            return SatOutcome(SatStatus.UNSAT, failed=frozenset())
                        self._reduce_db()
                        self._simplify()
                        self.max_learnts *= 1.1
                continue
            nxt = -1
            while len(self.trail_lim) < n_assumps:
                a = assumps[len(self.trail_lim)]
                val = self.lval[a]
                if val == 1:
                    self.trail_lim.append(len(self.trail))
                elif val == -1:
                    failed = self._analyze_final(a)
                    self._cancel_until(0)
                    return SatOutcome(SatStatus.UNSAT, failed=failed)
                else:
                    nxt = a
                    break
            if nxt == -1:
                nxt = self._pick_branch()
                if nxt == -1:
                    lval = self.lval
                    model = [False] + [lval[2 * v] == 1 for v in range(1, self.num_vars + 1)]
                    self._cancel_until(0)
                    return SatOutcome(SatStatus.SAT, model=model)
                stats["decisions"] += 1
            self.trail_lim.append(len(self.trail))
            self._assign(nxt, None)

    def _verify(self, out: SatOutcome, assumptions) -> None:
        if out.status is SatStatus.SAT:
            for c in self.original:
                assert any(out.value(l) for l in c), f"model falsifies {c}"
            for a in assumptions:
                assert out.value(a), f"model violates assumption {a}"
        elif out.status is SatStatus.UNSAT:
            assert out.failed <= set(assumptions)
            probe = SatSolver()
            probe.add_clauses(self.original)
            for a in out.failed:
                probe.add_clause([a])
            assert probe.solve().status is SatStatus.UNSAT, "failed assumptions are not a core"

    def to_dimacs(self) -> str:
        """Dump the clauses added so far (requires ``check=True``)."""
        if self.original is None:
            raise RuntimeError("clause log is only kept with check=True")
        lines = [f"p cnf {self.num_vars} {len(self.original)}"]
        lines += [" ".join(map(str, (*c, 0))) for c in self.original]
        return "\n".join(lines) + "\n"


def core_from_selectors(outcome: SatOutcome, selector_to_soft) -> set:
    """Soft-clause indices whose selector assumption is in the failed set.

    ``selector_to_soft`` maps each assumption literal (as passed to
    ``solve``) to the index of the soft clause it switches on.  Failed
    literals that are not in the map (hard guards, bound literals) are
    ignored, so an empty set means the hard part alone is contradictory.
    """
    if outcome.status is not SatStatus.UNSAT:
        raise ValueError("only an UNSAT outcome carries a core")
    return {selector_to_soft[l] for l in outcome.failed if l in selector_to_soft}
