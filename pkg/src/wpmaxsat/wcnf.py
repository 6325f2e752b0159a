"""Weighted partial MaxSAT instances: DIMACS WCNF I/O, cost evaluation and
a brute-force reference optimum.

Literals are plain DIMACS integers (``-3`` is the negation of variable 3)
and clauses are tuples of literals.  An instance keeps its soft clauses as
``(clause, weight)`` pairs and its hard clauses separately, both in file
order.  Duplicate clauses are kept as distinct entries.
"""

from __future__ import annotations

import io
import logging
import os
import tempfile
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np

log = logging.getLogger(__name__)

Clause = tuple  # tuple[int, ...]
Assignment = Mapping[int, bool]

BRUTE_FORCE_LIMIT = 22
MAX_WEIGHT = 2 ** 63 - 1  # weights and their sum must fit a signed 64-bit integer


class _Infeasible:
    """Marker for "no assignment satisfies the hard clauses"."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFEASIBLE"

    def __reduce__(self):
        return (_Infeasible, ())


INFEASIBLE = _Infeasible()


class WcnfParseError(ValueError):
    """Base class for WCNF syntax errors; carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class MalformedHeader(WcnfParseError):
    pass


class LiteralOutOfRange(WcnfParseError):
    pass


class BadWeight(WcnfParseError):
    pass


class MissingTerminator(WcnfParseError):
    pass


def make_clause(lits: Iterable[int]) -> Clause:
    """Normalize literals into a clause: drop repeats, keep first-seen order."""
    seen = set()
    out = []
    for lit in lits:
        lit = int(lit)
        if lit == 0:
            raise ValueError("0 is not a literal")
        if lit not in seen:
            seen.add(lit)
            out.append(lit)
    return tuple(out)


def is_tautology(clause: Sequence[int]) -> bool:
    s = set(clause)
    return any(-l in s for l in s)


@dataclass(frozen=True)
class WcnfInstance:
    num_vars: int
    soft: tuple = ()  # ((clause, weight), ...)
    hard: tuple = ()  # (clause, ...)
    top: Optional[int] = field(default=None, compare=False)
    warnings: tuple = field(default=(), compare=False)

    def __post_init__(self):
        for clause, w in self.soft:
            if not isinstance(w, int) or w < 1:
                raise ValueError(f"soft weight must be a positive integer, got {w!r}")
            self._check_vars(clause)
        for clause in self.hard:
            self._check_vars(clause)

    def _check_vars(self, clause):
        for lit in clause:
            if lit == 0 or abs(lit) > self.num_vars:
                raise ValueError(f"literal {lit} outside 1..{self.num_vars}")

    @classmethod
    def build(cls, num_vars: int, soft=(), hard=()) -> "WcnfInstance":
        """Convenience constructor that normalizes clause literal lists."""
        return cls(
            num_vars=num_vars,
            soft=tuple((make_clause(c), int(w)) for c, w in soft),
            hard=tuple(make_clause(c) for c in hard),
        )

    @cached_property
    def soft_weight_sum(self) -> int:
        return sum(w for _, w in self.soft)

    @property
    def weights(self) -> list:
        return [w for _, w in self.soft]

    @property
    def is_unweighted(self) -> bool:
        return all(w == 1 for _, w in self.soft)

    def with_unit_weights(self) -> "WcnfInstance":
        return WcnfInstance(self.num_vars, tuple((c, 1) for c, _ in self.soft), self.hard)


def _read_text(source) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def parse_wcnf(source: Union[str, bytes, io.IOBase]) -> WcnfInstance:
    """Parse DIMACS WCNF text (``p wcnf nvars nclauses top`` format).

    A clause whose weight equals ``top`` is hard.  Each clause line must end
    with ``0``.  A clause-count mismatch is tolerated and recorded in
    ``instance.warnings``.

    >>> inst = parse_wcnf("p wcnf 2 3 10\\n10 1 2 0\\n3 -1 0\\n4 -2 0\\n")
    >>> inst.hard, inst.soft
    (((1, 2),), (((-1,), 3), ((-2,), 4)))
    """
    text = _read_text(source)
    header = None
    soft, hard, warnings = [], [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line == "%":
            continue
        if line.startswith("p"):
            if header is not None:
                raise MalformedHeader("duplicate problem line", lineno)
            fields = line.split()
            if len(fields) not in (4, 5) or fields[1] != "wcnf":
                raise MalformedHeader(f"expected 'p wcnf nvars nclauses [top]', got {line!r}", lineno)
            try:
                nums = [int(x) for x in fields[2:]]
            except ValueError:
                raise MalformedHeader(f"non-integer field in {line!r}", lineno) from None
            if any(x < 0 for x in nums):
                raise MalformedHeader("negative header field", lineno)
            if len(nums) == 3 and nums[2] > MAX_WEIGHT:
                raise MalformedHeader(f"top {nums[2]} does not fit in 64 bits", lineno)
            nvars, ncls = nums[0], nums[1]
            top = nums[2] if len(nums) == 3 else None
            header = (nvars, ncls, top)
            continue
        if header is None:
            raise MalformedHeader("clause before problem line", lineno)
        nvars, _, top = header
        try:
            nums = [int(x) for x in line.split()]
        except ValueError:
            raise WcnfParseError(f"non-integer token in {line!r}", lineno) from None
        if len(nums) < 2 or nums[-1] != 0:
            raise MissingTerminator("clause line must end with 0", lineno)
        weight, lits = nums[0], nums[1:-1]
        if 0 in lits:
            raise MissingTerminator("0 inside clause", lineno)
        for lit in lits:
            if abs(lit) > nvars:
                raise LiteralOutOfRange(f"literal {lit} exceeds {nvars} variables", lineno)
        if weight <= 0:
            raise BadWeight(f"weight {weight} must be positive", lineno)
        if weight > MAX_WEIGHT:
            raise BadWeight(f"weight {weight} does not fit in 64 bits", lineno)
        if top is not None and weight > top:
            raise BadWeight(f"weight {weight} exceeds top {top}", lineno)
        clause = make_clause(lits)
        if top is not None and weight == top:
            hard.append(clause)
        else:
            soft.append((clause, weight))
    if header is None:
        raise MalformedHeader("missing problem line", 0)
    if sum(w for _, w in soft) > MAX_WEIGHT:
        raise BadWeight("sum of soft weights does not fit in 64 bits", 0)
    nvars, ncls, top = header
    if ncls != len(soft) + len(hard):
        msg = f"header declares {ncls} clauses, found {len(soft) + len(hard)}"
        log.warning(msg)
        warnings.append(msg)
    return WcnfInstance(nvars, tuple(soft), tuple(hard), top=top, warnings=tuple(warnings))


def read_wcnf(path) -> WcnfInstance:
    with open(path, "rb") as fh:
        return parse_wcnf(fh.read())


def format_wcnf(instance: WcnfInstance) -> str:
    top = instance.soft_weight_sum + 1
    if instance.top is not None and instance.top > max(instance.weights, default=0):
        top = instance.top
    out = [f"p wcnf {instance.num_vars} {len(instance.soft) + len(instance.hard)} {top}"]
    for clause in instance.hard:
        out.append(" ".join(map(str, (top, *clause, 0))))
    for clause, w in instance.soft:
        out.append(" ".join(map(str, (w, *clause, 0))))
    return "\n".join(out) + "\n"


def atomic_write(path, text: str) -> None:
    """Write ``text`` to a temporary file next to ``path``, then rename it over ``path``."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_wcnf(instance: WcnfInstance, path) -> None:
    atomic_write(path, format_wcnf(instance))


def _satisfied(clause, assignment) -> bool:
    for lit in clause:
        if assignment[abs(lit)] == (lit > 0):
            return True
    return False


def cost_of(instance: WcnfInstance, assignment: Assignment):
    """Total weight of falsified soft clauses, or INFEASIBLE if a hard clause fails.

    The assignment must be total over ``1..num_vars``.
    """
    missing = [v for v in range(1, instance.num_vars + 1) if v not in assignment]
    if missing:
        raise ValueError(f"assignment is missing variables {missing[:5]}")
    for clause in instance.hard:
        if not _satisfied(clause, assignment):
            return INFEASIBLE
    return sum(w for clause, w in instance.soft if not _satisfied(clause, assignment))


def _clause_mask(clause, bits):
    sat = np.zeros(bits.shape[0], dtype=bool)
    for lit in clause:
        col = bits[:, abs(lit) - 1]
        sat |= col if lit > 0 else ~col
    return sat


def brute_force_optimum(instance: WcnfInstance, limit: int = BRUTE_FORCE_LIMIT):
    """Exact optimum by enumerating all 2^n assignments.

    Returns ``(cost, witness)`` where ``witness`` is the lowest-numbered
    optimal assignment (variable 1 is the least significant bit), or
    ``(INFEASIBLE, None)``.
    """
    n = instance.num_vars
    if n > limit:
        raise ValueError(f"{n} variables exceeds the brute-force limit of {limit}")
    best_cost, best_idx = None, None
    chunk = 1 << min(n, 16)
    shifts = np.arange(n, dtype=np.int64)
    for start in range(0, 1 << n, chunk):
        idx = np.arange(start, start + chunk, dtype=np.int64)
        bits = ((idx[:, None] >> shifts) & 1).astype(bool)
        feasible = np.ones(chunk, dtype=bool)
        for clause in instance.hard:
            feasible &= _clause_mask(clause, bits)
        if not feasible.any():
            continue
        cost = np.zeros(chunk, dtype=np.int64)
        for clause, w in instance.soft:
            cost += np.where(_clause_mask(clause, bits), 0, w)
        cost = np.where(feasible, cost, np.iinfo(np.int64).max)
        pos = int(np.argmin(cost))
        c = int(cost[pos])
        if best_cost is None or c < best_cost:
            best_cost, best_idx = c, start + pos
    if best_cost is None:
        return INFEASIBLE, None
    witness = {v: bool((best_idx >> (v - 1)) & 1) for v in range(1, n + 1)}
    return best_cost, witness
