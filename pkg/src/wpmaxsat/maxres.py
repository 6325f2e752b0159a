"""MaxSAT resolution.

Weighted clauses carry either a positive integer weight or ``TOP`` (hard).
``max_res`` replaces two clashing clauses by their resolvent plus the
compensation clauses that keep the cost of every assignment unchanged.
``get_proof`` searches for a small resolution refutation of a core and
``is_ror`` tells whether a derived clause can be obtained by replaying
MaxSAT resolution along a read-once sub-proof.
"""

from __future__ import annotations

import functools
import heapq
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union


@functools.total_ordering
class _Top:
    """Weight of hard clauses; larger than every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("TOP")

    def __repr__(self):
        return "TOP"

    def __reduce__(self):
        return (_Top, ())


TOP = _Top()
Weight = Union[int, _Top]


def weight_minus(u: Weight, w: int) -> Weight:
    """``u ⊖ w``: ordinary subtraction, except that TOP absorbs it."""
    if u is TOP:
        return TOP
    if w is TOP:
        raise ValueError("cannot subtract TOP from a finite weight")
    if w > u:
        raise ValueError(f"{w} exceeds {u}")
    return u - w


def weight_min(u: Weight, w: Weight) -> Weight:
    if u is TOP:
        return w
    if w is TOP:
        return u
    return min(u, w)


@dataclass(frozen=True)
class WClause:
    lits: Tuple[int, ...]
    weight: Weight

    @property
    def hard(self) -> bool:
        return self.weight is TOP

    def __str__(self):
        body = " v ".join(str(l) for l in self.lits) or "[]"
        return f"({body}, {self.weight})"


def _merge(*parts) -> Tuple[int, ...]:
    seen = set()
    out = []
    for part in parts:
        for l in part:
            if l not in seen:
                seen.add(l)
                out.append(l)
    return tuple(out)


def _tautology(lits) -> bool:
    s = set(lits)
    return any(-l in s for l in s)


def _negated_disjunction(prefix: Sequence[int], lits: Sequence[int]) -> List[Tuple[int, ...]]:
    """Clauses for ``prefix ∨ ¬(l_1 ∨ ... ∨ l_k)``.

    Uses ``A ∨ ¬(l ∨ C) ≡ {A ∨ ¬C, A ∨ ¬l ∨ C}`` repeatedly, which yields
    ``A ∨ ¬l_j ∨ l_{j+1} ∨ ... ∨ l_k`` for j = 1..k.  Tautologies are dropped.
    """
    out = []
    for j, l in enumerate(lits):
        clause = _merge(prefix, (-l,), lits[j + 1:])
        if not _tautology(clause):
            out.append(clause)
    return out


@dataclass
class ResolutionParts:
    resolvent: Optional[WClause]  # None when the resolvent is a tautology
    left: Optional[WClause]  # remaining weight of the left parent, None when zero
    right: Optional[WClause]
    compensation: List[WClause]

    def clauses(self) -> List[WClause]:
        out = [c for c in (self.resolvent, self.left, self.right) if c is not None]
        return out + self.compensation


def resolve_parts(left: WClause, right: WClause, pivot: int, amount: Optional[Weight] = None) -> ResolutionParts:
    """MaxSAT resolution of ``left`` (containing ``pivot``) and ``right`` (containing ``-pivot``).

    Resolves ``amount`` units of weight (default: the smaller weight).
    """
    if pivot not in left.lits or -pivot not in right.lits:
        raise ValueError("clauses do not clash on the pivot")
    m = weight_min(left.weight, right.weight) if amount is None else amount
    if m is not TOP and m > weight_min(left.weight, right.weight):
        raise ValueError("amount exceeds the parent weights")
    a = tuple(l for l in left.lits if l != pivot)
    b = tuple(l for l in right.lits if l != -pivot)
    resolvent = _merge(a, b)
    rest = []
    for parent in (left, right):
        w = weight_minus(parent.weight, m) if m is not TOP else TOP
        rest.append(WClause(parent.lits, w) if (w is TOP or w > 0) else None)
    comp = [WClause(lits, m) for lits in _negated_disjunction(_merge((pivot,), a), b)]
    comp += [WClause(lits, m) for lits in _negated_disjunction(_merge((-pivot,), b), a)]
    return ResolutionParts(None if _tautology(resolvent) else WClause(resolvent, m), rest[0], rest[1], comp)


def max_res(left: WClause, right: WClause, pivot: int, amount: Optional[Weight] = None) -> List[WClause]:
    """MaxSAT resolution as a flat clause list: resolvent, remaining parents, compensation.

    Zero-weight and tautological clauses are omitted.

    >>> out = max_res(WClause((1, 2), 3), WClause((-1, 2, 3), 4), 1)
    >>> [str(c) for c in out]
    ['(2 v 3, 3)', '(-1 v 2 v 3, 1)', '(1 v 2 v -3, 3)']
    """
    return resolve_parts(left, right, pivot, amount).clauses()


@dataclass
class Step:
    resolvent: int
    left: int
    right: int
    pivot: int


@dataclass
class ResolutionProof:
    """Refutation DAG: leaves are the input clauses, steps derive new ids.

    ``clauses[i]`` gives the literals of node ``i``; the last step derives
    the empty clause.  Leaves keep their weights in ``leaf_weights``.
    """

    clauses: Dict[int, Tuple[int, ...]] = field(default_factory=dict)
    leaf_weights: Dict[int, Weight] = field(default_factory=dict)
    steps: List[Step] = field(default_factory=list)
    sources: Dict[int, int] = field(default_factory=dict)  # leaf id -> position in the core

    def __post_init__(self):
        self._index()

    def _index(self):
        self.parents = {s.resolvent: s for s in self.steps}
        self.used = {}
        for s in self.steps:
            for p in (s.left, s.right):
                self.used[p] = self.used.get(p, 0) + 1

    @property
    def root(self) -> int:
        return self.steps[-1].resolvent

    def is_input(self, cid: int) -> bool:
        return cid in self.leaf_weights

    def is_hard(self, cid: int) -> bool:
        """An input clause of weight TOP, or derived only from such clauses."""
        if self.is_input(cid):
            return self.leaf_weights[cid] is TOP
        s = self.parents[cid]
        return self.is_hard(s.left) and self.is_hard(s.right)

    def is_ror(self, cid: int) -> bool:
        """Whether ``cid`` is derivable by a read-once replay of MaxSAT resolution."""
        if self.is_hard(cid):
            return True
        used = self.used.get(cid, 0)
        if self.is_input(cid):
            return used <= 1
        if used > 1:
            return False
        s = self.parents[cid]
        return self.is_ror(s.left) and self.is_ror(s.right)

    def dump(self) -> str:
        lines = [f"{i}: {list(self.clauses[i])} w={w}" for i, w in self.leaf_weights.items()]
        for s in self.steps:
            lines.append(f"{s.resolvent}: {list(self.clauses[s.resolvent])} <- {s.left} x {s.right} on {s.pivot}")
        return "\n".join(lines) + "\n"


def get_proof(core: Sequence[WClause], budget: int = 10_000, check=None) -> Optional[ResolutionProof]:
    """Search for a resolution refutation of ``core`` by bounded saturation.

    Clauses are processed shortest first, so unit resolution is found
    before anything more expensive.  Returns None when no refutation is
    found within ``budget`` resolution attempts.  ``check``, if given, is
    called every 256 attempts and may raise to abort the search.
    """
    clauses: Dict[int, Tuple[int, ...]] = {}
    index: Dict[frozenset, int] = {}
    parents: Dict[int, Tuple[int, int, int]] = {}
    leaf_weights: Dict[int, Weight] = {}
    sources: Dict[int, int] = {}
    heap = []
    for pos, wc in enumerate(core):
        key = frozenset(wc.lits)
        if _tautology(wc.lits):
            continue
        if key in index:
            # keep the heavier duplicate as the leaf
            cid = index[key]
            if wc.weight > leaf_weights[cid]:
                leaf_weights[cid] = wc.weight
                sources[cid] = pos
            continue
        cid = len(clauses)
        clauses[cid] = tuple(wc.lits)
        index[key] = cid
        leaf_weights[cid] = wc.weight
        sources[cid] = pos
        if not wc.lits:
            return ResolutionProof({cid: ()}, {cid: wc.weight}, [], {cid: pos})
        heapq.heappush(heap, (len(wc.lits), 0, cid))

    processed: List[int] = []
    by_lit: Dict[int, List[int]] = {}
    attempts = 0
    empty = None
    while heap and empty is None:
        _, _, cid = heapq.heappop(heap)
        lits = clauses[cid]
        for lit in lits:
            for other in by_lit.get(-lit, ()):
                attempts += 1
                if attempts > budget:
                    return None
                if check is not None and attempts % 256 == 0:
                    check()
                olits = clauses[other]
                res = _merge(tuple(l for l in lits if l != lit), tuple(l for l in olits if l != -lit))
                if _tautology(res):
                    continue
                key = frozenset(res)
                if key in index:
                    continue
                rid = len(clauses)
                clauses[rid] = res
                index[key] = rid
                if lit > 0:
                    parents[rid] = (cid, other, lit)
                else:
                    parents[rid] = (other, cid, -lit)
                if not res:
                    empty = rid
                    break
                heapq.heappush(heap, (len(res), 1, rid))
            if empty is not None:
                break
        processed.append(cid)
        for lit in lits:
            by_lit.setdefault(lit, []).append(cid)
    if empty is None:
        return None

    needed = set()
    stack = [empty]
    while stack:
        cid = stack.pop()
        if cid in needed or cid in leaf_weights:
            continue
        needed.add(cid)
        left, right, _ = parents[cid]
        stack += [left, right]
    steps = [Step(cid, *parents[cid]) for cid in sorted(needed)]
    keep = set(needed)
    for s in steps:
        keep.update((s.left, s.right))
    return ResolutionProof({i: clauses[i] for i in sorted(keep)},
                           {i: w for i, w in leaf_weights.items() if i in keep}, steps,
                           {i: p for i, p in sources.items() if i in keep})
