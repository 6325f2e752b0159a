"""CNF encodings of pseudo-Boolean constraints.

``Σ a_i l_i ≤ K`` is encoded with a decision-diagram style recursion.  With
the coefficients sorted ascending, variable ``D[i, b]`` is defined to be
equivalent to ``Σ_{j ≤ i} a_j l_j ≤ b``.  A node either expands into its
two children ``D[i-1, b]`` (``l_i`` false) and ``D[i-1, b-a_i]`` (``l_i``
true) or is terminal:

* ``b < 0``: constant false,
* ``b ≥ Σ_{j ≤ i} a_j``: constant true,
* ``b = 0``: true exactly when ``l_1 .. l_i`` are all false.

Nodes are shared through ``dvar_map`` so equal sub-problems are encoded
once.  Because every ``D`` variable is fully defined (both directions), one
``EncodingContext`` can serve several bounds over the same terms and the
encodings share nodes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

Term = Tuple[int, int]  # (coefficient, literal)


@dataclass(frozen=True)
class PbConstraint:
    """``Σ coef·lit ≤ bound`` with positive coefficients sorted ascending."""

    terms: Tuple[Term, ...]
    bound: int

    def __post_init__(self):
        for a, lit in self.terms:
            if not isinstance(a, int) or a <= 0:
                raise ValueError(f"coefficient must be a positive integer, got {a!r}")
            if lit == 0:
                raise ValueError("0 is not a literal")
        coefs = [a for a, _ in self.terms]
        if coefs != sorted(coefs):
            raise ValueError("terms must be sorted by ascending coefficient")

    @classmethod
    def leq(cls, terms: Iterable[Term], bound: int) -> "PbConstraint":
        """Build from arbitrary integer terms, flipping negative coefficients."""
        out = []
        for a, lit in terms:
            if a < 0:
                # a·l = a + (-a)·¬l
                bound -= a
                a, lit = -a, -lit
            if a:
                out.append((a, lit))
        out.sort(key=lambda t: t[0])
        return cls(tuple(out), bound)

    def holds(self, value: Callable[[int], bool]) -> bool:
        return sum(a for a, lit in self.terms if value(lit)) <= self.bound

    def __str__(self):
        lhs = " + ".join(f"{a}*{'~' if l < 0 else ''}x{abs(l)}" for a, l in self.terms) or "0"
        return f"{lhs} <= {self.bound}"


def normalize(terms: Iterable[Term], relation: str, bound: int) -> List[PbConstraint]:
    """Rewrite ``Σ a·l REL K`` (REL in <=, <, >=, >, =) as ``≤`` constraints.

    ``≥`` flips every literal: ``Σ a·l ≥ K`` iff ``Σ a·¬l ≤ Σa − K``.

    >>> [str(c) for c in normalize([(2, 1), (3, 2)], ">=", 3)]
    ['2*~x1 + 3*~x2 <= 2']
    """
    terms = list(terms)
    if relation == "<=":
        return [PbConstraint.leq(terms, bound)]
    if relation == "<":
        return [PbConstraint.leq(terms, bound - 1)]
    if relation == ">=":
        return [PbConstraint.leq([(-a, l) for a, l in terms], -bound)]
    if relation == ">":
        return normalize(terms, ">=", bound + 1)
    if relation == "=":
        return normalize(terms, "<=", bound) + normalize(terms, ">=", bound)
    raise ValueError(f"unknown relation {relation!r}")


@dataclass
class SizeProfile:
    variables: int
    clauses: int
    cuts: int
    merges: int


class EncodingContext:
    """Shared node table for encodings over one fixed list of terms.

    ``new_var`` allocates fresh variables; by default numbering continues
    after the largest variable mentioned in the terms.
    """

    def __init__(self, new_var: Optional[Callable[[], int]] = None):
        self.new_var = new_var
        self.terms: Optional[Tuple[Term, ...]] = None
        self.prefix: List[int] = [0]
        self.dvar_map: dict = {}
        self.children: dict = {}  # (i, b) -> ((i-1, b), (i-1, b-a_i)) for expanded nodes
        self.terminals: dict = {}  # (i, b) -> True / False / 0 (the all-false rule)
        self.num_vars = 0
        self.num_clauses = 0
        self.cuts = 0
        self.merges = 0
        self.broken = False  # set when an encoding was abandoned halfway

    def _bind(self, terms):
        if self.broken:
            raise RuntimeError("this EncodingContext holds a half-built encoding")
        if self.terms is None:
            self.terms = terms
            for a, _ in terms:
                self.prefix.append(self.prefix[-1] + a)
            if self.new_var is None:
                counter = itertools.count(max((abs(l) for _, l in terms), default=0) + 1)
                self.new_var = lambda: next(counter)
        elif self.terms != terms:
            raise ValueError("an EncodingContext is tied to a single list of terms")

    def profile(self) -> SizeProfile:
        return SizeProfile(self.num_vars, self.num_clauses, self.cuts, self.merges)


def encode_pb_leq(constraint: PbConstraint, ctx: EncodingContext,
                  check: Optional[Callable[[], None]] = None) -> Tuple[int, List[List[int]]]:
    """Encode ``constraint``; returns the root literal and the new clauses.

    The root is equivalent to the constraint, so asserting it (as a unit or
    an assumption) enforces the bound.  Only clauses for nodes not already
    in ``ctx`` are returned.

    ``check`` is called every few thousand nodes and may raise to abandon a
    large encoding; the context is then unusable.
    """
    ctx._bind(constraint.terms)
    terms, prefix = ctx.terms, ctx.prefix
    clauses: List[List[int]] = []
    dmap = ctx.dvar_map

    def node(i, b):
        key = (i, b)
        v = dmap.get(key)
        if v is not None:
            ctx.merges += 1
            return v, False
        v = ctx.new_var()
        ctx.num_vars += 1
        dmap[key] = v
        if b < 0:
            clauses.append([-v])
            ctx.terminals[key] = False
        elif b >= prefix[i]:
            clauses.append([v])
            ctx.terminals[key] = True
        elif b == 0:
            lits = [terms[j][1] for j in range(i)]
            for l in lits:
                clauses.append([-v, -l])
            clauses.append(lits + [v])
            ctx.terminals[key] = 0
        else:
            return v, True
        ctx.cuts += 1
        return v, False

    n = len(terms)
    root, pending = node(n, constraint.bound)
    stack = [(n, constraint.bound)] if pending else []
    expanded = 0
    while stack:
        expanded += 1
        if check is not None and expanded % 4096 == 0:
            try:
                check()
            except BaseException:
                ctx.broken = True
                raise
        i, b = stack.pop()
        d = dmap[(i, b)]
        a, lit = terms[i - 1]
        keep, keep_new = node(i - 1, b)
        take, take_new = node(i - 1, b - a)
        ctx.children[(i, b)] = ((i - 1, b), (i - 1, b - a))
        clauses.append([-take, d])              # prefix_{i-1} ≤ b-a  ⇒  prefix_i ≤ b
        clauses.append([keep, -d])              # prefix_i ≤ b  ⇒  prefix_{i-1} ≤ b
        clauses.append([-d, -lit, take])        # prefix_i ≤ b ∧ l_i  ⇒  prefix_{i-1} ≤ b-a
        clauses.append([-keep, lit, d])         # prefix_{i-1} ≤ b ∧ ¬l_i  ⇒  prefix_i ≤ b
        if keep_new:
            stack.append((i - 1, b))
        if take_new:
            stack.append((i - 1, b - a))
    ctx.num_clauses += len(clauses)
    return root, clauses


def encoding_size_profile(constraint: PbConstraint) -> SizeProfile:
    ctx = EncodingContext()
    encode_pb_leq(constraint, ctx)
    return ctx.profile()


PAIRWISE_LIMIT = 6


def encode_at_most_one(lits: Sequence[int], new_var: Optional[Callable[[], int]] = None) -> List[List[int]]:
    """At most one of ``lits`` is true.

    Small sets (or calls without ``new_var``) use the C(n,2) pairwise
    clauses.  Larger sets use a sequential counter: auxiliary ``s_i`` means
    "one of the first i literals is true", which needs 3n-4 clauses and
    n-1 fresh variables.
    """
    lits = list(lits)
    n = len(lits)
    if n <= PAIRWISE_LIMIT or new_var is None:
        return [[-x, -y] for x, y in itertools.combinations(lits, 2)]
    s = [new_var() for _ in range(n - 1)]
    out = [[-lits[0], s[0]]]
    for i in range(1, n - 1):
        out.append([-lits[i], s[i]])
        out.append([-s[i - 1], s[i]])
        out.append([-lits[i], -s[i - 1]])
    out.append([-lits[-1], -s[-1]])
    return out


def encode_exactly_one(lits: Sequence[int], new_var: Optional[Callable[[], int]] = None) -> List[List[int]]:
    """One at-least-one clause plus :func:`encode_at_most_one`."""
    lits = list(lits)
    return [lits[:]] + encode_at_most_one(lits, new_var)


def dump_pb(constraints: Iterable[PbConstraint]) -> str:
    """OPB-style text for inspection."""
    lines = []
    for c in constraints:
        lhs = " ".join(f"+{a} {'~' if l < 0 else ''}x{abs(l)}" for a, l in c.terms)
        lines.append(f"{lhs} <= {c.bound} ;")
    return "\n".join(lines) + "\n"
