"""Bound stepping over subset sums of weights.

A cost bound only needs to visit values that some set of soft clauses can
actually add up to.  Reachable sums are computed with a bitset dynamic
program (a Python int serves as the bitset).  When the weights are too
large for a bitset, a set of sums below the cap is kept instead; if that
set grows past ``SPARSE_LIMIT`` entries the computation gives up with
:class:`SubsetSumTooLarge`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, List, Mapping, Sequence

log = logging.getLogger(__name__)

BITSET_LIMIT = 1 << 26  # largest cap handled with a dense bitset (8 MiB)
SPARSE_LIMIT = 1 << 20  # most sums a sparse pass may hold


class SubsetSumTooLarge(MemoryError):
    """The reachable-sum table would not fit the memory budget."""


def reachable_sums(ws: Iterable[int]) -> int:
    """Bitset with bit ``s`` set iff some sub-multiset of ``ws`` sums to ``s``."""
    bits = 1
    for w in ws:
        if w < 0:
            raise ValueError("weights must be non-negative")
        bits |= bits << w
    return bits


def _sums_upto(ws: Sequence[int], cap: int):
    """Reachable sums ``<= cap`` and the smallest reachable sum above it.

    Every subset whose sum exceeds ``cap`` has a first prefix (in input
    order) that exceeds it, and that prefix extends a sum ``<= cap``; so the
    minimum over those one-step overshoots is the least sum above ``cap``.
    """
    total = sum(ws)
    if cap <= BITSET_LIMIT:
        mask = (1 << (cap + 1)) - 1
        bits, above = 1, total
        for w in ws:
            if w < 0:
                raise ValueError("weights must be non-negative")
            over = (bits << w) >> (cap + 1)
            if over:
                above = min(above, cap + 1 + ((over & -over).bit_length() - 1))
            bits = (bits | bits << w) & mask
        return bits, above
    sums, above = {0}, total
    for w in ws:
        if w < 0:
            raise ValueError("weights must be non-negative")
        grown = set()
        for s in sums:
            t = s + w
            if t <= cap:
                grown.add(t)
            elif t < above:
                above = t
        sums |= grown
        if len(sums) > SPARSE_LIMIT:
            raise SubsetSumTooLarge(f"more than {SPARSE_LIMIT} distinct subset sums below {cap}")
    return sums, above


def reachable_sum_list(ws: Sequence[int], cap: int) -> List[int]:
    """All reachable subset sums ``<= cap`` in increasing order.

    >>> reachable_sum_list([1, 2, 4], 7)
    [0, 1, 2, 3, 4, 5, 6, 7]
    """
    if cap < 0:
        raise ValueError("cap must be non-negative")
    table, _ = _sums_upto(list(ws), cap)
    if isinstance(table, int):
        return [i for i in range(table.bit_length()) if table >> i & 1]
    return sorted(table)


def next_bound(ws: Sequence[int], k: int) -> int:
    """Smallest reachable subset sum strictly greater than ``k``.

    Saturates at ``sum(ws)`` when nothing larger is reachable.  If the sums
    cannot be tabulated the result degrades to ``k + 1``, which is still a
    valid (if slower) step.

    >>> next_bound([1, 1, 1, 1, 100], 4)
    100
    >>> next_bound([5, 5, 10], 7)
    10
    """
    ws = list(ws)
    total = sum(ws)
    if k >= total:
        return total
    if k < 0:
        return 0
    try:
        return _sums_upto(ws, k)[1]
    except SubsetSumTooLarge as exc:
        log.info("next_bound falls back to +1 stepping: %s", exc)
        return k + 1


def subset_sum_floor(ws: Sequence[int], k: int) -> int:
    """Largest reachable subset sum that is at most ``k`` (``k >= 0``)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    table, _ = _sums_upto(list(ws), k)
    return table.bit_length() - 1 if isinstance(table, int) else max(table)


def plus_one(ws: Sequence[int], k: int) -> int:
    """The naive stepping rule: ``k + 1``, capped at ``sum(ws)``."""
    return min(k + 1, sum(ws))


def step_function(name: str):
    if name == "subset-sum":
        return next_bound
    if name == "plus-one":
        return plus_one
    raise ValueError(f"unknown bound step {name!r}")


@dataclass(frozen=True)
class LinearBound:
    """``Σ_{i in indices} w_i b_i  REL  bound`` with REL ``>=`` (AL) or ``<=`` (AM)."""

    indices: frozenset
    bound: int
    relation: str = ">="


def new_bound(al: Iterable[LinearBound], am: Iterable[LinearBound], cover: Iterable[int],
              weights: Mapping[int, int], check=None, deadline=None, conflict_limit=None,
              stats=None) -> int:
    """Next at-most bound for a merged cover.

    Starting from the summed at-most bounds of the covers inside ``cover``,
    step upward through reachable sums until ``Σ w_i b_i = k`` is consistent
    with the at-least constraints over subsets of ``cover``.

    Consistency is checked with one small SAT solver for the whole search:
    the at-least constraints are asserted once and each candidate ``k`` is
    tried under assumptions, so the encodings of neighbouring ``k`` share
    nodes and learned clauses carry over.  ``check`` is called between
    steps and during encoding so the caller can abandon the search; the SAT
    calls stop at ``deadline`` (a ``time.monotonic()`` value) or after
    ``conflict_limit`` conflicts in total, raising TimeoutError.  Conflicts
    spent are added to ``stats["conflicts"]`` when ``stats`` is given.
    """
    from .pb import EncodingContext, encode_pb_leq, normalize
    from .sat import SatSolver, SatStatus

    cover = frozenset(cover)
    order = sorted(cover)
    ws = [weights[i] for i in order]
    total = sum(ws)
    k = sum(c.bound for c in am if c.indices <= cover)
    if k >= total:
        return total
    var = {i: n + 1 for n, i in enumerate(order)}
    solver = SatSolver()
    solver.ensure_vars(len(order))
    for c in al:
        if c.indices <= cover:
            for pb in normalize([(weights[i], var[i]) for i in sorted(c.indices)], c.relation, c.bound):
                root, clauses = encode_pb_leq(pb, EncodingContext(solver.new_var), check)
                solver.add_clauses(clauses)
                solver.add_clause([root])
    terms = [(weights[i], var[i]) for i in order]
    contexts = {}
    used = 0
    try:
        while k < total:
            k = next_bound(ws, k)
            if check is not None:
                check()
            roots = []
            for pb in normalize(terms, "=", k):
                ctx = contexts.get(pb.terms)
                if ctx is None:
                    ctx = contexts[pb.terms] = EncodingContext(solver.new_var)
                root, clauses = encode_pb_leq(pb, ctx, check)
                solver.add_clauses(clauses)
                roots.append(root)
            before = solver.stats["conflicts"]
            limit = None if conflict_limit is None else conflict_limit - used
            if limit is not None and limit <= 0:
                raise TimeoutError("bound search ran out of conflicts")
            out = solver.solve(roots, conflict_limit=limit, deadline=deadline)
            used += solver.stats["conflicts"] - before
            if out.sat:
                return k
            if out.status is SatStatus.UNKNOWN:
                if check is not None:
                    check()
                raise TimeoutError("bound search passed its limits")
        return total
    finally:
        if stats is not None:
            stats["conflicts"] = stats.get("conflicts", 0) + used
