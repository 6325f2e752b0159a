import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from wpmaxsat.maxres import (TOP, ResolutionProof, Step, WClause, get_proof, max_res, resolve_parts, weight_min,
                             weight_minus)
from wpmaxsat.sat import SatSolver



def cost(clauses, bits):
    """Falsified soft weight, or None when a hard clause is falsified."""
    total = 0
    for c in clauses:
        if not any(bits[abs(l) - 1] == (l > 0) for l in c.lits):
            if c.weight is TOP:
                return None
            total += c.weight
    return total


def same_cost_everywhere(before, after, n):
    return all(cost(before, bits) == cost(after, bits) for bits in itertools.product([False, True], repeat=n))


def as_set(clauses):
    return sorted((tuple(sorted(c.lits)), c.weight) for c in clauses)


def test_weight_minus():
    assert weight_minus(4, 3) == 1
    assert weight_minus(TOP, 5) is TOP
    assert weight_minus(3, 3) == 0
    with pytest.raises(ValueError):
        weight_minus(2, 3)
    assert weight_min(TOP, 7) == 7 and weight_min(TOP, TOP) is TOP
    assert TOP > 10 ** 30 and not TOP < 1


def test_worked_example():
    out = max_res(WClause((1, 2), 3), WClause((-1, 2, 3), 4), 1)
    assert as_set(out) == as_set([WClause((2, 3), 3), WClause((-1, 2, 3), 1), WClause((1, 2, -3), 3)])
    assert same_cost_everywhere([WClause((1, 2), 3), WClause((-1, 2, 3), 4)], out, 3)


def test_unit_clash_leaves_only_empty_clause():
    assert max_res(WClause((1,), 1), WClause((-1,), 1), 1) == [WClause((), 1)]


def test_hard_parents_keep_top():
    parts = resolve_parts(WClause((1, 2), TOP), WClause((-1,), 3), 1)
    assert parts.left == WClause((1, 2), TOP)
    assert parts.right is None
    assert parts.resolvent == WClause((2,), 3)
    assert max_res(WClause((1,), TOP), WClause((-1,), TOP), 1) == [WClause((), TOP), WClause((1,), TOP),
                                                                    WClause((-1,), TOP)]


def test_partial_amount():
    parts = resolve_parts(WClause((1,), 5), WClause((-1, 2), 4), 1, amount=2)
    assert parts.left.weight == 3 and parts.right.weight == 2 and parts.resolvent == WClause((2,), 2)
    with pytest.raises(ValueError):
        resolve_parts(WClause((1,), 5), WClause((-1, 2), 4), 1, amount=5)


def test_errors_on_missing_pivot():
    with pytest.raises(ValueError):
        max_res(WClause((1,), 1), WClause((1, 2), 1), 1)
    with pytest.raises(ValueError):
        max_res(WClause((2,), 1), WClause((-1,), 1), 1)


def test_exhaustive_cost_preservation():
    rng = random.Random(17)
    for _ in range(500):
        n = rng.randint(2, 6)
        a = [v if rng.random() < 0.5 else -v for v in rng.sample(range(2, n + 1), rng.randint(0, n - 1))]
        b = [v if rng.random() < 0.5 else -v for v in rng.sample(range(2, n + 1), rng.randint(0, n - 1))]
        left = WClause(tuple([1] + a), rng.choice([TOP, rng.randint(1, 9)]))
        right = WClause(tuple([-1] + b), rng.choice([TOP, rng.randint(1, 9)]))
        out = max_res(left, right, 1)
        assert all(c.weight is TOP or c.weight > 0 for c in out)
        assert same_cost_everywhere([left, right], out, n), (left, right, out)


def chain_proof():
    # (1) (-1 v 2) (-2): resolve 0 with 1 into 3 = (2), then 3 with 2 into the empty clause
    return ResolutionProof({0: (1,), 1: (-1, 2), 2: (-2,), 3: (2,), 4: ()},
                           {0: 1, 1: 1, 2: 1}, [Step(3, 0, 1, 1), Step(4, 3, 2, 2)])


def test_is_hard_cases():
    p = ResolutionProof({0: (1,), 1: (-1,), 2: ()}, {0: TOP, 1: 3}, [Step(2, 0, 1, 1)])
    assert p.is_hard(0) and not p.is_hard(1) and not p.is_hard(2)
    with pytest.raises(KeyError):
        p.is_hard(9)


def test_is_ror_chain_and_reuse():
    assert chain_proof().is_ror(4)
    # leaf 0 feeds two steps
    reuse = ResolutionProof({0: (1,), 1: (-1, 2), 2: (-1, -2), 3: (2,), 4: (-2,), 5: ()},
                            {0: 1, 1: 1, 2: 1}, [Step(3, 0, 1, 1), Step(4, 0, 2, 1), Step(5, 3, 4, 2)])
    assert not reuse.is_ror(3) and not reuse.is_ror(5)
    hard = ResolutionProof(dict(reuse.clauses), {0: TOP, 1: TOP, 2: TOP}, list(reuse.steps))
    assert hard.is_ror(5)


def validate(proof, core):
    leaves = {frozenset(core[pos].lits) for pos in proof.sources.values()}
    for cid in proof.leaf_weights:
        assert frozenset(proof.clauses[cid]) in leaves
    seen = set(proof.leaf_weights)
    for s in proof.steps:
        assert s.left in seen and s.right in seen
        left, right = proof.clauses[s.left], proof.clauses[s.right]
        assert s.pivot in left and -s.pivot in right
        assert set(proof.clauses[s.resolvent]) == ({l for l in left if l != s.pivot}
                                                  | {l for l in right if l != -s.pivot})
        seen.add(s.resolvent)
    assert proof.clauses[proof.root] == ()


def test_get_proof_examples():
    core = [WClause((1,), 1), WClause((-1,), 1)]
    p = get_proof(core)
    assert len(p.steps) == 1
    validate(p, core)
    core = [WClause((1,), 1), WClause((2,), 1), WClause((-1, -2), TOP)]
    p = get_proof(core)
    assert len(p.steps) == 2 and p.is_ror(p.root)
    validate(p, core)


def test_get_proof_pigeonhole_within_budget():
    var = lambda p, h: 2 * p + h + 1
    core = [WClause((var(p, 0), var(p, 1)), 1) for p in range(3)]
    core += [WClause((-var(p, h), -var(q, h)), TOP) for h in range(2) for p in range(3) for q in range(p + 1, 3)]
    p = get_proof(core, budget=10_000)
    if p is not None:
        validate(p, core)
    assert get_proof(core, budget=3) is None


def test_get_proof_satisfiable_and_empty():
    assert get_proof([WClause((1, 2), 1), WClause((-1,), 1)]) is None
    p = get_proof([WClause((), 4), WClause((1,), 1)])
    assert p.steps == [] and p.leaf_weights == {0: 4}


def test_dump_lists_every_step():
    text = chain_proof().dump()
    assert text.count("\n") == 5 and "4: [] <- 3 x 2 on 2" in text


def random_core(rng):
    while True:
        n = rng.randint(2, 5)
        cls = [WClause(tuple(v if rng.random() < 0.5 else -v for v in rng.sample(range(1, n + 1), rng.randint(1, 2))),
                       rng.choice([TOP, rng.randint(1, 6), rng.randint(1, 6)])) for _ in range(rng.randint(2, 9))]
        s = SatSolver()
        s.add_clauses([c.lits for c in cls])
        if not s.solve().sat:
            return n, cls


def test_found_proofs_validate_and_ror_replay_is_sound():
    rng = random.Random(23)
    checked = 0
    for _ in range(400):
        n, core = random_core(rng)
        proof = get_proof(core)
        assert proof is not None
        validate(proof, core)
        if not proof.is_ror(proof.root) or proof.is_hard(proof.root):
            continue
        # replay MaxSAT resolution along the read-once proof
        m = min(proof.leaf_weights[i] for i in proof.leaf_weights if not proof.is_hard(i)
                and proof.is_ror(i))
        current = {cid: core[pos] for cid, pos in proof.sources.items()}
        untouched = [c for pos, c in enumerate(core) if pos not in proof.sources.values()]
        extra = []
        for s in proof.steps:
            left, right = current[s.left], current[s.right]
            if proof.is_hard(s.resolvent):
                # implied by hard clauses alone: usable as a stepping stone, never added
                current[s.resolvent] = WClause(proof.clauses[s.resolvent], TOP)
                continue
            for parent in (left, right):
                assert parent.weight is TOP or parent.weight >= m, "replay touched an exhausted clause"
            parts = resolve_parts(left, right, s.pivot, m)
            for old, new in ((s.left, parts.left), (s.right, parts.right)):
                if not proof.is_hard(old):
                    current[old] = new if new is not None else WClause(current[old].lits, 0)
            extra += parts.compensation
            current[s.resolvent] = parts.resolvent
        leaves_after = [current[c] for c in proof.leaf_weights if current[c].weight]
        after = untouched + leaves_after + extra + [current[proof.root]]
        assert same_cost_everywhere(core, after, n)
        checked += 1
    assert checked >= 50


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(2, 5).flatmap(lambda v: st.sampled_from([v, -v])), max_size=3),
       st.lists(st.integers(2, 5).flatmap(lambda v: st.sampled_from([v, -v])), max_size=3),
       st.one_of(st.just(TOP), st.integers(1, 9)), st.one_of(st.just(TOP), st.integers(1, 9)))
def test_cost_preservation_property(a, b, u, w):
    left, right = WClause(tuple([1] + a), u), WClause(tuple([-1] + b), w)
    assert same_cost_everywhere([left, right], max_res(left, right, 1), 5)
