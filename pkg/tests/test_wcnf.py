import io
import itertools

import pytest
from hypothesis import given, settings, strategies as st

from wpmaxsat.wcnf import (INFEASIBLE, BadWeight, LiteralOutOfRange, MalformedHeader, MissingTerminator,
                           WcnfInstance, brute_force_optimum, cost_of, format_wcnf, parse_wcnf, read_wcnf,
                           write_wcnf)

from conftest import worked


def test_hard_and_soft_split_by_top():
    inst = parse_wcnf("p wcnf 1 2 10\n10 1 0\n3 -1 0\n")
    assert inst.hard == ((1,),)
    assert inst.soft == (((-1,), 3),)


def test_example1_soft_weight_sum():
    inst = worked("example1")
    assert len(inst.soft) == 7 and len(inst.hard) == 5
    assert inst.weights == [5, 5, 10, 5, 10, 5, 10]
    assert inst.soft_weight_sum == 50


def test_empty_soft_clause_costs_its_weight_everywhere():
    inst = parse_wcnf("p wcnf 1 2 10\n4 0\n2 1 0\n")
    assert inst.soft[0] == ((), 4)
    assert cost_of(inst, {1: True}) == 4
    assert cost_of(inst, {1: False}) == 6


def test_comments_bytes_and_file_objects():
    text = "c hello\np wcnf 2 1 5\nc mid\n3 1 -2 0\n"
    assert parse_wcnf(text) == parse_wcnf(text.encode()) == parse_wcnf(io.StringIO(text))


def test_duplicate_clauses_are_kept():
    inst = parse_wcnf("p wcnf 1 2 9\n2 1 0\n2 1 0\n")
    assert inst.soft == (((1,), 2), ((1,), 2))


def test_clause_count_mismatch_is_a_warning():
    inst = parse_wcnf("p wcnf 1 3 9\n2 1 0\n")
    assert inst.warnings and "3" in inst.warnings[0]


@pytest.mark.parametrize("text, error", [
    ("1 1 0\n", MalformedHeader),
    ("p cnf 1 1\n1 0\n", MalformedHeader),
    ("p wcnf 1 1 5\n2 2 0\n", LiteralOutOfRange),
    ("p wcnf 1 1 5\n0 1 0\n", BadWeight),
    ("p wcnf 1 1 5\n6 1 0\n", BadWeight),
    ("p wcnf 1 1 5\n2 1\n", MissingTerminator),
    ("p wcnf 1 1 5\n2 1 0 1 0\n", MissingTerminator),
    (f"p wcnf 1 1 {2 ** 64}\n2 1 0\n", MalformedHeader),
    (f"p wcnf 1 2\n{2 ** 62} 1 0\n{2 ** 62} -1 0\n", BadWeight),
])
def test_parse_errors(text, error):
    with pytest.raises(error) as info:
        parse_wcnf(text)
    assert info.value.line >= 0


def test_error_reports_line_number():
    with pytest.raises(LiteralOutOfRange) as info:
        parse_wcnf("p wcnf 1 2 5\n2 1 0\n2 -3 0\n")
    assert info.value.line == 3


def test_cost_of_example1_optimum():
    inst = worked("example1")
    a = {1: False, 2: False, 3: True, 4: False, 5: True, 6: False}
    assert cost_of(inst, a) == 20


def test_cost_of_infeasible_and_zero():
    inst = worked("example1")
    assert cost_of(inst, {v: True for v in range(1, 7)}) is INFEASIBLE
    soft_only = WcnfInstance.build(2, [([1], 3), ([1, 2], 4)])
    assert cost_of(soft_only, {1: True, 2: False}) == 0


def test_cost_of_rejects_partial_assignment():
    with pytest.raises(ValueError):
        cost_of(worked("example1"), {1: True})


def test_brute_force_worked_optima():
    assert brute_force_optimum(worked("example1"))[0] == 20
    assert brute_force_optimum(worked("example1_unit"))[0] == 4
    assert brute_force_optimum(WcnfInstance.build(1, [], [[1], [-1]])) == (INFEASIBLE, None)


def test_brute_force_witness_is_optimal_and_lowest():
    inst = worked("example1")
    cost, witness = brute_force_optimum(inst)
    assert cost_of(inst, witness) == cost
    # the lowest-index optimum in enumeration order (variable 1 is the low bit)
    for idx in range(2 ** inst.num_vars):
        a = {v: bool(idx >> (v - 1) & 1) for v in range(1, inst.num_vars + 1)}
        if cost_of(inst, a) == cost:
            assert a == witness
            break


def test_write_is_atomic_and_round_trips(tmp_path):
    inst = worked("example1")
    path = tmp_path / "x.wcnf"
    write_wcnf(inst, path)
    assert read_wcnf(path) == inst
    assert [p.name for p in tmp_path.iterdir()] == ["x.wcnf"]


clauses = st.lists(st.integers(1, 6).flatmap(lambda v: st.sampled_from([v, -v])), min_size=0, max_size=4)


@st.composite
def instances(draw):
    soft = draw(st.lists(st.tuples(clauses, st.integers(1, 50)), max_size=8))
    hard = draw(st.lists(clauses.filter(bool), max_size=4))
    return WcnfInstance.build(6, soft, hard)


@settings(max_examples=150, deadline=None)
@given(instances())
def test_format_parse_round_trip(inst):
    assert parse_wcnf(format_wcnf(inst)) == inst


@settings(max_examples=60, deadline=None)
@given(instances())
def test_cost_properties(inst):
    opt, _ = brute_force_optimum(inst)
    for bits in itertools.product([False, True], repeat=inst.num_vars):
        a = dict(enumerate(bits, start=1))
        c = cost_of(inst, a)
        if c is INFEASIBLE:
            continue
        assert c >= 0
        assert (c == 0) == all(any(a[abs(l)] == (l > 0) for l in cl) for cl, _ in inst.soft)
        assert opt is not INFEASIBLE and opt <= c
