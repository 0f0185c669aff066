import math

import pytest
from hypothesis import given, strategies as st

from app.algorithms.toys import TOYS, Constant, ToyAlgorithm
from app.core.errors import GuardExceededError, PreconditionError, UnknownNameError, WaitFreedomError
from app.core.wsb import (
    apply_permutation,
    ExecutionRecord,
    binom_divisibility,
    build_family,
    check_input_family,
    class_report,
    classify,
    conjugate_input,
    count_report,
    enumerate_complete,
    equivalence_class,
    format_execution,
    sign,
    trim,
    univalued_signed_count,
)


class Stubborn(ToyAlgorithm):
    name = "stubborn"

    def next(self, state, snaps):
        return state


@pytest.mark.parametrize(
    "blocks, expected",
    [([{1}, {2}], 1), ([{1, 2}], -1), ([{1, 2}, {3, 4}], 1), ([{1, 2, 3}], 1), ([{1}, {2, 3}], -1)],
)
def test_sign_counts_even_blocks(blocks, expected):
    assert sign(blocks) == expected


def test_execution_record():
    record = ExecutionRecord(n=3, blocks=((1,), (2, 3)), outputs={1: 0, 2: 0, 3: 1})
    assert record.participating == {1, 2, 3}
    assert record.complete
    assert record.dec == {0, 1}
    assert record.sign == -1


@pytest.mark.parametrize("n, fubini", [(1, 1), (2, 3), (3, 13)])
def test_one_shot_executions_are_ordered_partitions(n, fubini):
    records = list(enumerate_complete(Constant(0), n))
    assert len(records) == fubini
    assert all(record.complete for record in records)
    assert len({record.blocks for record in records}) == fubini


@pytest.mark.parametrize(
    "name, n, expected",
    [
        ("const0", 2, 1),
        ("const1", 2, -1),
        ("seen1", 2, 1),
        ("id-parity", 2, 0),
        ("const0", 3, 1),
        ("const1", 3, 1),
        ("seen1", 3, -2),
        ("id-parity", 3, 0),
        ("second-look", 2, 1),
        ("second-look", 3, -2),
    ],
)
def test_trimming_keeps_the_signed_count(name, n, expected):
    algo = TOYS[name]()
    assert univalued_signed_count(algo, n) == expected
    assert univalued_signed_count(trim(algo, n), n) == expected


def test_trimmed_constant_on_two_processes():
    report = count_report(trim(Constant(1), 2), 2)
    assert report.algorithm == "trim(const1)"
    assert report.executions == 3
    # only the execution where both start together is univalued, on 0
    assert (report.c0, report.c1) == (1, 0)
    assert report.sum_c0 == -1


def test_second_look_runs_twice_per_process():
    for record in enumerate_complete(TOYS["second-look"](), 2):
        counts = {p: sum(p in block for block in record.blocks) for p in (1, 2)}
        assert counts == {1: 2, 2: 2}


def test_wait_freedom_violation():
    with pytest.raises(WaitFreedomError) as exc:
        count_report(Stubborn(), 1, step_bound=3)
    assert exc.value.blocks == [[1], [1], [1]]


def test_enumeration_guard():
    with pytest.raises(GuardExceededError):
        count_report(Constant(0), 4)
    with pytest.raises(PreconditionError):
        count_report(Constant(0), 0)


@pytest.mark.parametrize(
    "blocks, step, classes, size",
    [
        ([{1}, {2, 3}], 2, {1: 3, 2: 1, 3: 1}, 3),
        ([{1, 2, 3}], 1, {1: 1, 2: 1, 3: 1}, 1),
        ([{1}, {2}, {3}, {1}], 3, {1: 2, 2: 3, 3: 1}, 3),
    ],
)
def test_classification_and_class_size(blocks, step, classes, size):
    classification = classify(blocks, 3)
    assert classification.all_seen_step == step
    assert dict(classification.classes) == classes
    report = class_report(blocks, 3)
    assert report.class_size == size == math.comb(3, len(report.sim))


def test_equivalence_class_members():
    members = {blocks for blocks, _ in equivalence_class([{1}, {2, 3}], 3)}
    assert members == {((1,), (2, 3)), ((2,), (1, 3)), ((3,), (1, 2))}


def test_classify_needs_everyone():
    with pytest.raises(PreconditionError):
        classify([{1}], 2)


def test_equivalence_guard():
    with pytest.raises(GuardExceededError):
        equivalence_class([set(range(1, 8))], 7)


def test_conjugate_input_moves_and_renames():
    sigma = (((2,), "a"), ((1,), "b"))
    assert conjugate_input(sigma, {1: 2, 2: 1}) == (((2,), "b"), ((1,), "a"))


def test_format_execution():
    assert format_execution([{2, 1}, {3}]) == "{1,2} {3}"


def test_cycle_inputs_satisfy_the_family_condition():
    report = check_input_family(build_family("cycle", 5), 5, "cycle")
    assert report.size == 24
    assert report.order_invariant
    assert report.divisible is False
    assert report.passed


def test_k_ones_family_size_is_divisible():
    report = check_input_family(build_family("k-ones", 5, 2), 5, "k-ones")
    assert report.size == 10
    assert report.order_invariant
    assert report.divisible
    assert not report.passed


def test_leader_family_is_not_closed():
    report = check_input_family(build_family("leader", 3), 3, "leader")
    assert not report.order_invariant
    assert report.counterexample is not None
    assert not report.passed


def test_unknown_family():
    with pytest.raises(UnknownNameError):
        build_family("star", 3)


def test_binomial_divisibility():
    assert binom_divisibility(7).passed
    with pytest.raises(PreconditionError):
        binom_divisibility(6)


blocks_strategy = st.lists(st.frozensets(st.integers(min_value=1, max_value=6), min_size=1), max_size=5)


@given(first=blocks_strategy, second=blocks_strategy)
def test_sign_is_multiplicative_over_concatenation(first, second):
    assert sign(first + second) == sign(first) * sign(second)


@pytest.mark.parametrize("blocks", [[{1}, {2, 3}], [{2}, {1}, {3}], [{1, 2}, {3}, {1}]])
def test_equivalent_executions_share_their_sign(blocks):
    assert {sign(members) for members, _ in equivalence_class(blocks, 3)} == {sign(blocks)}


@pytest.mark.parametrize("name", sorted(TOYS))
def test_trimmed_algorithms_never_agree_on_one_for_two_processes(name):
    assert count_report(trim(TOYS[name](), 2), 2).c1 == 0


def test_permutation_renames_inside_blocks():
    assert apply_permutation([{1}, {2, 3}], {1: 3, 2: 1, 3: 2}) == ((3,), (1, 2))


def test_class_size_law_over_every_enumerated_execution():
    records = list(enumerate_complete(TOYS["second-look"](), 3))
    assert len(records) > 13
    for record in records:
        report = class_report(record.blocks, 3)
        assert report.class_size == math.comb(3, len(report.sim)), record.blocks
