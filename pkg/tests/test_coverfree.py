import itertools

import pytest

from app.core.coverfree import (
    CoverFreeFamily,
    choose_parameters,
    construct_family,
    dump_family,
    find_cover,
    reduction_schedule,
    verify_coverfree,
    verify_coverfree_brute,
)
from app.core.errors import GuardExceededError, PreconditionError
from app.core.fields import get_field


def test_twenty_five_colours_for_two_neighbors():
    fam = construct_family(2, 25)
    assert (fam.d, fam.q, fam.ground_size) == (2, 5, 25)
    assert fam.size == 25
    assert all(len(s) == 5 for s in fam.sets)
    assert all(1 <= e <= 25 for s in fam.sets for e in s)
    assert verify_coverfree(fam)


def test_sixteen_bit_identifiers():
    fam = construct_family(2, 65536)
    assert fam.q == 11
    assert fam.d == 5
    assert fam.ground_size == 121


def test_choose_parameters_prefers_smallest_field():
    assert choose_parameters(2, 25) == (2, 5)
    assert choose_parameters(1, 2) == (1, 2)
    with pytest.raises(PreconditionError):
        choose_parameters(0, 5)


def test_one_cover_free_pair_is_incomparable():
    fam = construct_family(1, 2)
    a, b = fam.sets
    assert not a <= b and not b <= a


def test_colours_are_numbered_from_one():
    fam = construct_family(2, 25)
    assert fam.image(1) == fam.sets[0]
    with pytest.raises(PreconditionError):
        fam.image(0)
    with pytest.raises(PreconditionError):
        fam.image(26)


def test_construction_is_deterministic():
    construct_family.cache_clear()
    first = construct_family(3, 40)
    construct_family.cache_clear()
    assert construct_family(3, 40) == first


@pytest.mark.parametrize(
    "sets, k, expected",
    [
        (({1}, {1, 2}), 1, False),
        (({1}, {2}, {3}), 2, True),
        (({1, 2}, {2, 3}, {1, 3}), 2, False),
        (({1, 2}, {2, 3}, {1, 3}), 1, True),
    ],
)
def test_verify_small_families(sets, k, expected):
    fam = CoverFreeFamily(k=k, ground_size=3, sets=tuple(frozenset(s) for s in sets))
    assert verify_coverfree(fam) is expected
    assert verify_coverfree_brute(fam) is expected


def test_find_cover_returns_witness():
    fam = CoverFreeFamily(k=2, ground_size=3, sets=(frozenset({1, 2}), frozenset({2, 3}), frozenset({1, 3})))
    witness = find_cover(fam)
    covered, *others = witness
    assert fam.image(covered) <= frozenset().union(*(fam.image(c) for c in others))
    assert len(others) <= 2


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("m", [2, 7, 16, 25, 60])
def test_constructed_families_agree_with_brute_force(k, m):
    fam = construct_family(k, m)
    assert verify_coverfree(fam)
    assert verify_coverfree_brute(fam)


@pytest.mark.slow
@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("m", [3, 49, 97, 150, 200])
def test_constructed_families_are_cover_free_up_to_200(k, m):
    assert verify_coverfree(construct_family(k, m))


def test_brute_force_guard(monkeypatch):
    from app.core.config import settings

    monkeypatch.setattr(settings, "BRUTE_FORCE_LIMIT", 10)
    with pytest.raises(GuardExceededError):
        verify_coverfree_brute(construct_family(2, 25))


@pytest.mark.parametrize(
    "n, sizes",
    [
        (65536, (65536, 121, 25)),
        (10_000, (10_000, 81, 25)),
        (1_000_000, (1_000_000, 121, 25)),
        (25, (25,)),
    ],
)
def test_reduction_schedule_for_cycles(n, sizes):
    schedule = reduction_schedule(n, 2)
    assert schedule.sizes == sizes
    assert schedule.rounds == len(sizes) - 1
    assert schedule.final_palette == 25
    for before, fam, after in zip(schedule.sizes, schedule.families, schedule.sizes[1:]):
        assert fam.size >= before
        assert fam.ground_size == after


@pytest.mark.parametrize("delta, fixed_point", [(3, 49), (4, 81), (5, 121), (6, 169)])
def test_reduction_fixed_points(delta, fixed_point):
    schedule = reduction_schedule(10_000, delta)
    assert schedule.final_palette == fixed_point
    assert fixed_point <= 9 * (delta + 1) ** 2


def test_reduction_schedule_preconditions():
    with pytest.raises(PreconditionError):
        reduction_schedule(1, 2)
    with pytest.raises(PreconditionError):
        reduction_schedule(100, 0)


def test_dump_family(tmp_path):
    target = tmp_path / "family.txt"
    dump_family(construct_family(2, 25), target)
    lines = target.read_text().splitlines()
    assert lines[0] == "k=2 m=25 d=2 q=5 ground_size=25"
    assert len(lines) == 26
    assert lines[1].startswith("1: ")


def test_sets_follow_lexicographic_coefficient_order():
    fam = construct_family(2, 25)
    gf = get_field(5)
    expected = [
        frozenset(x * 5 + gf.evaluate(coefficients, x) + 1 for x in gf.elements())
        for coefficients in itertools.islice(itertools.product(gf.elements(), repeat=3), 25)
    ]
    assert list(fam.sets) == expected
    assert fam.coefficients(1) == (0, 0, 0)
    assert fam.coefficients(25) == (0, 4, 4)


def test_large_family_answers_single_colours_without_listing():
    fam = construct_family(2, 10**6)
    assert (fam.q, fam.d, fam.size) == (11, 5, 10**6)
    assert fam.coefficients(10**6) == (6, 2, 3, 3, 5, 0)
    assert len(fam.image(10**6)) == 11
    with pytest.raises(GuardExceededError):
        fam.sets
