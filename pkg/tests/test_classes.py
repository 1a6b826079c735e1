import math
from collections import Counter
from fractions import Fraction

import pytest

from errors import PreconditionError
from classes import (
    ClassFunction,
    CycleType,
    an_split_classes,
    check_group,
    class_size,
    compose,
    cycle_lengths,
    cycle_types,
    density,
    derangements,
    identity_delta,
    inverse,
    l2_norm_exact,
    lp_norm,
    lp_norm_power_exact,
    normalized_class_indicator,
    normalized_set_indicator,
    permutations,
    rencontres,
    representative,
)
from conftest import random_class_function


def test_class_sizes_of_s4():
    assert class_size((1, 1, 1, 1)) == 1
    assert class_size((2, 1, 1)) == 6
    assert class_size((2, 2)) == 3
    assert class_size((3, 1)) == 8
    assert class_size((4,)) == 6


@pytest.mark.parametrize("group", ["S", "A"])
@pytest.mark.parametrize("n", range(2, 10))
def test_densities_sum_to_one(n, group):
    assert sum(density(ct, group) for ct in cycle_types(n, group)) == 1


def test_alternating_densities():
    assert density((2, 2), "A") == Fraction(1, 4)
    assert all(sum(p - 1 for p in ct) % 2 == 0 for ct in cycle_types(7, "A"))


def test_split_classes():
    assert an_split_classes(8) == [(7, 1), (5, 3)]
    assert an_split_classes(5) == [(5,)]


@pytest.mark.parametrize("group", ["S", "A"])
def test_enumeration_matches_class_sizes(group):
    counts = Counter(CycleType(cycle_lengths(p)) for p in permutations(5, group))
    assert counts == {ct: class_size(ct) for ct in cycle_types(5, group)}


def test_cycle_type_parse_ignores_order():
    assert CycleType.parse("1,1,1,9") == CycleType((9, 1, 1, 1))
    assert isinstance(CycleType.parse("2,3"), CycleType)
    for text in ("0,3", "a,3"):
        with pytest.raises(PreconditionError):
            CycleType.parse(text)


def test_permutation_helpers():
    for ct in cycle_types(6):
        perm = representative(ct)
        assert CycleType.of_permutation(perm) == ct
        assert compose(perm, inverse(perm)) == tuple(range(6))


def test_rencontres_and_derangements():
    assert derangements(4) == 9
    assert rencontres(5, 3) == 10
    assert rencontres(5, 6) == 0
    for n in range(8):
        assert sum(rencontres(n, k) for k in range(n + 1)) == math.factorial(n)


def test_group_tags():
    with pytest.raises(PreconditionError):
        check_group("B")
    with pytest.raises(PreconditionError):
        check_group("A", 1)
    assert check_group("A", 2) == "A"


def test_class_function_is_immutable():
    f = ClassFunction.constant(4)
    with pytest.raises(AttributeError):
        f.n = 5


def test_class_function_rejects_odd_classes_on_an():
    with pytest.raises(PreconditionError):
        ClassFunction(4, "A", {(2, 1, 1): 1})
    with pytest.raises(PreconditionError):
        normalized_class_indicator((2, 1, 1), "A")


def test_class_function_size_and_tag_checks():
    with pytest.raises(PreconditionError):
        ClassFunction(4, "S", {(2, 1): 1})
    with pytest.raises(PreconditionError):
        ClassFunction.constant(4, "S") + ClassFunction.constant(4, "A")


def test_class_function_arithmetic(rng):
    f = random_class_function(6, "S", rng)
    g = random_class_function(6, "S", rng)
    assert (f + g) - g == f
    assert f.scale(0) == ClassFunction(6, "S")
    assert f.inner(g) == g.inner(f)
    assert ClassFunction.from_json(f.to_json()) == f


def test_indicators_are_normalized():
    assert normalized_class_indicator((3, 1, 1), "A").mean() == 1
    both = normalized_set_indicator([(3, 1, 1), (5,)], "A")
    assert both.mean() == 1
    assert both((3, 1, 1)) == both((5,))
    with pytest.raises(PreconditionError):
        normalized_set_indicator([])
    with pytest.raises(PreconditionError):
        normalized_set_indicator([(3, 1), (5,)])


def test_norms():
    delta = identity_delta(5)
    assert l2_norm_exact(delta) == 120
    assert lp_norm_power_exact(delta, 1) == 1
    assert lp_norm(ClassFunction.constant(5), 3) == pytest.approx(1.0)
    assert lp_norm(ClassFunction.constant(5), 2.5) == pytest.approx(1.0)
    with pytest.raises(PreconditionError):
        lp_norm(delta, 0.5)
    with pytest.raises(PreconditionError):
        lp_norm_power_exact(delta, 2.0)
