from fractions import Fraction

import pytest

from errors import PreconditionError
from classes import (
    ClassFunction,
    cycle_types,
    identity_delta,
    l2_norm_exact,
    normalized_class_indicator,
    normalized_set_indicator,
)
from mixing import (
    bruteforce_l2_distance,
    covered_classes,
    covers_group,
    lower_bound_report,
    lower_bound_walk,
    mixing_profile,
    mixing_time,
    multi_convolution_distance,
    multi_convolution_report,
    non_mixer_class,
    non_mixer_report,
    product_mixing,
    spectral_l2_distance,
    triple_expectation_bruteforce,
    two_step_family_report,
    two_step_return,
    walk_eigenvalues,
)
from conftest import random_walk


def test_uniform_walk_is_mixed():
    assert spectral_l2_distance(ClassFunction.constant(5), 1).squared == 0
    assert spectral_l2_distance(ClassFunction.constant(5, "A"), 3).squared == 0


def test_identity_walk_never_moves():
    assert spectral_l2_distance(identity_delta(5), 1).squared == 119
    assert spectral_l2_distance(identity_delta(5), 4).squared == 119
    assert spectral_l2_distance(identity_delta(5, "A"), 2).squared == 59


def test_walk_must_be_normalized():
    with pytest.raises(PreconditionError):
        spectral_l2_distance(ClassFunction.constant(4, "S", 2), 1)
    with pytest.raises(PreconditionError):
        spectral_l2_distance(identity_delta(4), 0)


def _check_seeded_walks(n, group, rng, walks=25, max_steps=4):
    for _ in range(walks):
        f = random_walk(n, group, rng)
        for steps in range(1, max_steps + 1):
            assert spectral_l2_distance(f, steps) == bruteforce_l2_distance(f, steps)


@pytest.mark.parametrize("group", ["S", "A"])
@pytest.mark.parametrize("n", [3, 4, 5])
def test_seeded_walks_match_double_sum(n, group, rng):
    _check_seeded_walks(n, group, rng)


@pytest.mark.slow
@pytest.mark.parametrize("group", ["S", "A"])
@pytest.mark.parametrize("n", [6, 7, 8])
def test_seeded_walks_match_double_sum_large(n, group, rng):
    _check_seeded_walks(n, group, rng)


@pytest.mark.slow
def test_long_cycle_walk_on_s8():
    f = normalized_class_indicator((8,))
    assert spectral_l2_distance(f, 2) == bruteforce_l2_distance(f, 2)
    assert spectral_l2_distance(f, 3).squared >= 1


def test_distances_never_increase(rng):
    for group in ("S", "A"):
        f = random_walk(6, group, rng)
        distances = [d.squared for d in mixing_profile(f, 8).distances]
        assert all(a >= b for a, b in zip(distances, distances[1:]))


def test_l1_profile():
    profile = mixing_profile(identity_delta(4), 2, p=1)
    assert profile.distances == [Fraction(23, 12)] * 2
    assert profile.to_json()["squared"] is False
    with pytest.raises(PreconditionError):
        mixing_profile(identity_delta(4), 2, p=3)


def test_mixing_time_is_monotone_in_epsilon():
    f = normalized_class_indicator((3, 1, 1), "A")
    loose = mixing_time(f, 0.5)
    tight = mixing_time(f, 0.1)
    assert loose is not None and tight is not None
    assert loose <= tight
    assert mixing_profile(f, tight).first_below(0.1) == tight
    assert mixing_time(f, 0.5, p=1) is not None


def test_mixing_time_cap():
    assert mixing_time(identity_delta(5, "A"), 1e-3, cap=3) is None


def test_two_step_return():
    result = two_step_return(identity_delta(4))
    assert result.at_identity == 24
    assert result.norm_squared == 24
    f = normalized_class_indicator((3, 1, 1, 1), "A")
    result = two_step_return(f)
    assert result.at_identity == l2_norm_exact(f)
    assert result.distance == spectral_l2_distance(f, 2)


def test_two_step_family():
    report = two_step_family_report(7)
    densities = [row["density"] for row in report["rows"]]
    assert densities == sorted(densities)
    assert isinstance(report["monotone"], bool)


def test_multi_convolution(rng):
    f = random_walk(5, "A", rng)
    g = random_walk(5, "A", rng)
    assert multi_convolution_distance([f]) == spectral_l2_distance(f, 1)
    assert multi_convolution_distance([f, f, f]) == spectral_l2_distance(f, 3)
    assert multi_convolution_distance([f, g]) == multi_convolution_distance([g, f])
    with pytest.raises(PreconditionError):
        multi_convolution_distance([])
    with pytest.raises(PreconditionError):
        multi_convolution_distance([f, random_walk(5, "S", rng)])


def test_multi_convolution_report():
    f = normalized_class_indicator((5,), "A")
    report = multi_convolution_report([f, f, f], 0.5)
    assert report["steps"] == 3
    assert len(report["alphas"]) == 3
    assert report["agrees"] == (report["within_budget"] == report["mixed"])


def test_lower_bound_walk():
    assert lower_bound_walk(9, 2) == (5, 1, 1, 1, 1)
    assert lower_bound_walk(30, 3) == (21,) + (1,) * 9
    with pytest.raises(PreconditionError):
        lower_bound_walk(3, 2)
    with pytest.raises(PreconditionError):
        lower_bound_walk(9, 1)


def test_lower_bound_report():
    report = lower_bound_report(9, 2)
    assert report["type"] == (5, 1, 1, 1, 1)
    assert report["density"] == Fraction(2, 120)
    assert report["non_increasing"]


def test_product_mixing_extremes():
    everything = list(cycle_types(5, "A"))
    lhs, terms = product_mixing(everything, everything, everything)
    assert lhs == 0
    assert terms == []
    identity = [(1, 1, 1, 1, 1)]
    lhs, _ = product_mixing(identity, identity, identity)
    assert lhs == 59


@pytest.mark.parametrize("group", ["S", "A"])
def test_product_mixing_matches_triple_enumeration(group):
    a, b, c = [(3, 1, 1)], [(5,), (3, 1, 1)], [(2, 2, 1)]
    lhs, terms = product_mixing(a, b, c, group)
    f, g, h = (normalized_set_indicator(x, group) for x in (a, b, c))
    assert lhs + 1 == triple_expectation_bruteforce(f, g, h)
    assert sum(term.term for term in terms) == lhs


def test_non_mixer_class():
    assert non_mixer_class(8) == ((3, 1, 1, 1, 1, 1), 2)
    ct, cube = non_mixer_class(27)
    assert cube == 3
    assert (27 - ct.fixed_points) % 2 == 1
    assert 2 * cube <= ct.fixed_points <= 27 - cube - 1


@pytest.mark.parametrize("n", range(8, 13))
def test_non_mixer_low_level_terms_are_nonnegative(n):
    report = non_mixer_report(n)
    assert report["low_level_terms"] > 0
    assert report["fixed_points"] >= 2 * report["level_cap"]


@pytest.mark.slow
@pytest.mark.parametrize("n", range(13, 17))
def test_non_mixer_larger(n):
    assert non_mixer_report(n)["low_level_terms"] > 0


@pytest.mark.parametrize("group, order", [("S", 120), ("A", 60)])
def test_walk_spectrum(group, order):
    ct = (3, 1, 1)
    spectrum = walk_eigenvalues(ct, group)
    assert sum(e.multiplicity for e in spectrum) == order
    assert spectrum[0].ratio == 1
    assert all(abs(e.ratio) <= 1 for e in spectrum)


def test_transposition_spectrum():
    spectrum = {e.label: e.ratio for e in walk_eigenvalues((2, 1, 1, 1))}
    assert spectrum[(4, 1)] == Fraction(1, 2)
    assert spectrum[(1, 1, 1, 1, 1)] == -1


def test_covering():
    three_cycles = [(3, 1, 1)]
    assert covers_group(three_cycles, 2)
    assert not covers_group(three_cycles, 1)
    assert covered_classes(three_cycles, 1) == [(3, 1, 1)]
    with pytest.raises(PreconditionError):
        covers_group([], 2)
