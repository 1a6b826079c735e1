from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from errors import PreconditionError
from partitions import conjugate, dimension, partitions_of
from classes import cycle_types, density, sign
from characters import (
    CharacterEvaluator,
    an_character_value,
    branching_multiplicities,
    character_ratio,
    character_table,
    mn_long_cycle_value,
    mn_value,
    rim_hooks,
)
from oracles import gram_schmidt_characters, standard_power


def test_rim_hooks():
    assert rim_hooks((3, 1), 2) == [((1, 1), 0)]
    assert sorted(rim_hooks((2, 2), 2)) == [((1, 1), 1), ((2,), 0)]


@pytest.mark.parametrize("n", range(1, 9))
def test_recursion_matches_permutation_character_oracle(n):
    expected = gram_schmidt_characters(n)
    for lam in partitions_of(n):
        for ct in cycle_types(n):
            assert mn_value(lam, ct) == expected[lam][ct]


@pytest.mark.parametrize("n", range(3, 8))
def test_standard_tensor_powers_decompose_into_characters(n):
    seen = set()
    for k in range(n):
        power = standard_power(n, k)
        rebuilt = {ct: Fraction(0) for ct in cycle_types(n)}
        for lam in partitions_of(n):
            mult = sum((density(ct) * power[ct] * mn_value(lam, ct) for ct in cycle_types(n)), Fraction(0))
            assert mult.denominator == 1 and mult >= 0
            if mult:
                seen.add(lam)
                for ct in rebuilt:
                    rebuilt[ct] += mult * mn_value(lam, ct)
        assert rebuilt == power
    assert seen == set(partitions_of(n))



def _check_orthogonality(n):
    table = character_table(n)
    rho = [density(ct) for ct in table.cols]
    for i, a in enumerate(table.values):
        for j, b in enumerate(table.values):
            inner = sum((r * x * y for r, x, y in zip(rho, a, b)), Fraction(0))
            assert inner == (1 if i == j else 0)


@pytest.mark.parametrize("n", range(1, 9))
def test_row_orthogonality(n):
    _check_orthogonality(n)


@pytest.mark.slow
@pytest.mark.parametrize("n", [9, 10])
def test_row_orthogonality_large(n):
    _check_orthogonality(n)


def _check_column_orthogonality(n):
    table = character_table(n)
    for a, ct in enumerate(table.cols):
        for b in range(len(table.cols)):
            total = sum(row[a] * row[b] for row in table.values)
            assert total == (1 / density(ct) if a == b else 0)


@pytest.mark.parametrize("n", range(1, 9))
def test_column_orthogonality(n):
    _check_column_orthogonality(n)


@pytest.mark.slow
@pytest.mark.parametrize("n", [9, 10])
def test_column_orthogonality_large(n):
    _check_column_orthogonality(n)


@pytest.mark.slow
@pytest.mark.parametrize("n", [11, 12])
def test_row_orthogonality_on_random_pairs(n, rng):
    table = character_table(n)
    rho = [density(ct) for ct in table.cols]
    size = len(table.rows)
    for _ in range(100):
        i, j = rng.randrange(size), rng.randrange(size)
        inner = sum((r * x * y for r, x, y in zip(rho, table.values[i], table.values[j])), Fraction(0))
        assert inner == (1 if i == j else 0)


@given(st.data())
@settings(max_examples=200, deadline=None)
def test_conjugate_twists_by_sign(data):
    n = data.draw(st.integers(min_value=1, max_value=8))
    lam = data.draw(st.sampled_from(list(partitions_of(n))))
    ct = data.draw(st.sampled_from(list(cycle_types(n))))
    assert mn_value(conjugate(lam), ct) == sign(ct) * mn_value(lam, ct)


def test_standard_character_counts_fixed_points():
    assert mn_value((14, 1), (15,)) == -1
    assert mn_value((11, 1), (2,) + (1,) * 10) == 9
    assert character_ratio((11, 1), (2,) + (1,) * 10) == Fraction(9, 11)


def test_sign_character():
    for ct in cycle_types(6):
        assert mn_value((1,) * 6, ct) == (-1) ** sum(p - 1 for p in ct)


def test_size_mismatch():
    with pytest.raises(PreconditionError):
        mn_value((3, 1), (2, 1))


def test_long_cycle_identity():
    assert mn_long_cycle_value((8, 2), 4) == 2
    assert mn_long_cycle_value((8, 2), 10) == dimension((8, 2))
    assert mn_long_cycle_value((12, 2, 1), 6, cycles=[5, 4]) == dimension((3, 2, 1))
    with pytest.raises(PreconditionError):
        mn_long_cycle_value((8, 2), 3)
    with pytest.raises(PreconditionError):
        mn_long_cycle_value((8, 2), 4, cycles=[4, 2])


def test_branching():
    assert branching_multiplicities((2, 1), 1) == {(2,): 1, (1, 1): 1}
    for lam in partitions_of(7):
        for m in range(4):
            mult = branching_multiplicities(lam, m)
            assert sum(c * dimension(mu) for mu, c in mult.items()) == dimension(lam)
    with pytest.raises(PreconditionError):
        branching_multiplicities((2, 1), 4)


def test_alternating_values():
    assert an_character_value((3, 1), (3, 1)) == 0
    with pytest.raises(PreconditionError):
        an_character_value((2, 2), (3, 1))
    with pytest.raises(PreconditionError):
        an_character_value((3, 1), (2, 1, 1))


def test_memo_cap_resets_without_changing_values():
    small = CharacterEvaluator(memo_cap=4, shards=1)
    for lam in partitions_of(9):
        for ct in cycle_types(9):
            assert small.value(lam, ct) == mn_value(lam, ct)
    assert small.resets > 0


def test_memo_persistence(tmp_path):
    ev = CharacterEvaluator(shards=2)
    for lam in partitions_of(7):
        ev.value(lam, (3, 2, 2))
    path = tmp_path / "memo.pickle"
    saved = ev.save(path, version=3)
    assert saved == len(ev) > 0

    fresh = CharacterEvaluator(shards=4)
    assert fresh.load(path, version=3) == saved
    assert fresh.load(path, version=4) == 0
    assert fresh.load(tmp_path / "missing.pickle", version=3) == 0

    path.write_bytes(b"\x00\x01 not a pickle")
    assert CharacterEvaluator().load(path, version=3) == 0


def test_table_cap(config_override):
    config_override(characters={"table_cap": 5})
    with pytest.raises(PreconditionError):
        character_table(6)


def test_table_csv():
    table = character_table(3)
    lines = table.to_csv().splitlines()
    assert lines[0] == "lambda,3,\"2,1\",\"1,1,1\""
    assert table.value((2, 1), (1, 1, 1)) == 2
    assert table.row((1, 1, 1))[(2, 1)] == -1
