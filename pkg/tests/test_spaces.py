import itertools

import pytest

from utpi import presets
from utpi.spaces import (
    codimension,
    codimension_sequence,
    degree_multisets,
    dim_Pma,
    multinomial,
    permutation_invariance_check,
    spanning_monomials,
)

# brute-force sequences for m = 1..5, computed once and frozen
FROZEN = {
    "universal3": [4, 8, 21, 60, 175],
    "almost-universal3": [3, 7, 20, 59, 174],
    "canonical3": [3, 5, 12, 32, 90],
    "almost-canonical3": [2, 4, 11, 31, 89],
    "remaining3": [2, 3, 8, 27, 94],
    "trivial3": [1, 1, 2, 6, 24],
    "canonical-z3": [3, 5, 12, 32, 90],
    "canonical-t2": [5, 12, 39, 116, 325],
    "almost-canonical-t2": [4, 12, 39, 116, 325],
    "trivial-t2": [2, 4, 16, 64, 208],
    "ut2-graded": [2, 2, 3, 4, 5],
    "ut2-trivial": [1, 1, 2, 3, 4],
}


def _alg(key):
    return presets.get(key).algebra()


def test_spanning_monomials():
    alg = _alg("trivial3")
    z = alg.group.identity()
    assert [str(m) for m in spanning_monomials((z, z))] == ["[x1^(0), x2^(0)]"]
    assert len(spanning_monomials((z,) * 3)) == 2
    assert len(spanning_monomials((z,) * 4)) == 6
    with pytest.raises(ValueError):
        spanning_monomials(())


def test_dim_examples():
    rem = _alg("remaining3")
    one, g = rem.group.identity(), rem.group.generator("g")
    for m in (3, 4, 5):
        assert dim_Pma(rem, (one,) * m) == m - 1
    assert dim_Pma(rem, (one, g)) == 1
    uni = _alg("universal3")
    assert dim_Pma(uni, (uni.group.identity(),) * 2) == 0
    assert dim_Pma(uni, (uni.group.element([2, 0]),)) == 0


def test_codim_examples():
    assert codimension(_alg("almost-canonical3"), 2).total == 4
    assert codimension(_alg("canonical-t2"), 1).total == 5
    assert codimension(_alg("almost-universal3"), 2).total == 7


@pytest.mark.parametrize("key", sorted(FROZEN))
def test_frozen_sequences(key):
    assert codimension_sequence(_alg(key), 5) == FROZEN[key]


def test_multisets_and_counts():
    alg = _alg("universal3")
    reps = degree_multisets(alg.support, 3)
    assert len(reps) == 20
    assert sum(multinomial(r) for r in reps) == 4 ** 3


def test_workers_do_not_change_report():
    alg = _alg("canonical-t2")
    a = codimension(alg, 4, workers=1).to_json()
    b = codimension(alg, 4, workers=3).to_json()
    assert a == b


INVARIANCE = ["universal3", "almost-universal3", "canonical3", "almost-canonical3", "remaining3", "trivial3",
              "canonical-z3", "canonical-t2", "almost-canonical-t2", "trivial-t2", "ut2-graded"]


@pytest.mark.parametrize("key", INVARIANCE)
def test_permutation_invariance_exhaustive(key):
    alg = _alg(key)
    for m in range(1, 5):
        for degrees in itertools.product(alg.support, repeat=m):
            for sigma in itertools.permutations(range(m)):
                assert permutation_invariance_check(alg, degrees, sigma)


def test_permutation_examples():
    rem = _alg("remaining3")
    one, g = rem.group.identity(), rem.group.generator("g")
    assert dim_Pma(rem, (g, one, one)) == dim_Pma(rem, (one, g, one))
    uni = _alg("universal3")
    gg, hh = uni.group.generator("g"), uni.group.generator("h")
    assert dim_Pma(uni, (gg, hh)) == dim_Pma(uni, (hh, gg))
    with pytest.raises(ValueError):
        permutation_invariance_check(rem, (g, one), (0, 0))
