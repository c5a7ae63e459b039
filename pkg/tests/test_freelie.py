import itertools
from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given, settings, strategies as st

from conftest import naive_rank
from utpi import presets
from utpi.freelie import (
    Bracket,
    GradedVariable,
    MultilinearPolynomial,
    NotMultilinearError,
    TRIVIAL_GROUP,
    alternating_sum,
    expand_to_associative,
    family_1_convenient,
    family_au_basis,
    family_counts_remaining,
    family_kind1,
    family_kind2,
    family_t2canonical_basis,
    fixed_first_basis,
    from_coordinates,
    group_algebra_action,
    left_normed,
    lie_coordinates,
    permutation_action,
)
from utpi.group import GroupSpec
from utpi.spaces import degree_multisets, dim_Pma

E = TRIVIAL_GROUP.identity()


def x(i, d=E):
    return GradedVariable(i, d)


def P(m):
    return MultilinearPolynomial.monomial(m)


def test_left_normed():
    assert left_normed([x(1), x(2)]) == Bracket(x(1), x(2))
    assert left_normed([x(1), x(2), x(3)]) == Bracket(Bracket(x(1), x(2)), x(3))
    assert left_normed([x(1)]) == x(1)
    assert str(left_normed([x(1), x(2), x(3)])) == "[x1^(0), x2^(0), x3^(0)]"


def _words(f):
    return {tuple(v.index for v in w): c for w, c in expand_to_associative(f).items()}


def test_expansion_examples():
    assert _words(P(Bracket(x(1), x(2)))) == {(1, 2): 1, (2, 1): -1}
    assert _words(P(left_normed([x(1), x(2), x(3)]))) == {(1, 2, 3): 1, (2, 1, 3): -1, (3, 1, 2): -1, (3, 2, 1): 1}
    f = P(Bracket(Bracket(x(1), x(2)), Bracket(x(3), x(4))))
    w = _words(f)
    assert len(w) == 8
    g = P(Bracket(Bracket(x(3), x(4)), Bracket(x(1), x(2))))
    assert _words(g) == {k: -v for k, v in w.items()}


def test_multilinearity_validation():
    with pytest.raises(NotMultilinearError):
        P(Bracket(x(1), x(1))).variables()
    with pytest.raises(NotMultilinearError):
        (P(Bracket(x(1), x(2))) + P(Bracket(x(1), x(3)))).variables()


def test_fixed_first_rank():
    for m in range(1, 7):
        vs = [x(i) for i in range(1, m + 1)]
        basis = fixed_first_basis(vs)
        assert len(basis) == factorial(m - 1)
        words = sorted({w for b in basis for w in expand_to_associative(b)}, key=str)
        col = {w: k for k, w in enumerate(words)}
        rows = []
        for b in basis:
            r = [0] * len(words)
            for w, c in expand_to_associative(b).items():
                r[col[w]] = c
            rows.append(r)
        if m <= 5:
            assert naive_rank(rows) == factorial(m - 1)
        coords = [lie_coordinates(b, vs) for b in basis]
        assert coords == [{k: 1} for k in range(len(basis))]


def _random_monomial(draw, items):
    if len(items) == 1:
        return items[0]
    k = draw(st.integers(1, len(items) - 1))
    return Bracket(_random_monomial(draw, items[:k]), _random_monomial(draw, items[k:]))


@st.composite
def polynomials(draw, m=4):
    vs = [x(i) for i in range(1, m + 1)]
    f = MultilinearPolynomial.zero()
    for _ in range(draw(st.integers(1, 4))):
        perm = draw(st.permutations(vs))
        c = Fraction(draw(st.integers(-3, 3)), draw(st.integers(1, 3)))
        f = f + P(_random_monomial(draw, list(perm))).scale(c)
    return f, vs


@settings(max_examples=100, deadline=None)
@given(polynomials())
def test_coordinates_round_trip(data):
    f, vs = data
    coords = lie_coordinates(f, vs) if not f.is_zero() else {}
    g = from_coordinates(coords, vs)
    # equal as Lie elements: identical associative expansions
    assert expand_to_associative(f) == expand_to_associative(g) if not f.is_zero() else not coords


def test_permutation_action():
    t = GroupSpec(0, (2,), ("t",)).generator("t")
    zero = t.owner.identity()
    y = lambda i: GradedVariable(i, zero)
    z = lambda i: GradedVariable(i, t)
    f = P(left_normed([y(1), z(1), z(2), y(2), z(3)]))
    tau = [(1, {}), (-1, {2: 3, 3: 2})]
    got = group_algebra_action(tau, f, t)
    want = f - P(left_normed([y(1), z(1), z(3), y(2), z(2)]))
    assert got == want
    assert permutation_action({}, f, t) == f
    alt = alternating_sum(P(left_normed([y(1), z(1), z(2), z(3)])), t, [1, 2, 3])
    assert len(alt.terms) == 6
    assert sorted(alt.terms.values()) == [-1, -1, -1, 1, 1, 1]
    with pytest.raises(ValueError):
        permutation_action({5: 6, 6: 5}, f, t)


def test_one_convenient():
    assert family_1_convenient(2) == [Bracket(x(2), x(1))]
    assert family_1_convenient(3) == [left_normed([x(2), x(1), x(3)]), left_normed([x(3), x(1), x(2)])]
    for m in range(2, 9):
        assert len(family_1_convenient(m)) == m - 1


def test_kind_counts():
    Z = GroupSpec(1, (), ("g",))
    g, one = Z.generator("g"), Z.identity()
    assert len(family_kind1(3, g, one)) == 0
    # the double sum gives 1 at m = 4, and so does enumeration
    assert len(family_kind1(4, g, one)) == 1 == 4 * 2 - 8 + 1
    assert len(family_kind1(5, g, one)) == 5
    for m in range(3, 10):
        k1 = len(family_kind1(m, g, one))
        k2 = len(family_kind2(m, g, one))
        assert k1 == Fraction(m * 2 ** m - 4 * 2 ** m, 8) + 1
        assert k2 == Fraction(m * 2 ** m - 2 * 2 ** m, 8)
        assert (k1, k2) == family_counts_remaining(m)
        assert k2 == sum(i * comb(m - 2, i) for i in range(1, m - 1))
    assert len(family_kind2(3, g, one)) == 1
    assert len(family_kind2(2, g, one)) == 0


def test_au_family():
    Z = GroupSpec(1, (), ("g",))
    g = Z.generator("g")
    fam = family_au_basis((g, -g), g)
    assert fam == [Bracket(GradedVariable(1, g), GradedVariable(2, -g))]


@pytest.mark.parametrize("key,almost", [("canonical-t2", False), ("almost-canonical-t2", True)])
def test_t2_family_sizes_match_dimensions(key, almost):
    alg = presets.get(key).algebra()
    G = alg.group
    one, t = G.generator("1"), G.generator("t")
    support = list(alg.support)
    for m in range(1, 6):
        for rep in degree_multisets(support, m):
            fam = family_t2canonical_basis(rep, one, t, almost=almost)
            assert len(fam) == dim_Pma(alg, rep), (m, [str(d) for d in rep])
