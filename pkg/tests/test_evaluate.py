import pytest

from conftest import naive_dim
from utpi import presets
from utpi.dsl import parse_polynomial
from utpi.evaluate import (
    CapExceeded,
    EvaluationError,
    evaluate_monomial,
    evaluate_polynomial,
    evaluation_rank,
    find_nonvanishing,
    is_graded_identity,
    tuple_variables,
)
from utpi.freelie import Bracket, family_1_convenient, left_normed
from utpi.matrixalg import unit
from utpi.spaces import degree_multisets, dim_Pma


def _alg(key):
    return presets.get(key).algebra()


def _el(alg, label):
    return next(b for b in alg.basis if b.label == label)


def test_evaluate_monomial_units():
    alg = _alg("universal3")
    g, h = alg.group.generator("g"), alg.group.generator("h")
    x1, x2 = tuple_variables((g, h))
    assert evaluate_monomial(Bracket(x1, x2), {x1: _el(alg, "e12"), x2: _el(alg, "e23")}, alg) == unit(3, 1, 3)


def test_evaluate_trivial_bracket_vanishes():
    # e23 is not of trivial degree in the Almost Canonical grading, so the
    # substitution is made in the trivially graded algebra
    alg = _alg("trivial3")
    z = alg.group.identity()
    y1, y2, y3, y4 = tuple_variables((z, z, z, z))
    f = parse_polynomial("[[x1^(0), x2^(0)], [x3^(0), x4^(0)]]", alg.group)
    a = {y1: unit(3, 2, 2), y2: unit(3, 2, 3), y3: unit(3, 2, 2), y4: unit(3, 2, 3)}
    assert evaluate_polynomial(f, a, alg).is_zero
    with pytest.raises(EvaluationError):
        evaluate_polynomial(parse_polynomial("[[x1^(0), x2^(0)], [x3^(0), x4^(0)]]", _alg("almost-canonical3").group),
                            a, _alg("almost-canonical3"))


def test_degree_mismatch_rejected():
    alg = _alg("universal3")
    g = alg.group.generator("g")
    (x1,) = tuple_variables((g,))
    with pytest.raises(EvaluationError):
        evaluate_monomial(x1, {x1: _el(alg, "e23")}, alg)


def test_remaining_one_convenient_rank():
    alg = _alg("remaining3")
    one = alg.group.identity()
    for m in (3, 4, 5):
        fam = family_1_convenient(m, one)
        assert evaluation_rank(fam, (one,) * m, alg) == m - 1


def test_evaluation_rank_examples():
    uni = _alg("universal3")
    g, h = uni.group.generator("g"), uni.group.generator("h")
    x1, x2 = tuple_variables((g, h))
    assert evaluation_rank([Bracket(x1, x2)], (g, h), uni) == 1
    can = _alg("canonical3")
    z = can.group.identity()
    y1, y2 = tuple_variables((z, z))
    assert evaluation_rank([Bracket(y1, y2)], (z, z), can) == 0


def test_identity_examples():
    rem = _alg("remaining3")
    assert is_graded_identity(parse_polynomial("[x1^(g), x2^(g)]", rem.group), rem)
    ct2 = _alg("canonical-t2")
    f = parse_polynomial("2*[x1^(1), x2^(0), x3^(1+t)] - [x1^(1), x3^(1+t), x2^(0)]", ct2.group)
    assert is_graded_identity(f, ct2)
    uni = _alg("universal3")
    w = find_nonvanishing(parse_polynomial("[x1^(g), x2^(h)]", uni.group), uni)
    assert sorted(b.label for b in w.values()) == ["e12", "e23"]


def test_au_case3_evaluation():
    # y_i = e13 and the other y's e33: [y_1, ..., y_m] picks up e13 up to sign
    alg = _alg("almost-universal3")
    one = alg.group.identity()
    ys = tuple_variables((one,) * 4)
    mono = left_normed([ys[1], ys[0], ys[2], ys[3]])
    a = {ys[0]: unit(3, 3, 3), ys[1]: unit(3, 1, 3), ys[2]: unit(3, 3, 3), ys[3]: unit(3, 3, 3)}
    val = evaluate_monomial(mono, a, alg)
    assert val in (unit(3, 1, 3), unit(3, 1, 3).scale(-1))


NAIVE_CASES = {
    "universal3": 4,
    "almost-universal3": 4,
    "canonical3": 4,
    "almost-canonical3": 4,
    "remaining3": 4,
    "trivial3": 4,
    "canonical-z3": 4,
    "canonical-t2": 4,
    "almost-canonical-t2": 4,
    "trivial-t2": 4,
    "ut2-graded": 5,
    "ut2-trivial": 5,
    "ut5-gghh": 2,
}


@pytest.mark.parametrize("key", sorted(NAIVE_CASES))
def test_dim_against_unpruned_oracle(key):
    alg = _alg(key)
    for m in range(2, NAIVE_CASES[key] + 1):
        for rep in degree_multisets(alg.support, m):
            assert dim_Pma(alg, rep) == naive_dim(alg, rep), (m, [str(d) for d in rep])


def test_ut5_selected_tuples_against_oracle():
    alg = _alg("ut5-gghh")
    G = alg.group
    g, h = G.generator("g"), G.generator("h")
    for rep in [(g, h, g), (g, g, h), (g, h, g + h), (G.identity(), g, h)]:
        assert dim_Pma(alg, rep) == naive_dim(alg, rep)


def test_cap():
    alg = _alg("trivial3")
    z = alg.group.identity()
    with pytest.raises(CapExceeded):
        dim_Pma(alg, (z,) * 5, cap=10)
