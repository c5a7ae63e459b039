from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from utpi import presets
from utpi.dsl import (
    Aliases,
    DslError,
    format_grading,
    parse_degree,
    parse_generator_text,
    parse_grading,
    parse_group,
    parse_polynomial,
    print_generator_set,
    print_polynomial,
)
from utpi.freelie import Bracket, GradedVariable, MultilinearPolynomial
from utpi.group import GroupSpec
from utpi.matrixalg import ElementaryGrading, Type2Spec

Z2 = GroupSpec(2, (), ("g", "h"))
T2G = presets.get("canonical-t2").algebra().group


def test_parse_examples():
    f = parse_polynomial("[x1^(g), x2^(h)]", Z2)
    g, h = Z2.generator("g"), Z2.generator("h")
    assert f == MultilinearPolynomial.monomial(Bracket(GradedVariable(1, g), GradedVariable(2, h)))
    ct2 = parse_polynomial("2*[x1^(1), x2^(0), x3^(1+t)] - [x1^(1), x3^(1+t), x2^(0)]", T2G)
    assert len(ct2.terms) == 2 and sorted(ct2.terms.values()) == [-1, 2]
    triv = GroupSpec(0)
    a = parse_polynomial("[[y1,y2],[y3,y4]]", triv, Aliases(triv.identity()))
    # the printer flattens left-normed brackets
    assert print_polynomial(a) == "[x1^(0), x2^(0), [x3^(0), x4^(0)]]"
    assert parse_polynomial("1/2*[x1^(g), x2^(h)]", Z2).terms.popitem()[1] == Fraction(1, 2)


def test_alias_clash_renumbers():
    G = presets.get("trivial-t2").algebra().group
    al = Aliases(G.identity(), G.generator("t"))
    f = parse_polynomial("[y1, z1, z2]", G, al)
    assert [v.index for v in f.variables()] == [1, 2, 3]
    assert [str(v.degree) for v in f.variables()] == ["0", "t", "t"]


def test_errors():
    with pytest.raises(DslError) as e:
        parse_polynomial("[x1^(g), x1^(h)]", Z2)
    assert "repeated" in e.value.message
    with pytest.raises(DslError):
        parse_polynomial("[x1^(q), x2^(h)]", Z2)
    with pytest.raises(DslError):
        parse_polynomial("[x1^(g), x2^(h)", Z2)
    with pytest.raises(DslError):
        parse_polynomial("[y1, y2]", Z2)
    err = None
    try:
        parse_polynomial("[x1^(g),, x2^(h)]", Z2)
    except DslError as ex:
        err = ex
    assert err is not None and 0 <= err.span.start <= err.span.end <= len("[x1^(g),, x2^(h)]")
    assert set(err.to_json()) == {"message", "span", "hint"}


def test_degrees():
    assert parse_degree("g+h", Z2) == Z2.generator("g") + Z2.generator("h")
    assert parse_degree("0", Z2).is_identity
    assert str(parse_degree("1+t", T2G)) == "1+t"


def test_parse_grading():
    rem = parse_grading("ut(3; g, 0) over Z{g}")
    assert isinstance(rem, ElementaryGrading) and rem.n == 3
    assert presets.get("remaining3").grading().eta in (rem.eta, rem.eta[::-1])
    assert isinstance(parse_grading("canonical-t2"), Type2Spec)
    for key in presets.PRESETS:
        spec = parse_grading(key)
        assert parse_grading(format_grading(spec)) == spec
    with pytest.raises(DslError):
        parse_grading("ut(x; g) over Z")
    with pytest.raises(DslError):
        parse_grading("nope")
    assert parse_group("Z3xZ2{1,t}") == GroupSpec(0, (3, 2), ("1", "t"))


GOLDEN = ["au_gr", "au_gr_ext", "ac_gr", "r_gr", "canonical", "c_mt", "act2", "trivial_t2", "ut2_graded"]


@pytest.mark.parametrize("name", GOLDEN)
def test_golden_round_trip(name):
    S, alg = presets.builtin_generators(name)
    text = print_generator_set(S)
    T = parse_generator_text(text, alg.group)
    assert T.polys == S.polys
    assert T.zero_outside == S.zero_outside
    assert T.zero_degrees == S.zero_degrees
    assert print_generator_set(T) == text


@st.composite
def small_groups(draw):
    free = draw(st.integers(0, 2))
    torsion = tuple(draw(st.lists(st.integers(2, 4), max_size=2 - free if free < 2 else 0)))
    if free == 0 and not torsion:
        torsion = (2,)
    names = tuple(["a", "b", "c", "d"][: free + len(torsion)])
    return GroupSpec(free, torsion, names)


def _mono(draw, items):
    if len(items) == 1:
        return items[0]
    k = draw(st.integers(1, len(items) - 1))
    return Bracket(_mono(draw, items[:k]), _mono(draw, items[k:]))


@st.composite
def polynomials(draw):
    G = draw(small_groups())
    m = draw(st.integers(1, 4))
    degrees = [G.element([draw(st.integers(-2, 2)) for _ in range(G.arity)]) for _ in range(m)]
    vs = [GradedVariable(i + 1, d) for i, d in enumerate(degrees)]
    f = MultilinearPolynomial.zero()
    for _ in range(draw(st.integers(1, 3))):
        perm = draw(st.permutations(vs))
        c = Fraction(draw(st.integers(-5, 5)), draw(st.integers(1, 4)))
        f = f + MultilinearPolynomial.monomial(_mono(draw, list(perm))).scale(c)
    return G, f


@settings(max_examples=200, deadline=None)
@given(polynomials())
def test_random_round_trip(data):
    G, f = data
    assert parse_polynomial(print_polynomial(f), G) == f


@settings(max_examples=400, deadline=None)
@given(st.text(alphabet="xyz0123456789^()[],+-*/ ght", max_size=40) | st.text(max_size=30))
def test_fuzz_no_crash(text):
    try:
        parse_polynomial(text, Z2, Aliases(Z2.identity(), Z2.generator("g")))
    except DslError as e:
        assert 0 <= e.span.start <= e.span.end <= len(text)


@settings(max_examples=150, deadline=None)
@given(st.binary(max_size=30))
def test_fuzz_bytes(raw):
    text = raw.decode("latin-1")
    for fn in (lambda: parse_grading(text), lambda: parse_group(text), lambda: parse_degree(text, Z2)):
        try:
            fn()
        except DslError as e:
            assert 0 <= e.span.start <= e.span.end <= len(text)
