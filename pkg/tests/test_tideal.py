import pytest

from utpi import presets
from utpi.dsl import parse_degree, parse_polynomial
from utpi.spaces import dim_Pma
from utpi.tideal import (
    GeneratorSet,
    NotAnIdentity,
    check_generators,
    consequence_dim,
    membership,
    multilinear_consequences,
    probe_tuples,
    verify_basis,
)


def _ut2_trivial():
    alg = presets.get("ut2-trivial").algebra()
    return alg, alg.group


def test_metabelian_consequences_ut2():
    alg, G = _ut2_trivial()
    z = G.identity()
    S = GeneratorSet(G, [parse_polynomial("[[x1^(0), x2^(0)], [x3^(0), x4^(0)]]", G)])
    # P_4 has dimension 6 and UT_2 keeps the 3 monomials [x_i, x_1, ...]
    assert consequence_dim(S, (z,) * 4) == 3
    assert dim_Pma(alg, (z,) * 4) == 3
    assert consequence_dim(S, (z,) * 3) == 0
    assert consequence_dim(S, (z,) * 5) == 24 - dim_Pma(alg, (z,) * 5)


def test_generator_is_its_own_consequence():
    _, G = _ut2_trivial()
    f = parse_polynomial("[[x1^(0), x2^(0)], [x3^(0), x4^(0)]]", G)
    S = GeneratorSet(G, [f])
    assert membership(f, S)
    assert membership(f.scale(-3), S)
    assert not membership(parse_polynomial("[x1^(0), x2^(0), x3^(0), x4^(0)]", G), S)
    assert membership(parse_polynomial("0", G), S)
    cons = multilinear_consequences(S, parse_polynomial("[x1^(0), x2^(0), x3^(0), x4^(0)]", G).degrees())
    assert len(cons) >= 3


def test_zero_degree_kills_component():
    alg = presets.get("universal3").algebra()
    G = alg.group
    l = G.generator("g") + G.generator("g")
    S = GeneratorSet(G, [], zero_degrees=[l])
    g = G.generator("g")
    assert consequence_dim(S, (l, g)) == 1
    assert consequence_dim(S, (g, g)) == 1  # the bracket itself has degree 2g
    assert consequence_dim(S, (g, G.generator("h"))) == 0
    assert membership(parse_polynomial("[x1^(g+g), x2^(h)]", G), S)


def test_dropping_a_generator_breaks_the_basis():
    S, alg = presets.builtin_generators("ac_gr")
    assert verify_basis(S, alg, 4).ok
    idx = next(k for k, p in enumerate(S.polys) if all(str(v.degree) == "1" for v in p.variables())
               and len(p.variables()) == 3)
    report = verify_basis(S.without(idx), alg, 3)
    assert not report.ok
    one = alg.group.generator("1")
    assert [v.degrees for v in report.failures()] == [(one, one, one)]


def test_not_an_identity():
    alg = presets.get("universal3").algebra()
    G = alg.group
    S = GeneratorSet(G, [parse_polynomial("[x1^(g), x2^(h)]", G)])
    with pytest.raises(NotAnIdentity) as e:
        check_generators(S, alg)
    assert e.value.witness is not None
    with pytest.raises(NotAnIdentity):
        verify_basis(S, alg, 2)
    with pytest.raises(NotAnIdentity):
        check_generators(GeneratorSet(G, [], zero_degrees=[G.generator("g")]), alg)


def test_probe_tuples_include_out_of_support_entry():
    alg = presets.get("remaining3").algebra()
    reps = probe_tuples(alg, 2)
    # three multisets over {0, g} and two lead by the probe
    assert len(reps) == 5
    assert any(d not in alg.support for d in reps[-1])


def test_builtin_sets_are_identities():
    for name in presets.BUILTIN_GENERATORS:
        S, alg = presets.builtin_generators(name)
        if name == "au_gr":
            continue
        check_generators(S, alg)


def test_multilinearity_enforced():
    _, G = _ut2_trivial()
    with pytest.raises(ValueError):
        GeneratorSet(G, [parse_polynomial("[x1^(0), x2^(0)] + [x1^(0), x3^(0)]", G)])
