"""Multilinear graded Lie monomials and polynomials.

A monomial is a binary bracketing whose leaves are graded variables.  All
linear algebra on Lie polynomials is done in coordinates: a multilinear Lie
polynomial in x_1 < ... < x_m is determined by the coefficients of the
associative words of its expansion that begin with x_1, and the word
x_1 x_s(2) ... x_s(m) has coefficient exactly 1 in the left-normed monomial
[x_1, x_s(2), ..., x_s(m)] and 0 in every other such monomial.  The
(m-1)! left-normed monomials with x_1 first therefore form the coordinate
basis.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, lcm
from typing import Iterable, Mapping, Sequence, Union

from .group import GroupElement, GroupSpec

TRIVIAL_GROUP = GroupSpec(0)


class NotMultilinearError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class GradedVariable:
    index: int
    degree: GroupElement

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("variable index must be >= 1")

    def __str__(self) -> str:
        return f"x{self.index}^({self.degree})"


@dataclass(frozen=True)
class Bracket:
    left: "LieTreeMonomial"
    right: "LieTreeMonomial"

    def __str__(self) -> str:
        args = []
        node: LieTreeMonomial = self
        while isinstance(node, Bracket):
            args.append(node.right)
            node = node.left
        args.append(node)
        return "[" + ", ".join(str(a) for a in reversed(args)) + "]"


LieTreeMonomial = Union[GradedVariable, Bracket]


def br(a: LieTreeMonomial, b: LieTreeMonomial) -> Bracket:
    return Bracket(a, b)


def left_normed(items: Sequence[LieTreeMonomial]) -> LieTreeMonomial:
    """[a1, a2, ..., am] = [[a1, ..., a_{m-1}], am]."""
    if not items:
        raise ValueError("left_normed needs at least one argument")
    out = items[0]
    for x in items[1:]:
        out = Bracket(out, x)
    return out


def leaves(m: LieTreeMonomial) -> list[GradedVariable]:
    if isinstance(m, GradedVariable):
        return [m]
    return leaves(m.left) + leaves(m.right)


def length(m: LieTreeMonomial) -> int:
    return len(leaves(m))


def monomial_degree(m: LieTreeMonomial) -> GroupElement:
    ls = leaves(m)
    d = ls[0].degree
    for v in ls[1:]:
        d = d + v.degree
    return d


def substitute(m: LieTreeMonomial, mapping: Mapping[GradedVariable, LieTreeMonomial]) -> LieTreeMonomial:
    if isinstance(m, GradedVariable):
        return mapping.get(m, m)
    return Bracket(substitute(m.left, mapping), substitute(m.right, mapping))


# ---------------------------------------------------------------------------
# polynomials


class MultilinearPolynomial:
    """Rational combination of Lie monomials over one common variable set."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[LieTreeMonomial, object] | Iterable = ()):
        acc: dict[LieTreeMonomial, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for m, c in items:
            acc[m] = acc.get(m, Fraction(0)) + Fraction(c)
        self.terms = {m: c for m, c in acc.items() if c != 0}

    @classmethod
    def monomial(cls, m: LieTreeMonomial, coef=1) -> "MultilinearPolynomial":
        return cls({m: coef})

    @classmethod
    def zero(cls) -> "MultilinearPolynomial":
        return cls()

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "MultilinearPolynomial") -> "MultilinearPolynomial":
        return MultilinearPolynomial(list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self) -> "MultilinearPolynomial":
        return MultilinearPolynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "MultilinearPolynomial") -> "MultilinearPolynomial":
        return self + (-other)

    def scale(self, c) -> "MultilinearPolynomial":
        return MultilinearPolynomial({m: Fraction(c) * v for m, v in self.terms.items()})

    def bracket_right(self, x: LieTreeMonomial) -> "MultilinearPolynomial":
        return MultilinearPolynomial({Bracket(m, x): c for m, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, MultilinearPolynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def sorted_terms(self) -> list[tuple[LieTreeMonomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda mc: str(mc[0]))

    def variables(self) -> tuple[GradedVariable, ...]:
        """The common variable set, validated for multilinearity."""
        common = None
        for m in self.terms:
            ls = leaves(m)
            s = frozenset(ls)
            if len({v.index for v in ls}) != len(ls):
                raise NotMultilinearError(f"repeated variable in {m}")
            if common is None:
                common = s
            elif s != common:
                raise NotMultilinearError("monomials use different variable sets")
        return tuple(sorted(common or ()))

    def degrees(self) -> tuple[GroupElement, ...]:
        return tuple(v.degree for v in self.variables())

    def __repr__(self) -> str:
        from .dsl import print_polynomial

        return f"MultilinearPolynomial({print_polynomial(self)!r})"


def as_polynomial(f) -> MultilinearPolynomial:
    if isinstance(f, MultilinearPolynomial):
        return f
    return MultilinearPolynomial.monomial(f)


# ---------------------------------------------------------------------------
# positional trees: variables replaced by positions 0..m-1


def to_ptree(m: LieTreeMonomial, pos: Mapping[GradedVariable, int]):
    if isinstance(m, GradedVariable):
        return pos[m]
    return (to_ptree(m.left, pos), to_ptree(m.right, pos))


def from_ptree(pt, variables: Sequence[GradedVariable]) -> LieTreeMonomial:
    if isinstance(pt, int):
        return variables[pt]
    return Bracket(from_ptree(pt[0], variables), from_ptree(pt[1], variables))


@lru_cache(maxsize=200_000)
def _pleaves(pt) -> frozenset:
    if isinstance(pt, int):
        return frozenset((pt,))
    return _pleaves(pt[0]) | _pleaves(pt[1])


@lru_cache(maxsize=200_000)
def _pexpand(pt) -> tuple:
    """Associative expansion as ((word, coef), ...); multilinear words never collide."""
    if isinstance(pt, int):
        return (((pt,), 1),)
    u, v = _pexpand(pt[0]), _pexpand(pt[1])
    out = [(a + b, x * y) for a, x in u for b, y in v]
    out += [(b + a, -x * y) for a, x in u for b, y in v]
    return tuple(out)


@lru_cache(maxsize=200_000)
def _pexpand_first(pt, first: int) -> tuple:
    """Words of the expansion that begin with ``first``."""
    if isinstance(pt, int):
        return (((pt,), 1),) if pt == first else ()
    u, v = pt
    if first in _pleaves(u):
        tail = _pexpand(v)
        return tuple((a + b, x * y) for a, x in _pexpand_first(u, first) for b, y in tail)
    tail = _pexpand(u)
    return tuple((a + b, -x * y) for a, x in _pexpand_first(v, first) for b, y in tail)


@lru_cache(maxsize=16)
def word_index(m: int) -> dict[tuple[int, ...], int]:
    """Coordinate index of each word (0, s2, ..., sm), lexicographic in s."""
    return {(0,) + p: k for k, p in enumerate(itertools.permutations(range(1, m)))}


def ptree_coordinates(pt, m: int) -> dict[int, int]:
    idx = word_index(m)
    return {idx[w]: c for w, c in _pexpand_first(pt, 0)}


def combination_coordinates(terms: Iterable[tuple[object, int]], m: int) -> dict[int, int]:
    """Integer coordinates of sum(c * ptree)."""
    idx = word_index(m)
    out: dict[int, int] = {}
    for pt, c in terms:
        for w, x in _pexpand_first(pt, 0):
            k = idx[w]
            v = out.get(k, 0) + c * x
            if v:
                out[k] = v
            else:
                out.pop(k, None)
    return out


def lie_coordinates(f, variables: Sequence[GradedVariable] | None = None) -> dict[int, Fraction]:
    """Coordinates of f in the fixed-first left-normed basis on ``variables``."""
    f = as_polynomial(f)
    if variables is None:
        variables = f.variables()
    else:
        got = f.variables() if f.terms else tuple(variables)
        if set(got) != set(variables):
            raise NotMultilinearError("polynomial does not use the given variables")
        variables = tuple(variables)
    pos = {v: k for k, v in enumerate(variables)}
    m = len(variables)
    idx = word_index(m)
    out: dict[int, Fraction] = {}
    for mono, c in f.terms.items():
        for w, x in _pexpand_first(to_ptree(mono, pos), 0):
            k = idx[w]
            out[k] = out.get(k, Fraction(0)) + c * x
    return {k: v for k, v in out.items() if v}


def integer_coordinates(f, variables=None) -> dict[int, int]:
    c = lie_coordinates(f, variables)
    den = 1
    for v in c.values():
        den = lcm(den, v.denominator)
    return {k: int(v * den) for k, v in c.items()}


def expand_to_associative(f) -> dict[tuple[GradedVariable, ...], Fraction]:
    """Full associative expansion [u, v] -> uv - vu, as a sparse word vector."""
    f = as_polynomial(f)
    variables = f.variables()
    pos = {v: k for k, v in enumerate(variables)}
    out: dict[tuple, Fraction] = {}
    for mono, c in f.terms.items():
        for w, x in _pexpand(to_ptree(mono, pos)):
            key = tuple(variables[i] for i in w)
            out[key] = out.get(key, Fraction(0)) + c * x
    return {k: v for k, v in out.items() if v}


def fixed_first_basis(variables: Sequence[GradedVariable]) -> list[LieTreeMonomial]:
    """The (m-1)! left-normed monomials with the first variable in front."""
    variables = list(variables)
    if len(variables) == 1:
        return [variables[0]]
    head, rest = variables[0], variables[1:]
    return [left_normed([head, *p]) for p in itertools.permutations(rest)]


def from_coordinates(coords: Mapping[int, object], variables: Sequence[GradedVariable]) -> MultilinearPolynomial:
    basis = fixed_first_basis(variables)
    return MultilinearPolynomial({basis[k]: c for k, c in coords.items()})


# ---------------------------------------------------------------------------
# symmetric group actions


def permutation_action(sigma: Mapping[int, int], f, degree: GroupElement) -> MultilinearPolynomial:
    """Relabel the indices of the variables of the given degree by ``sigma``."""
    f = as_polynomial(f)
    present = sorted({v.index for m in f.terms for v in leaves(m) if v.degree == degree})
    dom = {i for i in sigma if sigma[i] != i}
    if not dom <= set(present):
        raise ValueError(f"permutation moves indices {sorted(dom - set(present))} absent from f")
    if sorted(sigma[i] for i in sigma) != sorted(sigma):
        raise ValueError("sigma is not a permutation of its domain")
    mapping = {}
    for m in f.terms:
        for v in leaves(m):
            if v.degree == degree and v.index in sigma:
                mapping[v] = GradedVariable(sigma[v.index], degree)
    return MultilinearPolynomial({substitute(m, mapping): c for m, c in f.terms.items()})


def group_algebra_action(element: Iterable[tuple[object, Mapping[int, int]]], f, degree: GroupElement) -> MultilinearPolynomial:
    """Action of sum(c * sigma) in the group algebra of S_k."""
    out = MultilinearPolynomial.zero()
    for c, sigma in element:
        out = out + permutation_action(sigma, f, degree).scale(c)
    return out


def permutation_sign(p: Sequence[int]) -> int:
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def alternating_sum(f, degree: GroupElement, indices: Sequence[int]) -> MultilinearPolynomial:
    """sum over sigma in Sym(indices) of sign(sigma) * sigma . f."""
    elems = []
    for p in itertools.permutations(range(len(indices))):
        sigma = {indices[i]: indices[p[i]] for i in range(len(indices))}
        elems.append((permutation_sign(p), sigma))
    return group_algebra_action(elems, f, degree)


# ---------------------------------------------------------------------------
# named monomial families


def _y(i, deg):
    return GradedVariable(i, deg)


def family_1_convenient(m: int, y: GroupElement | None = None) -> list[LieTreeMonomial]:
    """[y_i, y_1, ..., ^y_i, ..., y_m] for i = 2..m."""
    if m < 2:
        raise ValueError("1-convenient monomials need m >= 2")
    y = TRIVIAL_GROUP.identity() if y is None else y
    ys = [_y(i, y) for i in range(1, m + 1)]
    return [left_normed([ys[i - 1]] + [v for v in ys if v.index != i]) for i in range(2, m + 1)]


def family_kind1(m: int, z: GroupElement, y: GroupElement) -> list[LieTreeMonomial]:
    """Kind 1 monomials on z_1, y_1, ..., y_{m-1}.

    [z, y_1, ..., y_{i-1}, y_J, [y_i, y_l], y_R] with 2 <= i, l > i, and J, R
    an increasing split of the remaining indices above i.  Sorted by (i, l, J).
    """
    zv = _y(1, z)
    ys = {i: _y(i, y) for i in range(1, m)}
    out = []
    for i in range(2, m - 1):
        for l in range(i + 1, m):
            rest = [k for k in range(i + 1, m) if k != l]
            for r in range(len(rest) + 1):
                for J in itertools.combinations(rest, r):
                    R = [k for k in rest if k not in J]
                    items = [zv] + [ys[k] for k in range(1, i)] + [ys[k] for k in J]
                    items.append(Bracket(ys[i], ys[l]))
                    items += [ys[k] for k in R]
                    out.append(((i, l, J), left_normed(items)))
    out.sort(key=lambda kv: kv[0])
    return [mono for _, mono in out]


def family_kind2(m: int, z: GroupElement, y: GroupElement) -> list[LieTreeMonomial]:
    """Kind 2 monomials [u, z_1, y_J] on z_1, y_1, ..., y_{m-1}.

    u = [y_a, y_1, y_(U - a)] is 1-convenient with U a nonempty subset of
    {2, ..., m-1} and a in U; J is the complement, increasing.
    """
    zv = _y(1, z)
    ys = {i: _y(i, y) for i in range(1, m)}
    others = list(range(2, m))
    out = []
    for r in range(1, len(others) + 1):
        for U in itertools.combinations(others, r):
            J = [k for k in others if k not in U]
            for a in U:
                u = left_normed([ys[a], ys[1]] + [ys[k] for k in U if k != a])
                out.append(((U, a), left_normed([u, zv] + [ys[k] for k in J])))
    out.sort(key=lambda kv: kv[0])
    return [mono for _, mono in out]


def family_remaining_basis(m: int, z: GroupElement, y: GroupElement) -> list[LieTreeMonomial]:
    """[z, y_1, ..., y_{m-1}] followed by the kind 1 and kind 2 monomials."""
    zv = _y(1, z)
    head = left_normed([zv] + [_y(i, y) for i in range(1, m)]) if m > 1 else zv
    return [head] + family_kind1(m, z, y) + family_kind2(m, z, y)


def _tuple_vars(degrees: Sequence[GroupElement]) -> list[GradedVariable]:
    return [GradedVariable(i + 1, d) for i, d in enumerate(degrees)]


def _split_pairs(left_head, items, right_head):
    """[[left_head, S], [right_head, items - S]] over all subsets S, increasing."""
    out = []
    for r in range(len(items) + 1):
        for S in itertools.combinations(items, r):
            T = [v for v in items if v not in S]
            out.append(Bracket(left_normed([left_head, *S]), left_normed([right_head, *T])))
    return out


def family_au_basis(degrees: Sequence[GroupElement], g: GroupElement) -> list[LieTreeMonomial]:
    """m_1, m_2, [m_1, m_2] and 1-convenient monomials on the variables of a tuple."""
    xs = _tuple_vars(degrees)
    if len(xs) == 1:
        return [xs[0]]
    ys = [v for v in xs if v.degree.is_identity]
    gs = [v for v in xs if v.degree == g]
    hs = [v for v in xs if v.degree == -g]
    if len(ys) == len(xs):
        return _relabelled_1_convenient(ys)
    if len(gs) + len(hs) == 1 and len(ys) == len(xs) - 1:
        return [left_normed((gs + hs) + ys)]
    if len(gs) == 1 and len(hs) == 1 and len(ys) == len(xs) - 2:
        return _split_pairs(gs[0], ys, hs[0])
    return []


def _relabelled_1_convenient(ys: Sequence[GradedVariable]) -> list[LieTreeMonomial]:
    return [left_normed([ys[i]] + [v for k, v in enumerate(ys) if k != i]) for i in range(1, len(ys))]


def family_ac_convenient(degrees: Sequence[GroupElement], z: GroupElement) -> list[LieTreeMonomial]:
    """Convenient monomials u, brackets [u_1, u_2], and 1-convenient monomials."""
    xs = _tuple_vars(degrees)
    if len(xs) == 1:
        return [xs[0]]
    ys = [v for v in xs if v.degree.is_identity]
    zs = [v for v in xs if v.degree == z]
    if len(ys) + len(zs) != len(xs):
        return []
    if not zs:
        return _relabelled_1_convenient(ys)
    if len(zs) == 1:
        return [left_normed(zs + ys)]
    if len(zs) == 2:
        return _split_pairs(zs[0], ys, zs[1])
    return []


def family_canonical_basis(degrees: Sequence[GroupElement], one: GroupElement) -> list[LieTreeMonomial]:
    """Basis modulo the canonical Z_3 identities; ``one`` is the generator."""
    xs = _tuple_vars(degrees)
    if len(xs) == 1:
        return [xs[0]]
    zeros = [v for v in xs if v.degree.is_identity]
    ls = [v for v in xs if not v.degree.is_identity]
    if len(ls) == 1:
        return [left_normed(ls + zeros)]
    if len(ls) == 2 and all(v.degree == one for v in ls):
        i, j = ls
        out = []
        for r in range(len(zeros) + 1):
            for S in itertools.combinations(zeros, r):
                T = [v for v in zeros if v not in S]
                out.append(left_normed([i, *S, j, *T]))
        return out
    return []


def family_t2canonical_basis(degrees: Sequence[GroupElement], one: GroupElement, t: GroupElement,
                             almost: bool = False) -> list[LieTreeMonomial]:
    """Basis lists for the Canonical T2 (or, with ``almost``, Almost Canonical T2) grading.

    With two end variables of degrees in {1, 1+t}, the number of degree-t
    variables between them is even for distinct end degrees and odd for equal
    ones; the other parity has degree 2 (resp. 0) where the value must vanish.
    """
    xs = _tuple_vars(degrees)
    if len(xs) == 1:
        return [xs[0]]
    zeros = [v for v in xs if v.degree.is_identity]
    ts = [v for v in xs if v.degree == t]
    ends = [v for v in xs if v.degree in (one, one + t)]
    top = [v for v in xs if not almost and v.degree == one.scale(2) + t]
    if len(zeros) + len(ts) + len(ends) + len(top) != len(xs):
        return []
    if top:
        if len(top) == 1 and not ends and not ts:
            return [left_normed(top + zeros)]
        return []
    if not ends:
        if almost and len(ts) == 1:
            return [left_normed(ts + zeros)]
        return []
    if len(ends) == 1:
        return [left_normed(ends + zeros + ts)]
    if len(ends) == 2:
        a, b = ends
        if a.degree != b.degree:
            first, last = (a, b) if a.degree == one else (b, a)
            ok = len(ts) % 2 == 0
        else:
            first, last = a, b
            ok = len(ts) % 2 == 1
        return [left_normed([first, *zeros, *ts, last])] if ok else []
    return []


def family_monom_special(degrees: Sequence[GroupElement], t: GroupElement) -> list[LieTreeMonomial]:
    """[w, z_I, y_J] with w = [y_j, x_i], y_j the first even variable, x_i any other."""
    xs = _tuple_vars(degrees)
    ys = [v for v in xs if v.degree.is_identity]
    if not ys or len(xs) < 2:
        return []
    first = ys[0]
    out = []
    for other in xs:
        if other == first:
            continue
        rest = [v for v in xs if v not in (first, other)]
        zs = [v for v in rest if v.degree == t]
        yy = [v for v in rest if v.degree.is_identity]
        out.append(left_normed([Bracket(first, other), *zs, *yy]))
    return out


def family_counts_remaining(m: int) -> tuple[int, int]:
    """(kind 1, kind 2) counts on z, y_1..y_{m-1} from the closed-form sums."""
    k1 = sum((m - i - 1) * 2 ** (m - i - 2) for i in range(2, m - 1))
    k2 = sum(i * factorial(m - 2) // (factorial(i) * factorial(m - 2 - i)) for i in range(1, m - 1))
    return k1, k2
