"""Multilinear components of graded T-ideals.

The consequences of a generator f(v_1, ..., v_k) in the multilinear
component with degree tuple a are spanned by

    [f(u_1, ..., u_k), x_r1, ..., x_rs]

where the u_i are monomials on pairwise disjoint blocks of variables whose
degrees add up to deg v_i, and x_r1, ..., x_rs are the leftover variables in
any order.  Monomial substitutions suffice by linearity, each u_i may be
taken from the fixed-first left-normed basis of its block, and left-normed
adjoining of single variables spans the ideal closure because
[s, [u, v]] = [s, u, v] - [s, v, u].  A generator x^(l) = 0 is the length-1
case: it kills every monomial containing a sub-bracket of degree l.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import factorial, lcm
from typing import Iterable, Iterator, Optional, Sequence

from .evaluate import DEFAULT_CAP, find_nonvanishing, tuple_variables
from .exactla import SpanBuilder
from .freelie import (
    GradedVariable,
    MultilinearPolynomial,
    as_polynomial,
    combination_coordinates,
    from_ptree,
    integer_coordinates,
    to_ptree,
)
from .group import GroupElement, GroupSpec, out_of_support_probe
from .matrixalg import GradedAlgebra
from .spaces import degree_multisets, dim_Pma


class NotAnIdentity(ValueError):
    """A generator handed to verify_basis does not vanish on the algebra."""

    def __init__(self, message: str, generator=None, witness=None):
        super().__init__(message)
        self.generator = generator
        self.witness = witness


@dataclass
class GeneratorSet:
    group: GroupSpec
    polys: list[MultilinearPolynomial] = field(default_factory=list)
    zero_degrees: list[GroupElement] = field(default_factory=list)
    zero_outside: Optional[frozenset] = None  # x^(l) = 0 for every l outside this set
    labels: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.polys = [as_polynomial(p) for p in self.polys]
        for p in self.polys:
            p.variables()  # validates multilinearity
            for v in p.variables():
                if v.degree.owner != self.group:
                    raise ValueError(f"generator variable {v} is not graded by {self.group}")
        if len(self.labels) < len(self.polys):
            self.labels = self.labels + [""] * (len(self.polys) - len(self.labels))

    def is_zero_degree(self, l: GroupElement) -> bool:
        if l in self.zero_degrees:
            return True
        return self.zero_outside is not None and l not in self.zero_outside

    def without(self, index: int) -> "GeneratorSet":
        polys = self.polys[:index] + self.polys[index + 1 :]
        labels = self.labels[:index] + self.labels[index + 1 :]
        return GeneratorSet(self.group, polys, list(self.zero_degrees), self.zero_outside, labels)

    def extended(self, polys: Iterable) -> "GeneratorSet":
        polys = [as_polynomial(p) for p in polys]
        return GeneratorSet(self.group, self.polys + polys, list(self.zero_degrees), self.zero_outside,
                            self.labels + [""] * len(polys))

    def __len__(self):
        return len(self.polys)


# ---------------------------------------------------------------------------
# consequence generation in positional form


def _generator_terms(f: MultilinearPolynomial):
    variables = f.variables()
    pos = {v: k for k, v in enumerate(variables)}
    den = 1
    for c in f.terms.values():
        den = lcm(den, c.denominator)
    terms = [(to_ptree(mono, pos), int(c * den)) for mono, c in f.sorted_terms()]
    return [v.degree for v in variables], terms


def _subst(pt, us):
    if isinstance(pt, int):
        return us[pt]
    return (_subst(pt[0], us), _subst(pt[1], us))


def _left_normed_pt(items):
    out = items[0]
    for x in items[1:]:
        out = (out, x)
    return out


def _fixed_first_pts(block: tuple[int, ...]) -> list:
    head, rest = block[0], block[1:]
    if not rest:
        return [head]
    return [_left_normed_pt((head,) + p) for p in itertools.permutations(rest)]


class _Blocks:
    """Subset bookkeeping for one degree tuple (bitmasks over positions)."""

    def __init__(self, degrees: Sequence[GroupElement]):
        self.m = len(degrees)
        self.degrees = tuple(degrees)
        ident = degrees[0].owner.identity()
        self.sums = {}
        for mask in range(1, 1 << self.m):
            d = ident
            for i in range(self.m):
                if mask >> i & 1:
                    d = d + degrees[i]
            self.sums[mask] = d
        self._ff_cache: dict = {}

    def positions(self, mask: int) -> tuple[int, ...]:
        return tuple(i for i in range(self.m) if mask >> i & 1)

    def fixed_first(self, mask: int) -> list:
        hit = self._ff_cache.get(mask)
        if hit is None:
            hit = _fixed_first_pts(self.positions(mask))
            self._ff_cache[mask] = hit
        return hit

    def submasks(self, free: int) -> Iterator[int]:
        s = free
        while s:
            yield s
            s = (s - 1) & free

    def block_choices(self, degs: Sequence[GroupElement], free: int) -> Iterator[tuple[int, ...]]:
        """Ordered tuples of disjoint nonempty masks inside ``free`` with the given degree sums."""
        if not degs:
            yield ()
            return
        d = degs[0]
        for s in sorted(self.submasks(free)):
            if self.sums[s] == d:
                for rest in self.block_choices(degs[1:], free & ~s):
                    yield (s,) + rest


def _adjoin(base_terms, leftover: tuple[int, ...]) -> Iterator[list]:
    """[g, x_r1, ..., x_rs] over all orders of the leftover positions."""
    if not leftover:
        yield base_terms
        return
    for order in itertools.permutations(leftover):
        out = []
        for pt, c in base_terms:
            for r in order:
                pt = (pt, r)
            out.append((pt, c))
        yield out


def consequence_terms(S: GeneratorSet, degrees: Sequence[GroupElement]) -> Iterator[list]:
    """Every generated consequence as a list of (positional tree, integer coefficient)."""
    degrees = tuple(degrees)
    m = len(degrees)
    blocks = _Blocks(degrees)
    full = (1 << m) - 1
    # zero degrees: any block of degree l spans, as a length-1 generator
    for mask in sorted(blocks.sums):
        if S.is_zero_degree(blocks.sums[mask]):
            leftover = blocks.positions(full & ~mask)
            for u in blocks.fixed_first(mask):
                yield from _adjoin([(u, 1)], leftover)
    for f in S.polys:
        degs, terms = _generator_terms(f)
        if len(degs) > m:
            continue
        for choice in blocks.block_choices(degs, full):
            used = 0
            for s in choice:
                used |= s
            leftover = blocks.positions(full & ~used)
            for us in itertools.product(*(blocks.fixed_first(s) for s in choice)):
                base = [(_subst(pt, us), c) for pt, c in terms]
                yield from _adjoin(base, leftover)


def _span_of_consequences(S: GeneratorSet, degrees, target: Optional[int] = None,
                          stop_vector: Optional[dict] = None) -> SpanBuilder:
    degrees = tuple(degrees)
    m = len(degrees)
    width = factorial(m - 1)
    span = SpanBuilder(width)
    goal = width if target is None else target
    last = 0
    for terms in consequence_terms(S, degrees):
        span.add(combination_coordinates(terms, m))
        if span.pending >= max(32, goal - last):
            last = span.rank()
            if last >= goal:
                return span
            if stop_vector is not None and span.contains(stop_vector):
                return span
    span.rank()
    return span


def multilinear_consequences(S: GeneratorSet, degrees: Sequence[GroupElement]) -> list[MultilinearPolynomial]:
    """Generated consequences on x_1^(a_1), ..., x_m^(a_m), deduplicated in Lie coordinates."""
    degrees = tuple(degrees)
    variables = tuple_variables(degrees)
    m = len(degrees)
    seen = set()
    out = []
    for terms in consequence_terms(S, degrees):
        coords = combination_coordinates(terms, m)
        if not coords:
            continue
        key = tuple(sorted(coords.items()))
        neg = tuple((k, -v) for k, v in key)
        if key in seen or neg in seen:
            continue
        seen.add(key)
        out.append(MultilinearPolynomial({from_ptree(pt, variables): c for pt, c in terms}))
    return out


def consequence_dim(S: GeneratorSet, degrees: Sequence[GroupElement], target: Optional[int] = None) -> int:
    """Dimension of the consequence span inside P_m^a.

    With ``target`` the search stops as soon as that dimension is reached;
    the returned value is then exact whenever ``target`` is an upper bound,
    as it is for (m-1)! - dim P_m^a(A) when S consists of identities of A.
    """
    degrees = tuple(degrees)
    m = len(degrees)
    if any(S.is_zero_degree(d) for d in degrees):
        return factorial(m - 1)
    return _span_of_consequences(S, degrees, target).rank()


def membership(f, S: GeneratorSet) -> bool:
    """True iff f lies in the multilinear consequence span of S on f's own variables."""
    f = as_polynomial(f)
    if f.is_zero():
        return True
    variables = f.variables()
    m = len(variables)
    degrees = tuple(v.degree for v in variables)
    if any(S.is_zero_degree(d) for d in degrees):
        return True
    vec = integer_coordinates(f, variables)
    if not vec:
        return True
    span = _span_of_consequences(S, degrees, target=factorial(m - 1), stop_vector=vec)
    return span.contains(vec)


# ---------------------------------------------------------------------------
# verification against an algebra


@dataclass
class Verdict:
    m: int
    degrees: tuple[GroupElement, ...]
    free_dim: int
    consequence_dim: int
    algebra_dim: int

    @property
    def ok(self) -> bool:
        return self.consequence_dim + self.algebra_dim == self.free_dim

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "degrees": [str(d) for d in self.degrees],
            "free_dim": self.free_dim,
            "consequence_dim": self.consequence_dim,
            "algebra_dim": self.algebra_dim,
            "ok": self.ok,
        }


@dataclass
class BasisReport:
    verdicts: list[Verdict]

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.verdicts)

    def failures(self) -> list[Verdict]:
        return [v for v in self.verdicts if not v.ok]


def check_generators(S: GeneratorSet, alg: GradedAlgebra) -> None:
    """Raise NotAnIdentity unless every generator vanishes on ``alg``."""
    if S.group != alg.group:
        raise ValueError(f"generators are graded by {S.group}, the algebra by {alg.group}")
    for l in S.zero_degrees:
        if alg.component(l):
            raise NotAnIdentity(f"x^({l}) = 0 fails: the component of degree {l} is nonzero")
    if S.zero_outside is not None:
        for l in alg.support:
            if l not in S.zero_outside:
                raise NotAnIdentity(f"x^({l}) = 0 fails: the component of degree {l} is nonzero")
    for p, label in zip(S.polys, S.labels):
        w = find_nonvanishing(p, alg)
        if w is not None:
            from .dsl import print_polynomial

            shown = label or print_polynomial(p)
            raise NotAnIdentity(f"{shown} is not a graded identity", generator=p, witness=w)


def probe_tuples(alg: GradedAlgebra, m: int) -> list[tuple[GroupElement, ...]]:
    """Representatives over the support, plus each with one out-of-support probe entry."""
    support = list(alg.support)
    reps = degree_multisets(support, m)
    probe = out_of_support_probe(alg.group, support)
    if probe is not None:
        reps += [(probe,) + rest for rest in degree_multisets(support, m - 1)] if m > 1 else [(probe,)]
    return reps


def _verdict_job(args):
    S, alg, rep, cap = args
    m = len(rep)
    free = factorial(m - 1)
    adim = dim_Pma(alg, rep, cap=cap)
    cdim = consequence_dim(S, rep, target=free - adim)
    return Verdict(m, tuple(rep), free, cdim, adim)


def verify_basis(S: GeneratorSet, alg: GradedAlgebra, max_m: int, workers: int = 1,
                 cap: int = DEFAULT_CAP, min_m: int = 1, check: bool = True) -> BasisReport:
    """consequence_dim + dim P_m^a = (m-1)! for every test tuple with min_m <= m <= max_m."""
    if check:
        check_generators(S, alg)
    jobs = [(S, alg, rep, cap) for m in range(min_m, max_m + 1) for rep in probe_tuples(alg, m)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            verdicts = list(pool.map(_verdict_job, jobs, chunksize=1))
    else:
        verdicts = [_verdict_job(j) for j in jobs]
    return BasisReport(verdicts)
