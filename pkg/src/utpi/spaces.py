"""Multilinear graded components P_m^a, their dimensions modulo the identities
of an algebra, and graded codimension sequences."""

from __future__ import annotations

import itertools
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import factorial
from typing import Sequence

from .evaluate import DEFAULT_CAP, evaluation_rank, tuple_variables
from .freelie import LieTreeMonomial, fixed_first_basis
from .group import GroupElement
from .matrixalg import GradedAlgebra, bracket


def spanning_monomials(degrees: Sequence[GroupElement]) -> list[LieTreeMonomial]:
    """The (m-1)! left-normed monomials with x_1 first."""
    if not degrees:
        raise ValueError("degree tuple must be nonempty")
    return fixed_first_basis(tuple_variables(degrees))


def dim_Pma(alg: GradedAlgebra, degrees: Sequence[GroupElement], cap: int = DEFAULT_CAP) -> int:
    """dim P_m^a modulo the graded identities of ``alg``."""
    degrees = tuple(degrees)
    support = set(alg.support)
    if any(d not in support for d in degrees):
        return 0
    m = len(degrees)
    if m == 1:
        return 1
    if m == 2:
        for a in alg.component(degrees[0]):
            for b in alg.component(degrees[1]):
                if not bracket(a.matrix, b.matrix).is_zero:
                    return 1
        return 0
    return evaluation_rank(spanning_monomials(degrees), degrees, alg, cap=cap)


def degree_multisets(support: Sequence[GroupElement], m: int) -> list[tuple[GroupElement, ...]]:
    """Sorted representative tuples, one per multiset of size m over ``support``."""
    return list(itertools.combinations_with_replacement(sorted(support), m))


def multinomial(rep: Sequence[GroupElement]) -> int:
    out = factorial(len(rep))
    for c in Counter(rep).values():
        out //= factorial(c)
    return out


@dataclass
class MultisetRecord:
    degrees: tuple[GroupElement, ...]
    dim: int
    count: int

    def to_json(self) -> dict:
        return {"degrees": [str(d) for d in self.degrees], "dim": self.dim, "count": self.count}


@dataclass
class CodimReport:
    m: int
    by_multiset: list[MultisetRecord] = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(r.dim * r.count for r in self.by_multiset)

    def to_json(self) -> dict:
        return {"m": self.m, "total": self.total, "by_multiset": [r.to_json() for r in self.by_multiset]}


def _job(args):
    alg, rep, cap = args
    return dim_Pma(alg, rep, cap=cap)


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("PI_WORKERS", "1")))
    except ValueError:
        return 1


def codimension(alg: GradedAlgebra, m: int, workers: int = 1, cap: int = DEFAULT_CAP,
                keep_zero: bool = True) -> CodimReport:
    """c_m^G as a sum over degree multisets of multiplicity times dim P_m^a.

    Records come in the sorted order of the multisets regardless of the
    number of workers.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    reps = degree_multisets(alg.support, m)
    if workers > 1 and len(reps) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            dims = list(pool.map(_job, [(alg, r, cap) for r in reps], chunksize=1))
    else:
        dims = [dim_Pma(alg, r, cap=cap) for r in reps]
    report = CodimReport(m)
    for rep, d in zip(reps, dims):
        if d or keep_zero:
            report.by_multiset.append(MultisetRecord(rep, d, multinomial(rep)))
    return report


def codimension_sequence(alg: GradedAlgebra, max_m: int, workers: int = 1, cap: int = DEFAULT_CAP) -> list[int]:
    return [codimension(alg, m, workers=workers, cap=cap).total for m in range(1, max_m + 1)]


def permutation_invariance_check(alg: GradedAlgebra, degrees: Sequence[GroupElement], sigma: Sequence[int]) -> bool:
    """dim P_m^a equals dim P_m^(a permuted by sigma); sigma is a permutation of 0..m-1."""
    degrees = tuple(degrees)
    if sorted(sigma) != list(range(len(degrees))):
        raise ValueError("sigma must be a permutation of the tuple positions")
    permuted = tuple(degrees[sigma[i]] for i in range(len(degrees)))
    return dim_Pma(alg, degrees) == dim_Pma(alg, permuted)
