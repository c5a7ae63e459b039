"""Evaluation of graded Lie monomials on a graded matrix algebra.

By multilinearity a polynomial is an identity iff it vanishes when every
variable runs over a homogeneous basis of its component.  Two reductions keep
the enumeration small for polynomials of length m >= 2:

* central basis elements contribute nothing to a bracket, so each component
  is replaced by a basis of a complement of its central part;
* every basis element is height-homogeneous (all entries on one
  superdiagonal), so an assignment whose heights sum to 0 or to more than
  n - 1 evaluates to zero and is skipped.

Bulk evaluation works on integer numpy batches: basis matrices are scaled
to primitive integer matrices, which rescales every evaluation by a nonzero
constant per assignment and so changes neither zero tests nor ranks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .exactla import RationalMatrix, rank_of_array
from .freelie import (
    GradedVariable,
    LieTreeMonomial,
    MultilinearPolynomial,
    as_polynomial,
    to_ptree,
)
from .group import GroupElement
from .matrixalg import BasisElement, GradedAlgebra, UpperTriMatrix, bracket, center_basis

DEFAULT_CAP = 2_000_000  # stored matrix entries per evaluation matrix
_WORK_BUDGET = 4_000_000  # int64 cells held by one batch memo


class CapExceeded(RuntimeError):
    """An evaluation matrix would exceed the configured number of stored entries."""

    def __init__(self, needed: int, cap: int, what: str = "evaluation matrix"):
        super().__init__(f"{what} needs more than {cap} stored entries (reached {needed})")
        self.needed = needed
        self.cap = cap
        self.what = what


class EvaluationError(ValueError):
    pass


DegreeTuple = tuple[GroupElement, ...]
Assignment = dict  # GradedVariable -> UpperTriMatrix


def tuple_variables(degrees: Sequence[GroupElement]) -> tuple[GradedVariable, ...]:
    """x_1^(a_1), ..., x_m^(a_m)."""
    return tuple(GradedVariable(i + 1, d) for i, d in enumerate(degrees))


# ---------------------------------------------------------------------------
# exact single evaluations


def _check_group(alg: GradedAlgebra, v: GradedVariable):
    if v.degree.owner != alg.group:
        raise EvaluationError(f"degree of {v} lies outside the group {alg.group}")


def in_component(alg: GradedAlgebra, a: UpperTriMatrix, degree: GroupElement) -> bool:
    from .matrixalg import _solve_in_span

    if a.is_zero:
        return True
    comp = alg.component(degree)
    if any(b.matrix == a for b in comp):
        return True
    return bool(comp) and _solve_in_span(a, [b.matrix for b in comp])


def evaluate_monomial(m: LieTreeMonomial, a: Mapping[GradedVariable, object], alg: GradedAlgebra) -> UpperTriMatrix:
    """Nested bracket of the assigned matrices; values may be matrices or basis elements."""
    if isinstance(m, GradedVariable):
        _check_group(alg, m)
        if m not in a:
            raise EvaluationError(f"no value assigned to {m}")
        val = a[m]
        if isinstance(val, BasisElement):
            if val.degree != m.degree:
                raise EvaluationError(f"{val.label} has degree {val.degree}, {m} needs {m.degree}")
            return val.matrix
        if val.n != alg.n:
            raise EvaluationError("assigned matrix has the wrong size")
        if not in_component(alg, val, m.degree):
            raise EvaluationError(f"value assigned to {m} is not homogeneous of degree {m.degree}")
        return val
    return bracket(evaluate_monomial(m.left, a, alg), evaluate_monomial(m.right, a, alg))


def evaluate_polynomial(f, a: Mapping[GradedVariable, object], alg: GradedAlgebra) -> UpperTriMatrix:
    f = as_polynomial(f)
    out = UpperTriMatrix.zero(alg.n)
    for mono, c in f.terms.items():
        out = out + evaluate_monomial(mono, a, alg).scale(c)
    return out


def basis_assignments(variables: Sequence[GradedVariable], alg: GradedAlgebra) -> Iterator[dict]:
    """All homogeneous basis assignments, row-major over the ordered component bases."""
    comps = [alg.component(v.degree) for v in variables]
    if any(not c for c in comps):
        return
    idx = [0] * len(variables)
    while True:
        yield {v: comps[k][idx[k]] for k, v in enumerate(variables)}
        k = len(variables) - 1
        while k >= 0:
            idx[k] += 1
            if idx[k] < len(comps[k]):
                break
            idx[k] = 0
            k -= 1
        if k < 0:
            return


# ---------------------------------------------------------------------------
# reduced candidate lists and batched integer evaluation


@dataclass(frozen=True)
class _Candidate:
    label: str
    element: BasisElement
    array: np.ndarray  # primitive integer n x n
    height: int


def _integer_array(a: UpperTriMatrix) -> np.ndarray:
    den = 1
    for _, v in a.items:
        den = lcm(den, v.denominator)
    out = np.zeros((a.n, a.n), dtype=np.int64)
    for (i, j), v in a.items:
        out[i, j] = int(v * den)
    return out


_CANDIDATE_CACHE: dict = {}


def reduced_candidates(alg: GradedAlgebra, degree: GroupElement, modulo_center: bool = True) -> tuple[_Candidate, ...]:
    """Basis elements of A_degree, minus a central part when ``modulo_center``.

    The kept elements together with the central part still span the
    component, so they suffice for polynomials of length >= 2.
    """
    key = (id(alg), alg, degree, modulo_center)
    hit = _CANDIDATE_CACHE.get(key)
    if hit is not None:
        return hit
    comp = alg.component(degree)
    kept = list(comp)
    if modulo_center and comp:
        from .exactla import SpanBuilder

        cen = center_basis(alg, degree)
        if cen:
            positions = [(i, j) for i in range(alg.n) for j in range(i, alg.n)]
            col = {p: k for k, p in enumerate(positions)}

            def vec(m: UpperTriMatrix) -> dict[int, int]:
                arr = _integer_array(m)
                return {col[p]: int(arr[p]) for p, _ in m.items}

            span = SpanBuilder(len(positions))
            for c in cen:
                span.add(vec(c))
            kept = []
            for b in comp:
                before = span.rank()
                span.add(vec(b.matrix))
                if span.rank() > before:
                    kept.append(b)
                    if span.rank() == len(comp):
                        break
    out = []
    for b in kept:
        h = b.matrix.height()
        if h is None:
            raise EvaluationError(f"basis element {b.label} is not height-homogeneous")
        out.append(_Candidate(b.label, b, _integer_array(b.matrix), h))
    out = tuple(out)
    _CANDIDATE_CACHE[key] = out
    return out


def pruned_assignments(cands: Sequence[Sequence[_Candidate]], n: int) -> np.ndarray:
    """Index tuples (row-major) whose total height lies in [1, n-1]."""
    m = len(cands)
    rows = np.zeros((1, 0), dtype=np.int32)
    hsum = np.zeros(1, dtype=np.int64)
    for k in range(m):
        c = len(cands[k])
        if c == 0:
            return np.zeros((0, m), dtype=np.int32)
        hs = np.array([x.height for x in cands[k]], dtype=np.int64)
        rows = np.concatenate([np.repeat(rows, c, axis=0), np.tile(np.arange(c, dtype=np.int32), len(rows))[:, None]], axis=1)
        hsum = np.repeat(hsum, c) + np.tile(hs, len(hsum))
        keep = hsum <= n - 1
        rows, hsum = rows[keep], hsum[keep]
    keep = hsum >= 1
    return rows[keep]


def _tree_nodes(pt, acc: set):
    if pt in acc or isinstance(pt, int):
        return
    acc.add(pt)
    _tree_nodes(pt[0], acc)
    _tree_nodes(pt[1], acc)


class _Evaluator:
    """Evaluates many positional trees over one batch of assignments."""

    def __init__(self, leaves: list[np.ndarray]):
        self.leaves = leaves
        self.memo: dict = {}

    def value(self, pt) -> np.ndarray:
        if isinstance(pt, int):
            return self.leaves[pt]
        hit = self.memo.get(pt)
        if hit is not None:
            return hit
        a = self.value(pt[0])
        b = self.value(pt[1])
        r = a @ b - b @ a
        self.memo[pt] = r
        return r


def _poly_rows(items: Iterable, variables: Sequence[GradedVariable]) -> list[list[tuple[object, int]]]:
    """Each item (monomial or polynomial) as integer (ptree, coef) pairs."""
    pos = {v: k for k, v in enumerate(variables)}
    out = []
    for it in items:
        f = as_polynomial(it)
        if f.terms and set(f.variables()) != set(variables):
            raise EvaluationError("polynomial variables do not match the degree tuple")
        den = 1
        for c in f.terms.values():
            den = lcm(den, c.denominator)
        out.append([(to_ptree(mono, pos), int(c * den)) for mono, c in f.sorted_terms()])
    return out


def _dtype_for(cands, m: int, rows) -> object:
    maxabs = max((int(np.abs(c.array).max()) for cs in cands for c in cs), default=1)
    n = cands[0][0].array.shape[0] if cands and cands[0] else 1
    coef = max((sum(abs(c) for _, c in r) for r in rows), default=1)
    bound = coef * (2 * n * max(maxabs, 1)) ** m
    return np.int64 if bound < 2 ** 62 else object


def _batches(assign: np.ndarray, nodes: int, n: int) -> Iterator[np.ndarray]:
    size = max(16, _WORK_BUDGET // max(1, (nodes + 1) * n * n))
    for s in range(0, len(assign), size):
        yield assign[s : s + size]


def _upper_positions(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(n, 1)


def _batch_values(rows, cands, batch, dtype, n):
    """(len(rows), len(batch) * P) values of each row on each assignment, strict upper entries."""
    leaves = []
    for k, cs in enumerate(cands):
        stack = np.stack([c.array for c in cs]).astype(dtype)
        leaves.append(stack[batch[:, k]])
    ev = _Evaluator(leaves)
    iu = _upper_positions(n)
    out = np.zeros((len(rows), len(batch) * len(iu[0])), dtype=dtype)
    for r, terms in enumerate(rows):
        acc = None
        for pt, c in terms:
            v = ev.value(pt)
            acc = v * c if acc is None else acc + v * c
        if acc is not None:
            out[r] = acc[:, iu[0], iu[1]].reshape(-1)
    return out


def _normalize_columns(block: np.ndarray) -> np.ndarray:
    """Drop zero columns, fix the sign of each column, drop duplicates (span preserving)."""
    if block.size == 0:
        return block
    block = block[:, np.any(block != 0, axis=0)]
    if block.shape[1] == 0 or block.dtype == object:
        return block
    first = np.argmax(block != 0, axis=0)
    signs = np.sign(block[first, np.arange(block.shape[1])])
    block = block * signs
    return np.unique(block, axis=1)


def evaluation_array(items: Sequence, degrees: Sequence[GroupElement], alg: GradedAlgebra,
                     cap: int = DEFAULT_CAP, dedupe: bool = False) -> np.ndarray:
    """Integer evaluation matrix for polynomials of length >= 2.

    Rows follow ``items``.  Columns run over pruned assignments in row-major
    order and, within an assignment, over strictly upper positions in
    row-major order; all-zero columns are dropped.  With ``dedupe`` columns
    are also sign-normalized and deduplicated, which preserves the rank but
    not the column order.
    """
    degrees = tuple(degrees)
    m = len(degrees)
    if m < 2:
        raise EvaluationError("evaluation_array handles polynomials of length >= 2")
    variables = tuple_variables(degrees)
    for v in variables:
        _check_group(alg, v)
    rows = _poly_rows(items, variables)
    cands = [reduced_candidates(alg, d) for d in degrees]
    assign = pruned_assignments(cands, alg.n)
    if len(assign) == 0 or not rows:
        return np.zeros((len(rows), 0), dtype=np.int64)
    nodes: set = set()
    for terms in rows:
        for pt, _ in terms:
            _tree_nodes(pt, nodes)
    dtype = _dtype_for(cands, m, rows)
    blocks = []
    stored = 0
    for batch in _batches(assign, len(nodes), alg.n):
        block = _batch_values(rows, cands, batch, dtype, alg.n)
        block = _normalize_columns(block) if dedupe else block[:, np.any(block != 0, axis=0)]
        if block.shape[1]:
            blocks.append(block)
            stored += block.size
            if stored > cap:
                raise CapExceeded(stored, cap)
    if not blocks:
        return np.zeros((len(rows), 0), dtype=dtype)
    out = np.concatenate(blocks, axis=1)
    if dedupe and len(blocks) > 1:
        out = _normalize_columns(out)
    return out


def evaluation_matrix(items: Sequence, degrees: Sequence[GroupElement], alg: GradedAlgebra,
                      cap: int = DEFAULT_CAP) -> RationalMatrix:
    """Evaluation matrix (rows = items) with its rank equal to the dimension they span modulo identities."""
    degrees = tuple(degrees)
    if len(degrees) == 1:
        return _length_one_matrix(items, degrees, alg)
    arr = evaluation_array(items, degrees, alg, cap=cap)
    return RationalMatrix.from_sparse(({c: int(v) for c, v in enumerate(r) if v} for r in arr.tolist()), arr.shape[1])


def _length_one_matrix(items, degrees, alg):
    comp = alg.component(degrees[0])
    rows = []
    for it in items:
        f = as_polynomial(it)
        c = sum(f.terms.values(), Fraction(0))
        rows.append({k: c for k in range(len(comp))} if c else {})
    return RationalMatrix.from_sparse(rows, max(1, len(comp)))


def evaluation_rank(items: Sequence, degrees: Sequence[GroupElement], alg: GradedAlgebra, cap: int = DEFAULT_CAP) -> int:
    degrees = tuple(degrees)
    if len(degrees) == 1:
        from .exactla import rank

        return rank(_length_one_matrix(items, degrees, alg))
    return rank_of_array(evaluation_array(items, degrees, alg, cap=cap, dedupe=True))


# ---------------------------------------------------------------------------
# identity checking


def _witness_dict(variables, cands, idx) -> dict:
    return {v: cands[k][int(idx[k])].element for k, v in enumerate(variables)}


def find_nonvanishing(f, alg: GradedAlgebra):
    """A basis assignment on which f is nonzero, or None if f is a graded identity."""
    f = as_polynomial(f)
    if f.is_zero():
        return None
    variables = f.variables()
    for v in variables:
        _check_group(alg, v)
    if any(not alg.component(v.degree) for v in variables):
        return None
    if len(variables) == 1:
        return {variables[0]: alg.component(variables[0].degree)[0]}
    degrees = tuple(v.degree for v in variables)
    rows = _poly_rows([f], variables)
    cands = [reduced_candidates(alg, d) for d in degrees]
    assign = pruned_assignments(cands, alg.n)
    if len(assign) == 0:
        return None
    nodes: set = set()
    for pt, _ in rows[0]:
        _tree_nodes(pt, nodes)
    dtype = _dtype_for(cands, len(variables), rows)
    P = alg.n * (alg.n - 1) // 2
    for batch in _batches(assign, len(nodes), alg.n):
        vals = _batch_values(rows, cands, batch, dtype, alg.n)[0].reshape(len(batch), P)
        bad = np.nonzero(np.any(vals != 0, axis=1))[0]
        if len(bad):
            return _witness_dict(variables, cands, batch[bad[0]])
    return None


def is_graded_identity(f, alg: GradedAlgebra) -> bool:
    """True iff f vanishes under every graded substitution into ``alg``."""
    return find_nonvanishing(f, alg) is None


def nonvanishing_value(f, alg: GradedAlgebra):
    """(assignment, value) for a nonvanishing basis substitution, or None."""
    w = find_nonvanishing(f, alg)
    if w is None:
        return None
    return w, evaluate_polynomial(f, w, alg)
