"""Upper triangular matrices as a Lie algebra, with elementary and type 2 gradings."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .group import GroupElement, GroupError, GroupSpec, order, reverse_sequence


class GradingError(ValueError):
    pass


@dataclass(frozen=True)
class UpperTriMatrix:
    """Exact n x n upper triangular matrix stored sparsely, 0-based (i, j) keys."""

    n: int
    items: tuple[tuple[tuple[int, int], Fraction], ...] = ()

    @classmethod
    def from_dict(cls, n: int, entries: Mapping[tuple[int, int], object]) -> "UpperTriMatrix":
        clean = {}
        for (i, j), v in entries.items():
            v = Fraction(v)
            if v == 0:
                continue
            if not (0 <= i <= j < n):
                raise ValueError(f"entry ({i + 1},{j + 1}) is not upper triangular in size {n}")
            clean[(i, j)] = v
        return cls(n, tuple(sorted(clean.items())))

    @classmethod
    def zero(cls, n: int) -> "UpperTriMatrix":
        return cls(n)

    @classmethod
    def from_array(cls, a) -> "UpperTriMatrix":
        a = np.asarray(a, dtype=object)
        n = a.shape[0]
        if np.any(a[np.tril_indices(n, -1)] != 0):
            raise ValueError("matrix has entries below the diagonal")
        return cls.from_dict(n, {(i, j): a[i, j] for i in range(n) for j in range(i, n)})

    def as_dict(self) -> dict[tuple[int, int], Fraction]:
        return dict(self.items)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        return self.as_dict().get(ij, Fraction(0))

    @property
    def is_zero(self) -> bool:
        return not self.items

    def _same(self, other: "UpperTriMatrix"):
        if other.n != self.n:
            raise ValueError(f"size mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "UpperTriMatrix") -> "UpperTriMatrix":
        self._same(other)
        d = self.as_dict()
        for k, v in other.items:
            d[k] = d.get(k, 0) + v
        return UpperTriMatrix.from_dict(self.n, d)

    def __neg__(self) -> "UpperTriMatrix":
        return UpperTriMatrix(self.n, tuple((k, -v) for k, v in self.items))

    def __sub__(self, other: "UpperTriMatrix") -> "UpperTriMatrix":
        return self + (-other)

    def scale(self, c) -> "UpperTriMatrix":
        c = Fraction(c)
        return UpperTriMatrix.from_dict(self.n, {k: c * v for k, v in self.items})

    def __matmul__(self, other: "UpperTriMatrix") -> "UpperTriMatrix":
        self._same(other)
        rows: dict[int, list] = {}
        for (k, j), v in other.items:
            rows.setdefault(k, []).append((j, v))
        out: dict[tuple[int, int], Fraction] = {}
        for (i, k), u in self.items:
            for j, v in rows.get(k, ()):
                out[(i, j)] = out.get((i, j), 0) + u * v
        return UpperTriMatrix.from_dict(self.n, out)

    def to_array(self, dtype=object) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=dtype)
        for (i, j), v in self.items:
            a[i, j] = v
        return a

    def height(self):
        """Common superdiagonal index j - i of all entries, or None if mixed."""
        hs = {j - i for (i, j), _ in self.items}
        if len(hs) == 1:
            return hs.pop()
        return 0 if not hs else None

    def __str__(self) -> str:
        if not self.items:
            return "0"
        parts = []
        for (i, j), v in self.items:
            unit = f"e{i + 1}{j + 1}" if self.n < 10 else f"e{i + 1},{j + 1}"
            if v == 1:
                parts.append(f"+{unit}")
            elif v == -1:
                parts.append(f"-{unit}")
            else:
                parts.append(f"{'+' if v > 0 else '-'}{abs(v)}*{unit}")
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s


def unit(n: int, i: int, j: int) -> UpperTriMatrix:
    """Matrix unit e_{ij}, 1-based indices."""
    return UpperTriMatrix.from_dict(n, {(i - 1, j - 1): 1})


def bracket(a: UpperTriMatrix, b: UpperTriMatrix) -> UpperTriMatrix:
    return (a @ b) - (b @ a)


def flip_involution(a: UpperTriMatrix) -> UpperTriMatrix:
    """Flip along the second diagonal: e_{ij} -> e_{n+1-j, n+1-i}."""
    n = a.n
    return UpperTriMatrix.from_dict(n, {(n - 1 - j, n - 1 - i): v for (i, j), v in a.items})


# ---------------------------------------------------------------------------
# gradings


@dataclass(frozen=True)
class ElementaryGrading:
    n: int
    group: GroupSpec
    eta: tuple[GroupElement, ...]

    def __post_init__(self):
        object.__setattr__(self, "eta", tuple(self.eta))
        if len(self.eta) != self.n - 1:
            raise GradingError(f"eta must have {self.n - 1} entries, got {len(self.eta)}")
        for g in self.eta:
            if g.owner != self.group:
                raise GradingError("eta entries must lie in the grading group")

    def __str__(self) -> str:
        return f"ut({self.n}; {', '.join(str(g) for g in self.eta)}) over {self.group}"


def unit_degree(g: ElementaryGrading, i: int, j: int) -> GroupElement:
    """Degree of e_{ij} (1-based): identity on the diagonal, g_i + ... + g_{j-1} above."""
    if not (1 <= i <= j <= g.n):
        raise GradingError(f"unit index ({i},{j}) out of range for n={g.n}")
    d = g.group.identity()
    for k in range(i - 1, j - 1):
        d = d + g.eta[k]
    return d


def elementary_isomorphic(a: ElementaryGrading, b: ElementaryGrading) -> bool:
    if a.n != b.n or a.group != b.group:
        raise GradingError("gradings must share size and group")
    return a.eta == b.eta or a.eta == reverse_sequence(b.eta)


@dataclass(frozen=True)
class BasisElement:
    label: str
    matrix: UpperTriMatrix
    degree: GroupElement


@dataclass(frozen=True)
class GradedAlgebra:
    n: int
    group: GroupSpec
    basis: tuple[BasisElement, ...]
    name: str = ""
    source: object = field(default=None, compare=False, hash=False, repr=False)

    def component(self, degree: GroupElement) -> tuple[BasisElement, ...]:
        return tuple(b for b in self.basis if b.degree == degree)

    def components(self) -> dict[GroupElement, tuple[BasisElement, ...]]:
        out: dict[GroupElement, list] = {}
        for b in self.basis:
            out.setdefault(b.degree, []).append(b)
        return {d: tuple(out[d]) for d in sorted(out)}

    @property
    def support(self) -> tuple[GroupElement, ...]:
        return tuple(sorted({b.degree for b in self.basis}))

    def dimension(self) -> int:
        return len(self.basis)

    def component_dims(self) -> dict[GroupElement, int]:
        return {d: len(bs) for d, bs in self.components().items()}


def elementary_algebra(g: ElementaryGrading, name: str = "") -> GradedAlgebra:
    basis = []
    for i in range(1, g.n + 1):
        for j in range(i, g.n + 1):
            basis.append(
                BasisElement(f"e{i}{j}" if g.n < 10 else f"e{i},{j}", unit(g.n, i, j), unit_degree(g, i, j))
            )
    return GradedAlgebra(g.n, g.group, tuple(basis), name=name or str(g), source=g)


@dataclass(frozen=True)
class Type2Spec:
    """Palindromic elementary grading refined by the flip involution.

    ``base`` is written over the extended group and ``t`` is the extra order-2
    element separating symmetric from skew-symmetric parts.
    """

    base: ElementaryGrading
    t: GroupElement

    def __post_init__(self):
        if self.base.eta != reverse_sequence(self.base.eta):
            raise GradingError("type 2 gradings need a palindromic eta")
        if self.t.owner != self.base.group:
            raise GradingError("t must lie in the grading group")
        if order(self.t) != 2:
            raise GradingError("t must have order exactly 2")
        if self.t in _generated_subgroup(self.base.eta, self.base.group):
            raise GradingError("t must be independent of the eta entries")


def _generated_subgroup(gens: Sequence[GroupElement], spec: GroupSpec, limit: int = 10_000):
    """Subgroup generated by ``gens`` (finite groups), or a bounded ball of it."""
    seen = {spec.identity()}
    frontier = [spec.identity()]
    steps = list(gens) + [-g for g in gens]
    while frontier and len(seen) < limit:
        nxt = []
        for a in frontier:
            for s in steps:
                b = a + s
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return seen


def type2_algebra(spec: Type2Spec, name: str = "") -> GradedAlgebra:
    """Basis of skew X_{i:m} = e_{i:m} - e_{-i:m} and symmetric X'_{i:m} = e_{i:m} + e_{-i:m}.

    e_{-i:m} is the flip image of e_{i:m}.  Zero elements are dropped and a
    self-paired X' = 2 e_{i:m} is stored as e_{i:m}.  Skew elements carry the
    base degree, symmetric ones carry base degree + t.
    """
    g = spec.base
    n = g.n
    basis = []
    for m in range(n):
        for i in range(1, n - m + 1):
            a, b = i, i + m
            fa, fb = n + 1 - b, n + 1 - a
            if (fa, fb) < (a, b):
                continue  # partner already emitted
            e = unit(n, a, b)
            fe = unit(n, fa, fb)
            deg = unit_degree(g, a, b)
            if (fa, fb) != (a, b):
                basis.append(BasisElement(f"X{i}:{m}", e - fe, deg))
                basis.append(BasisElement(f"X'{i}:{m}", e + fe, deg + spec.t))
            else:
                basis.append(BasisElement(f"X'{i}:{m}", e, deg + spec.t))
    order_ = {False: 0, True: 1}
    basis.sort(key=lambda be: (order_["'" in be.label], int(be.label.split(":")[1]),
                               int(be.label.lstrip("X'").split(":")[0])))
    return GradedAlgebra(n, g.group, tuple(basis), name=name or f"type2[{g}; t={spec.t}]", source=spec)


# ---------------------------------------------------------------------------
# linear algebra helpers on small matrix spans (exact)


def _solve_in_span(target: UpperTriMatrix, span: Sequence[UpperTriMatrix]) -> bool:
    from .exactla import RationalMatrix, in_span

    keys = sorted({k for m in span for k, _ in m.items} | {k for k, _ in target.items})
    if not keys:
        return True
    idx = {k: c for c, k in enumerate(keys)}
    rows = [{idx[k]: v for k, v in m.items} for m in span]
    vec = {idx[k]: v for k, v in target.items}
    return in_span(vec, RationalMatrix.from_sparse(rows, len(keys)))


def verify_grading(alg: GradedAlgebra) -> bool:
    """True iff the basis is independent and [A_g, A_h] lies in A_{g+h} for all pairs."""
    from .exactla import RationalMatrix, rank

    n = alg.n
    keys = [(i, j) for i in range(n) for j in range(i, n)]
    idx = {k: c for c, k in enumerate(keys)}
    rows = [{idx[k]: v for k, v in b.matrix.items} for b in alg.basis]
    if rank(RationalMatrix.from_sparse(rows, len(keys))) != len(alg.basis):
        return False
    comps = {d: [b.matrix for b in bs] for d, bs in alg.components().items()}
    for a in alg.basis:
        for b in alg.basis:
            c = bracket(a.matrix, b.matrix)
            if c.is_zero:
                continue
            target = comps.get(a.degree + b.degree, [])
            if not target or not _solve_in_span(c, target):
                return False
    return True


def center_basis(alg: GradedAlgebra, degree: GroupElement) -> list[UpperTriMatrix]:
    """Basis of A_degree intersected with the Lie center of the algebra (exact)."""
    from .exactla import nullspace

    comp = alg.component(degree)
    if not comp:
        return []
    n = alg.n
    # unknown coefficients c_k with sum c_k [b_k, a] = 0 for every basis element a
    eqs: dict[tuple, dict[int, Fraction]] = {}
    for k, b in enumerate(comp):
        for ai, a in enumerate(alg.basis):
            for (i, j), v in bracket(b.matrix, a.matrix).items:
                eqs.setdefault((ai, i, j), {})[k] = v
    rows = list(eqs.values())
    vecs = nullspace(rows, len(comp))
    out = []
    for v in vecs:
        m = UpperTriMatrix.zero(n)
        for k, c in enumerate(v):
            if c:
                m = m + comp[k].matrix.scale(c)
        out.append(m)
    return out
