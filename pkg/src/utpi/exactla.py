"""Exact rational matrices and ranks.

Ranks are computed by fraction-free (Bareiss) elimination over Python
integers after clearing denominators row by row.  Large matrices are handed
to FLINT's exact integer rank when python-flint is importable; both paths
are exact and are cross-checked in the test suite.
"""

from __future__ import annotations

import hashlib
import threading
from collections import OrderedDict
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

import numpy as np

try:  # optional exact backend
    import flint as _flint
except ImportError:  # pragma: no cover - exercised only without the extra
    _flint = None

FLINT_THRESHOLD = 4_000  # stored nonzeros above which flint is preferred


@dataclass
class RationalMatrix:
    """Sparse exact matrix: one {column: Fraction} dict per row, no zeros stored."""

    rows: list[dict[int, Fraction]]
    ncols: int

    @classmethod
    def from_sparse(cls, rows: Iterable[Mapping[int, object]], ncols: int) -> "RationalMatrix":
        out = []
        for r in rows:
            d = {}
            for c, v in r.items():
                if not 0 <= c < ncols:
                    raise IndexError(f"column {c} outside width {ncols}")
                v = Fraction(v)
                if v:
                    d[c] = v
            out.append(d)
        return cls(out, ncols)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[object]]) -> "RationalMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls.from_sparse(({c: v for c, v in enumerate(r) if v} for r in rows), ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def to_dense(self) -> list[list[Fraction]]:
        out = []
        for r in self.rows:
            row = [Fraction(0)] * self.ncols
            for c, v in r.items():
                row[c] = v
            out.append(row)
        return out

    def transpose(self) -> "RationalMatrix":
        cols: list[dict[int, Fraction]] = [dict() for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for c, v in r.items():
                cols[c][i] = v
        return RationalMatrix(cols, self.nrows)

    def stacked(self, other: "RationalMatrix") -> "RationalMatrix":
        if other.ncols != self.ncols:
            raise ValueError("width mismatch")
        return RationalMatrix(self.rows + other.rows, self.ncols)

    def integer_rows(self) -> list[dict[int, int]]:
        """Each row scaled by the lcm of its denominators."""
        out = []
        for r in self.rows:
            if not r:
                continue
            den = 1
            for v in r.values():
                den = lcm(den, v.denominator)
            out.append({c: int(v * den) for c, v in r.items()})
        return out


# ---------------------------------------------------------------------------
# rank engines


def _bareiss_rank(rows: list[dict[int, int]]) -> int:
    """Sparse fraction-free Gaussian elimination (Bareiss).

    Each step picks the pivot column with the fewest nonzeros among the
    remaining rows, and within it the shortest row.  Divisions by the previous
    pivot are exact.
    """
    rows = [dict(r) for r in rows if r]
    prev = 1
    rank = 0
    while rows:
        counts: dict[int, int] = {}
        for r in rows:
            for c in r:
                counts[c] = counts.get(c, 0) + 1
        if not counts:
            break
        col = min(counts, key=lambda c: (counts[c], c))
        pi = min((i for i, r in enumerate(rows) if col in r), key=lambda i: (len(rows[i]), i))
        prow = rows.pop(pi)
        a = prow[col]
        rest = []
        for r in rows:
            b = r.get(col)
            if b is None:
                if a != prev:
                    r = {c: v * a // prev for c, v in r.items()}
            else:
                new = {}
                for c, v in r.items():
                    if c != col:
                        new[c] = v * a
                for c, v in prow.items():
                    if c == col:
                        continue
                    x = new.get(c, 0) - b * v
                    if x:
                        new[c] = x
                    else:
                        new.pop(c, None)
                if prev != 1:
                    new = {c: v // prev for c, v in new.items()}
                r = {c: v for c, v in new.items() if v}
            if r:
                rest.append(r)
        rows = rest
        prev = a
        rank += 1
    return rank


def _flint_rank(rows: list[dict[int, int]], ncols: int) -> int:
    cols_used = sorted({c for r in rows for c in r})
    idx = {c: k for k, c in enumerate(cols_used)}
    dense = [[0] * len(cols_used) for _ in rows]
    for i, r in enumerate(rows):
        for c, v in r.items():
            dense[i][idx[c]] = v
    if not dense or not cols_used:
        return 0
    return _flint.fmpz_mat(dense).rank()


def flint_available() -> bool:
    return _flint is not None


class _RankCache:
    """Bounded LRU keyed by a content hash; safe under concurrent use."""

    def __init__(self, maxsize: int = 4096):
        self._d: OrderedDict[str, int] = OrderedDict()
        self._lock = threading.Lock()
        self.maxsize = maxsize
        self.hits = 0

    def get(self, key):
        with self._lock:
            if key in self._d:
                self._d.move_to_end(key)
                self.hits += 1
                return self._d[key]
        return None

    def put(self, key, value):
        with self._lock:
            self._d[key] = value
            self._d.move_to_end(key)
            while len(self._d) > self.maxsize:
                self._d.popitem(last=False)

    def clear(self):
        with self._lock:
            self._d.clear()
            self.hits = 0


RANK_CACHE = _RankCache()


def _content_key(rows: list[dict[int, int]], backend: str) -> str:
    h = hashlib.sha256(backend.encode())
    for r in rows:
        h.update(repr(sorted(r.items())).encode())
        h.update(b";")
    return h.hexdigest()


def _normalize_rows(rows: list[dict[int, int]]) -> list[dict[int, int]]:
    """Primitive, sign-normalized, deduplicated, sorted rows (rank preserving)."""
    seen = set()
    out = []
    for r in rows:
        if not r:
            continue
        g = 0
        for v in r.values():
            g = gcd(g, v)
        first = r[min(r)]
        if first < 0:
            g = -g
        key = tuple(sorted((c, v // g) for c, v in r.items()))
        if key not in seen:
            seen.add(key)
            out.append(key)
    out.sort()
    return [dict(k) for k in out]


def integer_rank(rows: list[dict[int, int]], ncols: int | None = None, backend: str = "auto") -> int:
    rows = _normalize_rows(rows)
    if not rows:
        return 0
    if ncols is None:
        ncols = 1 + max(c for r in rows for c in r)
    nnz = sum(len(r) for r in rows)
    if backend == "auto":
        backend = "flint" if (_flint is not None and nnz > FLINT_THRESHOLD) else "bareiss"
    key = _content_key(rows, backend)
    hit = RANK_CACHE.get(key)
    if hit is not None:
        return hit
    if backend == "bareiss":
        r = _bareiss_rank(rows)
    elif backend == "flint":
        if _flint is None:
            raise RuntimeError("python-flint is not installed")
        r = _flint_rank(rows, ncols)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    RANK_CACHE.put(key, r)
    return r


def rank(M: RationalMatrix, backend: str = "auto") -> int:
    """Exact rank over Q."""
    return integer_rank(M.integer_rows(), M.ncols, backend)


def rank_of_array(a: np.ndarray, backend: str = "auto") -> int:
    """Exact rank of an integer numpy array (rows as vectors)."""
    a = np.asarray(a)
    if a.size == 0:
        return 0
    a = a[np.any(a != 0, axis=1)]
    if a.size == 0:
        return 0
    a = a[:, np.any(a != 0, axis=0)]
    a = np.unique(a, axis=0) if a.dtype != object else a
    if a.shape[1] > a.shape[0] and a.dtype != object:
        a = np.unique(a, axis=1)
    if backend in ("auto", "flint") and _flint is not None and a.size > FLINT_THRESHOLD:
        h = hashlib.sha256(b"dense" + repr(a.shape).encode())
        h.update(a.tobytes() if a.dtype != object else repr(a.tolist()).encode())
        key = h.hexdigest()
        hit = RANK_CACHE.get(key)
        if hit is None:
            hit = _flint.fmpz_mat(a.tolist()).rank()
            RANK_CACHE.put(key, hit)
        return hit
    rows = []
    for r in a.tolist():
        rows.append({c: int(v) for c, v in enumerate(r) if v})
    return integer_rank(rows, a.shape[1], backend)


def in_span(v: Mapping[int, object], M: RationalMatrix) -> bool:
    """True iff v lies in the row space of M."""
    if any(c >= M.ncols or c < 0 for c, x in v.items() if x):
        raise IndexError("vector width exceeds matrix width")
    vec = RationalMatrix.from_sparse([v], M.ncols)
    if not vec.rows[0]:
        return True
    return rank(M) == rank(M.stacked(vec))


def dimension_of_intersection_complement(A: RationalMatrix, B: RationalMatrix) -> tuple[int, int, int]:
    """(dim A, dim B, dim A+B) for two row spans of equal width."""
    if A.ncols != B.ncols:
        raise ValueError("width mismatch")
    return rank(A), rank(B), rank(A.stacked(B))


def nullspace(rows: Sequence[Mapping[int, object]], ncols: int) -> list[list[Fraction]]:
    """Exact basis of {x : rows . x = 0} via reduced row echelon form."""
    mat = [[Fraction(0)] * ncols for _ in rows]
    for i, r in enumerate(rows):
        for c, v in r.items():
            mat[i][c] = Fraction(v)
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if p is None:
            continue
        mat[r], mat[p] = mat[p], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        x = [Fraction(0)] * ncols
        x[fcol] = Fraction(1)
        for i, pc in enumerate(pivots):
            x[pc] = -mat[i][fcol]
        basis.append(x)
    return basis


class SpanBuilder:
    """Accumulates integer vectors; reports the exact rank of everything added.

    Vectors are primitive-normalized and deduplicated on insertion and the
    rank is recomputed lazily, so callers can stop early once a known bound
    is reached.  With python-flint the accumulated rows are compacted to a
    reduced echelon basis at every rank computation.
    """

    def __init__(self, width: int):
        self.width = width
        self._keys: set = set()
        self._basis: list[dict[int, int]] = []
        self._pending: list[dict[int, int]] = []
        self._rank = 0

    @staticmethod
    def _key(vec: Mapping[int, int]):
        g = 0
        for v in vec.values():
            g = gcd(g, v)
        if vec[min(vec)] < 0:
            g = -g
        return tuple(sorted((c, v // g) for c, v in vec.items()))

    def add(self, vec: Mapping[int, int]) -> None:
        vec = {c: int(v) for c, v in vec.items() if v}
        if not vec:
            return
        if any(not 0 <= c < self.width for c in vec):
            raise IndexError("vector exceeds the span width")
        key = self._key(vec)
        if key in self._keys:
            return
        self._keys.add(key)
        self._pending.append(dict(key))

    def __len__(self):
        return len(self._basis) + len(self._pending)

    @property
    def pending(self) -> int:
        return len(self._pending)

    def _compact(self, rows: list[dict[int, int]]) -> tuple[int, list[dict[int, int]]]:
        if _flint is None or not rows:
            return integer_rank(rows, self.width), rows
        dense = [[0] * self.width for _ in rows]
        for i, r in enumerate(rows):
            for c, v in r.items():
                dense[i][c] = v
        R, _, r = _flint.fmpz_mat(dense).rref()
        basis = []
        for i in range(r):
            row = {c: int(R[i, c]) for c in range(self.width) if R[i, c] != 0}
            basis.append(dict(self._key(row)))
        return r, basis

    def rank(self) -> int:
        if self._pending:
            self._rank, self._basis = self._compact(self._basis + self._pending)
            self._pending = []
        return self._rank

    def contains(self, vec: Mapping[int, int]) -> bool:
        vec = {c: int(v) for c, v in vec.items() if v}
        if not vec:
            return True
        r = self.rank()
        return integer_rank(self._basis + [vec], self.width) == r

    def rows(self) -> list[dict[int, int]]:
        self.rank()
        return list(self._basis)
