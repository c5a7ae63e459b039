"""Good and bad degree sequences and trees, the monomials f_mu, and the
harnesses that test whether bad-tree monomials (or special-monomial
identities) generate all graded identities."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Sequence

from .evaluate import DEFAULT_CAP, find_nonvanishing
from .freelie import GradedVariable, MultilinearPolynomial, br
from .group import GroupElement, out_of_support_probe
from .matrixalg import ElementaryGrading, GradedAlgebra, elementary_algebra, unit_degree
from .tideal import BasisReport, GeneratorSet, membership, verify_basis

GOOD = "GOOD"
BAD = "BAD"


@dataclass(frozen=True)
class DegreeTree:
    """A leaf degree, or a pair of subtrees read as a commutator."""

    leaf: Optional[GroupElement] = None
    left: Optional["DegreeTree"] = None
    right: Optional["DegreeTree"] = None

    def __post_init__(self):
        if (self.leaf is None) == (self.left is None or self.right is None):
            raise ValueError("a tree is either a leaf or a pair of trees")

    @classmethod
    def pair(cls, left: "DegreeTree", right: "DegreeTree") -> "DegreeTree":
        return cls(left=left, right=right)

    @property
    def is_leaf(self) -> bool:
        return self.leaf is not None

    @property
    def length(self) -> int:
        return 1 if self.is_leaf else self.left.length + self.right.length

    def leaves(self) -> list[GroupElement]:
        return [self.leaf] if self.is_leaf else self.left.leaves() + self.right.leaves()

    def subtrees(self) -> Iterator["DegreeTree"]:
        """Proper subtrees, in preorder."""
        if not self.is_leaf:
            for t in (self.left, self.right):
                yield t
                yield from t.subtrees()

    def canonical(self) -> "DegreeTree":
        """Representative up to swapping the children of any node (f changes only by sign)."""
        if self.is_leaf:
            return self
        a, b = self.left.canonical(), self.right.canonical()
        if str(b) < str(a):
            a, b = b, a
        return DegreeTree.pair(a, b)

    def __str__(self) -> str:
        if self.is_leaf:
            return str(self.leaf)
        return f"({self.left}, {self.right})"


def leaf(g: GroupElement) -> DegreeTree:
    return DegreeTree(leaf=g)


def tree(spec) -> DegreeTree:
    """Build a tree from nested 2-tuples of group elements."""
    if isinstance(spec, DegreeTree):
        return spec
    if isinstance(spec, GroupElement):
        return leaf(spec)
    a, b = spec
    return DegreeTree.pair(tree(a), tree(b))


# ---------------------------------------------------------------------------
# f_mu


def _f(mu: DegreeTree, start: int):
    if mu.is_leaf:
        g = mu.leaf
        if g.is_identity:
            return br(GradedVariable(start, g), GradedVariable(start + 1, g)), start + 2
        return GradedVariable(start, g), start + 1
    a, k = _f(mu.left, start)
    b, k = _f(mu.right, k)
    return br(a, b), k


def f_mu(mu: DegreeTree) -> MultilinearPolynomial:
    """Monomial of shape mu; trivial-degree leaves become [x^(1), x^(1)]."""
    mono, _ = _f(mu, 1)
    return MultilinearPolynomial.monomial(mono)


# ---------------------------------------------------------------------------
# classification over matrix units


def _units(g: ElementaryGrading, degree: GroupElement) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, g.n + 1) for j in range(i + 1, g.n + 1) if unit_degree(g, i, j) == degree]


def _reachable(mu: DegreeTree, g: ElementaryGrading) -> dict[tuple[int, int], tuple]:
    """Units (up to sign) related to mu, each with one witnessing leaf assignment.

    The commutator of two strictly upper matrix units is plus or minus a unit,
    or zero, so the set of related elements stays a set of units.
    """
    if mu.is_leaf:
        return {u: (u,) for u in _units(g, mu.leaf)}
    left = _reachable(mu.left, g)
    right = _reachable(mu.right, g)
    out: dict[tuple[int, int], tuple] = {}
    for (i, j), wa in left.items():
        for (k, l), wb in right.items():
            if j == k:
                out.setdefault((i, l), wa + wb)
            elif l == i:
                out.setdefault((k, j), wa + wb)
    return out


@dataclass(frozen=True)
class TreeVerdict:
    tree: DegreeTree
    verdict: str
    witness: Optional[tuple[tuple[int, int], ...]] = None  # one unit per leaf when GOOD

    def to_json(self) -> dict:
        out = {"tree": str(self.tree), "verdict": self.verdict}
        if self.witness is not None:
            out["witness"] = [f"e{i}{j}" for i, j in self.witness]
        return out

    def __str__(self) -> str:
        if self.witness is None:
            return f"{self.tree}\t{self.verdict}"
        return f"{self.tree}\t{self.verdict}\t" + " ".join(f"e{i}{j}" for i, j in self.witness)


def classify_tree_witness(mu: DegreeTree, g: ElementaryGrading) -> TreeVerdict:
    reach = _reachable(mu, g)
    if not reach:
        return TreeVerdict(mu, BAD)
    return TreeVerdict(mu, GOOD, reach[min(reach)])


def classify_tree(mu: DegreeTree, g: ElementaryGrading) -> str:
    return GOOD if _reachable(mu, g) else BAD


def classify_sequence_assoc(seq: Sequence[GroupElement], g: ElementaryGrading) -> str:
    """GOOD iff some strictly upper matrix units of these degrees have a nonzero product."""
    if not seq:
        raise ValueError("sequence must be nonempty")
    ends = {(i, j) for i, j in _units(g, seq[0])}
    for d in seq[1:]:
        units = _units(g, d)
        ends = {(i, l) for i, j in ends for k, l in units if j == k}
        if not ends:
            return BAD
    return GOOD if ends else BAD


# ---------------------------------------------------------------------------
# enumeration


@lru_cache(maxsize=None)
def _shapes(n: int) -> tuple:
    """Bracketings of n leaves as nested tuples of None."""
    if n == 1:
        return (None,)
    out = []
    for k in range(1, n):
        for a in _shapes(k):
            for b in _shapes(n - k):
                out.append((a, b))
    return tuple(out)


def _label(shape, labels: Iterator[GroupElement]) -> DegreeTree:
    if shape is None:
        return leaf(next(labels))
    a = _label(shape[0], labels)
    b = _label(shape[1], labels)
    return DegreeTree.pair(a, b)


def _left_comb(n: int):
    shape = None
    for _ in range(n - 1):
        shape = (shape, None)
    return shape


def enumerate_trees(maxlen: int, alphabet: Sequence[GroupElement], left_normed: bool = False) -> Iterator[DegreeTree]:
    """All trees of length 1..maxlen; by length, then shape, then labeling.

    With ``left_normed`` only the left comb [z1, ..., zn] is produced for each length.
    """
    if maxlen < 1:
        raise ValueError("maxlen must be >= 1")
    alphabet = list(alphabet)
    for n in range(1, maxlen + 1):
        for shape in (_left_comb(n),) if left_normed else _shapes(n):
            for labels in itertools.product(alphabet, repeat=n):
                yield _label(shape, iter(labels))


def tree_alphabet(alg: GradedAlgebra) -> list[GroupElement]:
    """The support, plus one out-of-support probe degree when the group has one."""
    support = list(alg.support)
    probe = out_of_support_probe(alg.group, support)
    return support + ([probe] if probe is not None else [])


# ---------------------------------------------------------------------------
# generator sets


def _collect(trees: Iterator[DegreeTree], is_bad, alg: GradedAlgebra, minimal: bool) -> GeneratorSet:
    """Generators f_mu for every bad tree.

    With ``minimal`` a tree is skipped when it has a bad proper subtree (its
    f_mu is then a consequence) or when it is a child-swap of a tree already
    taken. Bad single out-of-support leaves become zero-degree generators.
    """
    support = set(alg.support)
    bad_keys: set[str] = set()
    seen: set[str] = set()
    polys, labels = [], []
    zero_outside = None
    for mu in trees:
        key = str(mu.canonical())
        if minimal:
            if key in seen or any(str(s.canonical()) in bad_keys for s in mu.subtrees()):
                continue
        seen.add(key)
        if not is_bad(mu):
            continue
        bad_keys.add(key)
        if mu.is_leaf and not mu.leaf.is_identity:
            if mu.leaf not in support:
                zero_outside = frozenset(support)
                continue
        polys.append(f_mu(mu))
        labels.append(f"f{mu}")
    return GeneratorSet(alg.group, polys, [], zero_outside, labels)


def conjecture1_generators(g: ElementaryGrading, maxlen: Optional[int] = None, minimal: bool = True) -> GeneratorSet:
    """f_mu for every bad tree of length at most n over support plus probe."""
    alg = elementary_algebra(g)
    maxlen = g.n if maxlen is None else maxlen
    trees = enumerate_trees(maxlen, tree_alphabet(alg))
    return _collect(trees, lambda mu: classify_tree(mu, g) == BAD, alg, minimal)


def conjecture1_check(g: ElementaryGrading, alg: Optional[GradedAlgebra], max_m: int, workers: int = 1,
                      cap: int = DEFAULT_CAP) -> BasisReport:
    alg = alg or elementary_algebra(g)
    return verify_basis(conjecture1_generators(g), alg, max_m, workers=workers, cap=cap)


def special_monomial_identities(alg: GradedAlgebra, maxlen: int, minimal: bool = True,
                                left_normed: bool = False) -> GeneratorSet:
    """Bracket monomials in z-blocks of length at most maxlen that are graded identities.

    A block is x^(g) with g nontrivial or [x^(1), x^(1)]. Identity is decided
    by evaluation, so this also applies to type 2 gradings. ``left_normed``
    restricts to the sequence-shaped monomials [z1, ..., zt].
    """
    trees = enumerate_trees(maxlen, tree_alphabet(alg), left_normed=left_normed)
    return _collect(trees, lambda mu: find_nonvanishing(f_mu(mu), alg) is None, alg, minimal)


def conjecture2_check(alg: GradedAlgebra, maxlen: int, max_m: int, workers: int = 1,
                      cap: int = DEFAULT_CAP) -> BasisReport:
    return verify_basis(special_monomial_identities(alg, maxlen), alg, max_m, workers=workers, cap=cap)


def follows_from_special_monomials(f, alg: GradedAlgebra, maxlen: int, left_normed: bool = False) -> bool:
    """Membership of f in the consequence span of the special-monomial identities."""
    return membership(f, special_monomial_identities(alg, maxlen, left_normed=left_normed))


def lie_equivalence_counterexamples(g: ElementaryGrading, maxlen: int) -> list[DegreeTree]:
    """Trees where the bad classification and the identity test for f_mu disagree."""
    alg = elementary_algebra(g)
    out = []
    for mu in enumerate_trees(maxlen, tree_alphabet(alg)):
        bad = classify_tree(mu, g) == BAD
        ident = find_nonvanishing(f_mu(mu), alg) is None
        if bad != ident:
            out.append(mu)
    return out


__all__ = [
    "BAD",
    "GOOD",
    "DegreeTree",
    "TreeVerdict",
    "classify_sequence_assoc",
    "classify_tree",
    "classify_tree_witness",
    "conjecture1_check",
    "conjecture1_generators",
    "conjecture2_check",
    "enumerate_trees",
    "f_mu",
    "follows_from_special_monomials",
    "leaf",
    "lie_equivalence_counterexamples",
    "special_monomial_identities",
    "tree",
    "tree_alphabet",
]
