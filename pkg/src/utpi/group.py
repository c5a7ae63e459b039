"""Finitely generated abelian groups presented as Z^r x Z_{k1} x ... x Z_{ks}.

Elements are immutable coordinate vectors; torsion coordinates are always
stored reduced.  All group operations are written additively in code even
where the mathematical notation is multiplicative.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

INFINITE = math.inf

_DEFAULT_NAMES = ("g", "h", "k")


class GroupError(ValueError):
    pass


@dataclass(frozen=True)
class GroupSpec:
    free_rank: int
    torsion: tuple[int, ...] = ()
    names: tuple[str, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise GroupError("free rank must be non-negative")
        if any(k < 2 for k in self.torsion):
            raise GroupError("torsion moduli must be >= 2")
        if not self.names:
            object.__setattr__(self, "names", default_names(self.arity))
        if len(self.names) != self.arity:
            raise GroupError(
                f"{len(self.names)} generator names for a group of arity {self.arity}"
            )
        if len(set(self.names)) != len(self.names):
            raise GroupError("generator names must be distinct")

    @property
    def arity(self) -> int:
        return self.free_rank + len(self.torsion)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def moduli(self) -> tuple[int, ...]:
        """Per-coordinate modulus, 0 for free coordinates."""
        return (0,) * self.free_rank + tuple(self.torsion)

    def order(self):
        if not self.is_finite:
            return INFINITE
        return math.prod(self.torsion)

    def element(self, coords: Sequence[int]) -> "GroupElement":
        if len(coords) != self.arity:
            raise GroupError(f"expected {self.arity} coordinates, got {len(coords)}")
        return GroupElement(self, _reduce(coords, self.moduli))

    def identity(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.arity)

    def generator(self, name: str) -> "GroupElement":
        try:
            i = self.names.index(name)
        except ValueError:
            raise GroupError(f"unknown generator {name!r}") from None
        coords = [0] * self.arity
        coords[i] = 1
        return self.element(coords)

    def elements(self, radius: int = 1) -> Iterator["GroupElement"]:
        """Enumerate the group (finite case) or a box of free coordinates.

        Free coordinates range over [-radius, radius]; elements come sorted by
        the size of the free part so that small elements appear first.
        """
        ranges = []
        for mod in self.moduli:
            ranges.append(range(mod) if mod else range(-radius, radius + 1))
        items = [self.element(c) for c in itertools.product(*ranges)]
        items.sort(key=lambda e: (sum(abs(c) for c in e.coords[: self.free_rank]), e.sort_key()))
        yield from items

    def __str__(self) -> str:
        if self.arity == 0:
            return "1"
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z{k}" for k in self.torsion)
        text = "x".join(parts)
        if self.names != default_names(self.arity):
            text += "{" + ",".join(self.names) + "}"
        return text


def default_names(arity: int) -> tuple[str, ...]:
    if arity <= len(_DEFAULT_NAMES):
        return _DEFAULT_NAMES[:arity]
    return tuple(f"g{i + 1}" for i in range(arity))


def _reduce(coords: Iterable[int], moduli: Sequence[int]) -> tuple[int, ...]:
    return tuple(int(c) % m if m else int(c) for c, m in zip(coords, moduli))


@dataclass(frozen=True)
class GroupElement:
    owner: GroupSpec
    coords: tuple[int, ...]

    def _check(self, other: "GroupElement"):
        if not isinstance(other, GroupElement) or other.owner != self.owner:
            raise GroupError("group elements belong to different groups")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return GroupElement(
            self.owner,
            _reduce((a + b for a, b in zip(self.coords, other.coords)), self.owner.moduli),
        )

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.owner, _reduce((-a for a in self.coords), self.owner.moduli))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def scale(self, k: int) -> "GroupElement":
        return GroupElement(self.owner, _reduce((k * a for a in self.coords), self.owner.moduli))

    @property
    def is_identity(self) -> bool:
        return not any(self.coords)

    def sort_key(self) -> tuple[int, ...]:
        return self.coords

    def __lt__(self, other: "GroupElement") -> bool:
        self._check(other)
        return self.coords < other.coords

    def __str__(self) -> str:
        return format_element(self)

    def __repr__(self) -> str:
        return f"<{self} in {self.owner}>"


def format_element(a: GroupElement) -> str:
    """Additive expression in generator names, e.g. ``2+t``, ``g-h``, ``0``.

    A generator literally named ``1`` (as in Z3xZ2{1,t}) prints as a bare
    integer coefficient.
    """
    terms = []
    owner = a.owner
    for c, name, mod in zip(a.coords, owner.names, owner.moduli):
        if c == 0:
            continue
        if name == "1":
            body, coef = str(abs(c)), 1
        else:
            body, coef = name, abs(c)
        if coef != 1:
            body = f"{coef}{body}"
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    out = terms[0][1] if terms[0][0] == "+" else "-" + terms[0][1]
    for sign, body in terms[1:]:
        out += sign + body
    return out


def identity(spec: GroupSpec) -> GroupElement:
    return spec.identity()


def combine(a: GroupElement, b: GroupElement) -> GroupElement:
    return a + b


def inverse(a: GroupElement) -> GroupElement:
    return -a


def order(a: GroupElement):
    """Least k >= 1 with k*a = 0, or INFINITE when the free part is nonzero."""
    spec = a.owner
    if any(a.coords[: spec.free_rank]):
        return INFINITE
    k = 1
    for c, mod in zip(a.coords[spec.free_rank :], spec.torsion):
        k = math.lcm(k, mod // math.gcd(c, mod))
    return k


def reverse_sequence(eta: Sequence[GroupElement]) -> tuple[GroupElement, ...]:
    return tuple(reversed(eta))


def total(degrees: Iterable[GroupElement], spec: GroupSpec) -> GroupElement:
    acc = spec.identity()
    for d in degrees:
        acc = acc + d
    return acc


def out_of_support_probe(spec: GroupSpec, support: Iterable[GroupElement]):
    """Deterministic element outside ``support``, or None if there is none."""
    support = set(support)
    radius = 1
    while True:
        for e in spec.elements(radius):
            if e not in support:
                return e
        if spec.is_finite:
            return None
        radius += 1
