"""Named gradings of UT_3 (and UT_2, UT_5) used throughout the workbench."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .group import GroupElement, GroupSpec
from .matrixalg import (
    ElementaryGrading,
    GradedAlgebra,
    Type2Spec,
    elementary_algebra,
    type2_algebra,
)


@dataclass(frozen=True)
class Preset:
    key: str
    title: str
    build: Callable[[], object]  # ElementaryGrading or Type2Spec
    y: Optional[str] = None  # degree expression bound to the y alias
    z: Optional[str] = None  # degree expression bound to the z alias
    formula: Optional[str] = None  # key into formulas.closed_form

    def grading(self):
        return self.build()

    def algebra(self) -> GradedAlgebra:
        return algebra_of(self.build(), self.key)


def algebra_of(spec, name: str = "") -> GradedAlgebra:
    if isinstance(spec, Type2Spec):
        return type2_algebra(spec, name=name)
    return elementary_algebra(spec, name=name)


def _elem(n, group, *names):
    def build():
        def parse(x):
            if x == "0":
                return group.identity()
            if x.startswith("-"):
                return -group.generator(x[1:])
            return group.generator(x)

        return ElementaryGrading(n, group, tuple(parse(x) for x in names))

    return build


def _t2(group, base_names, t_name):
    base = _elem(3, group, *base_names)

    def build():
        return Type2Spec(base(), group.generator(t_name))

    return build


Z2_GH = GroupSpec(2, (), ("g", "h"))
Z_G = GroupSpec(1, (), ("g",))
Z3 = GroupSpec(0, (3,), ("1",))
Z2 = GroupSpec(0, (2,), ("1",))
TRIVIAL = GroupSpec(0)
Z3Z2 = GroupSpec(0, (3, 2), ("1", "t"))
Z2Z2 = GroupSpec(0, (2, 2), ("1", "t"))
Z2_T = GroupSpec(0, (2,), ("t",))
Z2_G = GroupSpec(0, (2,), ("g",))

PRESETS: dict[str, Preset] = {
    p.key: p
    for p in [
        Preset("universal3", "Universal (g, h)", _elem(3, Z2_GH, "g", "h"), y="0", formula="universal"),
        Preset("almost-universal3", "Almost Universal (g, -g)", _elem(3, Z_G, "g", "-g"), y="0", z="g",
               formula="almost-universal"),
        Preset("canonical3", "Canonical Z3 (1, 1)", _elem(3, Z3, "1", "1"), y="0", z="1", formula="canonical"),
        Preset("almost-canonical3", "Almost Canonical Z2 (1, 1)", _elem(3, Z2, "1", "1"), y="0", z="1",
               formula="almost-canonical"),
        Preset("remaining3", "Remaining (g, 0)", _elem(3, Z_G, "g", "0"), y="0", z="g", formula="remaining"),
        Preset("trivial3", "Trivial", _elem(3, TRIVIAL, "0", "0"), y="0", formula="trivial"),
        Preset("canonical-t2", "Canonical T2 over Z3xZ2", _t2(Z3Z2, ("1", "1"), "t"), y="0", z="t",
               formula="canonical-t2"),
        Preset("almost-canonical-t2", "Almost Canonical T2 over Z2xZ2", _t2(Z2Z2, ("1", "1"), "t"), y="0",
               z="t", formula="almost-canonical-t2"),
        Preset("trivial-t2", "Trivial T2 over Z2", _t2(Z2_T, ("0", "0"), "t"), y="0", z="t"),
        Preset("ut2-graded", "UT2 graded (g)", _elem(2, Z2_G, "g"), y="0", z="g", formula="ut2-graded"),
        Preset("ut2-trivial", "UT2 trivial", _elem(2, TRIVIAL, "0"), y="0", formula="ut2-trivial"),
        Preset("ut5-gghh", "UT5 (g, g, h, h)", _elem(5, Z2_GH, "g", "g", "h", "h"), y="0"),
    ]
}

ELEMENTARY_UT3 = [
    "universal3",
    "almost-universal3",
    "canonical3",
    "almost-canonical3",
    "remaining3",
    "trivial3",
]

# The seven elementary gradings of the classification table.  The table lists
# six shapes; the seventh case is the Canonical shape over Z (order of g
# infinite), which differs from the Z3 presentation in its support.
CANONICAL_Z = Preset("canonical-z3", "Canonical over Z (g, g)", _elem(3, Z_G, "g", "g"), y="0", z="g")
PRESETS[CANONICAL_Z.key] = CANONICAL_Z
SEVEN_UT3 = ELEMENTARY_UT3 + [CANONICAL_Z.key]


def get(key: str) -> Preset:
    try:
        return PRESETS[key]
    except KeyError:
        raise KeyError(f"unknown grading preset {key!r}; known: {', '.join(sorted(PRESETS))}") from None


def alias_degree(preset: Preset, which: str, group: GroupSpec) -> Optional[GroupElement]:
    from .dsl import parse_degree

    expr = preset.y if which == "y" else preset.z
    if expr is None:
        return None
    return parse_degree(expr, group)


# builtin generator sets: name -> (preset, data file)
BUILTIN_GENERATORS = {
    "au_gr": ("almost-universal3", "au_gr.txt"),
    "au_gr_ext": ("almost-universal3", "au_gr_ext.txt"),
    "ac_gr": ("almost-canonical3", "ac_gr.txt"),
    "r_gr": ("remaining3", "r_gr.txt"),
    "canonical": ("canonical3", "canonical.txt"),
    "c_mt": ("canonical-t2", "c_mt.txt"),
    "act2": ("almost-canonical-t2", "act2.txt"),
    "trivial_t2": ("trivial-t2", "trivial_t2.txt"),
    "ut2_graded": ("ut2-graded", "ut2_graded.txt"),
    "ut2_trivial": ("ut2-trivial", "ut2_trivial.txt"),
    "trivial3": ("trivial3", "trivial3.txt"),
}


def generator_text(name: str) -> str:
    from importlib.resources import files

    _, fname = BUILTIN_GENERATORS[name]
    return files("utpi").joinpath("data", fname).read_text()


def builtin_generators(name: str):
    """(GeneratorSet, algebra) for a named builtin generator set."""
    from .dsl import Aliases, parse_generator_text, parse_degree

    key, _ = BUILTIN_GENERATORS[name]
    p = get(key)
    alg = p.algebra()
    y = parse_degree(p.y, alg.group) if p.y else None
    z = parse_degree(p.z, alg.group) if p.z else None
    return parse_generator_text(generator_text(name), alg.group, Aliases(y, z)), alg
