"""Text syntax for groups, gradings, graded Lie polynomials and generator files.

Polynomials::

    poly   := ['+'|'-'] term (('+'|'-') term)*
    term   := [rational ['*']] mono | '0'
    mono   := var | '[' mono (',' mono)+ ']'      # 3+ arguments are left-normed
    var    := 'x' INT ['^' '(' degree ')' | '^' atom] | 'y' INT | 'z' INT
    degree := ['-'] dterm (('+'|'-') dterm)*
    dterm  := [INT] NAME ['^' ['-'] INT] | INT

Degrees are additive expressions in the generator names of the group.  A
bare integer k means k times the generator named ``1`` when the group has
one (as in ``Z3xZ2{1,t}``); otherwise ``0`` and ``1`` both denote the
neutral element, matching the multiplicative convention x^(1) for trivial
degree.  ``g^-1`` is accepted for -g.

Groups: ``Z``, ``Z^2``, ``Z3``, products joined by ``x`` and optional names in
braces, e.g. ``Z3xZ2{1,t}``; ``1`` is the trivial group.

Gradings: a preset name, ``ut(3; g, h) over Z^2{g,h}`` for an elementary
grading, or ``t2(3; 1, 1; t) over Z3xZ2{1,t}`` for a type 2 grading.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .freelie import (
    Bracket,
    GradedVariable,
    LieTreeMonomial,
    MultilinearPolynomial,
    NotMultilinearError,
    left_normed,
)
from .group import GroupElement, GroupError, GroupSpec
from .matrixalg import ElementaryGrading, GradingError, Type2Spec


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError("span start after end")


class DslError(ValueError):
    def __init__(self, message: str, span: SourceSpan, hint: str = ""):
        super().__init__(message)
        self.message = message
        self.span = span
        self.hint = hint

    def to_json(self) -> dict:
        return {"message": self.message, "span": [self.span.start, self.span.end], "hint": self.hint}

    def __str__(self) -> str:
        s = f"{self.message} at {self.span.start}..{self.span.end}"
        return s + (f" ({self.hint})" if self.hint else "")


@dataclass(frozen=True)
class Aliases:
    y: Optional[GroupElement] = None
    z: Optional[GroupElement] = None


_WS = re.compile(r"\s*")
_INT = re.compile(r"\d+")
_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_VAR = re.compile(r"([xyz])(\d+)")
_VAR_SCAN = re.compile(r"(?<![A-Za-z_0-9])([xyz])(\d+)")


def _alias_indices(text: str) -> dict:
    """Renumbering of (kind, index) pairs when y_i, z_i or x_i share an index.

    In the y/z notation y1 and z1 are different variables, so when two kinds
    use the same index every variable gets a fresh index, ordered by kind
    (x, y, z) and then by index.  Without a clash indices are kept.
    """
    keys = {(m.group(1), int(m.group(2))) for m in _VAR_SCAN.finditer(text)}
    by_index = {}
    for kind, idx in keys:
        by_index.setdefault(idx, set()).add(kind)
    if all(len(k) == 1 for k in by_index.values()):
        return {}
    ordered = sorted(keys, key=lambda k: ("xyz".index(k[0]), k[1]))
    return {k: n for n, k in enumerate(ordered, 1)}


class _Parser:
    def __init__(self, text: str, group: GroupSpec, aliases: Aliases = Aliases(), env: Optional[dict] = None,
                 indices: Optional[dict] = None):
        if not isinstance(text, str):
            raise DslError("input must be text", SourceSpan(0, 0))
        self.text = text
        self.indices = _alias_indices(text) if indices is None else indices
        self.pos = 0
        self.group = group
        self.aliases = aliases
        self.env = env or {}

    # -- helpers
    def ws(self):
        self.pos = _WS.match(self.text, self.pos).end()

    def peek(self) -> str:
        self.ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def error(self, msg, start=None, end=None, hint=""):
        start = self.pos if start is None else start
        end = max(start, min(len(self.text), self.pos if end is None else end))
        start = min(start, len(self.text))
        raise DslError(msg, SourceSpan(start, max(start, end)), hint)

    def expect(self, ch: str):
        if self.peek() != ch:
            got = self.peek() or "end of input"
            self.error(f"expected {ch!r}, found {got!r}", end=self.pos + 1)
        self.pos += 1

    def match(self, rx):
        self.ws()
        m = rx.match(self.text, self.pos)
        if m:
            self.pos = m.end()
        return m

    def at_end(self) -> bool:
        return self.peek() == ""

    # -- degrees
    def degree(self, stop: str = ")") -> GroupElement:
        start = self.pos
        acc = self.group.identity()
        sign = 1
        first = True
        while True:
            c = self.peek()
            if c in "+-":
                self.pos += 1
                sign = 1 if c == "+" else -1
                if self.peek() in "+-":
                    self.error("doubled sign in degree")
            elif not first:
                break
            term = self.dterm()
            acc = acc + term.scale(sign)
            sign = 1
            first = False
            if self.peek() not in ("+", "-"):
                break
        if self.peek() not in (stop, ""):
            self.error(f"unexpected {self.peek()!r} in degree", hint="degrees are sums like 1+t or g-h")
        if self.pos == start:
            self.error("empty degree")
        return acc

    def _int_degree(self, k: int, s: int) -> GroupElement:
        if "1" in self.group.names:
            return self.group.generator("1").scale(k)
        if k in (0, 1):
            return self.group.identity()
        self.error(f"integer degree {k} needs a generator named 1", start=s,
                   hint=f"generators are {', '.join(self.group.names) or 'none'}")

    def dterm(self) -> GroupElement:
        s = self.pos
        self.ws()
        s = self.pos
        coef = None
        m = self.match(_INT)
        if m:
            coef = int(m.group())
        self.ws()
        n = _NAME.match(self.text, self.pos)
        if not n:
            if coef is None:
                self.error("expected a degree", end=self.pos + 1)
            return self._int_degree(coef, s)
        self.pos = n.end()
        name = n.group()
        if name in self.env:
            base = self.env[name]
        elif name in self.group.names:
            base = self.group.generator(name)
        else:
            self.error(f"unknown generator {name!r}", start=n.start(), end=n.end(),
                       hint=f"generators are {', '.join(self.group.names) or 'none'}; write products as sums, e.g. g+h")
        k = 1 if coef is None else coef
        if self.peek() == "^":
            self.pos += 1
            neg = False
            if self.peek() == "-":
                self.pos += 1
                neg = True
            e = self.match(_INT)
            if not e:
                self.error("expected an integer exponent")
            k *= -int(e.group()) if neg else int(e.group())
        return base.scale(k)

    # -- polynomials
    def variable(self) -> GradedVariable:
        s = self.pos
        m = self.match(_VAR)
        if not m:
            self.error("expected a variable like x1^(g), y1 or z1", end=self.pos + 1)
        kind, idx = m.group(1), int(m.group(2))
        if idx < 1:
            self.error("variable indices start at 1", start=s)
        idx = self.indices.get((kind, idx), idx)
        if kind == "x":
            if self.peek() == "^":
                self.pos += 1
                if self.peek() == "(":
                    self.pos += 1
                    d = self.degree(")")
                    self.expect(")")
                else:
                    d = self.dterm()
            else:
                d = self.group.identity()
            return GradedVariable(idx, d)
        d = self.aliases.y if kind == "y" else self.aliases.z
        if d is None:
            self.error(f"alias {kind}{idx} is not bound for this grading", start=s,
                       hint="write the variable as x<i>^(degree)")
        return GradedVariable(idx, d)

    def mono(self) -> LieTreeMonomial:
        if self.peek() == "[":
            s = self.pos
            self.pos += 1
            items = [self.mono()]
            while self.peek() == ",":
                self.pos += 1
                items.append(self.mono())
            self.expect("]")
            if len(items) < 2:
                self.error("a bracket needs at least two arguments", start=s)
            return left_normed(items)
        return self.variable()

    def rational(self) -> Optional[Fraction]:
        m = self.match(_INT)
        if not m:
            return None
        num = int(m.group())
        if self.peek() == "/":
            save = self.pos
            self.pos += 1
            d = self.match(_INT)
            if not d:
                self.pos = save
                self.error("expected a denominator")
            if int(d.group()) == 0:
                self.error("zero denominator", start=save)
            return Fraction(num, int(d.group()))
        return Fraction(num)

    def term(self):
        s = self.pos
        c = self.rational()
        if c is not None:
            if self.peek() == "*":
                self.pos += 1
            elif self.peek() not in ("[", "x", "y", "z"):
                if c == 0:
                    return None, Fraction(0)
                self.error("a constant is not a Lie polynomial", start=s)
        return self.mono(), (Fraction(1) if c is None else c)

    def polynomial(self) -> MultilinearPolynomial:
        terms = []
        sign = 1
        if self.peek() in "+-" and self.peek():
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        while True:
            s = self.pos
            mono, c = self.term()
            if mono is not None:
                terms.append((mono, sign * c))
            c2 = self.peek()
            if c2 in ("+", "-") and c2:
                self.pos += 1
                sign = 1 if c2 == "+" else -1
                continue
            break
        if not self.at_end():
            self.error(f"unexpected {self.peek()!r}", end=self.pos + 1)
        f = MultilinearPolynomial(terms)
        try:
            f.variables()
        except NotMultilinearError as e:
            raise DslError(str(e), SourceSpan(0, len(self.text)), "every monomial must use each variable exactly once") from None
        return f


def _guard(fn, text: str):
    try:
        return fn()
    except DslError:
        raise
    except (GroupError, GradingError, ValueError, RecursionError, OverflowError) as e:
        raise DslError(str(e) or type(e).__name__, SourceSpan(0, len(text))) from None


def parse_polynomial(text: str, group: GroupSpec, aliases: Aliases = Aliases(), env: Optional[dict] = None,
                     indices: Optional[dict] = None) -> MultilinearPolynomial:
    return _guard(lambda: _Parser(text, group, aliases, env, indices).polynomial(), text)


def parse_monomial(text: str, group: GroupSpec, aliases: Aliases = Aliases()) -> LieTreeMonomial:
    def run():
        p = _Parser(text, group, aliases)
        m = p.mono()
        if not p.at_end():
            p.error(f"unexpected {p.peek()!r}")
        return m

    return _guard(run, text)


def parse_degree(text: str, group: GroupSpec, env: Optional[dict] = None) -> GroupElement:
    def run():
        p = _Parser(text, group, env=env)
        d = p.degree("")
        if not p.at_end():
            p.error(f"unexpected {p.peek()!r} in degree")
        return d

    return _guard(run, text)


# ---------------------------------------------------------------------------
# printing


def print_monomial(m: LieTreeMonomial) -> str:
    return str(m)


def _coef_text(c: Fraction) -> str:
    a = abs(c)
    if a == 1:
        return ""
    return f"{a.numerator}*" if a.denominator == 1 else f"{a.numerator}/{a.denominator}*"


def print_polynomial(f) -> str:
    """Canonical text: monomials sorted by their serialized tree."""
    if not isinstance(f, MultilinearPolynomial):
        f = MultilinearPolynomial.monomial(f)
    if f.is_zero():
        return "0"
    out = []
    for k, (mono, c) in enumerate(f.sorted_terms()):
        body = _coef_text(c) + print_monomial(mono)
        if k == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


# ---------------------------------------------------------------------------
# groups and gradings

_FACTOR = re.compile(r"Z(?:\^(\d+)|<(\d+)>|(\d+))?")


def parse_group(text: str) -> GroupSpec:
    def run():
        s = text.strip()
        names = ()
        if "{" in s:
            if not s.endswith("}"):
                raise DslError("unterminated generator names", SourceSpan(s.index("{"), len(text)))
            body = s[s.index("{") + 1 : -1]
            names = tuple(x.strip() for x in body.split(",") if x.strip())
            s = s[: s.index("{")].strip()
        if s in ("1", "Z^0", "trivial", ""):
            if names:
                raise DslError("the trivial group has no generators", SourceSpan(0, len(text)))
            return GroupSpec(0)
        free, torsion = 0, []
        for part in s.split("x"):
            part = part.strip()
            m = _FACTOR.fullmatch(part)
            if not m:
                start = max(0, text.find(part))
                raise DslError(f"cannot read group factor {part!r}", SourceSpan(start, start + len(part)),
                               "use Z, Z^r, Zk or products like Z3xZ2")
            if m.group(1) is not None:
                free += int(m.group(1))
            elif m.group(2) or m.group(3):
                torsion.append(int(m.group(2) or m.group(3)))
            else:
                free += 1
        for name in names:
            if not (_NAME.fullmatch(name) or name == "1"):
                raise DslError(f"bad generator name {name!r}", SourceSpan(0, len(text)))
        return GroupSpec(free, tuple(torsion), names)

    return _guard(run, text)


_GRADING = re.compile(r"\s*(ut|t2)\s*\((.*)\)\s*over\s+(.+?)\s*$", re.S)


def parse_grading(text: str):
    """ElementaryGrading or Type2Spec from a preset name or an explicit spec."""
    from . import presets

    key = text.strip()
    if key in presets.PRESETS:
        return presets.PRESETS[key].grading()

    def run():
        m = _GRADING.match(text)
        if not m:
            raise DslError(f"unknown grading {key!r}", SourceSpan(0, len(text)),
                           "use a preset name or ut(n; g1, ..., g_{n-1}) over GROUP")
        kind, body, gtext = m.groups()
        group = parse_group(gtext)
        parts = body.split(";")
        try:
            n = int(parts[0])
        except ValueError:
            raise DslError("grading size must be an integer", SourceSpan(m.start(2), m.end(2))) from None
        if n < 1:
            raise DslError("grading size must be >= 1", SourceSpan(m.start(2), m.end(2)))
        etas = [x for x in (parts[1].split(",") if len(parts) > 1 else []) if x.strip()]
        eta = tuple(parse_degree(x, group) for x in etas)
        base = ElementaryGrading(n, group, eta)
        if kind == "ut":
            if len(parts) > 2:
                raise DslError("elementary gradings take two fields", SourceSpan(0, len(text)))
            return base
        if len(parts) != 3:
            raise DslError("type 2 gradings need n; eta; t", SourceSpan(0, len(text)))
        return Type2Spec(base, parse_degree(parts[2], group))

    return _guard(run, text)


def resolve_grading(text: str):
    """(grading spec, aliases, display name) for a preset or explicit spec."""
    from . import presets

    spec = parse_grading(text)
    key = text.strip()
    group = spec.base.group if isinstance(spec, Type2Spec) else spec.group
    if key in presets.PRESETS:
        p = presets.PRESETS[key]
        y = parse_degree(p.y, group) if p.y else None
        z = parse_degree(p.z, group) if p.z else None
        return spec, Aliases(y, z), key
    return spec, Aliases(group.identity(), None), key


def format_grading(spec) -> str:
    if isinstance(spec, Type2Spec):
        b = spec.base
        eta = ", ".join(str(g) for g in b.eta)
        return f"t2({b.n}; {eta}; {spec.t}) over {b.group}"
    eta = ", ".join(str(g) for g in spec.eta)
    return f"ut({spec.n}; {eta}) over {spec.group}"


# ---------------------------------------------------------------------------
# generator files

_FOR = re.compile(r"\s+for\s+([A-Za-z_]\w*)\s+(not\s+in|in)\s+(\{[^}]*\}|all)\s*$")
_ZERO = re.compile(r"\s*x\d*\s*\^\s*\((.*)\)\s*$")


def _values(spec_text: str, group: GroupSpec, line_no: int):
    if spec_text == "all":
        if not group.is_finite:
            raise DslError(f"line {line_no}: 'all' needs a finite group", SourceSpan(0, 0))
        return list(group.elements())
    body = spec_text.strip()[1:-1]
    return [parse_degree(x, group) for x in body.split(",") if x.strip()]


def parse_generator_text(text: str, group: GroupSpec, aliases: Aliases = Aliases()):
    """GeneratorSet from a generator file body (one polynomial or equation per line)."""
    from .tideal import GeneratorSet

    polys, labels, zeros = [], [], []
    zero_outside = None
    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        loop = None
        fm = _FOR.search(line)
        if fm:
            loop = (fm.group(1), fm.group(2).startswith("not"), fm.group(3))
            line = line[: fm.start()]
        lhs, _, rhs = line.partition("=")
        rhs = rhs.strip()
        zm = _ZERO.fullmatch(lhs)
        if zm and rhs == "0" and not lhs.strip().startswith("["):
            expr = zm.group(1).strip()
            if loop and loop[1]:
                if expr != loop[0]:
                    raise DslError(f"line {line_no}: loop variable {loop[0]!r} unused", SourceSpan(0, len(raw)))
                allowed = frozenset(_values(loop[2], group, line_no))
                zero_outside = allowed if zero_outside is None else zero_outside & allowed
            elif loop:
                for v in _values(loop[2], group, line_no):
                    zeros.append(parse_degree(expr, group, env={loop[0]: v}))
            else:
                zeros.append(parse_degree(expr, group))
            continue
        if loop and loop[1]:
            raise DslError(f"line {line_no}: 'not in' is only supported for x^(l) = 0", SourceSpan(0, len(raw)))
        envs = [{loop[0]: v} for v in _values(loop[2], group, line_no)] if loop else [None]
        indices = _alias_indices(line)
        for env in envs:
            try:
                f = parse_polynomial(lhs, group, aliases, env, indices)
                if rhs:
                    f = f - parse_polynomial(rhs, group, aliases, env, indices)
                    f.variables()
            except DslError as e:
                raise DslError(f"line {line_no}: {e.message}", e.span, e.hint) from None
            except NotMultilinearError as e:
                raise DslError(f"line {line_no}: {e}", SourceSpan(0, len(raw))) from None
            if f.is_zero():
                continue
            polys.append(f)
            labels.append(raw.strip() if env is None else f"{raw.strip()} [{loop[0]}={env[loop[0]]}]")
    return GeneratorSet(group, polys, zeros, zero_outside, labels)


def print_generator_set(S) -> str:
    lines = []
    if S.zero_outside is not None:
        vals = ", ".join(str(v) for v in sorted(S.zero_outside))
        lines.append(f"x^(l) = 0 for l not in {{{vals}}}")
    for z in S.zero_degrees:
        lines.append(f"x^({z}) = 0")
    for p in S.polys:
        lines.append(print_polynomial(p))
    return "\n".join(lines) + "\n"
