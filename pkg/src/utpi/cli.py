"""Command-line entry point ``pi``.

Exit codes: 0 success, 1 verification failure or mismatch, 2 usage or input
error, 3 resource cap exceeded. Output is deterministic for a fixed
configuration, whatever the worker count.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional

from . import badtrees, formulas, presets
from .dsl import DslError, format_grading, parse_generator_text, parse_polynomial, print_polynomial, resolve_grading
from .evaluate import DEFAULT_CAP, CapExceeded, nonvanishing_value
from .matrixalg import ElementaryGrading, GradedAlgebra, GradingError, Type2Spec, unit_degree
from .spaces import codimension, default_workers
from .tideal import NotAnIdentity, membership, verify_basis

SCHEMA = 1

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_CAP = 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    grading: Optional[str]
    max_m: int
    fmt: str
    workers: int
    cap: int
    output: Optional[str]

    def __post_init__(self):
        if self.max_m < 1:
            raise UsageError("--max-m must be >= 1")
        if self.workers < 1:
            raise UsageError("--workers must be >= 1")
        if self.cap < 1:
            raise UsageError("--cap must be >= 1")


@dataclass
class Result:
    """What a command produced: a JSON payload, CSV rows, text lines and an exit code."""

    payload: dict
    header: list
    rows: list
    lines: list
    code: int = EXIT_OK


# ---------------------------------------------------------------------------
# helpers


def _algebra(text: Optional[str]):
    if not text:
        raise UsageError("--grading is required")
    try:
        spec, aliases, name = resolve_grading(text)
    except DslError as e:
        raise UsageError(f"bad grading {text!r}: {e}") from None
    except GradingError as e:
        raise UsageError(str(e)) from None
    return spec, aliases, presets.algebra_of(spec, name), name


def _formula_key(name: str) -> Optional[str]:
    p = presets.PRESETS.get(name)
    return p.formula if p else None


def _deg(d) -> str:
    return str(d)


def _parse_poly(text: str, alg: GradedAlgebra, aliases):
    try:
        return parse_polynomial(text, alg.group, aliases)
    except DslError as e:
        raise UsageError(f"bad polynomial: {e}") from None


def _base(config: RunConfig) -> dict:
    return {"schema": SCHEMA, "command": config.command}


# ---------------------------------------------------------------------------
# commands


def cmd_codim(config: RunConfig, args) -> Result:
    _, _, alg, name = _algebra(config.grading)
    key = _formula_key(name)
    payload = _base(config) | {"grading": name, "spec": _spec_text(alg), "reports": []}
    rows, lines = [], []
    code = EXIT_OK
    for m in range(1, config.max_m + 1):
        rep = codimension(alg, m, workers=config.workers, cap=config.cap, keep_zero=not args.nonzero)
        item = rep.to_json()
        row = [name, m, rep.total]
        if key:
            f = formulas.closed_form(key, m)
            item["formula"] = f
            item["match"] = f == rep.total
            row += [f, str(f == rep.total).lower()]
            if f != rep.total:
                code = EXIT_FAIL
        payload["reports"].append(item)
        rows.append(row)
        note = f"  formula {item['formula']} {'match' if item['match'] else 'MISMATCH'}" if key else ""
        lines.append(f"m={m}  c_m={rep.total}{note}")
        if args.detail:
            for r in rep.by_multiset:
                if r.dim:
                    lines.append(f"    ({', '.join(_deg(d) for d in r.degrees)})  dim={r.dim}  x{r.count}")
    header = ["grading", "m", "codimension"] + (["formula", "match"] if key else [])
    # a mismatch is reported, but codim itself is a computation and succeeds
    payload["formula_ok"] = code == EXIT_OK if key else None
    return Result(payload, header, rows, lines, EXIT_OK)


def _spec_text(alg: GradedAlgebra) -> str:
    src = alg.source
    if isinstance(src, (ElementaryGrading, Type2Spec)):
        return format_grading(src)
    return alg.name


def cmd_check(config: RunConfig, args) -> Result:
    _, aliases, alg, name = _algebra(config.grading)
    f = _parse_poly(args.poly, alg, aliases)
    hit = nonvanishing_value(f, alg)
    payload = _base(config) | {"grading": name, "polynomial": print_polynomial(f), "identity": hit is None}
    if hit is None:
        payload["verdict"] = "IDENTITY"
        lines = ["IDENTITY"]
        code = EXIT_OK
    else:
        w, value = hit
        witness = {str(v): b.label for v, b in sorted(w.items())}
        payload["verdict"] = "NOT IDENTITY"
        payload["witness"] = witness
        payload["value"] = str(value)
        lines = ["NOT IDENTITY", "witness: " + ", ".join(f"{k} = {v}" for k, v in witness.items()),
                 f"value: {value}"]
        code = EXIT_FAIL
    rows = [[name, payload["polynomial"], payload["verdict"]]]
    return Result(payload, ["grading", "polynomial", "verdict"], rows, lines, code)


def _generators(source: str, grading: Optional[str]):
    if source in presets.BUILTIN_GENERATORS:
        S, alg = presets.builtin_generators(source)
        key, _ = presets.BUILTIN_GENERATORS[source]
        if grading and grading != key:
            _, _, alg2, _ = _algebra(grading)
            if alg2.group != alg.group:
                raise UsageError(f"builtin set {source} is graded by {alg.group}, not {alg2.group}")
            alg = alg2
            key = grading
        return S, alg, key
    if not os.path.exists(source):
        raise UsageError(f"{source!r} is neither a builtin generator set ({', '.join(presets.BUILTIN_GENERATORS)}) "
                         "nor a file")
    _, aliases, alg, name = _algebra(grading)
    with open(source, encoding="utf-8") as fh:
        text = fh.read()
    try:
        S = parse_generator_text(text, alg.group, aliases)
    except DslError as e:
        raise UsageError(f"{source}: {e}") from None
    return S, alg, name


def _verdict_rows(report, name):
    rows, lines, items = [], [], []
    for v in report.verdicts:
        degs = " ".join(_deg(d) for d in v.degrees)
        rows.append([name, v.m, degs, v.free_dim, v.consequence_dim, v.algebra_dim, str(v.ok).lower()])
        items.append(v.to_json())
        if not v.ok:
            lines.append(f"FAIL m={v.m} ({degs}): consequences {v.consequence_dim} + algebra {v.algebra_dim}"
                         f" != {v.free_dim}")
    return rows, lines, items


_VERDICT_HEADER = ["grading", "m", "degrees", "free_dim", "consequence_dim", "algebra_dim", "ok"]


def _run_verify(config: RunConfig, S, alg, name, extra: dict) -> Result:
    try:
        report = verify_basis(S, alg, config.max_m, workers=config.workers, cap=config.cap)
    except NotAnIdentity as e:
        payload = _base(config) | extra | {"grading": name, "ok": False, "error": str(e)}
        return Result(payload, ["grading", "error"], [[name, str(e)]], [f"NOT AN IDENTITY: {e}"], EXIT_FAIL)
    rows, lines, items = _verdict_rows(report, name)
    payload = _base(config) | extra | {"grading": name, "max_m": config.max_m, "generators": len(S),
                                        "ok": report.ok, "verdicts": items}
    summary = (f"{'VERIFIED' if report.ok else 'INCOMPLETE'}: {len(S)} generators, "
               f"{len(report.verdicts)} tuples, m <= {config.max_m}, {len(report.failures())} failures")
    return Result(payload, _VERDICT_HEADER, rows, [summary] + lines, EXIT_OK if report.ok else EXIT_FAIL)


def cmd_verify_basis(config: RunConfig, args) -> Result:
    S, alg, name = _generators(args.source, config.grading)
    res = _run_verify(config, S, alg, name, {"source": args.source})
    if args.drop_one and res.code == EXIT_OK:
        redundant = []
        for i in range(len(S)):
            r = verify_basis(S.without(i), alg, config.max_m, workers=config.workers, cap=config.cap, check=False)
            if r.ok:
                redundant.append(S.labels[i] or print_polynomial(S.polys[i]))
        res.payload["redundant"] = redundant
        res.lines += [f"redundant: {r}" for r in redundant] or ["no generator is redundant up to this m"]
    return res


def _elementary(config: RunConfig):
    spec, aliases, alg, name = _algebra(config.grading)
    if not isinstance(spec, ElementaryGrading):
        raise UsageError("this command needs an elementary grading")
    return spec, aliases, alg, name


def cmd_badtrees(config: RunConfig, args) -> Result:
    g, _, alg, name = _elementary(config)
    maxlen = args.max_len or g.n
    rows, lines, items = [], [], []
    for mu in badtrees.enumerate_trees(maxlen, badtrees.tree_alphabet(alg)):
        tv = badtrees.classify_tree_witness(mu, g)
        if args.only_bad and tv.verdict != badtrees.BAD:
            continue
        witness = " ".join(f"e{i}{j}" for i, j in tv.witness) if tv.witness else ""
        rows.append([str(mu), tv.verdict, witness])
        items.append(tv.to_json())
        lines.append(str(tv))
    payload = _base(config) | {"grading": name, "max_len": maxlen, "trees": items}
    return Result(payload, ["tree", "verdict", "witness"], rows, lines)


def cmd_conjecture(config: RunConfig, args) -> Result:
    if args.which == 3:
        return _conjecture3(config, args)
    spec, aliases, alg, name = _algebra(config.grading)
    if args.which == 1:
        if not isinstance(spec, ElementaryGrading):
            raise UsageError("conjecture 1 is stated for elementary gradings")
        S = badtrees.conjecture1_generators(spec, maxlen=args.max_len)
    else:
        maxlen = args.max_len or alg.n
        S = badtrees.special_monomial_identities(alg, maxlen, left_normed=args.left_normed)
    extra = {"which": args.which}
    if args.poly:
        f = _parse_poly(args.poly, alg, aliases)
        follows = membership(f, S)
        payload = _base(config) | extra | {"grading": name, "polynomial": print_polynomial(f),
                                            "generators": len(S), "follows": follows}
        line = f"{'FOLLOWS' if follows else 'DOES NOT FOLLOW'}: {print_polynomial(f)}"
        return Result(payload, ["grading", "polynomial", "follows"], [[name, payload["polynomial"],
                      str(follows).lower()]], [line], EXIT_OK if follows else EXIT_FAIL)
    return _run_verify(config, S, alg, name, extra)


def _conjecture3(config: RunConfig, args) -> Result:
    if not args.pair:
        raise UsageError("--pair finer:coarser is required for conjecture 3")
    fine, sep, coarse = args.pair.partition(":")
    for k in (fine, coarse):
        if k not in presets.PRESETS:
            raise UsageError(f"unknown grading preset {k!r}")
    if not sep:
        raise UsageError("--pair must look like finer:coarser")
    deltas = formulas.coarsening_delta(args.pair, config.max_m, workers=config.workers, cap=config.cap)
    ok = all(d == 1 for d in deltas)
    payload = _base(config) | {"which": 3, "pair": args.pair, "deltas": deltas, "all_one": ok}
    rows = [[args.pair, m, d] for m, d in enumerate(deltas, start=1)]
    lines = [f"m={m}  delta={d}" for m, d in enumerate(deltas, start=1)]
    lines.append("all deltas equal 1" if ok else "some delta differs from 1")
    return Result(payload, ["pair", "m", "delta"], rows, lines, EXIT_OK if ok else EXIT_FAIL)


def cmd_compare(config: RunConfig, args) -> Result:
    if config.grading and config.grading != "all":
        keys = [config.grading]
    else:
        keys = [k for k, p in presets.PRESETS.items() if p.formula]
    table = formulas.OBSERVED if args.observed else formulas.FORMULAS
    rows, lines, items = [], [], []
    code = EXIT_OK
    for key in keys:
        p = presets.PRESETS.get(key)
        if p is None or not p.formula:
            raise UsageError(f"no closed form is attached to {key!r}")
        if p.formula not in table:
            continue
        from .spaces import codimension_sequence

        brute = codimension_sequence(p.algebra(), config.max_m, workers=config.workers, cap=config.cap)
        for m in range(1, config.max_m + 1):
            f = table[p.formula](m)
            match = f == brute[m - 1]
            if not match:
                code = EXIT_FAIL
            rows.append([key, m, brute[m - 1], f, str(match).lower()])
            items.append({"grading": key, "m": m, "brute_force": brute[m - 1], "formula": f, "match": match})
            lines.append(f"{key:22s} m={m}  brute={brute[m - 1]:<8d} formula={f:<8d} {'ok' if match else 'MISMATCH'}")
    payload = _base(config) | {"observed": args.observed, "rows": items}
    return Result(payload, ["grading", "m", "brute_force", "formula", "match"], rows, lines, code)


_TABLE_SHAPES = {
    "universal3": ("g", "h", "k"),
    "canonical3": ("g", "g", "k"),
    "almost-universal3": ("g", "h", "1"),
    "remaining3": ("g", "1", "g"),
    "almost-canonical3": ("g", "g", "1"),
    "trivial3": ("1", "1", "1"),
}


def cmd_gradings(config: RunConfig, args) -> Result:
    rows, lines, items = [], [], []
    lines.append("Elementary gradings of UT_3 up to equivalence (deg e12, deg e23, deg e13):")
    for key in presets.ELEMENTARY_UT3:
        p = presets.PRESETS[key]
        g = p.grading()
        shape = _TABLE_SHAPES[key]
        actual = tuple(_deg(unit_degree(g, i, j)) for i, j in ((1, 2), (2, 3), (1, 3)))
        lines.append(f"  {p.title:32s} shape ({', '.join(shape)})  preset {key}: ({', '.join(actual)})")
    lines.append("")
    lines.append("Presets:")
    for key, p in presets.PRESETS.items():
        spec = p.grading()
        alg = p.algebra()
        dims = {_deg(d): k for d, k in alg.component_dims().items()}
        item = {"key": key, "title": p.title, "spec": format_grading(spec), "components": dims,
                "formula": formulas.FORMULAS[p.formula].text if p.formula else None}
        items.append(item)
        rows.append([key, p.title, item["spec"], " ".join(f"{d}:{k}" for d, k in dims.items()),
                     item["formula"] or ""])
        dim_text = ", ".join(f"{d}:{k}" for d, k in dims.items())
        lines.append(f"  {key:20s} {item['spec']}")
        lines.append(f"  {'':20s} components {dim_text}" + (f"; c_m = {item['formula']}" if p.formula else ""))
    lines.append("")
    lines.append("Builtin generator sets: " + ", ".join(presets.BUILTIN_GENERATORS))
    payload = _base(config) | {"presets": items, "generator_sets": list(presets.BUILTIN_GENERATORS)}
    return Result(payload, ["key", "title", "spec", "components", "formula"], rows, lines)


# ---------------------------------------------------------------------------
# argument parsing and output


def _common(p: argparse.ArgumentParser, max_m: Optional[int] = None):
    p.add_argument("--grading", help="preset name or spec such as 'ut(3; g, 1) over Z{g}'")
    p.add_argument("--max-m", type=int, default=max_m or 5, help="largest degree m (default %(default)s)")
    p.add_argument("--format", choices=["json", "csv", "text"], default="text")
    p.add_argument("--workers", type=int, default=None, help="worker processes (default $PI_WORKERS or 1)")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="maximum evaluation matrix entries")
    p.add_argument("--output", help="write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pi", description="Graded Lie identities of upper triangular matrices.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("codim", help="graded codimension sequence by brute force")
    _common(p, 5)
    p.add_argument("--detail", action="store_true", help="list nonzero multiset dimensions (text format)")
    p.add_argument("--nonzero", action="store_true", help="omit multisets of dimension zero")
    p.set_defaults(func=cmd_codim)

    p = sub.add_parser("check", help="decide whether a polynomial is a graded identity")
    _common(p)
    p.add_argument("--poly", required=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("verify-basis", help="check that generators span the identities up to degree m")
    _common(p, 6)
    p.add_argument("source", help="builtin generator set name or generator file")
    p.add_argument("--drop-one", action="store_true", help="also report generators that can be dropped")
    p.set_defaults(func=cmd_verify_basis)

    p = sub.add_parser("badtrees", help="classify degree trees as good or bad")
    _common(p)
    p.add_argument("--max-len", type=int, default=None, help="largest tree length (default n)")
    p.add_argument("--only-bad", action="store_true")
    p.set_defaults(func=cmd_badtrees)

    p = sub.add_parser("conjecture", help="evidence for the bad-tree, special-monomial and coarsening conjectures")
    _common(p, 5)
    p.add_argument("--which", type=int, choices=[1, 2, 3], required=True)
    p.add_argument("--pair", help="finer:coarser presets for --which 3")
    p.add_argument("--max-len", type=int, default=None, help="largest tree or monomial length (default n)")
    p.add_argument("--left-normed", action="store_true", help="--which 2: only monomials [z1, ..., zt]")
    p.add_argument("--poly", help="test membership of this polynomial instead of verifying")
    p.set_defaults(func=cmd_conjecture)

    for name in ("compare", "codim-table"):
        p = sub.add_parser(name, help="closed forms against brute force (CSV by default)")
        _common(p, 7)
        p.set_defaults(format="csv")
        p.add_argument("--observed", action="store_true", help="use the fitted type 2 formulas")
        p.set_defaults(func=cmd_compare)

    p = sub.add_parser("gradings", help="list grading presets and the UT_3 classification")
    _common(p)
    p.set_defaults(func=cmd_gradings)
    return parser


def render(result: Result, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(result.payload, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(result.header)
        w.writerows(result.rows)
        return buf.getvalue()
    return "\n".join(result.lines) + "\n"


def run(argv=None) -> tuple[int, str, Optional[str]]:
    """Run the CLI and return (exit code, rendered output, output path)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    workers = args.workers if args.workers is not None else default_workers()
    config = RunConfig(args.command, args.grading, args.max_m, args.format, workers, args.cap, args.output)
    result = args.func(config, args)
    return result.code, render(result, config.fmt), config.output


def main(argv=None) -> int:
    try:
        code, text, out = run(argv)
    except UsageError as e:
        print(f"pi: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (DslError, KeyError, GradingError, ValueError) as e:
        print(f"pi: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceeded as e:
        print(f"pi: resource cap exceeded: {e}", file=sys.stderr)
        return EXIT_CAP
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
