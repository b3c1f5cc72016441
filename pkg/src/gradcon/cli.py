"""gradcon: command-line front end.

JSON output goes through one envelope with sorted keys so identical inputs
give byte-identical output.  Exit codes: 0 success, 1 bad group string or
unreadable file, 2 validation failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Sequence

from . import __version__
from .algebra import AlgebraError, apply_contraction, load_algebra, second_support
from .cohomology import (
    Contraction,
    class_count,
    classify_all,
    contraction_violation,
    equivalent_via_normalization,
    h2_descriptor,
)
from .complex import support_invariants
from .groups import GroupSpec, format_element, make_pair, pair_index, parse_group, parse_pair_key
from .orbits import (
    defining_equations,
    identity_failures,
    is_degeneration,
    orbit_closure_ideal,
    surviving_identity_basis,
)
from .supports import Support, count_supports, enumerate_supports, is_support

TABLE1_GROUPS = ("Z2", "Z3", "Z2xZ2", "Z4", "Z5", "Z6", "Z7", "Z2xZ2xZ2", "Z2xZ4", "Z8")
FIELDS = {"closed": "algebraically_closed", "real": "real_closed"}
NORMALIZATION_NOTE = (
    "equivalence via normalization is decided exactly; a negative verdict does not "
    "certify that the contracted algebras are non-isomorphic"
)


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


# -- parsing helpers ---------------------------------------------------------


def _group(text: str) -> GroupSpec:
    try:
        return parse_group(text)
    except ValueError as exc:
        raise CliError(str(exc), 1) from None


def _read_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}", 1) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: not valid JSON ({exc})", 1) from None


def _element(raw, spec: GroupSpec):
    return spec.element(raw if isinstance(raw, (list, int)) else [int(t) for t in str(raw).split(",")])


def parse_support(text: str, spec: GroupSpec) -> Support:
    """``full``, ``empty``, a JSON list of pairs, or a path to such a file.

    Pairs may be written ``[[g...],[h...]]``, ``[g, h]`` for cyclic groups or
    as ``"g|h"`` keys.
    """
    if text in ("full", "empty"):
        return Support.full(spec) if text == "full" else Support.empty(spec)
    if Path(text).is_file():
        obj = _read_json(text)
    else:
        try:
            obj = json.loads(text)
        except json.JSONDecodeError:
            raise CliError(f"support {text!r} is neither JSON nor a readable file", 2) from None
    if not isinstance(obj, list):
        raise CliError("support must be a JSON list of pairs", 2)
    pairs = []
    try:
        for item in obj:
            if isinstance(item, str):
                pairs.append(parse_pair_key(item, spec))
            elif isinstance(item, list) and len(item) == 2:
                pairs.append(make_pair(_element(item[0], spec), _element(item[1], spec)))
            else:
                raise ValueError(f"bad pair {item!r}")
    except (ValueError, TypeError) as exc:
        raise CliError(f"bad support: {exc}", 2) from None
    return Support.from_pairs(spec, pairs)


def load_contraction(path: str, spec: GroupSpec) -> Contraction:
    obj = _read_json(path)
    if not isinstance(obj, dict):
        raise CliError(f"{path}: contraction must be a JSON object of 'g|h' keys", 2)
    try:
        c = Contraction.from_json(obj, spec)
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError(f"{path}: {exc}", 2) from None
    problem = contraction_violation(c)
    if problem:
        raise CliError(f"{path}: invalid contraction: {problem}", 2)
    return c


def support_json(s: Support) -> list:
    return [[list(g), list(h)] for g, h in s.pairs()]


def support_text(s: Support) -> str:
    return "{" + ", ".join(f"{{{format_element(g)};{format_element(h)}}}" for g, h in s.pairs()) + "}"


def ratio_text(x: float) -> str:
    """3 significant figures in the form 3.11E-4."""
    mantissa, exponent = f"{x:.2E}".split("E")
    return f"{mantissa}E{int(exponent)}"


# -- commands ----------------------------------------------------------------


def cmd_supports(args, spec):
    if args.count_only:
        n = count_supports(spec)
        return {"count": n}, str(n)
    sups = list(enumerate_supports(spec))
    return [support_json(s) for s in sups], "\n".join(support_text(s) for s in sups)


def cmd_invariants(args, spec):
    s = parse_support(args.support, spec)
    inv = support_invariants(s)
    res = inv.as_dict()
    res["is_support"] = is_support(s)
    lines = [f"{k}: {v}" for k, v in sorted(res.items())]
    return res, "\n".join(lines)


def _descriptor_row(s: Support, desc) -> dict:
    row = desc.as_dict()
    row["support"] = support_json(s)
    row["class_count"] = class_count(desc)
    return row


def cmd_classify(args, spec):
    mode = FIELDS[args.field]
    if args.support is not None:
        s = parse_support(args.support, spec)
        if not is_support(s):
            raise CliError(f"{support_text(s)} is not a support (not closed)", 2)
        rows = [_descriptor_row(s, h2_descriptor(support_invariants(s), mode))]
    else:
        rows = [_descriptor_row(s, d) for s, d in classify_all(spec, mode, args.threads)]
    res = {"field_mode": mode, "supports": rows, "note": NORMALIZATION_NOTE}
    lines = [
        f"{support_text(Support.from_pairs(spec, [(tuple(g), tuple(h)) for g, h in r['support']]))}"
        f"  continuous_rank={r['continuous_rank']} torsion_dual={r['torsion_dual']}"
        f" sign_rank={r['sign_rank']} class_count={r['class_count']}"
        for r in rows
    ]
    return res, "\n".join(lines + [f"note: {NORMALIZATION_NOTE}"])


def cmd_equivalent(args, spec):
    a = load_contraction(args.first, spec)
    b = load_contraction(args.second, spec)
    mode = FIELDS[args.field]
    verdict = equivalent_via_normalization(a, b, mode)
    res = {"equivalent": verdict, "field_mode": mode, "note": NORMALIZATION_NOTE}
    text = "equivalent via normalization" if verdict else "not equivalent via normalization"
    return res, f"{text}\nnote: {NORMALIZATION_NOTE}"


def cmd_ideal(args, spec):
    if args.defining:
        bins = defining_equations(spec)
        kind = "defining_equations"
    elif args.at is not None:
        c = load_contraction(args.at, spec)
        if args.support is not None and parse_support(args.support, spec) != c.support:
            raise CliError("--support differs from the support of the --at contraction", 2)
        bins = orbit_closure_ideal(c)
        kind = "orbit_closure_ideal"
    elif args.support is not None:
        bins = surviving_identity_basis(parse_support(args.support, spec))
        kind = "surviving_identities"
    else:
        raise CliError("ideal needs --support, --at or --defining", 2)
    lines = [b.format(spec) for b in bins]
    return {"kind": kind, "binomials": lines}, "\n".join(lines)


def cmd_degeneration(args, spec):
    c = load_contraction(args.contraction, spec)
    s = parse_support(args.supp2, spec)
    verdict = is_degeneration(c, s)
    failures = [] if verdict else identity_failures(c, s)
    res = {"is_degeneration": verdict, "failures": failures}
    text = "degeneration" if verdict else "not a degeneration\n" + "\n".join(failures)
    return res, text


def cmd_apply(args, spec):
    try:
        alg = load_algebra(args.algebra, spec)
    except OSError as exc:
        raise CliError(f"cannot read {args.algebra}: {exc.strerror or exc}", 1) from None
    except AlgebraError as exc:
        raise CliError(f"{args.algebra}: {exc}", 2) from None
    c = load_contraction(args.contraction, spec)
    out = apply_contraction(alg, c)
    payload = out.to_json()
    if args.out:
        try:
            Path(args.out).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        except OSError as exc:
            raise CliError(f"cannot write {args.out}: {exc.strerror or exc}", 1) from None
    res = {
        "algebra": payload,
        "second_support_before": support_json(second_support(alg)),
        "second_support_after": support_json(second_support(out)),
    }
    text = json.dumps(payload, indent=2, sort_keys=True)
    return res, text


def _table1_row(name: str) -> dict:
    spec = parse_group(name)
    n = count_supports(spec)
    m = len(pair_index(spec))
    return {"group": str(spec), "supports": n, "pairs": m, "ratio": ratio_text(n / 2**m)}


def cmd_table1(args, _spec):
    names = [str(_group(g)) for g in (args.groups or TABLE1_GROUPS)]
    if args.threads > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=args.threads) as pool:
            rows = list(pool.map(_table1_row, names))
    else:
        rows = [_table1_row(g) for g in names]
    width = max(len(r["group"]) for r in rows) + 2
    table = [
        ("G", [r["group"] for r in rows]),
        ("|S(G)|", [str(r["supports"]) for r in rows]),
        ("ratio", [r["ratio"] for r in rows]),
    ]
    lines = [f"{label:<8}" + "".join(f"{x:>{width}}" for x in cells) for label, cells in table]
    return rows, "\n".join(lines)


# -- wiring ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--text", action="store_true", help="human-readable output instead of JSON")
    common.add_argument("--json", action="store_true", help="JSON output (the default)")
    common.add_argument("--threads", type=int, default=1, help="worker processes for sweeps")

    p = argparse.ArgumentParser(prog="gradcon", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"gradcon {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, group=True):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        if group:
            sp.add_argument("group", help="group such as Z2xZ4")
        sp.set_defaults(func=func, takes_group=group)
        return sp

    sp = add("supports", cmd_supports, "enumerate contraction supports in lectic order")
    sp.add_argument("--count-only", action="store_true")

    sp = add("invariants", cmd_invariants, "N, N', N'', K_S, I_S, C_S for a set of pairs")
    sp.add_argument("--support", required=True, help='JSON list of pairs, a file, or "full"')

    sp = add("classify", cmd_classify, "H^2_S descriptors per support")
    sp.add_argument("--field", choices=sorted(FIELDS), required=True)
    sp.add_argument("--support", help="classify one support instead of all")

    sp = add("equivalent", cmd_equivalent, "decide equivalence via normalization")
    sp.add_argument("first", help="contraction JSON file")
    sp.add_argument("second", help="contraction JSON file")
    sp.add_argument("--field", choices=sorted(FIELDS), required=True)

    sp = add("ideal", cmd_ideal, "binomial bases of identity and orbit-closure ideals")
    sp.add_argument("--support")
    sp.add_argument("--at", help="contraction JSON file; prints its orbit-closure ideal")
    sp.add_argument("--defining", action="store_true", help="print the defining equations")

    sp = add("degeneration", cmd_degeneration, "test a graded degeneration")
    sp.add_argument("--contraction", required=True)
    sp.add_argument("--supp2", required=True, help="second support of the target algebra")

    sp = add("apply", cmd_apply, "apply a contraction to a graded Lie algebra")
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--contraction", required=True)
    sp.add_argument("--out")

    sp = add("table1", cmd_table1, "support counts and ratios to 2^|P_G|", group=False)
    sp.add_argument("groups", nargs="*", help=f"default: {' '.join(TABLE1_GROUPS)}")
    return p


def envelope(command: str, group: str | None, parameters: dict, result) -> str:
    return json.dumps(
        {
            "command": command,
            "group": group,
            "parameters": parameters,
            "result": result,
            "tool": "gradcon",
            "version": __version__,
            "deterministic": True,
        },
        sort_keys=True,
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    params = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in ("func", "takes_group", "command", "group", "text", "json", "threads")
    }
    try:
        if args.threads < 1:
            raise CliError("--threads must be at least 1", 2)
        spec = _group(args.group) if args.takes_group else None
        result, text = args.func(args, spec)
    except CliError as exc:
        print(f"gradcon: error: {exc}", file=sys.stderr)
        return exc.code
    except ValueError as exc:
        print(f"gradcon: error: {exc}", file=sys.stderr)
        return 2
    if args.text:
        print(text)
    else:
        print(envelope(args.command, str(spec) if spec else None, params, result))
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
