"""Batch command-line front end: every library operation over JSON files.

Verbs map one-to-one onto library operations.  Each command reads JSON
documents (``--in``, repeatable), writes one JSON document (``--out``, or
stdout), and is deterministic: identical inputs give byte-identical output.
Exit status 0 means success, 2 a schema or parse problem, 3 a violated
mathematical precondition.
"""

from __future__ import annotations

import argparse
import json
import sys

from .base_ring import BaseRingDescriptor
from .errors import PreconditionError, SchemaError
from .etale import roof_is_strict, roof_jet
from .jet_group import (
    jet_classify,
    jet_compose,
    jet_invert,
    split_linear_unipotent,
    split_translation,
)
from .jsonio import (
    antipode_document,
    coproduct_document,
    decode_derivation,
    decode_jet,
    decode_rep,
    decode_roof,
    document,
    document_kind,
    encode_base,
    encode_derivation,
    encode_element,
    encode_jet,
    encode_matrix,
    read_json,
    render,
    write_json,
)
from .lie import adjoint, derivation_bracket, exp_derivation, log_unipotent
from .rep import (
    extension_order,
    factoring_order,
    rep_check_homomorphism,
    rep_eval,
    rep_jet_standard,
    rep_weights,
)
from . import acceptance


def _parse_base_flag(text: str) -> BaseRingDescriptor:
    """``--base '[N1,..]'``: a JSON list of nilpotency orders."""
    try:
        orders = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"--base must be a JSON list of integers: {exc}") from exc
    if not isinstance(orders, list) or not all(
        isinstance(x, int) and not isinstance(x, bool) for x in orders
    ):
        raise SchemaError("--base must be a JSON list of integers")
    return BaseRingDescriptor(orders=tuple(orders))


def _inputs(args, count: int, what: str) -> list:
    paths = args.inputs or []
    if len(paths) != count:
        raise SchemaError(
            f"{args.verb} needs exactly {count} --in file(s) ({what}), got {len(paths)}"
        )
    return [read_json(p) for p in paths]


def _check_against_flags(args, value) -> None:
    """--n/--c/--base, where given, must agree with what the files say."""
    if args.n is not None and getattr(value, "n", args.n) != args.n:
        raise SchemaError(f"input has n={value.n}, but --n {args.n} was given")
    if args.c is not None and getattr(value, "c", args.c) != args.c:
        raise SchemaError(f"input has c={value.c}, but --c {args.c} was given")
    if args.base is not None and getattr(value, "base", None) not in (None, args.base):
        raise SchemaError("input base ring differs from --base")


def _read_jet(args, obj):
    document_kind(obj, {"jet"})
    g = decode_jet(obj)
    _check_against_flags(args, g)
    return g


def _read_derivation(args, obj):
    document_kind(obj, {"derivation"})
    D = decode_derivation(obj)
    _check_against_flags(args, D)
    return D


def _jet_document(g) -> dict:
    return document("jet", encode_jet(g))


def _derivation_document(D) -> dict:
    return document("derivation", encode_derivation(D))


def _need_shape(args) -> tuple[int, int]:
    if args.n is None or args.c is None:
        raise SchemaError(f"{args.verb} needs --n and --c")
    return args.n, args.c


# -- verb handlers (each returns the output document, or an exit status) ----------------


def cmd_compose(args):
    first, second = _inputs(args, 2, "the outer jet, then the inner jet")
    return _jet_document(jet_compose(_read_jet(args, first), _read_jet(args, second)))


def cmd_invert(args):
    (obj,) = _inputs(args, 1, "a jet")
    return _jet_document(jet_invert(_read_jet(args, obj)))


def cmd_classify(args):
    (obj,) = _inputs(args, 1, "a jet")
    cls = jet_classify(_read_jet(args, obj))
    return document(
        "classification",
        {
            "in_G": cls.in_G,
            "in_K": cls.in_K,
            "in_K_u": cls.in_K_u,
            "n_levels": list(cls.n_levels),
        },
    )


def cmd_split(args):
    (obj,) = _inputs(args, 1, "a jet")
    g = _read_jet(args, obj)
    a, k = split_translation(g)
    A, u = split_linear_unipotent(k)
    return document(
        "split",
        {
            "translation": [encode_element(x) for x in a],
            "constant_free": encode_jet(k),
            "linear": encode_jet(A),
            "unipotent": encode_jet(u),
        },
    )


def cmd_coproduct(args):
    n, c = _need_shape(args)
    return coproduct_document(n, c)


def cmd_antipode(args):
    n, c = _need_shape(args)
    return antipode_document(n, c)


def cmd_exp(args):
    (obj,) = _inputs(args, 1, "a derivation")
    return _jet_document(exp_derivation(_read_derivation(args, obj)))


def cmd_log(args):
    (obj,) = _inputs(args, 1, "a unipotent jet")
    return _derivation_document(log_unipotent(_read_jet(args, obj)))


def cmd_bracket(args):
    left, right = _inputs(args, 2, "two derivations")
    return _derivation_document(
        derivation_bracket(_read_derivation(args, left), _read_derivation(args, right))
    )


def cmd_adjoint(args):
    jet_obj, der_obj = _inputs(args, 2, "a constant-free jet, then a derivation")
    return _derivation_document(
        adjoint(_read_jet(args, jet_obj), _read_derivation(args, der_obj))
    )


def _read_roof(args, obj):
    document_kind(obj, {"roof"})
    roof = decode_roof(obj)
    if args.base is not None and roof.phi.base != args.base:
        raise SchemaError("input base ring differs from --base")
    return roof


def cmd_roof_jet(args):
    (obj,) = _inputs(args, 1, "a roof")
    roof = _read_roof(args, obj)
    if args.c is None:
        raise SchemaError("roof-jet needs --c, the truncation order")
    return _jet_document(roof_jet(roof, args.c))


def cmd_roof_check(args):
    (obj,) = _inputs(args, 1, "a roof")
    roof = _read_roof(args, obj)
    payload = {"strict": roof_is_strict(roof)}
    if args.c is not None:
        cls = jet_classify(roof_jet(roof, args.c))
        payload["c"] = args.c
        payload["in_K"] = cls.in_K
        payload["in_K_u"] = cls.in_K_u
    return document("roof_report", payload)


def _read_rep(args):
    """The representation: from the first --in file, else the standard one."""
    paths = args.inputs or []
    if paths and document_kind(read_json(paths[0]), None) == "representation":
        rep = decode_rep(read_json(paths[0]))
        _check_against_flags(args, rep)
        return rep, paths[1:]
    n, c = _need_shape(args)
    return rep_jet_standard(n, c), paths


def cmd_rep_eval(args):
    rep, rest = _read_rep(args)
    if len(rest) != 1:
        raise SchemaError("rep-eval needs a jet file (after an optional rep file)")
    g = _read_jet(args, read_json(rest[0]))
    return document(
        "matrix",
        {"m": rep.m, "base": encode_base(g.base), "rows": encode_matrix(rep_eval(rep, g))},
    )


def cmd_rep_check(args):
    rep, rest = _read_rep(args)
    if rest:
        raise SchemaError("rep-check takes at most one --in file (a representation)")
    report = rep_check_homomorphism(rep)
    payload = {"m": rep.m, "n": rep.n, "c": rep.c, "ok": report.ok}
    payload["failing_entry"] = (
        list(report.failing_entry) if report.failing_entry is not None else None
    )
    return document("rep_report", payload)


def cmd_rep_bound(args):
    rep, rest = _read_rep(args)
    if rest:
        raise SchemaError("rep-bound takes at most one --in file (a representation)")
    return document(
        "rep_bound",
        {
            "m": rep.m,
            "n": rep.n,
            "c": rep.c,
            "weights": list(rep_weights(rep)),
            "extension_order": extension_order(rep),
            "factoring_order": factoring_order(rep),
        },
    )


def cmd_selftest(args):
    seed = args.seed if args.seed is not None else 0
    first = acceptance.run_all(seed)
    second = acceptance.run_all(seed)
    results = first + [
        acceptance.CriterionResult(
            "selftest-determinism",
            acceptance.render_report(first) == acceptance.render_report(second),
            f"two runs with seed {seed} rendered byte-identical reports",
        )
    ]
    sys.stdout.write(acceptance.render_report(results))
    return 0 if all(r.ok for r in results) else 1


# -- wiring ------------------------------------------------------------------------------


_VERBS = [
    ("compose", cmd_compose, "compose two jets (first file applied after the second)"),
    ("invert", cmd_invert, "invert a jet"),
    ("classify", cmd_classify, "membership in G, K, unipotent K, and the level kernels"),
    ("split", cmd_split, "translation / linear / unipotent factors of a jet"),
    ("coproduct", cmd_coproduct, "the coproduct table of the coordinate ring at (n, c)"),
    ("antipode", cmd_antipode, "the antipode table of the coordinate ring at (n, c)"),
    ("exp", cmd_exp, "exponential of a derivation"),
    ("log", cmd_log, "logarithm of a unipotent jet"),
    ("bracket", cmd_bracket, "Lie bracket of two derivations"),
    ("adjoint", cmd_adjoint, "adjoint action of a constant-free jet on a derivation"),
    ("roof-jet", cmd_roof_jet, "the jet a roof induces at order c"),
    ("roof-check", cmd_roof_check, "strictness (and K-membership at --c) of a roof"),
    ("rep-eval", cmd_rep_eval, "evaluate a representation at a constant-free jet"),
    ("rep-check", cmd_rep_check, "symbolic homomorphism check of a representation"),
    ("rep-bound", cmd_rep_bound, "weights, extension order, and factoring order"),
    ("selftest", cmd_selftest, "run the acceptance suite twice and report determinism"),
]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="discjet",
        description="exact jet groups of the formal n-disc, over JSON files",
    )
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb, handler, help_text in _VERBS:
        p = sub.add_parser(verb, help=help_text)
        p.set_defaults(handler=handler)
        p.add_argument("--n", type=int, default=None, help="disc dimension")
        p.add_argument("--c", type=int, default=None, help="truncation order")
        p.add_argument(
            "--base",
            type=_parse_base_flag,
            default=None,
            metavar="'[N1,..]'",
            help="nilpotency orders of the base ring (a JSON list)",
        )
        p.add_argument(
            "--in",
            dest="inputs",
            action="append",
            default=None,
            metavar="FILE",
            help="input JSON document (repeatable; order matters)",
        )
        p.add_argument("--out", default=None, metavar="FILE", help="output JSON file")
        p.add_argument("--seed", type=int, default=None, help="seed for selftest")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = args.handler(args)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    if isinstance(result, int):
        return result
    if args.out is not None:
        write_json(args.out, result)
    else:
        sys.stdout.write(render(result))
    return 0


if __name__ == "__main__":
    sys.exit(main())
