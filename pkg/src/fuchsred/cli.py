"""Command-line front end.

Exit codes: 0 success, 2 unsatisfiable or rejected spec, 3 point outside the
domain of the section (or lifted off the orbit), 4 failed verification,
5 I/O or parse error.
"""

from __future__ import annotations

import argparse
import random
import sys
from typing import Sequence

from fuchsred import io
from fuchsred.errors import (
    InvalidOrdering,
    InvalidSpec,
    LiftedOffOrbit,
    MembershipViolation,
    OutsideDomain,
)
from fuchsred.linalg import matrices_close, scale_of
from fuchsred.reduction import (
    DiscreteData,
    FuchsTuple,
    canonical_section,
    lift,
    random_level_specs,
    reduce,
    sample_tuple,
)
from fuchsred.scalars import DEFAULT_TOL, field_for_mode
from fuchsred.symplectic import verify_pullback

EXIT_OK = 0
EXIT_SPEC = 2
EXIT_DOMAIN = 3
EXIT_VERIFY = 4
EXIT_IO = 5

SAMPLE_RETRIES = 50


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _field(args, doc_mode: str | None = None):
    mode = args.mode or doc_mode or "exact"
    if doc_mode is not None and args.mode is not None and args.mode != doc_mode:
        raise CliError(EXIT_IO, f"--mode {args.mode} does not match the input file ({doc_mode})")
    return field_for_mode(mode, args.tol)


def _load_doc(path: str) -> dict:
    doc = io.read_json(path)
    if not isinstance(doc, dict):
        raise io.ParseError(f"{path}: expected a JSON object")
    return doc


def _load_tuple(args) -> FuchsTuple:
    """Load and validate the input tuple (level and orbit membership)."""
    doc = _load_doc(args.input)
    field = _field(args, doc.get("mode", "exact"))
    tup = io.load_tuple(doc, field)
    try:
        tup.validate()
    except (ValueError, MembershipViolation) as exc:
        raise CliError(EXIT_IO, f"invalid tuple in {args.input}: {exc}") from None
    return tup


def _discrete(args, specs, field) -> DiscreteData:
    if args.discrete:
        data = io.load_discrete(io.read_json(args.discrete), field, specs)
    else:
        data = DiscreteData.default(specs).coerce(field)
    try:
        data.validate(specs, field)
    except (InvalidOrdering, InvalidSpec, ValueError) as exc:
        raise CliError(EXIT_IO, f"bad discrete data: {exc}") from None
    return data


def _emit(args, doc: dict) -> None:
    try:
        io.write_text(args.out, io.dumps(doc))
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {args.out}: {exc}") from None


# --- subcommands -----------------------------------------------------------------


def cmd_sample(args) -> int:
    field = _field(args)
    rng = random.Random(args.seed)
    try:
        if args.specs:
            specs = io.load_specs(io.read_json(args.specs), field)
            if args.n_orbits is not None and len(specs) != args.n_orbits:
                raise CliError(EXIT_IO, f"--n-orbits {args.n_orbits} but {len(specs)} specs given")
            if args.m is not None and any(s.m != args.m for s in specs):
                raise CliError(EXIT_IO, f"--m {args.m} disagrees with the specs")
        else:
            m = args.m if args.m is not None else 2
            n = args.n_orbits if args.n_orbits is not None else 4
            if m < 2 or n < 3:
                raise CliError(EXIT_IO, "need m >= 2 and N >= 3")
            specs = random_level_specs(m, n, rng, field, nilpotent=args.nilpotent)
        if len(specs) < 3:
            raise CliError(EXIT_IO, "need at least three specs")
        data = _discrete(args, specs, field)
        tup = sample_tuple(specs, rng, field, data, max_tries=SAMPLE_RETRIES)
        tup.validate()
    except (InvalidSpec, MembershipViolation) as exc:
        raise CliError(EXIT_SPEC, f"unsatisfiable spec: {exc}") from None
    _emit(args, io.dump_tuple(tup))
    return EXIT_OK


def cmd_reduce(args) -> int:
    tup = _load_tuple(args)
    data = _discrete(args, tup.specs, tup.field)
    point = reduce(tup, data)
    _emit(args, io.dump_reduced(point))
    return EXIT_OK


def cmd_lift(args) -> int:
    doc = _load_doc(args.input)
    point = io.load_reduced(doc, _field(args, doc.get("mode", "exact")))
    tup = lift(point)
    _emit(args, io.dump_tuple(tup))
    return EXIT_OK


def _compare(a: FuchsTuple, b: FuchsTuple) -> bool:
    f = a.field
    if f.exact:
        return a.matrices == b.matrices
    sc = scale_of(f, *a.matrices, *b.matrices)
    return all(matrices_close(x, y, f, sc) for x, y in zip(a.matrices, b.matrices))


def cmd_roundtrip(args) -> int:
    tup = _load_tuple(args)
    data = _discrete(args, tup.specs, tup.field)
    point = reduce(tup, data)
    sec = canonical_section(tup, data)
    lifted = lift(point)
    again = reduce(lifted, data)
    ok1 = _compare(lifted, sec)
    if tup.field.exact:
        ok2 = again.a_hat == point.a_hat and again.tail == point.tail
    else:
        ok2 = again.same_as(point, scale_of(tup.field, point.a_hat, *point.tail))
    word = "exact match" if tup.field.exact else "match within tolerance"
    report = {
        "mode": io.mode_of(tup.field),
        "lift_reduce_equals_section": word if ok1 else "MISMATCH",
        "reduce_lift_equals_point": word if ok2 else "MISMATCH",
        "ok": ok1 and ok2,
    }
    _emit(args, report)
    return EXIT_OK if ok1 and ok2 else EXIT_VERIFY


def cmd_verify(args) -> int:
    tup = _load_tuple(args)
    data = _discrete(args, tup.specs, tup.field)
    reduce(tup, data)  # domain errors surface here with exit 3
    rep = verify_pullback(tup, data, trials=args.trials, rng=random.Random(args.seed))
    doc = rep.to_dict()
    _emit(args, doc)
    return EXIT_OK if rep.ok else EXIT_VERIFY


def cmd_check(args) -> int:
    doc = _load_doc(args.input)
    field = _field(args, doc.get("mode", "exact"))
    if "a_hat" in doc:
        point = io.load_reduced(doc, field)
        reports = {str(k): r for k, r in point.memberships().items()}
        report = {"kind": "reduced_point"}
        ok = all(reports.values())
    else:
        tup = io.load_tuple(doc, field)
        reports = {str(i): r for i, r in enumerate(tup.memberships())}
        mom = tup.momentum()
        mom_zero = all(field.is_zero(x, scale_of(field, *tup.matrices)) for x in mom.entries())
        report = {
            "kind": "tuple",
            "momentum_zero": mom_zero,
            "momentum_max_abs": max(field.magnitude(x) for x in mom.entries()),
        }
        ok = mom_zero and all(reports.values()) and tup.n >= 3
    report["membership"] = {
        k: {"ok": bool(r), "failures": [str(x) for x in r.failures()]} for k, r in reports.items()
    }
    report["ok"] = bool(ok)
    _emit(args, report)
    return EXIT_OK if ok else EXIT_VERIFY


COMMANDS = {
    "sample": cmd_sample,
    "reduce": cmd_reduce,
    "lift": cmd_lift,
    "roundtrip": cmd_roundtrip,
    "verify": cmd_verify,
    "check": cmd_check,
}


def _int_list(text: str) -> tuple:
    return tuple(int(x) for x in text.split(",") if x.strip())


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=("exact", "float"), default=None,
                        help="arithmetic mode (default: exact, or the input file's mode)")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL,
                        help="zero tolerance of floating mode, relative to the largest entry")
    common.add_argument("--seed", type=int, default=0, help="random seed")
    common.add_argument("--discrete", default=None,
                        help="JSON file with anchors, lambda_N and orderings")
    common.add_argument("--out", default=None, help="output file (default: stdout)")

    parser = argparse.ArgumentParser(
        prog="fuchsred",
        description="Reduce residue tuples of Fuchsian systems to products of orbits and back.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", parents=[common], help="sample a tuple on the zero-momentum level")
    p.add_argument("--m", type=int, default=None, help="matrix size (default 2)")
    p.add_argument("--n-orbits", type=int, default=None, help="number of matrices N (default 4)")
    p.add_argument("--specs", default=None, help="JSON list of orbit specs")
    p.add_argument("--nilpotent", type=_int_list, default=(),
                   help="comma-separated indices given a single nilpotent block")

    for name, text in (
        ("reduce", "map a tuple to its reduced point"),
        ("lift", "rebuild the canonical tuple from a reduced point"),
        ("roundtrip", "check lift(reduce(x)) and reduce(lift(p))"),
        ("check", "membership and momentum report"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("input")
    p = sub.add_parser("verify", parents=[common], help="verify the symplectic pullback identities")
    p.add_argument("input")
    p.add_argument("--trials", type=int, default=25)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "trials", 1) < 1:
        parser.error("--trials must be at least 1")
    try:
        return COMMANDS[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except OutsideDomain as exc:
        print(f"outside the domain [{exc.condition_id}]: {exc.condition}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except LiftedOffOrbit as exc:
        print(f"outside the domain [lifted-off-orbit]: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except io.ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except InvalidSpec as exc:
        code = EXIT_SPEC if args.command == "sample" else EXIT_IO
        print(f"error: {exc}", file=sys.stderr)
        return code
    except MembershipViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY if args.command in ("roundtrip", "verify", "check") else EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
