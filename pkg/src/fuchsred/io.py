"""JSON (de)serialization of scalars, matrices, specs, tuples and reduced points.

Exact scalars are written as four decimal integer strings
``[re_num, re_den, im_num, im_den]``; floating scalars as ``[re, im]``.
Documents are dumped with sorted keys so identical objects give identical
bytes.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from typing import Any

from fuchsred.linalg import Matrix
from fuchsred.orbits import OrbitSpec
from fuchsred.reduction import DiscreteData, FuchsTuple, ReducedPoint
from fuchsred.scalars import EXACT, Field, GaussianRational, field_for_mode


class ParseError(ValueError):
    """Malformed document or scalar."""


def mode_of(field: Field) -> str:
    return "exact" if field.exact else "float"


# --- scalars -----------------------------------------------------------------


def dump_scalar(x, field: Field) -> list:
    if field.exact:
        return [str(p) for p in field.coerce(x).parts()]
    z = complex(x)
    return [z.real, z.imag]


def _exact_from_text(text: str) -> GaussianRational:
    s = text.strip().replace(" ", "")
    if not s.endswith("i"):
        return GaussianRational(Fraction(s))
    body = s[:-1]
    # split at the last sign that is not the leading one and not after an exponent
    for k in range(len(body) - 1, 0, -1):
        if body[k] in "+-" and body[k - 1] not in "eE":
            re, im = body[:k], body[k:]
            break
    else:
        re, im = "0", body
    if im in ("", "+"):
        im = "1"
    elif im == "-":
        im = "-1"
    return GaussianRational(Fraction(re), Fraction(im))


def load_scalar(obj: Any, field: Field):
    """Parse a scalar.

    Accepts the canonical list forms plus, for hand-written input, plain
    numbers and strings such as ``"3/2"`` or ``"1-2i"``.
    """
    try:
        if isinstance(obj, bool):
            raise ParseError(f"boolean is not a scalar: {obj!r}")
        if field.exact:
            if isinstance(obj, list):
                if len(obj) == 4:
                    rn, rd, im_n, im_d = (int(str(p)) for p in obj)
                    if rd == 0 or im_d == 0:
                        raise ParseError(f"zero denominator in {obj!r}")
                    return GaussianRational(Fraction(rn, rd), Fraction(im_n, im_d))
                if len(obj) == 2:
                    return GaussianRational(Fraction(str(obj[0])), Fraction(str(obj[1])))
                raise ParseError(f"scalar list must have 2 or 4 entries: {obj!r}")
            if isinstance(obj, int):
                return GaussianRational(obj)
            if isinstance(obj, float):
                return GaussianRational(Fraction(obj))
            if isinstance(obj, str):
                return _exact_from_text(obj)
        else:
            if isinstance(obj, list):
                if len(obj) == 2:
                    return complex(float(obj[0]), float(obj[1]))
                if len(obj) == 4:
                    return complex(EXACT.coerce(load_scalar(obj, EXACT)))
                raise ParseError(f"scalar list must have 2 or 4 entries: {obj!r}")
            if isinstance(obj, (int, float)):
                return complex(obj)
            if isinstance(obj, str):
                return complex(_exact_from_text(obj))
    except ParseError:
        raise
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ParseError(f"bad scalar {obj!r}: {exc}") from None
    raise ParseError(f"bad scalar {obj!r}")


# --- matrices and specs ------------------------------------------------------------


def dump_matrix(a: Matrix, field: Field) -> list:
    return [[dump_scalar(x, field) for x in row] for row in a.rows]


def load_matrix(obj: Any, field: Field, m: int | None = None) -> Matrix:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise ParseError("matrix must be a non-empty list of rows")
    rows = [[load_scalar(x, field) for x in r] for r in obj]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ParseError("matrix must be square")
    if m is not None and n != m:
        raise ParseError(f"expected a {m}x{m} matrix, got {n}x{n}")
    return Matrix(rows)


def dump_spec(spec: OrbitSpec, field: Field) -> dict:
    return {"m": spec.m, "eigs": [[dump_scalar(l, field), k] for l, k in spec.eigs]}


def load_spec(obj: Any, field: Field) -> OrbitSpec:
    """Parse a spec; the eigenvalue restriction is enforced by :meth:`OrbitSpec.make`."""
    if not isinstance(obj, dict) or "eigs" not in obj:
        raise ParseError("spec must be an object with an 'eigs' list")
    try:
        eigs = [(load_scalar(l, field), int(k)) for l, k in obj["eigs"]]
    except ParseError:
        raise
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad eigs entry: {exc}") from None
    m = obj.get("m")
    return OrbitSpec.make(eigs, field, m=None if m is None else int(m))


def load_specs(obj: Any, field: Field) -> tuple:
    if isinstance(obj, dict) and "specs" in obj:
        obj = obj["specs"]
    if not isinstance(obj, list):
        raise ParseError("expected a list of specs")
    return tuple(load_spec(s, field) for s in obj)


# --- discrete data, tuples, reduced points ---------------------------------------


def dump_discrete(data: DiscreteData, field: Field) -> dict:
    return {
        "anchors": list(data.anchors),
        "lambda_N": dump_scalar(data.lambda_top, field),
        "ordering_up": [dump_scalar(x, field) for x in data.ordering_up],
        "ordering_low": [dump_scalar(x, field) for x in data.ordering_low],
    }


def load_discrete(obj: Any, field: Field, specs=None) -> DiscreteData:
    """Parse discrete data; missing keys fall back to the defaults for ``specs``."""
    if not isinstance(obj, dict):
        raise ParseError("discrete data must be an object")
    base = None
    try:
        if "anchors" in obj:
            anchors = tuple(int(i) for i in obj["anchors"])
        elif specs is not None:
            anchors = DiscreteData.default(specs).anchors
        else:
            raise ParseError("discrete data needs 'anchors'")
        if specs is not None:
            top, up, low = anchors
            base = DiscreteData(
                anchors, specs[top].eigs[0][0], specs[up].slots(), specs[low].slots()
            )

        def pick(key, attr, many):
            if key in obj:
                if many:
                    return tuple(load_scalar(x, field) for x in obj[key])
                return load_scalar(obj[key], field)
            if base is None:
                raise ParseError(f"discrete data needs {key!r}")
            return getattr(base, attr)

        data = DiscreteData(
            anchors,
            pick("lambda_N", "lambda_top", False),
            pick("ordering_up", "ordering_up", True),
            pick("ordering_low", "ordering_low", True),
        )
    except ParseError:
        raise
    except (TypeError, IndexError, ValueError) as exc:
        raise ParseError(f"bad discrete data: {exc}") from None
    return data.coerce(field)


def dump_tuple(tup: FuchsTuple) -> dict:
    f = tup.field
    doc = {
        "mode": mode_of(f),
        "m": tup.m,
        "specs": [dump_spec(s, f) for s in tup.specs],
        "matrices": [dump_matrix(a, f) for a in tup.matrices],
    }
    if tup.poles is not None:
        doc["poles"] = [dump_scalar(p, f) for p in tup.poles]
    return doc


def _field_from_doc(doc: dict, field: Field | None, tol: float | None) -> Field:
    mode = doc.get("mode", "exact")
    if mode not in ("exact", "float"):
        raise ParseError(f"unknown mode {mode!r}")
    if field is not None:
        if mode_of(field) != mode:
            raise ParseError(f"document mode {mode!r} does not match requested {mode_of(field)!r}")
        return field
    return field_for_mode(mode) if tol is None else field_for_mode(mode, tol)


def load_tuple(doc: Any, field: Field | None = None, tol: float | None = None) -> FuchsTuple:
    if not isinstance(doc, dict) or "matrices" not in doc or "specs" not in doc:
        raise ParseError("tuple document needs 'specs' and 'matrices'")
    f = _field_from_doc(doc, field, tol)
    specs = load_specs(doc["specs"], f)
    m = int(doc.get("m", specs[0].m if specs else 0))
    mats = tuple(load_matrix(a, f, m) for a in doc["matrices"])
    if len(mats) != len(specs):
        raise ParseError("need one spec per matrix")
    poles = doc.get("poles")
    if poles is not None:
        poles = tuple(load_scalar(p, f) for p in poles)
    return FuchsTuple(specs, mats, f, poles)


def dump_reduced(point: ReducedPoint) -> dict:
    f = point.field
    doc = {
        "mode": mode_of(f),
        "m": point.m,
        "specs": [dump_spec(s, f) for s in point.specs],
        "a_hat": dump_matrix(point.a_hat, f),
        "tail": [dump_matrix(a, f) for a in point.tail],
        "discrete_data": dump_discrete(point.data, f),
    }
    if point.poles is not None:
        doc["poles"] = [dump_scalar(p, f) for p in point.poles]
    return doc


def load_reduced(doc: Any, field: Field | None = None, tol: float | None = None) -> ReducedPoint:
    if not isinstance(doc, dict) or "a_hat" not in doc:
        raise ParseError("reduced-point document needs 'a_hat'")
    f = _field_from_doc(doc, field, tol)
    try:
        specs = load_specs(doc["specs"], f)
        m = int(doc.get("m", specs[0].m))
        data = load_discrete(doc["discrete_data"], f, specs)
        a_hat = load_matrix(doc["a_hat"], f, m - 1)
        tail = tuple(load_matrix(a, f, m) for a in doc["tail"])
    except KeyError as exc:
        raise ParseError(f"reduced-point document lacks {exc}") from None
    if len(tail) != len(specs) - 3:
        raise ParseError("tail must hold N - 3 matrices")
    poles = doc.get("poles")
    if poles is not None:
        poles = tuple(load_scalar(p, f) for p in poles)
    return ReducedPoint(a_hat, tail, specs, data, f, poles)


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None


def read_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return loads(fh.read())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None


def write_text(path: str | None, text: str, stream=None) -> None:
    if path is None or path == "-":
        (stream or sys.stdout).write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


__all__ = [
    "ParseError",
    "dump_scalar",
    "load_scalar",
    "dump_matrix",
    "load_matrix",
    "dump_spec",
    "load_spec",
    "load_specs",
    "dump_discrete",
    "load_discrete",
    "dump_tuple",
    "load_tuple",
    "dump_reduced",
    "load_reduced",
    "dumps",
    "loads",
    "read_json",
    "write_text",
]
