"""Wire format: JSON documents for quivers, potentials, representations.

One canonical encoder feeds both the CLI and the HTTP service, so the two
surfaces emit byte-identical documents.  Vertices are 1-based in files and
on the wire (humans count from 1); everything in-memory is 0-based, and the
shift happens here and only here.

Document shapes
---------------
quiver          {"n": int, "b": [[int]], "arrows": [{"id","src","tgt"}], "labels"?}
QP              quiver fields plus "potential": [{"coef": "p/q", "cycle": [ids]}]
                and "truncation": int
representation  {"field": "Q"|"F2"|"F3"|"F5", "dims": [int], "mats": {id: [[entry]]}}

Coefficients and rational matrix entries travel as strings ("-3/4") when
they have a denominator and as plain ints otherwise; prime-field entries
are always ints in [0, p).  Floats are rejected — this tool is exact.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Any

from .errors import BadInput
from .linalg import FIELDS, PrimeField
from .qp import DEFAULT_TRUNCATION, QP, Potential
from .quiver import Quiver, build_quiver
from .reps import Representation

__all__ = [
    "canonical_dumps",
    "fraction_to_json",
    "parse_fraction",
    "quiver_to_json",
    "quiver_from_json",
    "qp_to_json",
    "qp_from_json",
    "rep_to_json",
    "rep_from_json",
    "theta_from_json",
    "qp_digest",
]


def canonical_dumps(doc: Any) -> str:
    """Serialize with sorted keys and no whitespace — the one true byte form."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------------
# scalars


def fraction_to_json(x: Fraction | int) -> int | str:
    fr = Fraction(x)
    if fr.denominator == 1:
        return int(fr)
    return str(fr)


def parse_fraction(value: Any, what: str = "coefficient") -> Fraction:
    """Accept an int or a "p/q" string; refuse floats (inexact)."""
    if isinstance(value, bool):
        raise BadInput(f"{what} must be an integer or a 'p/q' string, got a bool")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise BadInput(f"{what} {value!r} is not a valid rational") from exc
    if isinstance(value, float):
        raise BadInput(f"{what} {value!r} is a float; write it as a 'p/q' string")
    raise BadInput(f"{what} must be an integer or a 'p/q' string")


def _expect(doc: Any, key: str, kind: type, what: str) -> Any:
    if not isinstance(doc, dict):
        raise BadInput(f"{what} must be a JSON object")
    if key not in doc:
        raise BadInput(f"{what} is missing the {key!r} field")
    val = doc[key]
    if kind is int and isinstance(val, bool):
        raise BadInput(f"{what}.{key} must be an int, got a bool")
    if not isinstance(val, kind):
        raise BadInput(f"{what}.{key} must be a {kind.__name__}")
    return val


# ---------------------------------------------------------------------------
# quivers


def quiver_to_json(q: Quiver) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "n": q.n,
        "b": [list(row) for row in q.b],
        "arrows": [
            {"id": a.id, "src": a.src + 1, "tgt": a.tgt + 1} for a in q.arrows
        ],
    }
    if q.labels is not None:
        doc["labels"] = list(q.labels)
    return doc


def quiver_from_json(doc: Any) -> Quiver:
    n = _expect(doc, "n", int, "quiver")
    if n < 1:
        raise BadInput("quiver.n must be a positive vertex count")
    b = doc.get("b")
    arrows = doc.get("arrows")
    if b is None and arrows is None:
        raise BadInput("quiver needs a 'b' matrix or an 'arrows' list")
    if b is not None:
        if (
            not isinstance(b, list)
            or len(b) != n
            or any(
                not isinstance(row, list)
                or len(row) != n
                or any(isinstance(x, bool) or not isinstance(x, int) for x in row)
                for row in b
            )
        ):
            raise BadInput("quiver.b must be an n-by-n integer matrix")
    arrow_tuples: list[tuple[str, int, int]] | None = None
    if arrows is not None:
        if not isinstance(arrows, list):
            raise BadInput("quiver.arrows must be a list")
        arrow_tuples = []
        for entry in arrows:
            aid = _expect(entry, "id", str, "arrow")
            src = _expect(entry, "src", int, "arrow")
            tgt = _expect(entry, "tgt", int, "arrow")
            if not (1 <= src <= n and 1 <= tgt <= n):
                raise BadInput(
                    f"arrow {aid!r} endpoints must be 1-based vertices in 1..{n}"
                )
            arrow_tuples.append((aid, src - 1, tgt - 1))
    labels = doc.get("labels")
    if labels is not None and (
        not isinstance(labels, list) or any(not isinstance(s, str) for s in labels)
    ):
        raise BadInput("quiver.labels must be a list of strings")
    try:
        return build_quiver(matrix=b, arrows=arrow_tuples, n=n, labels=labels)
    except Exception as exc:  # noqa: BLE001 - surface domain message as-is
        raise BadInput(f"invalid quiver document: {exc}") from exc


# ---------------------------------------------------------------------------
# quivers with potential


def qp_to_json(qp: QP) -> dict[str, Any]:
    doc = quiver_to_json(qp.quiver)
    terms = sorted(qp.potential.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))
    doc["potential"] = [
        {"coef": fraction_to_json(c), "cycle": list(cycle)} for cycle, c in terms
    ]
    doc["truncation"] = qp.potential.truncation
    return doc


def qp_from_json(doc: Any) -> QP:
    quiver = quiver_from_json(doc)
    raw_terms = doc.get("potential", [])
    if not isinstance(raw_terms, list):
        raise BadInput("QP.potential must be a list of {coef, cycle} terms")
    truncation = doc.get("truncation", DEFAULT_TRUNCATION)
    if isinstance(truncation, bool) or not isinstance(truncation, int):
        raise BadInput("QP.truncation must be an int")
    specs: list[tuple[Fraction, tuple[str, ...]]] = []
    for entry in raw_terms:
        if not isinstance(entry, dict) or "coef" not in entry or "cycle" not in entry:
            raise BadInput("each potential term needs 'coef' and 'cycle'")
        cycle = entry["cycle"]
        if not isinstance(cycle, list) or any(not isinstance(s, str) for s in cycle):
            raise BadInput("potential term cycle must be a list of arrow ids")
        coef = parse_fraction(entry["coef"], "potential coefficient")
        specs.append((coef, tuple(cycle)))
    try:
        potential = Potential.build(quiver, specs, truncation=truncation)
        return QP(quiver, potential)
    except BadInput:
        raise
    except Exception as exc:  # noqa: BLE001
        raise BadInput(f"invalid potential: {exc}") from exc


# ---------------------------------------------------------------------------
# representations


def _field_by_name(name: str):
    if name in FIELDS:
        return FIELDS[name]
    raise BadInput(
        f"unknown field {name!r}; supported: {', '.join(sorted(FIELDS))}"
    )


def rep_to_json(m: Representation) -> dict[str, Any]:
    mats: dict[str, Any] = {}
    rational = not isinstance(m.field, PrimeField)
    for a in m.quiver.arrows:
        mat = m.mats[a.id]
        if rational:
            mats[a.id] = [[fraction_to_json(x) for x in row] for row in mat]
        else:
            mats[a.id] = [[int(x) for x in row] for row in mat]
    return {"field": m.field.name, "dims": list(m.dims), "mats": mats}


def rep_from_json(quiver: Quiver, doc: Any) -> Representation:
    field = _field_by_name(_expect(doc, "field", str, "representation"))
    dims = _expect(doc, "dims", list, "representation")
    if len(dims) != quiver.n or any(
        isinstance(d, bool) or not isinstance(d, int) or d < 0 for d in dims
    ):
        raise BadInput("representation.dims must list one size per vertex")
    raw_mats = _expect(doc, "mats", dict, "representation")
    mats: dict[str, list[list[Any]]] = {}
    for a in quiver.arrows:
        raw = raw_mats.get(a.id)
        rows, cols = dims[a.tgt], dims[a.src]
        if raw is None:
            mat = [[field.zero()] * cols for _ in range(rows)]
        else:
            if not isinstance(raw, list) or len(raw) != rows or any(
                not isinstance(r, list) or len(r) != cols for r in raw
            ):
                raise BadInput(
                    f"matrix for arrow {a.id!r} must be {rows}x{cols}"
                )
            if isinstance(field, PrimeField):
                mat = []
                for r in raw:
                    row = []
                    for x in r:
                        if isinstance(x, bool) or not isinstance(x, int):
                            raise BadInput(
                                f"matrix entries for {a.id!r} must be ints mod {field.char}"
                            )
                        row.append(x % field.char)
                    mat.append(row)
            else:
                mat = [
                    [parse_fraction(x, f"matrix entry for {a.id!r}") for x in r]
                    for r in raw
                ]
        mats[a.id] = mat
    extra = set(raw_mats) - {a.id for a in quiver.arrows}
    if extra:
        raise BadInput(f"mats mention unknown arrows: {sorted(extra)}")
    try:
        return Representation(quiver, field, tuple(dims), mats)
    except Exception as exc:  # noqa: BLE001
        raise BadInput(f"invalid representation: {exc}") from exc


def theta_from_json(value: Any, n: int) -> tuple[int, ...]:
    """Parse a stability vector: a list of n ints (or a comma string)."""
    if isinstance(value, str):
        parts = [p.strip() for p in value.split(",") if p.strip()]
        try:
            value = [int(p) for p in parts]
        except ValueError as exc:
            raise BadInput(f"stability vector {value!r} must be comma-separated ints") from exc
    if (
        not isinstance(value, list)
        or len(value) != n
        or any(isinstance(x, bool) or not isinstance(x, int) for x in value)
    ):
        raise BadInput(f"stability vector must list {n} integers")
    return tuple(value)


# ---------------------------------------------------------------------------
# digests


def qp_digest(qp: QP) -> str:
    """Content address of a QP: sha256 over its canonical JSON bytes."""
    return hashlib.sha256(canonical_dumps(qp_to_json(qp)).encode("utf-8")).hexdigest()
