"""HTTP facade and the command handlers it shares with the CLI.

The handler functions at the top take and return plain JSON-shaped dicts;
the CLI calls them directly and the FastAPI endpoints call the same
functions, so both surfaces emit byte-identical documents (everything is
rendered through ``canonical_dumps``).  Sessions hold a quiver with
potential plus an operation log; the current state is always recomputed by
replaying the log against the initial document, which makes the replay
invariant true by construction and undo a one-line pop.

Error mapping: malformed documents (BadInput, body validation) are 400,
an unknown session is 404, a mutation blocked by a 2-cycle (or an undo
with nothing to undo) is 409, and every other domain error is 422 with a
machine-readable reason.
"""

# NOTE: no ``from __future__ import annotations`` here — FastAPI must see
# real type objects on the endpoint signatures (the request models are
# locals of ``create_app``, so stringified annotations would not resolve).

import json
import os
import secrets
import threading
from dataclasses import dataclass, field as dc_field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Literal

from .classify import classify
from .einv import e_generic, presentation_space, rigid_tame_probe
from .errors import (
    BadInput,
    CapExceeded,
    QPWError,
    TwoCycleObstruction,
    VertexOutOfRange,
)
from .jacobian import truncated_quotient
from .qp import QP, Potential, qp_mutate
from .quiver import mutate as quiver_mutate
from .quiver import two_cycle_pairs
from .reps import check_module, is_brick, is_semistable, is_stable
from .serialize import (
    canonical_dumps,
    qp_from_json,
    qp_to_json,
    quiver_from_json,
    quiver_to_json,
    rep_from_json,
    theta_from_json,
)
from .witness import WitnessOptions, run_witness

__all__ = [
    "handle_classify",
    "handle_mutate",
    "handle_qp_mutate",
    "handle_jacobian",
    "handle_stable",
    "handle_einv",
    "handle_witness",
    "SessionStore",
    "session_view",
    "create_app",
    "DEFAULT_PORT",
]

DEFAULT_PORT = 7878
STATE_DIR_ENV = "QPW_STATE_DIR"


def _vertex_index(doc_n: int, k: int) -> int:
    """1-based wire vertex -> 0-based core vertex, range-checked."""
    if not isinstance(k, int) or isinstance(k, bool) or not (1 <= k <= doc_n):
        raise VertexOutOfRange(f"vertex {k} out of range 1..{doc_n}")
    return k - 1


# ---------------------------------------------------------------------------
# shared handlers (dict in, dict out)


def handle_classify(doc: Any) -> dict[str, Any]:
    q = quiver_from_json(doc)
    t = classify(q)
    return {
        "type": t.display(),
        "witnessSequence": [v + 1 for v in t.witness_sequence],
        "visited": t.visited,
    }


def handle_mutate(doc: Any, k: int) -> dict[str, Any]:
    """Exchange-matrix mutation of a bare quiver document."""
    q = quiver_from_json(doc)
    return quiver_to_json(quiver_mutate(q, _vertex_index(q.n, k)))


def handle_qp_mutate(doc: Any, k: int) -> dict[str, Any]:
    qp = qp_from_json(doc)
    return qp_to_json(qp_mutate(qp, _vertex_index(qp.quiver.n, k)))


def handle_jacobian(doc: Any, truncation: int | None = None) -> dict[str, Any]:
    qp = qp_from_json(doc)
    n = truncation if truncation is not None else qp.potential.truncation
    algebra = truncated_quotient(qp, n)
    cert = algebra.certificate
    out: dict[str, Any] = {
        "status": cert.status,
        "truncation": cert.truncation,
        "gradedDims": list(cert.graded_dims),
    }
    if cert.status == "FiniteDim":
        out["dim"] = cert.total_dim
        out["firstZeroLayer"] = cert.first_zero
    return out


def handle_stable(rep_doc: Any, qp_doc: Any, theta: Any) -> dict[str, Any]:
    qp = qp_from_json(qp_doc)
    m = rep_from_json(qp.quiver, rep_doc)
    th = theta_from_json(theta, qp.quiver.n)
    algebra = truncated_quotient(qp, qp.potential.truncation)
    out: dict[str, Any] = {
        "theta": list(th),
        "dims": list(m.dims),
        "isModule": check_module(algebra, m),
        "semistable": is_semistable(m, th),
        "stable": is_stable(m, th),
    }
    try:
        out["brick"] = is_brick(m)
    except CapExceeded as exc:
        out["brick"] = None
        out["brickNote"] = str(exc)
    return out


def handle_einv(doc: Any, g: Any, samples: int = 64, seed: int = 0) -> dict[str, Any]:
    qp = qp_from_json(doc)
    gv = theta_from_json(g, qp.quiver.n)
    algebra = truncated_quotient(qp, qp.potential.truncation)
    value, _witness = e_generic(algebra, gv, gv, samples=samples, seed=seed)
    p1, p0 = presentation_space(algebra, gv)
    probe = rigid_tame_probe(algebra, gv, samples=samples, seed=seed)
    return {
        "g": list(gv),
        "presentation": {"pMinusOne": list(p1), "pZero": list(p0)},
        "samples": samples,
        "seed": seed,
        "eGeneric": value,
        "probe": {
            "diagonalMin": probe.diagonal_min,
            "offDiagonalMin": probe.off_diagonal_min,
            "samples": probe.samples,
            "seed": probe.seed,
        },
    }


def handle_witness(
    doc: Any,
    options: dict[str, Any] | None = None,
    progress=None,
) -> dict[str, Any]:
    qp = qp_from_json(doc)
    opts = options or {}
    known = {
        "k": "k",
        "truncation": "truncation",
        "probeDepth": "probe_depth",
        "probeTrials": "probe_trials",
        "probeSeed": "probe_seed",
        "evidenceBudget": "evidence_budget",
    }
    kwargs: dict[str, Any] = {}
    for wire, attr in known.items():
        if wire in opts and opts[wire] is not None:
            val = opts[wire]
            if isinstance(val, bool) or not isinstance(val, int):
                raise BadInput(f"option {wire!r} must be an int")
            kwargs[attr] = val
    unknown = set(opts) - set(known) - {"evidenceFields"}
    if unknown:
        raise BadInput(f"unknown witness options: {sorted(unknown)}")
    if "evidenceFields" in opts and opts["evidenceFields"] is not None:
        fields = opts["evidenceFields"]
        if not isinstance(fields, list) or any(not isinstance(f, str) for f in fields):
            raise BadInput("option 'evidenceFields' must be a list of field names")
        kwargs["evidence_fields"] = tuple(fields)
    cert = run_witness(qp, WitnessOptions(**kwargs), progress=progress)
    return cert.to_json()


# ---------------------------------------------------------------------------
# sessions


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class Session:
    id: str
    initial: dict[str, Any]  # normalized QP document
    ops: list[dict[str, Any]] = dc_field(default_factory=list)
    created_at: str = dc_field(default_factory=_now)
    touched_at: str = dc_field(default_factory=_now)

    def replay(self) -> QP:
        """Recompute the current QP from the log — determinism by construction."""
        qp = qp_from_json(self.initial)
        for op in self.ops:
            qp = _apply_op(qp, op)
        return qp


def _apply_op(qp: QP, op: dict[str, Any]) -> QP:
    k = _vertex_index(qp.quiver.n, op["k"])
    if op["mode"] == "qp":
        return qp_mutate(qp, k)
    # exchange-matrix mode: arrow identities do not survive, so any
    # potential is cleared (recorded in the session view, not silently lost)
    new_q = quiver_mutate(qp.quiver, k)
    return QP(new_q, Potential({}, truncation=qp.potential.truncation))


class SessionStore:
    """In-memory sessions with optional JSON persistence to a directory."""

    def __init__(self, state_dir: str | None = None):
        self._lock = threading.Lock()
        self._sessions: dict[str, Session] = {}
        self._dir = state_dir
        if state_dir:
            os.makedirs(state_dir, exist_ok=True)
            for name in sorted(os.listdir(state_dir)):
                if not name.endswith(".json"):
                    continue
                try:
                    with open(os.path.join(state_dir, name), encoding="utf-8") as fh:
                        raw = json.load(fh)
                    sess = Session(
                        raw["id"], raw["initial"], raw.get("ops", []),
                        raw.get("createdAt", _now()), raw.get("touchedAt", _now()),
                    )
                    sess.replay()  # refuse to load corrupt logs
                    self._sessions[sess.id] = sess
                except (OSError, KeyError, ValueError, QPWError):
                    continue  # skip unreadable files; never crash startup

    def _persist(self, sess: Session) -> None:
        if not self._dir:
            return
        path = os.path.join(self._dir, f"{sess.id}.json")
        doc = {
            "id": sess.id,
            "initial": sess.initial,
            "ops": sess.ops,
            "createdAt": sess.created_at,
            "touchedAt": sess.touched_at,
        }
        tmp = path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(canonical_dumps(doc))
        os.replace(tmp, path)

    def create(self, qp_doc: Any) -> Session:
        normalized = qp_to_json(qp_from_json(qp_doc))
        sess = Session(secrets.token_hex(8), normalized)
        with self._lock:
            self._sessions[sess.id] = sess
            self._persist(sess)
        return sess

    def get(self, sid: str) -> Session:
        with self._lock:
            sess = self._sessions.get(sid)
        if sess is None:
            raise KeyError(sid)
        return sess

    def mutate(self, sid: str, k: int, mode: str) -> Session:
        sess = self.get(sid)
        with self._lock:
            op = {"op": "mutate", "k": k, "mode": mode}
            _apply_op(sess.replay(), op)  # raises before the log is touched
            sess.ops.append(op)
            sess.touched_at = _now()
            self._persist(sess)
        return sess

    def undo(self, sid: str) -> Session:
        sess = self.get(sid)
        with self._lock:
            if not sess.ops:
                raise IndexError("nothing to undo")
            sess.ops.pop()
            sess.touched_at = _now()
            self._persist(sess)
        return sess


def session_view(sess: Session) -> dict[str, Any]:
    qp = sess.replay()
    try:
        badge = classify(qp.quiver).display()
    except QPWError as exc:
        badge = f"unclassifiable ({exc})"
    return {
        "id": sess.id,
        "qp": qp_to_json(qp),
        "classification": badge,
        "twoCycles": [[i + 1, j + 1] for i, j in two_cycle_pairs(qp.quiver)],
        "isReduced": qp.is_reduced,
        "history": list(sess.ops),
        "createdAt": sess.created_at,
        "touchedAt": sess.touched_at,
    }


# ---------------------------------------------------------------------------
# the FastAPI application


def create_app(state_dir: str | None = None):
    """Build the HTTP facade; state_dir falls back to the env var."""
    from fastapi import FastAPI, Request
    from fastapi.exceptions import RequestValidationError
    from fastapi.responses import Response
    from pydantic import BaseModel, Field

    class MutateBody(BaseModel):
        k: int
        mode: Literal["quiver", "qp"] = "qp"

    class WitnessBody(BaseModel):
        qp: dict[str, Any]
        k: int | None = None
        truncation: int | None = None
        probeDepth: int | None = Field(default=None)
        probeTrials: int | None = Field(default=None)
        probeSeed: int | None = Field(default=None)
        evidenceFields: list[str] | None = Field(default=None)
        evidenceBudget: int | None = Field(default=None)

    store = SessionStore(state_dir or os.environ.get(STATE_DIR_ENV) or None)
    app = FastAPI(title="quiver-potential workbench", version="0.1.0")
    app.state.store = store

    def respond(doc: Any, status_code: int = 200) -> Response:
        return Response(
            content=canonical_dumps(doc),
            status_code=status_code,
            media_type="application/json",
        )

    def error_doc(exc: Exception) -> dict[str, Any]:
        return {"error": type(exc).__name__, "reason": str(exc)}

    @app.exception_handler(BadInput)
    async def _bad_input(request: Request, exc: BadInput):
        return respond(error_doc(exc), 400)

    @app.exception_handler(TwoCycleObstruction)
    async def _conflict(request: Request, exc: TwoCycleObstruction):
        return respond(error_doc(exc), 409)

    @app.exception_handler(QPWError)
    async def _domain(request: Request, exc: QPWError):
        return respond(error_doc(exc), 422)

    @app.exception_handler(RequestValidationError)
    async def _malformed(request: Request, exc: RequestValidationError):
        return respond({"error": "MalformedBody", "reason": str(exc)}, 400)

    @app.post("/api/session", status_code=201)
    async def create_session(body: dict[str, Any]):
        sess = store.create(body)
        return respond(session_view(sess), 201)

    @app.get("/api/session/{sid}")
    async def get_session(sid: str):
        try:
            sess = store.get(sid)
        except KeyError:
            return respond({"error": "UnknownSession", "reason": sid}, 404)
        return respond(session_view(sess))

    @app.post("/api/session/{sid}/mutate")
    async def mutate_session(sid: str, body: MutateBody):
        try:
            sess = store.mutate(sid, body.k, body.mode)
        except KeyError:
            return respond({"error": "UnknownSession", "reason": sid}, 404)
        return respond(session_view(sess))

    @app.post("/api/session/{sid}/undo")
    async def undo_session(sid: str):
        try:
            sess = store.undo(sid)
        except KeyError:
            return respond({"error": "UnknownSession", "reason": sid}, 404)
        except IndexError as exc:
            return respond({"error": "NothingToUndo", "reason": str(exc)}, 409)
        return respond(session_view(sess))

    @app.post("/api/classify")
    async def classify_endpoint(body: dict[str, Any]):
        return respond(handle_classify(body))

    @app.post("/api/witness")
    async def witness_endpoint(body: WitnessBody):
        options = body.model_dump(exclude={"qp"}, exclude_none=True)
        return respond(handle_witness(body.qp, options))

    # The browser UI talks to the API with same-origin relative paths, so
    # serve it from this process when its directory is present (editable
    # checkouts).  Wheel installs without the UI simply skip the mount.
    studio = Path(__file__).resolve().parents[2] / "frontend"
    if studio.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=studio, html=True), name="ui")

    return app
