"""Session-oriented judgment elicitation over HTTP JSON.

A session fixes the alternatives and the scale; judgments arrive one pair at
a time (value on the scale or a reciprocal, fractions accepted as "1/3").
Every write returns a fresh report: triad suggestions always, and once all
pairs are judged also the inconsistency localization, the convexity
certification, and the weights from all four methods (least squares with
multi-start when uniqueness is not certified).

Sessions persist in a small sqlite key-value store and survive restarts.
Reports are pure functions of the judgment state, so overwriting a judgment
and restoring it yields a byte-identical report.
"""

from __future__ import annotations

import datetime as _dt
import itertools
import json
import sqlite3
import threading
import uuid
from collections import defaultdict
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel, Field

from .convexity import certify
from .errors import MatrixFormatError
from .io import parse_value
from .matrix import PCMatrix, inconsistency, triad_inconsistency
from .scales import Scale, builtin_scales, scale_by_name
from .solvers import SolveOptions, solve_all

DEFAULT_DB = "pcx-sessions.db"
MAX_ALTERNATIVES = 20


class SessionStore:
    """sqlite-backed key-value store of JSON session blobs."""

    def __init__(self, path: str | Path):
        self._conn = sqlite3.connect(str(path), check_same_thread=False)
        self._lock = threading.Lock()
        with self._lock:
            self._conn.execute("CREATE TABLE IF NOT EXISTS sessions (id TEXT PRIMARY KEY, data TEXT NOT NULL)")
            self._conn.commit()

    def get(self, sid: str) -> dict | None:
        with self._lock:
            row = self._conn.execute("SELECT data FROM sessions WHERE id = ?", (sid,)).fetchone()
        return json.loads(row[0]) if row else None

    def put(self, sid: str, data: dict) -> None:
        blob = json.dumps(data)
        with self._lock:
            self._conn.execute(
                "INSERT INTO sessions (id, data) VALUES (?, ?) ON CONFLICT(id) DO UPDATE SET data = excluded.data",
                (sid, blob),
            )
            self._conn.commit()

    def delete(self, sid: str) -> bool:
        with self._lock:
            cur = self._conn.execute("DELETE FROM sessions WHERE id = ?", (sid,))
            self._conn.commit()
        return cur.rowcount > 0

    def close(self) -> None:
        with self._lock:
            self._conn.close()


class CreateSessionRequest(BaseModel):
    alternatives: list[str] = Field(min_length=1)
    scale: str = "1-3"


class JudgmentRequest(BaseModel):
    value: float | str


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat()


def _scale_dict(s: Scale) -> dict:
    return {"name": s.name, "values": list(s.values), "admissible": list(s.admissible_values())}


def _pair_key(i: int, j: int) -> str:
    return f"{i},{j}"


def _assemble(session: dict) -> tuple[PCMatrix | None, dict[tuple[int, int], float]]:
    """Judged pairs as a dict, plus the full matrix when complete."""
    n = len(session["alternatives"])
    judged = {}
    for key, value in session["judgments"].items():
        i, j = (int(x) for x in key.split(","))
        judged[(i, j)] = float(value)
    if len(judged) < n * (n - 1) // 2:
        return None, judged
    upper = [judged[(i, j)] for i in range(n - 1) for j in range(i + 1, n)]
    return PCMatrix(n, np.array(upper)), judged


def _suggestions(n: int, judged: dict[tuple[int, int], float]) -> list[dict]:
    """Triads fully covered by judgments, worst first, zero-value ones omitted."""
    out = []
    for i, k, j in itertools.combinations(range(n), 3):
        pairs = ((i, k), (k, j), (i, j))
        if any(p not in judged for p in pairs):
            continue
        a_ik, a_kj, a_ij = (judged[p] for p in pairs)
        value = triad_inconsistency(a_ik, a_ij, a_kj)
        if value > 0.0:
            out.append(
                {"i": i, "k": k, "j": j, "a_ik": a_ik, "a_kj": a_kj, "a_ij": a_ij, "value": value}
            )
    out.sort(key=lambda t: (-t["value"], (t["i"], t["k"], t["j"])))
    return out


def build_report(session: dict) -> dict:
    """Deterministic report for the current judgment state."""
    n = len(session["alternatives"])
    matrix, judged = _assemble(session)
    report = {
        "session": {
            "id": session["id"],
            "alternatives": session["alternatives"],
            "scale": session["scale"],
            "judgments": [
                {"i": i, "j": j, "value": v} for (i, j), v in sorted(judged.items())
            ],
            "created": session["created"],
        },
        "pairs_total": n * (n - 1) // 2,
        "pairs_judged": len(judged),
        "complete": matrix is not None,
        "inconsistency": None,
        "certification": None,
        "weights": None,
        "suggestions": _suggestions(n, judged),
    }
    if matrix is not None:
        report["inconsistency"] = inconsistency(matrix).as_dict()
        report["certification"] = certify(matrix).as_dict()
        results = solve_all(matrix, SolveOptions(start_seed=0))
        report["weights"] = {m.value: r.as_dict() for m, r in results.items()}
    return report


def create_app(db_path: str | Path | None = None, ui_dir: str | Path | None = None) -> FastAPI:
    store = SessionStore(db_path or DEFAULT_DB)
    locks: dict[str, threading.Lock] = defaultdict(threading.Lock)
    locks_guard = threading.Lock()

    def session_lock(sid: str) -> threading.Lock:
        with locks_guard:
            return locks[sid]

    def load_session(sid: str) -> dict:
        session = store.get(sid)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {sid!r}")
        return session

    app = FastAPI(title="pcx elicitation service", version="0.1.0")
    app.state.store = store

    @app.get("/health", response_class=PlainTextResponse)
    def health() -> str:
        return "ok"

    @app.get("/scales")
    def scales() -> list[dict]:
        return [_scale_dict(s) for s in builtin_scales()]

    @app.post("/sessions", status_code=201)
    def create_session(req: CreateSessionRequest) -> dict:
        names = [a.strip() for a in req.alternatives]
        if any(not a for a in names):
            raise HTTPException(status_code=400, detail="alternative names must be non-empty")
        if len(set(names)) != len(names):
            raise HTTPException(status_code=400, detail="alternative names must be distinct")
        if not 2 <= len(names) <= MAX_ALTERNATIVES:
            raise HTTPException(
                status_code=400, detail=f"need between 2 and {MAX_ALTERNATIVES} alternatives, got {len(names)}"
            )
        try:
            scale = scale_by_name(req.scale)
        except Exception as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        now = _now()
        session = {
            "id": uuid.uuid4().hex,
            "alternatives": names,
            "scale": _scale_dict(scale),
            "judgments": {},
            "created": now,
            "updated": now,
        }
        store.put(session["id"], session)
        return build_report(session)

    @app.put("/sessions/{sid}/judgments/{i}/{j}")
    def set_judgment(sid: str, i: int, j: int, req: JudgmentRequest) -> dict:
        with session_lock(sid):
            session = load_session(sid)
            n = len(session["alternatives"])
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise HTTPException(status_code=400, detail=f"need distinct indices in [0, {n - 1}], got ({i}, {j})")
            raw = req.value
            if isinstance(raw, str):
                try:
                    raw = parse_value(raw)
                except MatrixFormatError as exc:
                    raise HTTPException(status_code=422, detail=str(exc)) from exc
            scale = scale_by_name(session["scale"]["name"])
            value = scale.canonical(float(raw))
            if value is None:
                raise HTTPException(
                    status_code=422,
                    detail=f"value {req.value!r} is not on scale {scale.name}; "
                    f"admissible values: {list(scale.admissible_values())}",
                )
            if i > j:
                i, j, value = j, i, 1.0 / value
            session["judgments"][_pair_key(i, j)] = value
            session["updated"] = _now()
            store.put(sid, session)
            return build_report(session)

    @app.get("/sessions/{sid}/report")
    def get_report(sid: str) -> dict:
        with session_lock(sid):
            return build_report(load_session(sid))

    @app.get("/sessions/{sid}")
    def get_session(sid: str) -> dict:
        return load_session(sid)

    @app.delete("/sessions/{sid}", status_code=204)
    def delete_session(sid: str) -> None:
        with session_lock(sid):
            if not store.delete(sid):
                raise HTTPException(status_code=404, detail=f"unknown session {sid!r}")

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
