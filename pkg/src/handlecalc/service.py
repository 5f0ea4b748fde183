"""Local HTTP facade: sessions over diagrams for the browser UI and tests.

Sessions are in-memory; every state handed out is the canonical
serialization plus an abstract render graph.  Applying a move takes the
same directive line the script grammar uses, so the UI's move palette is
just a list of runnable script lines.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .bandmoves import BandMove, applicable_band_moves
from .codes import BandedUnlink, DiagramCode, DiagramError
from .ddc import parse_ddc
from .engine import (
    apply_directive,
    canonical_recognize,
    canonical_state,
    evaluate_invariant,
    parse_directive,
    state_text,
)
from .heegaard import HeegaardDiagram
from .hgd import parse_hgd
from .isotopy import reducing_isotopies
from .kirby import annihilable_pairs
from .render import render_graph


def parse_state(text: str):
    for raw in text.splitlines():
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if body.startswith("heegaard") or body in ("base:", "alpha:", "beta:"):
            return parse_hgd(text)
        break
    return parse_ddc(text)


def band_move_line(m: BandMove) -> str:
    parts = [f"band {m.kind}"]
    if m.rewrite:
        parts.append(m.rewrite)
        parts.extend(
            f"{a[0]}.{a[1]}" if isinstance(a, tuple) else str(a) for a in m.args
        )
        return " ".join(parts)
    if m.band:
        parts.append(f"b={m.band}")
    if m.over:
        parts.append(f"over={m.over}")
    if m.on:
        parts.append(f"on={m.on}")
    if m.vertex:
        parts.append(f"v={m.vertex}")
    if m.arm != "a":
        parts.append(f"arm={m.arm}")
    if m.end != "from":
        parts.append(f"end={m.end}")
    if m.pos:
        parts.append(f"pos={m.pos}")
    if m.remove:
        parts.append("remove")
    return " ".join(parts)


def list_moves(state) -> list[dict]:
    moves: list[tuple[str, str]] = []
    code = (
        state.code if isinstance(state, (BandedUnlink, HeegaardDiagram)) else state
    )
    for mv in annihilable_pairs(code):
        sub = "pair12" if mv.kind == "pair12_annihilate" else "pair23"
        moves.append(
            (f"kirby {sub} annihilate site={mv.site}", f"cancel {sub} pair at {mv.site}")
        )
    for c in code.by_kind("framed"):
        if c.framing in (1, -1) and not c.events:
            moves.append((f"kirby blowdown site={c.id}", f"blow down {c.id}"))
    banded = state.as_banded() if isinstance(state, HeegaardDiagram) else state
    if isinstance(banded, (BandedUnlink,)):
        for rewrite, args in reducing_isotopies(banded):
            rendered = " ".join(
                f"{a[0]}.{a[1]}" if isinstance(a, tuple) else str(a) for a in args
            )
            moves.append(
                (f"kirby isotopy {rewrite} {rendered}", f"isotopy {rewrite}")
            )
    else:
        for rewrite, args in reducing_isotopies(banded):
            rendered = " ".join(
                f"{a[0]}.{a[1]}" if isinstance(a, tuple) else str(a) for a in args
            )
            moves.append(
                (f"kirby isotopy {rewrite} {rendered}", f"isotopy {rewrite}")
            )
    if isinstance(state, BandedUnlink) and state.surface_components:
        for m in applicable_band_moves(state):
            if m.kind in ("cup",):
                continue  # infinite family; the palette lists only reducers
            moves.append((band_move_line(m), m.label()))
    if isinstance(state, HeegaardDiagram):
        for side, stab in (("alpha", "destab1"), ("beta", "destab3")):
            for cid in sorted(state.side_circles(side)):
                comp = state.code.component(cid)
                if comp.events:
                    continue
                if any(cid in (b.end_from[0], b.end_to[0]) for b in state.bands):
                    continue
                if any(p.disk == cid for p in state.code.piercings):
                    continue
                moves.append(
                    (f"heegaard {stab} site={cid}", f"{stab} trivial sphere {cid}")
                )
    out = []
    seen = set()
    for line, label in moves:
        if line in seen:
            continue
        seen.add(line)
        out.append({"line": line, "label": label})
    return out


@dataclass
class Session:
    id: str
    state: object
    undo_stack: list[str] = field(default_factory=list)
    watch: tuple[str, ...] = ()
    kind: str = "threehandlebody"
    lock: threading.Lock = field(default_factory=threading.Lock)


class CreateBody(BaseModel):
    text: str
    watch: list[str] | None = None
    kind: str = "threehandlebody"


class MoveBody(BaseModel):
    line: str


def _default_watch(state) -> tuple[str, ...]:
    if isinstance(state, HeegaardDiagram):
        return ("h1", "h2", "pi1ab")
    return ("h1", "pi1ab")


def _component_summary(state) -> dict:
    code = state.code if isinstance(state, (BandedUnlink, HeegaardDiagram)) else state
    return {
        "components": len(code.components),
        "crossings": len(code.crossings),
        "piercings": len(code.piercings),
        "bands": len(state.bands)
        if isinstance(state, (BandedUnlink, HeegaardDiagram))
        else 0,
    }


def build_app(ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="handlecalc service")
    sessions: dict[str, Session] = {}
    counter = iter(range(1, 10**9))

    def get_session(sid: str) -> Session:
        s = sessions.get(sid)
        if s is None:
            raise HTTPException(status_code=404, detail=f"unknown session {sid}")
        return s

    def state_payload(s: Session, delta=None) -> dict:
        out = {
            "id": s.id,
            "text": state_text(s.state),
            "graph": render_graph(s.state),
            "recognize": canonical_recognize(s.state),
            "summary": _component_summary(s.state),
            "undo_depth": len(s.undo_stack),
        }
        if delta is not None:
            out["delta"] = delta
        return out

    @app.post("/session")
    def create_session(body: CreateBody):
        try:
            state = canonical_state(parse_state(body.text))
        except (DiagramError, ValueError) as e:
            raise HTTPException(status_code=400, detail=str(e)) from None
        sid = f"s{next(counter)}"
        s = Session(
            id=sid,
            state=state,
            watch=tuple(body.watch) if body.watch else _default_watch(state),
            kind=body.kind,
        )
        sessions[sid] = s
        return state_payload(s)

    @app.get("/session/{sid}")
    def get_state(sid: str):
        return state_payload(get_session(sid))

    @app.get("/session/{sid}/moves")
    def moves(sid: str):
        s = get_session(sid)
        with s.lock:
            return {"moves": list_moves(s.state)}

    @app.post("/session/{sid}/move")
    def apply_move(sid: str, body: MoveBody):
        s = get_session(sid)
        with s.lock:
            try:
                directive = parse_directive(body.line)
            except (DiagramError, ValueError) as e:
                raise HTTPException(status_code=400, detail=str(e)) from None
            before = state_text(s.state)
            before_ids = _id_set(s.state)
            try:
                new_state = apply_directive(s.state, directive)
            except DiagramError as e:
                raise HTTPException(status_code=422, detail=str(e)) from None
            s.undo_stack.append(before)
            s.state = new_state
            after_ids = _id_set(new_state)
            delta = {
                "added": sorted(after_ids - before_ids),
                "removed": sorted(before_ids - after_ids),
            }
            return state_payload(s, delta)

    @app.post("/session/{sid}/undo")
    def undo(sid: str):
        s = get_session(sid)
        with s.lock:
            if not s.undo_stack:
                raise HTTPException(status_code=422, detail="nothing to undo")
            s.state = canonical_state(parse_state(s.undo_stack.pop()))
            return state_payload(s)

    @app.get("/session/{sid}/invariants")
    def invariants(sid: str):
        s = get_session(sid)
        with s.lock:
            values = {}
            for key in s.watch:
                try:
                    values[key] = evaluate_invariant(s.state, key, s.kind)
                except DiagramError as e:
                    values[key] = f"<{e}>"
            return {"watch": list(s.watch), "values": values}

    if ui_dir:
        import os

        from fastapi.staticfiles import StaticFiles

        if os.path.isdir(ui_dir):
            app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    return app


def _id_set(state) -> set[str]:
    code = state.code if isinstance(state, (BandedUnlink, HeegaardDiagram)) else state
    ids = {c.id for c in code.components}
    ids |= {x.id for x in code.crossings}
    ids |= {p.id for p in code.piercings}
    if isinstance(state, (BandedUnlink, HeegaardDiagram)):
        ids |= {b.id for b in state.bands}
        ids |= {v.id for v in state.vertices}
    return ids
