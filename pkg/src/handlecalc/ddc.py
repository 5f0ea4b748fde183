"""DDC text format: parsing and canonical serialization.

The format is line oriented, UTF-8, ``#`` comments.  Canonical form sorts
components, crossings, piercings, bands and vertices by id and renumbers
event slots in traversal order, choosing the rotation of each cyclic event
list that minimizes the slot signature sequence.  ``parse(serialize(x))``
is structurally equal to ``x`` up to that normalization, and
``serialize(parse(text))`` is byte-identical to the canonical form of
``text``.
"""

from __future__ import annotations

import re
from dataclasses import replace

from .codes import (
    Band,
    BandedUnlink,
    Builder,
    Component,
    CoreEvent,
    Crossing,
    DiagramCode,
    DOTTED,
    FRAMED,
    Piercing,
    SURFACE,
    SlotRef,
    Vertex,
    slot_events,
)


class DdcSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}:{column}: {message}")
        self.line = line
        self.column = column
        self.message = message


_ID = re.compile(r"[A-Za-z0-9_'-]+$")


def _sign(tok: str, line: int) -> int:
    if tok in ("+", "+1"):
        return 1
    if tok in ("-", "-1"):
        return -1
    raise DdcSyntaxError(f"bad sign {tok!r}", line)


def _slotref(tok: str, line: int) -> SlotRef:
    if "." not in tok:
        raise DdcSyntaxError(f"expected <component>.<slot>, got {tok!r}", line)
    c, s = tok.split(".", 1)
    return (c, s)


def _kv(tok: str, key: str, line: int) -> str:
    if not tok.startswith(key + "="):
        raise DdcSyntaxError(f"expected {key}=..., got {tok!r}", line)
    return tok[len(key) + 1 :]


def parse_core(tokens: list[str], line: int) -> tuple[CoreEvent, ...]:
    out = []
    for tok in tokens:
        parts = tok.split(":")
        if parts[0] == "x" and len(parts) == 4:
            over = parts[2] == "over"
            if parts[2] not in ("over", "under"):
                raise DdcSyntaxError(f"bad core record {tok!r}", line)
            out.append(
                CoreEvent("x", _sign(parts[1], line), over=over, target=_slotref(parts[3], line))
            )
        elif parts[0] == "p" and len(parts) == 3:
            out.append(CoreEvent("p", _sign(parts[1], line), disk=parts[2]))
        elif parts[0] == "bx" and len(parts) == 4:
            if "@" in parts[3]:
                band, pos = parts[3].split("@", 1)
                try:
                    posn = int(pos)
                except ValueError:
                    raise DdcSyntaxError(f"bad core record {tok!r}", line) from None
            else:
                band, posn = parts[3], 0
            out.append(
                CoreEvent(
                    "bx",
                    _sign(parts[1], line),
                    over=parts[2] == "over",
                    band=band,
                    pos=posn,
                )
            )
        else:
            raise DdcSyntaxError(f"bad core record {tok!r}", line)
    return tuple(out)


def parse_ddc(text: str) -> DiagramCode | BandedUnlink:
    """Parse DDC source into a diagram; see the module docstring for grammar."""
    name = "diagram"
    r3 = None
    comps: list[tuple[int, Component]] = []
    crossings: list[tuple[int, Crossing]] = []
    piercings: list[tuple[int, Piercing]] = []
    bands: list[tuple[int, Band]] = []
    vertices: list[tuple[int, Vertex]] = []
    flag = None
    banded = False

    for ln, raw in enumerate(text.splitlines(), start=1):
        lineno = ln
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        toks = body.split()
        kw = toks[0]
        if kw == "diagram":
            if len(toks) != 2:
                raise DdcSyntaxError("diagram line wants a single name", lineno)
            name = toks[1]
        elif kw == "r3":
            try:
                r3 = int(toks[1])
            except (IndexError, ValueError):
                raise DdcSyntaxError("r3 wants an integer", lineno) from None
        elif kw == "component":
            if len(toks) < 4 or toks[3] != ":":
                raise DdcSyntaxError(
                    "component line is: component <id> <kind> : <slots>", lineno
                )
            cid, kindtok = toks[1], toks[2]
            if not _ID.match(cid):
                raise DdcSyntaxError(f"bad id {cid!r}", lineno)
            if kindtok == DOTTED:
                kind, framing = DOTTED, None
            elif kindtok == SURFACE:
                kind, framing = SURFACE, None
                banded = True
            elif kindtok.startswith("framed:"):
                kind = FRAMED
                try:
                    framing = int(kindtok.split(":", 1)[1])
                except ValueError:
                    raise DdcSyntaxError(f"bad framing in {kindtok!r}", lineno) from None
            else:
                raise DdcSyntaxError(f"unknown kind {kindtok!r}", lineno)
            comps.append((lineno, Component(cid, kind, framing, tuple(toks[4:]))))
        elif kw == "crossing":
            if len(toks) != 5:
                raise DdcSyntaxError(
                    "crossing line is: crossing <id> <sign> over=c.s under=c.s", lineno
                )
            crossings.append(
                (
                    lineno,
                    Crossing(
                        toks[1],
                        _sign(toks[2], lineno),
                        _slotref(_kv(toks[3], "over", lineno), lineno),
                        _slotref(_kv(toks[4], "under", lineno), lineno),
                    ),
                )
            )
        elif kw == "piercing":
            if len(toks) != 5:
                raise DdcSyntaxError(
                    "piercing line is: piercing <id> disk=c strand=c.s sign=<+|->",
                    lineno,
                )
            piercings.append(
                (
                    lineno,
                    Piercing(
                        toks[1],
                        _kv(toks[2], "disk", lineno),
                        _slotref(_kv(toks[3], "strand", lineno), lineno),
                        _sign(_kv(toks[4], "sign", lineno), lineno),
                    ),
                )
            )
        elif kw == "band":
            banded = True
            if len(toks) < 6 or not toks[5].startswith("core=("):
                raise DdcSyntaxError(
                    "band line is: band <id> from=c.s to=c.s twists=<int> core=( ... )",
                    lineno,
                )
            if toks[-1] != ")":
                raise DdcSyntaxError("unterminated core=( ... )", lineno)
            core_toks = toks[6:-1] if toks[5] == "core=(" else None
            if core_toks is None:
                raise DdcSyntaxError("core=( wants a space after the paren", lineno)
            try:
                twists = int(_kv(toks[4], "twists", lineno))
            except ValueError:
                raise DdcSyntaxError("bad twists", lineno) from None
            bands.append(
                (
                    lineno,
                    Band(
                        toks[1],
                        _slotref(_kv(toks[2], "from", lineno), lineno),
                        _slotref(_kv(toks[3], "to", lineno), lineno),
                        twists,
                        parse_core(core_toks, lineno),
                    ),
                )
            )
        elif kw == "vertex":
            banded = True
            if len(toks) != 6:
                raise DdcSyntaxError(
                    "vertex line is: vertex <id> a=c.s b=c.s sign=<+|-> marking=<ac|bd>",
                    lineno,
                )
            marking = _kv(toks[5], "marking", lineno)
            if marking not in ("ac", "bd"):
                raise DdcSyntaxError(f"bad marking {marking!r}", lineno)
            vertices.append(
                (
                    lineno,
                    Vertex(
                        toks[1],
                        _slotref(_kv(toks[2], "a", lineno), lineno),
                        _slotref(_kv(toks[3], "b", lineno), lineno),
                        _sign(_kv(toks[4], "sign", lineno), lineno),
                        marking,
                    ),
                )
            )
        elif kw == "flag":
            banded = True
            val = _kv(toks[1], "resolutions_trivial", lineno)
            if val not in ("true", "false"):
                raise DdcSyntaxError(f"bad flag value {val!r}", lineno)
            flag = val == "true"
        else:
            raise DdcSyntaxError(f"unknown keyword {kw!r}", lineno)

    # reference resolution
    comp_slots: dict[str, set[str]] = {}
    for ln, c in comps:
        if c.id in comp_slots:
            raise DdcSyntaxError(f"duplicate id {c.id}", ln)
        comp_slots[c.id] = set(c.events)
    ids = set(comp_slots)

    def check_ref(ref: SlotRef, ln: int):
        if ref[0] not in comp_slots or ref[1] not in comp_slots[ref[0]]:
            raise DdcSyntaxError(
                f"dangling slot reference {ref[0]}.{ref[1]}", ln
            )

    for group in (crossings, piercings, bands, vertices):
        for ln, item in group:
            if item.id in ids:
                raise DdcSyntaxError(f"duplicate id {item.id}", ln)
            ids.add(item.id)
    for ln, x in crossings:
        check_ref(x.over, ln)
        check_ref(x.under, ln)
    for ln, p in piercings:
        check_ref(p.strand, ln)
        if p.disk not in comp_slots:
            raise DdcSyntaxError(f"piercing names undefined component {p.disk}", ln)
    band_ids = {b.id for _, b in bands}
    for ln, b in bands:
        check_ref(b.end_from, ln)
        check_ref(b.end_to, ln)
        for ev in b.core:
            if ev.kind == "x":
                check_ref(ev.target, ln)
            elif ev.kind == "p" and ev.disk not in comp_slots:
                raise DdcSyntaxError(f"core pierces undefined component {ev.disk}", ln)
            elif ev.kind == "bx" and ev.band not in band_ids:
                raise DdcSyntaxError(f"core crosses undefined band {ev.band}", ln)
    for ln, v in vertices:
        check_ref(v.a, ln)
        check_ref(v.b, ln)

    code = DiagramCode(
        name=name,
        components=tuple(c for _, c in comps),
        crossings=tuple(x for _, x in crossings),
        piercings=tuple(p for _, p in piercings),
        r3=r3,
    )
    if banded or bands or vertices or flag is not None:
        return BandedUnlink(
            code=code,
            bands=tuple(b for _, b in bands),
            vertices=tuple(v for _, v in vertices),
            resolutions_trivial=True if flag is None else flag,
        )
    return code


# ---------------------------------------------------------------------------
# canonical serialization


def _canonical_slot_map(d: DiagramCode | BandedUnlink) -> dict[SlotRef, SlotRef]:
    """Choose a canonical rotation per component and renumber slots 0..n-1."""
    refs = slot_events(d)
    code = d.code if isinstance(d, BandedUnlink) else d

    def signature(ref: SlotRef):
        got = refs.get(ref)
        if got is None:
            return ("zz-unreferenced", ref[1])
        tag, payload = got
        if tag in ("xo", "xu"):
            x: Crossing = payload
            other = x.under if tag == "xo" else x.over
            return (tag, -x.sign, other[0], x.id)
        if tag == "p":
            return (tag, -payload.sign, payload.disk, payload.id)
        if tag in ("bf", "bt"):
            return (tag, payload.id)
        if tag == "cx":
            band, i, ev = payload
            return (tag, band.id, i)
        if tag in ("va", "vb"):
            return (tag, -payload.sign, payload.marking, payload.id)
        raise AssertionError(tag)

    mapping: dict[SlotRef, SlotRef] = {}
    for c in code.components:
        n = len(c.events)
        if n == 0:
            continue
        best = None
        for r in range(n):
            key = tuple(signature((c.id, c.events[(r + k) % n])) for k in range(n))
            if best is None or key < best[0]:
                best = (key, r)
        r = best[1]
        for k in range(n):
            mapping[(c.id, c.events[(r + k) % n])] = (c.id, str(k))
    return mapping


def canonicalize(d: DiagramCode | BandedUnlink):
    """Same diagram with sorted parts and renumbered slots."""
    banded = isinstance(d, BandedUnlink)
    mapping = _canonical_slot_map(d)
    code = d.code if banded else d

    def m(ref: SlotRef) -> SlotRef:
        return mapping.get(ref, ref)

    comps = tuple(
        Component(
            c.id,
            c.kind,
            c.framing,
            tuple(str(i) for i in range(len(c.events))),
        )
        for c in sorted(code.components, key=lambda c: c.id)
    )
    crossings = tuple(
        replace(x, over=m(x.over), under=m(x.under))
        for x in sorted(code.crossings, key=lambda x: x.id)
    )
    piercings = tuple(
        replace(p, strand=m(p.strand))
        for p in sorted(code.piercings, key=lambda p: p.id)
    )
    new_code = DiagramCode(code.name, comps, crossings, piercings, code.r3)
    if not banded:
        return new_code
    bands = tuple(
        Band(
            b.id,
            m(b.end_from),
            m(b.end_to),
            b.half_twists,
            tuple(
                replace(ev, target=m(ev.target)) if ev.kind == "x" else ev
                for ev in b.core
            ),
        )
        for b in sorted(d.bands, key=lambda b: b.id)
    )
    vertices = tuple(
        replace(v, a=m(v.a), b=m(v.b)) for v in sorted(d.vertices, key=lambda v: v.id)
    )
    return BandedUnlink(new_code, bands, vertices, d.resolutions_trivial)


def _fmt_sign(s: int) -> str:
    return "+" if s > 0 else "-"


def _fmt_core(core) -> str:
    toks = []
    for ev in core:
        if ev.kind == "x":
            ou = "over" if ev.over else "under"
            toks.append(f"x:{_fmt_sign(ev.sign)}:{ou}:{ev.target[0]}.{ev.target[1]}")
        elif ev.kind == "p":
            toks.append(f"p:{_fmt_sign(ev.sign)}:{ev.disk}")
        else:
            ou = "over" if ev.over else "under"
            toks.append(f"bx:{_fmt_sign(ev.sign)}:{ou}:{ev.band}@{ev.pos}")
    inner = " ".join(toks)
    return f"core=( {inner} )" if inner else "core=( )"


def serialize(d: DiagramCode | BandedUnlink) -> str:
    """Canonical text form."""
    c = canonicalize(d)
    banded = isinstance(c, BandedUnlink)
    code = c.code if banded else c
    lines = [f"diagram {code.name}"]
    if code.r3 is not None:
        lines.append(f"r3 {code.r3}")
    for comp in code.components:
        if comp.kind == FRAMED:
            kind = f"framed:{comp.framing}"
        else:
            kind = comp.kind
        slots = " ".join(comp.events)
        lines.append(f"component {comp.id} {kind} : {slots}".rstrip())
    for x in code.crossings:
        lines.append(
            f"crossing {x.id} {_fmt_sign(x.sign)} "
            f"over={x.over[0]}.{x.over[1]} under={x.under[0]}.{x.under[1]}"
        )
    for p in code.piercings:
        lines.append(
            f"piercing {p.id} disk={p.disk} "
            f"strand={p.strand[0]}.{p.strand[1]} sign={_fmt_sign(p.sign)}"
        )
    if banded:
        for b in c.bands:
            lines.append(
                f"band {b.id} from={b.end_from[0]}.{b.end_from[1]} "
                f"to={b.end_to[0]}.{b.end_to[1]} twists={b.half_twists} {_fmt_core(b.core)}"
            )
        for v in c.vertices:
            lines.append(
                f"vertex {v.id} a={v.a[0]}.{v.a[1]} b={v.b[0]}.{v.b[1]} "
                f"sign={_fmt_sign(v.sign)} marking={v.marking}"
            )
        flag = "true" if c.resolutions_trivial else "false"
        lines.append(f"flag resolutions_trivial={flag}")
    return "\n".join(lines) + "\n"


def canonically_equal(a, b) -> bool:
    return serialize(a) == serialize(b)


def builder_from_text(text: str) -> Builder:
    return Builder.from_diagram(parse_ddc(text))
