"""The singular band move catalog for banded unlinks.

Each move is a validated local rewrite with an explicit site.  The list
mirrors the usual catalog for (singular) banded unlink diagrams:

  (1) local isotopy            (6) band/2-handle swim
  (2) cup / cap                (7) slides over dotted circles (two variants)
  (3) band slide               (8) sliding a vertex over a band
  (4) band swim                (9) passing a vertex past a band edge
  (5) band/2-handle slide     (10) swimming a band through a vertex

Moves (1)-(7) never touch vertices; (8)-(10) preserve the vertex count and
the multiset of vertex signs.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .codes import (
    Band,
    BandedUnlink,
    Builder,
    CoreEvent,
    DOTTED,
    DiagramError,
    FRAMED,
    SURFACE,
    SlotRef,
    writhe,
)
from .isotopy import _adjacent, apply_isotopy, reducing_isotopies
from .kirby import MoveError


@dataclass(frozen=True)
class BandMove:
    kind: str
    band: str | None = None
    on: str | None = None  # host component (cup) or disk (dottedslide)
    over: str | None = None  # band or framed component being slid over / through
    end: str = "from"
    at: str | None = None  # anchor slot (cup placement etc.)
    pos: int = 0  # core position for insert/remove rewrites
    sign: int = 1
    twists: int = 0
    core: tuple[CoreEvent, ...] = ()
    names: tuple[str, ...] = ()
    remove: bool = False  # inverse direction for insert/remove pairs
    flip: bool = False
    anchor_j: str | None = None
    vertex: str | None = None
    arm: str = "a"
    rewrite: str | None = None
    args: tuple = ()

    def label(self) -> str:
        bits = [f"band {self.kind}"]
        for f in ("band", "over", "on", "vertex"):
            v = getattr(self, f)
            if v:
                bits.append(f"{f}={v}")
        if self.rewrite:
            bits.append(self.rewrite)
        return " ".join(bits)


VERTEX_KINDS = {"vertexslide", "vertexpass", "vertexswim"}


def _crosses(b: BandedUnlink, start: str) -> set[str]:
    """Bands reachable from `start` along band-band crossing records."""
    seen = set()
    frontier = [start]
    while frontier:
        cur = frontier.pop()
        for ev in b.band(cur).core:
            if ev.kind == "bx" and ev.band not in seen:
                seen.add(ev.band)
                frontier.append(ev.band)
    return seen


def _guard_band_cycle(b: BandedUnlink, band: str, over: str):
    if band == over or band in _crosses(b, over):
        raise MoveError(
            f"crossing {band} over {over} would make a cyclic band pattern, "
            "which the resolver cannot order"
        )


def apply_band(b: BandedUnlink, m: BandMove) -> BandedUnlink:
    if m.kind in ("slide", "swim") and not m.remove:
        _guard_band_cycle(b, m.band, m.over)
    fn = {
        "isotopy": _isotopy,
        "cup": _cup,
        "cap": _cap,
        "slide": _slide,
        "swim": _swim,
        "handleslide": _handleslide,
        "handleswim": _handleswim,
        "dottedslide": _dottedslide,
        "vertexslide": _vertexslide,
        "vertexpass": _vertexpass,
        "vertexswim": _vertexswim,
    }.get(m.kind)
    if fn is None:
        raise MoveError(f"unknown band move {m.kind!r}")
    out = fn(b, m)
    return replace(out, resolutions_trivial=b.resolutions_trivial)


def _isotopy(b: BandedUnlink, m: BandMove) -> BandedUnlink:
    if m.rewrite == "core_transpose":
        return _core_transpose(b, m.band, m.pos)
    return apply_isotopy(b, m.rewrite, *m.args)


# -- (2) cup / cap -----------------------------------------------------------


def _cup(b: BandedUnlink, m: BandMove) -> BandedUnlink:
    host = m.on
    if b.code.component(host).kind != SURFACE:
        raise MoveError(f"cup target {host} is not a surface component")
    bld = Builder.from_diagram(b)
    u = m.names[0] if m.names else bld.fresh_id("U")
    bld.add_component(u, SURFACE)
    anchor = (
        bld.new_slot(host, after=m.at) if m.at is not None else bld.new_slot(host)
    )
    core = []
    for ev in m.core:
        if ev.kind == "x":
            t = bld.new_slot(ev.target[0], after=None if ev.target[1] == "end" else ev.target[1])
            core.append(replace(ev, target=t))
        else:
            core.append(ev)
    bid = m.names[1] if len(m.names) > 1 else bld.fresh_id("B")
    bld.add_band(anchor, bld.new_slot(u), m.twists, tuple(core), bid=bid)
    return bld.freeze_banded()


def _cap_site(b: BandedUnlink, bid: str) -> tuple[Band, str]:
    band = b.band(bid)
    for ref, other in ((band.end_to, band.end_from), (band.end_from, band.end_to)):
        u = ref[0]
        if u == other[0]:
            continue
        comp = b.code.component(u)
        if len(comp.events) == 1 and comp.events[0] == ref[1] and not band.core:
            # the circle carries nothing but this band's anchor
            pierced = any(p.disk == u for p in b.code.piercings) or any(
                ev.kind == "p" and ev.disk == u for bb in b.bands for ev in bb.core
            )
            if not pierced:
                return band, u
    raise MoveError(f"band {bid} is not a cap site")


def _cap(b: BandedUnlink, m: BandMove) -> BandedUnlink:
    band, u = _cap_site(b, m.band)
    bld = Builder.from_diagram(b)
    bld.delete_band_record(band.id)
    bld.delete_component(u, cascade=False)
    return bld.freeze_banded()


# -- core editing helpers ------------------------------------------------------


def _set_core(bld: Builder, bid: str, core) -> None:
    bld.bands[bid] = replace(bld.bands[bid], core=tuple(core))


def _core_transpose(b: BandedUnlink, bid: str, pos: int) -> BandedUnlink:
    band = b.band(bid)
    core = list(band.core)
    if not (0 <= pos < len(core) - 1):
        raise MoveError("core position out of range")
    e1, e2 = core[pos], core[pos + 1]
    if e1.kind == "x" and e2.kind == "x":
        raise MoveError("transposing two core crossings needs a triangle move")
    core[pos], core[pos + 1] = e2, e1
    bld = Builder.from_diagram(b)
    _set_core(bld, bid, core)
    return bld.freeze_banded()


def _insert_or_remove_pair(b: BandedUnlink, m: BandMove, pair_maker) -> BandedUnlink:
    band = b.band(m.band)
    bld = Builder.from_diagram(b)
    core = list(band.core)
    if m.remove:
        if not (0 <= m.pos < len(core) - 1):
            raise MoveError("core position out of range")
        e1, e2 = core[m.pos], core[m.pos + 1]
        if not pair_maker.matches(e1, e2):
            raise MoveError(f"core events at {m.pos} are not a {m.kind} pair")
        pair_maker.cleanup(bld, e1, e2)
        del core[m.pos : m.pos + 2]
    else:
        e1, e2 = pair_maker.build(bld)
        core[m.pos : m.pos] = [e1, e2]
    _set_core(bld, m.band, core)
    return bld.freeze_banded()


class _SwimPair:
    """Band passes through another band and straight back."""

    def __init__(self, other: str, sign: int, over: bool):
        self.other, self.sign, self.over = other, sign, over

    def build(self, bld):
        if self.other not in bld.bands:
            raise MoveError(f"no band {self.other}")
        return (
            CoreEvent("bx", self.sign, over=self.over, band=self.other, pos=0),
            CoreEvent("bx", -self.sign, over=self.over, band=self.other, pos=0),
        )

    def matches(self, e1, e2):
        return (
            e1.kind == e2.kind == "bx"
            and e1.band == e2.band == self.other
            and e1.sign + e2.sign == 0
            and e1.over == e2.over
        )

    def cleanup(self, bld, e1, e2):
        pass


class _HandleSwimPair:
    """Band dips under/over a framed circle and straight back."""

    def __init__(self, other: str, sign: int, over: bool):
        self.other, self.sign, self.over = other, sign, over

    def build(self, bld):
        if bld.kind.get(self.other) != FRAMED:
            raise MoveError(f"{self.other} is not a framed component")
        t1 = bld.new_slot(self.other)
        t2 = bld.new_slot(self.other, after=t1[1])
        return (
            CoreEvent("x", self.sign, over=self.over, target=t1),
            CoreEvent("x", -self.sign, over=self.over, target=t2),
        )

    def matches(self, e1, e2):
        return (
            e1.kind == e2.kind == "x"
            and e1.target[0] == e2.target[0] == self.other
            and e1.sign + e2.sign == 0
            and e1.over == e2.over
            and _adjacent_slots(e1.target, e2.target)
        )

    def cleanup(self, bld, e1, e2):
        bld.remove_slot(e1.target)
        bld.remove_slot(e2.target)


def _adjacent_slots(a: SlotRef, b: SlotRef) -> bool:
    # adjacency is re-checked by the caller's builder state; the core pair
    # check only needs the same component here
    return a[0] == b[0]


class _DiskPair:
    """Band dips through a spanning disk and straight back (dotted slide)."""

    def __init__(self, disk: str, sign: int):
        self.disk, self.sign = disk, sign

    def build(self, bld):
        if self.disk not in bld.kind or bld.kind[self.disk] == FRAMED:
            raise MoveError(f"{self.disk} has no spanning disk")
        return (
            CoreEvent("p", self.sign, disk=self.disk),
            CoreEvent("p", -self.sign, disk=self.disk),
        )

    def matches(self, e1, e2):
        return (
            e1.kind == e2.kind == "p"
            and e1.disk == e2.disk == self.disk
            and e1.sign + e2.sign == 0
        )

    def cleanup(self, bld, e1, e2):
        pass


def _swim(b, m):
    return _insert_or_remove_pair(b, m, _SwimPair(m.over, m.sign, not m.flip))


def _handleswim(b, m):
    return _insert_or_remove_pair(b, m, _HandleSwimPair(m.over, m.sign, not m.flip))


def _dottedslide(b, m):
    """Variant B: the band slides across the carved disk.  Variant A (a
    surface strand sliding across it) is the plain cancel_pp/insert_pp
    isotopy rewrite restricted to surface strands."""
    if m.band is not None:
        return _insert_or_remove_pair(b, m, _DiskPair(m.on, m.sign))
    if m.remove:
        return apply_isotopy(b, "cancel_pp", *m.args)
    return apply_isotopy(b, "insert_pp", m.on, m.args[0], m.sign)


# -- (3) band slide ---------------------------------------------------------------


def _band_end(band: Band, end: str) -> SlotRef:
    return band.end_from if end == "from" else band.end_to


def _slide(b: BandedUnlink, m: BandMove) -> BandedUnlink:
    band = b.band(m.band)
    other = b.band(m.over)
    if band.id == other.id:
        raise MoveError("a band cannot slide over itself")
    ref = _band_end(band, m.end)
    host = ref[0]
    events = list(b.code.component(host).events)
    neighbors = [
        o
        for o in (other.end_from, other.end_to)
        if o[0] == host and _adjacent(events, ref[1], o[1])
    ]
    if not neighbors:
        raise MoveError(
            f"band {band.id} end {m.end} is not adjacent to an end of {other.id}"
        )
    target = neighbors[0]
    bld = Builder.from_diagram(b)
    ev = bld.events[host]
    i, j = ev.index(ref[1]), ev.index(target[1])
    ev[i], ev[j] = ev[j], ev[i]
    core = list(band.core)
    new_ev = CoreEvent("bx", m.sign, over=not m.flip, band=other.id, pos=0)
    if m.remove:
        probe = 0 if m.end == "from" else len(core) - 1
        if not core or core[probe].kind != "bx" or core[probe].band != other.id:
            raise MoveError("no band crossing to remove at the sliding end")
        del core[probe]
    else:
        if m.end == "from":
            core.insert(0, new_ev)
        else:
            core.append(new_ev)
    _set_core(bld, band.id, core)
    return bld.freeze_banded()


# -- (5) band / 2-handle slide -------------------------------------------------------


def _handleslide(b: BandedUnlink, m: BandMove) -> BandedUnlink:
    band = b.band(m.band)
    k = b.code.component(m.over)
    if k.kind != FRAMED:
        raise MoveError(f"{m.over} is not a 2-handle")
    if writhe(b, m.over) != 0:
        raise MoveError(
            f"sliding over {m.over} needs a self-crossing-free circle here"
        )
    refs = {}
    for x in b.code.crossings:
        refs[x.over] = ("x", x.sign, True, x.under)
        refs[x.under] = ("x", x.sign, False, x.over)
    for p in b.code.piercings:
        refs[p.strand] = ("p", p.sign, None, p.disk)

    bld = Builder.from_diagram(b)
    detour: list[CoreEvent] = []
    ev_list = list(k.events)
    if m.anchor_j is not None:
        if m.anchor_j not in ev_list:
            raise MoveError(f"anchor {m.over}.{m.anchor_j} not found")
        cut = ev_list.index(m.anchor_j) + 1
        ev_list = ev_list[cut:] + ev_list[:cut]
    for s in ev_list:
        got = refs.get((m.over, s))
        if got is None:
            raise MoveError(f"slot {m.over}.{s} is claimed by band or vertex data")
        tag, sign, over, payload = got
        if tag == "x":
            t = bld.new_slot(payload[0], after=payload[1])
            detour.append(CoreEvent("x", sign, over=over, target=t))
        else:
            detour.append(CoreEvent("p", sign, disk=payload))
    if m.flip:
        detour = [replace(e, sign=-e.sign) for e in reversed(detour)]
    # framing clasps between the detour and the circle itself
    clasp_sign = 1 if k.framing > 0 else -1
    for _ in range(abs(k.framing)):
        t1 = bld.new_slot(m.over)
        t2 = bld.new_slot(m.over, after=t1[1])
        detour.append(CoreEvent("x", clasp_sign, over=True, target=t1))
        detour.append(CoreEvent("x", clasp_sign, over=False, target=t2))
    core = list(band.core)
    pos = m.pos if m.pos else (0 if m.end == "from" else len(core))
    core[pos:pos] = detour
    _set_core(bld, m.band, core)
    return bld.freeze_banded()


# -- (8)-(10) vertex moves ---------------------------------------------------------


def _vertexslide(b: BandedUnlink, m: BandMove) -> BandedUnlink:
    band = b.band(m.band)
    v = next((v for v in b.vertices if v.id == m.vertex), None)
    if v is None:
        raise MoveError(f"no vertex {m.vertex}")
    arm = v.a if m.arm == "a" else v.b
    other_arm = v.b if m.arm == "a" else v.a
    anchor = _band_end(band, m.end)
    if arm[0] != anchor[0] or not _adjacent(
        list(b.code.component(arm[0]).events), arm[1], anchor[1]
    ):
        raise MoveError("vertex arm is not adjacent to the band end")
    bld = Builder.from_diagram(b)
    ev = bld.events[arm[0]]
    i, j = ev.index(arm[1]), ev.index(anchor[1])
    ev[i], ev[j] = ev[j], ev[i]
    t = bld.new_slot(other_arm[0], after=other_arm[1])
    core = list(band.core)
    newev = CoreEvent("x", m.sign, over=not m.flip, target=t)
    if m.end == "from":
        core.insert(0, newev)
    else:
        core.append(newev)
    _set_core(bld, m.band, core)
    return bld.freeze_banded()


def _vertexpass(b: BandedUnlink, m: BandMove) -> BandedUnlink:
    """Transpose a vertex arm past an adjacent band-edge crossing."""
    v = next((v for v in b.vertices if v.id == m.vertex), None)
    if v is None:
        raise MoveError(f"no vertex {m.vertex}")
    arm = v.a if m.arm == "a" else v.b
    band = b.band(m.band)
    ev = list(b.code.component(arm[0]).events)
    core_slots = {e.target for e in band.core if e.kind == "x"}
    i = ev.index(arm[1])
    for j in ((i + 1) % len(ev), (i - 1) % len(ev)):
        if (arm[0], ev[j]) in core_slots:
            bld = Builder.from_diagram(b)
            evl = bld.events[arm[0]]
            evl[i], evl[j] = evl[j], evl[i]
            return bld.freeze_banded()
    raise MoveError("vertex arm is not adjacent to an edge of the band")


def _vertexswim(b: BandedUnlink, m: BandMove) -> BandedUnlink:
    """The band dips through the double point: one crossing with each strand."""
    v = next((v for v in b.vertices if v.id == m.vertex), None)
    if v is None:
        raise MoveError(f"no vertex {m.vertex}")
    band = b.band(m.band)
    bld = Builder.from_diagram(b)
    core = list(band.core)
    if m.remove:
        if not (0 <= m.pos < len(core) - 1):
            raise MoveError("core position out of range")
        e1, e2 = core[m.pos], core[m.pos + 1]
        near = {v.a[0], v.b[0]}
        if not (
            e1.kind == e2.kind == "x"
            and {e1.target[0], e2.target[0]} <= near
            and e1.sign + e2.sign == 0
        ):
            raise MoveError("core events are not a vertex swim pair")
        bld.remove_slot(e1.target)
        bld.remove_slot(e2.target)
        del core[m.pos : m.pos + 2]
    else:
        t1 = bld.new_slot(v.a[0], after=v.a[1])
        t2 = bld.new_slot(v.b[0], after=v.b[1])
        core[m.pos : m.pos] = [
            CoreEvent("x", m.sign, over=not m.flip, target=t1),
            CoreEvent("x", -m.sign, over=not m.flip, target=t2),
        ]
    _set_core(bld, m.band, core)
    return bld.freeze_banded()


# ---------------------------------------------------------------------------
# enumeration


def applicable_band_moves(b: BandedUnlink) -> list[BandMove]:
    """Bounded local scan for applicable sites of every move kind."""
    out: list[BandMove] = []
    for cid in b.surface_components:
        out.append(BandMove("cup", on=cid))
    for band in b.bands:
        try:
            _cap_site(b, band.id)
            out.append(BandMove("cap", band=band.id))
        except MoveError:
            pass
        # removable core pairs
        for pos in range(len(band.core) - 1):
            e1, e2 = band.core[pos], band.core[pos + 1]
            if e1.sign + e2.sign != 0:
                continue
            if e1.kind == e2.kind == "p" and e1.disk == e2.disk:
                out.append(
                    BandMove("dottedslide", band=band.id, on=e1.disk, pos=pos, remove=True)
                )
            elif e1.kind == e2.kind == "bx" and e1.band == e2.band and e1.over == e2.over:
                out.append(
                    BandMove("swim", band=band.id, over=e1.band, pos=pos, remove=True)
                )
            elif (
                e1.kind == e2.kind == "x"
                and e1.target[0] == e2.target[0]
                and e1.over == e2.over
                and b.code.component(e1.target[0]).kind == FRAMED
            ):
                out.append(
                    BandMove("handleswim", band=band.id, over=e1.target[0], pos=pos, remove=True)
                )
        # adjacent band ends: slides (skip cycle-creating ones)
        for other in b.bands:
            if other.id == band.id or band.id in _crosses(b, other.id):
                continue
            for end in ("from", "to"):
                ref = _band_end(band, end)
                evs = list(b.code.component(ref[0]).events)
                for o in (other.end_from, other.end_to):
                    if o[0] == ref[0] and _adjacent(evs, ref[1], o[1]):
                        out.append(
                            BandMove("slide", band=band.id, over=other.id, end=end)
                        )
                        break
        claimed_by_cores = {
            ev.target
            for bb in b.bands
            for ev in bb.core
            if ev.kind == "x"
        }
        for k in b.code.by_kind(FRAMED):
            if writhe(b, k.id) == 0 and not any(
                (k.id, s) in claimed_by_cores for s in k.events
            ):
                out.append(BandMove("handleslide", band=band.id, over=k.id))
    for rewrite, args in reducing_isotopies(b):
        out.append(BandMove("isotopy", rewrite=rewrite, args=args))
    for v in b.vertices:
        for band in b.bands:
            for end in ("from", "to"):
                anchor = _band_end(band, end)
                for armname, arm in (("a", v.a), ("b", v.b)):
                    if arm[0] == anchor[0] and _adjacent(
                        list(b.code.component(arm[0]).events), arm[1], anchor[1]
                    ):
                        out.append(
                            BandMove(
                                "vertexslide",
                                band=band.id,
                                vertex=v.id,
                                arm=armname,
                                end=end,
                            )
                        )
    return out
