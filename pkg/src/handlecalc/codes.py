"""Decorated diagram codes.

A diagram is a purely combinatorial object: components carry a *cyclic* list
of event slots, and every slot is claimed by exactly one event (a crossing
endpoint, a piercing, a band attachment, a band-core crossing or a vertex
arm).  The code is trusted to be realizable in the plane; no planarity
checking is attempted.  All moves and compilers in the other modules are
local rewrites of these lists.

Conventions baked in here:

* A strand passing through the spanning disk of a dotted (or surface-unlink)
  circle is recorded as one signed piercing event on the strand, never as
  crossings with the circle itself.
* Bands reconnect orientation-coherently with respect to the stored cyclic
  orientations when ``half_twists`` is even; odd twist counts give the
  orientation-reversing reconnection.
* Push-offs are blackboard parallels plus correction clasps, so the
  postcondition ``lk(component, copy) == framing`` holds exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

DOTTED = "dotted"
FRAMED = "framed"
SURFACE = "surface"

SlotRef = tuple[str, str]


class DiagramError(ValueError):
    """Semantic error in a diagram or an operation on one."""


@dataclass(frozen=True)
class Component:
    id: str
    kind: str
    framing: int | None
    events: tuple[str, ...]


@dataclass(frozen=True)
class Crossing:
    id: str
    sign: int
    over: SlotRef
    under: SlotRef


@dataclass(frozen=True)
class Piercing:
    id: str
    disk: str
    strand: SlotRef
    sign: int


@dataclass(frozen=True)
class CoreEvent:
    """One event made by a band's core arc.

    kind "x": crossing with a strand (target slot, over = core passes over),
    kind "p": passage through the spanning disk of component ``disk``,
    kind "bx": crossing with another band (expanded on resolution).
    """

    kind: str
    sign: int
    over: bool | None = None
    target: SlotRef | None = None
    disk: str | None = None
    band: str | None = None
    pos: int = 0


@dataclass(frozen=True)
class Band:
    id: str
    end_from: SlotRef
    end_to: SlotRef
    half_twists: int
    core: tuple[CoreEvent, ...]


@dataclass(frozen=True)
class Vertex:
    id: str
    a: SlotRef
    b: SlotRef
    sign: int
    marking: str  # which diagonal is joined on the positive side: "ac" | "bd"


@dataclass(frozen=True)
class DiagramCode:
    name: str
    components: tuple[Component, ...]
    crossings: tuple[Crossing, ...]
    piercings: tuple[Piercing, ...]
    r3: int | None = None

    def component(self, cid: str) -> Component:
        for c in self.components:
            if c.id == cid:
                return c
        raise DiagramError(f"no component {cid!r}")

    def has_component(self, cid: str) -> bool:
        return any(c.id == cid for c in self.components)

    def by_kind(self, kind: str) -> list[Component]:
        return [c for c in self.components if c.kind == kind]


@dataclass(frozen=True)
class BandedUnlink:
    """A surface-link presentation: unlink components plus bands over a code.

    The flag ``resolutions_trivial`` records (without verification) that the
    negative resolution and the fully banded positive resolution are unlinks.
    """

    code: DiagramCode
    bands: tuple[Band, ...]
    vertices: tuple[Vertex, ...]
    resolutions_trivial: bool = True

    @property
    def base(self) -> DiagramCode:
        comps = tuple(c for c in self.code.components if c.kind != SURFACE)
        return replace(self.code, components=comps)

    @property
    def surface_components(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.code.components if c.kind == SURFACE)

    def band(self, bid: str) -> Band:
        for b in self.bands:
            if b.id == bid:
                return b
        raise DiagramError(f"no band {bid!r}")


def as_banded(d: DiagramCode | BandedUnlink) -> BandedUnlink:
    if isinstance(d, BandedUnlink):
        return d
    return BandedUnlink(code=d, bands=(), vertices=())


# ---------------------------------------------------------------------------
# slot reference table


def slot_events(d: DiagramCode | BandedUnlink) -> dict[SlotRef, tuple]:
    """Map of slot ref -> (tag, payload) describing the claiming event.

    Raises nothing; unknown/duplicate slots are resolved by validate().
    Tags: xo / xu (crossing over/under), p (piercing strand), bf / bt (band
    ends), cx (band-core crossing target), va / vb (vertex arms).
    """
    refs: dict[SlotRef, tuple] = {}

    def put(ref, tag, payload):
        refs[ref] = (tag, payload)

    code = d.code if isinstance(d, BandedUnlink) else d
    for x in code.crossings:
        put(x.over, "xo", x)
        put(x.under, "xu", x)
    for p in code.piercings:
        put(p.strand, "p", p)
    if isinstance(d, BandedUnlink):
        for b in d.bands:
            put(b.end_from, "bf", b)
            put(b.end_to, "bt", b)
            for i, ev in enumerate(b.core):
                if ev.kind == "x":
                    put(ev.target, "cx", (b, i, ev))
        for v in d.vertices:
            put(v.a, "va", v)
            put(v.b, "vb", v)
    return refs


def validate(d: DiagramCode | BandedUnlink) -> list[str]:
    """Check every structural invariant; return human-readable violations."""
    out: list[str] = []
    code = d.code if isinstance(d, BandedUnlink) else d
    seen_ids: set[str] = set()
    slots: set[SlotRef] = set()
    for c in code.components:
        if c.id in seen_ids:
            out.append(f"duplicate component id {c.id}")
        seen_ids.add(c.id)
        if c.kind == FRAMED and c.framing is None:
            out.append(f"framed component {c.id} missing framing")
        if c.kind in (DOTTED, SURFACE) and c.framing is not None:
            out.append(f"{c.kind} component {c.id} carries a framing")
        local = set()
        for s in c.events:
            if s in local:
                out.append(f"duplicate slot {c.id}.{s}")
            local.add(s)
            slots.add((c.id, s))

    claimed: dict[SlotRef, str] = {}

    def claim(ref: SlotRef, what: str):
        if ref not in slots:
            out.append(f"dangling slot reference {ref[0]}.{ref[1]} in {what}")
            return
        if ref in claimed:
            out.append(
                f"slot {ref[0]}.{ref[1]} referenced twice ({claimed[ref]} and {what})"
            )
        claimed[ref] = what

    def kind_of(cid: str) -> str | None:
        for c in code.components:
            if c.id == cid:
                return c.kind
        return None

    for x in code.crossings:
        if x.sign not in (1, -1):
            out.append(f"crossing {x.id} has sign {x.sign}")
        if x.over == x.under:
            out.append(f"crossing {x.id} references one slot twice")
        claim(x.over, f"crossing {x.id}")
        claim(x.under, f"crossing {x.id}")
    for p in code.piercings:
        k = kind_of(p.disk)
        if k is None:
            out.append(f"piercing {p.id} names missing disk {p.disk}")
        elif k == FRAMED:
            out.append(f"piercing {p.id} names framed component {p.disk} as disk")
        sk = kind_of(p.strand[0])
        if sk == DOTTED:
            out.append(f"dotted self-piercing: piercing {p.id} strand on {p.strand[0]}")
        claim(p.strand, f"piercing {p.id}")
        if p.sign not in (1, -1):
            out.append(f"piercing {p.id} has sign {p.sign}")

    if isinstance(d, BandedUnlink):
        band_ids = set()
        for b in d.bands:
            if b.id in band_ids:
                out.append(f"duplicate band id {b.id}")
            band_ids.add(b.id)
            for ref, nm in ((b.end_from, "from"), (b.end_to, "to")):
                if kind_of(ref[0]) not in (SURFACE,):
                    out.append(f"band off surface link: band {b.id} {nm}={ref[0]}")
                claim(ref, f"band {b.id} {nm}")
            for i, ev in enumerate(b.core):
                if ev.kind == "x":
                    claim(ev.target, f"band {b.id} core[{i}]")
                elif ev.kind == "p":
                    k = kind_of(ev.disk)
                    if k is None:
                        out.append(f"band {b.id} core[{i}] pierces missing disk {ev.disk}")
                    elif k == FRAMED:
                        out.append(
                            f"band {b.id} core[{i}] pierces framed component {ev.disk}"
                        )
                elif ev.kind == "bx":
                    if ev.band not in band_ids and not any(
                        bb.id == ev.band for bb in d.bands
                    ):
                        out.append(f"band {b.id} core[{i}] crosses missing band {ev.band}")
                else:
                    out.append(f"band {b.id} core[{i}] has unknown kind {ev.kind}")
        for v in d.vertices:
            if v.a == v.b:
                out.append(f"vertex {v.id} joins a slot to itself")
            for ref, nm in ((v.a, "a"), (v.b, "b")):
                if kind_of(ref[0]) != SURFACE:
                    out.append(f"vertex {v.id} arm {nm} not on a surface component")
                claim(ref, f"vertex {v.id} arm {nm}")
            if v.marking not in ("ac", "bd"):
                out.append(f"vertex {v.id} has marking {v.marking}")
            if v.sign not in (1, -1):
                out.append(f"vertex {v.id} has sign {v.sign}")

    for ref in sorted(slots - set(claimed)):
        out.append(f"unreferenced slot {ref[0]}.{ref[1]}")
    return out


# ---------------------------------------------------------------------------
# mutable builder used by every rewrite


class Builder:
    """Mutable scratch representation; freeze() returns the immutable code."""

    def __init__(self, name: str = "diagram", r3: int | None = None):
        self.name = name
        self.r3 = r3
        self.kind: dict[str, str] = {}
        self.framing: dict[str, int | None] = {}
        self.events: dict[str, list[str]] = {}
        self.crossings: dict[str, Crossing] = {}
        self.piercings: dict[str, Piercing] = {}
        self.bands: dict[str, Band] = {}
        self.vertices: dict[str, Vertex] = {}
        self.resolutions_trivial = True
        self._slot_counter = itertools.count()
        self._id_counter: dict[str, itertools.count] = {}

    # -- construction -------------------------------------------------

    @classmethod
    def from_diagram(cls, d: DiagramCode | BandedUnlink) -> "Builder":
        b = as_banded(d)
        out = cls(b.code.name, b.code.r3)
        for c in b.code.components:
            out.kind[c.id] = c.kind
            out.framing[c.id] = c.framing
            out.events[c.id] = list(c.events)
        out.crossings = {x.id: x for x in b.code.crossings}
        out.piercings = {p.id: p for p in b.code.piercings}
        out.bands = {bb.id: bb for bb in b.bands}
        out.vertices = {v.id: v for v in b.vertices}
        out.resolutions_trivial = b.resolutions_trivial
        return out

    def fresh_id(self, prefix: str) -> str:
        ctr = self._id_counter.setdefault(prefix, itertools.count(1))
        used = (
            set(self.kind)
            | set(self.crossings)
            | set(self.piercings)
            | set(self.bands)
            | set(self.vertices)
        )
        while True:
            cand = f"{prefix}{next(ctr)}"
            if cand not in used:
                return cand

    def add_component(self, cid: str, kind: str, framing: int | None = None) -> str:
        if cid in self.kind:
            raise DiagramError(f"duplicate id {cid}")
        self.kind[cid] = kind
        self.framing[cid] = framing if kind == FRAMED else None
        self.events[cid] = []
        return cid

    def new_slot(
        self,
        cid: str,
        after: str | None = None,
        before: str | None = None,
    ) -> SlotRef:
        if cid not in self.events:
            raise DiagramError(f"no component {cid}")
        s = f"s{next(self._slot_counter)}"
        while s in self.events[cid]:
            s = f"s{next(self._slot_counter)}"
        ev = self.events[cid]
        if after is not None:
            ev.insert(ev.index(after) + 1, s)
        elif before is not None:
            ev.insert(ev.index(before), s)
        else:
            ev.append(s)
        return (cid, s)

    def add_crossing(self, sign: int, over: SlotRef, under: SlotRef, xid=None) -> str:
        xid = xid or self.fresh_id("x")
        self.crossings[xid] = Crossing(xid, sign, over, under)
        return xid

    def add_piercing(self, disk: str, strand: SlotRef, sign: int, pid=None) -> str:
        pid = pid or self.fresh_id("p")
        self.piercings[pid] = Piercing(pid, disk, strand, sign)
        return pid

    def add_band(self, end_from, end_to, half_twists=0, core=(), bid=None) -> str:
        bid = bid or self.fresh_id("B")
        self.bands[bid] = Band(bid, end_from, end_to, half_twists, tuple(core))
        return bid

    def add_vertex(self, a, b, sign, marking="ac", vid=None) -> str:
        vid = vid or self.fresh_id("v")
        self.vertices[vid] = Vertex(vid, a, b, sign, marking)
        return vid

    # -- surgery helpers ------------------------------------------------

    def remove_slot(self, ref: SlotRef):
        cid, s = ref
        self.events[cid].remove(s)

    def events_claiming(self, cid: str):
        """All event objects with a slot on component cid."""
        for x in list(self.crossings.values()):
            if x.over[0] == cid or x.under[0] == cid:
                yield x
        for p in list(self.piercings.values()):
            if p.strand[0] == cid:
                yield p
        for b in list(self.bands.values()):
            if b.end_from[0] == cid or b.end_to[0] == cid or any(
                ev.kind == "x" and ev.target[0] == cid for ev in b.core
            ):
                yield b
        for v in list(self.vertices.values()):
            if v.a[0] == cid or v.b[0] == cid:
                yield v

    def delete_component(self, cid: str, cascade: bool = True):
        """Remove a component and (if cascade) every event touching it.

        Crossings/piercings lose their partner slots on other components;
        this is the bookkeeping of handle-cancellation style deletions.
        """
        if cascade:
            for x in list(self.crossings.values()):
                if x.over[0] == cid or x.under[0] == cid:
                    self.delete_crossing(x.id, keep=cid)
            for p in list(self.piercings.values()):
                if p.strand[0] == cid or p.disk == cid:
                    self.delete_piercing(p.id, keep=cid)
            for b in list(self.bands.values()):
                touches = b.end_from[0] == cid or b.end_to[0] == cid
                if touches:
                    self.delete_band_record(b.id, keep=cid)
                else:
                    core = tuple(
                        ev
                        for ev in b.core
                        if not (
                            (ev.kind == "x" and ev.target[0] == cid)
                            or (ev.kind == "p" and ev.disk == cid)
                        )
                    )
                    if len(core) != len(b.core):
                        self.bands[b.id] = replace(b, core=core)
            for v in list(self.vertices.values()):
                if v.a[0] == cid or v.b[0] == cid:
                    self.delete_vertex(v.id, keep=cid)
        del self.kind[cid]
        del self.framing[cid]
        del self.events[cid]

    def delete_crossing(self, xid: str, keep: str | None = None):
        x = self.crossings.pop(xid)
        for ref in (x.over, x.under):
            if ref[0] != keep and ref[0] in self.events:
                self.remove_slot(ref)

    def delete_piercing(self, pid: str, keep: str | None = None):
        p = self.piercings.pop(pid)
        if p.strand[0] != keep and p.strand[0] in self.events:
            self.remove_slot(p.strand)

    def delete_band_record(self, bid: str, keep: str | None = None):
        """Drop a band record and free every slot it claims (no resolution).

        Other bands' crossings with this band vanish with it (the crossing
        strands just slide off the removed tube).
        """
        b = self.bands.pop(bid)
        for ref in (b.end_from, b.end_to):
            if ref[0] != keep and ref[0] in self.events:
                self.remove_slot(ref)
        for ev in b.core:
            if ev.kind == "x" and ev.target[0] != keep and ev.target[0] in self.events:
                self.remove_slot(ev.target)
        for other in list(self.bands.values()):
            if any(ev.kind == "bx" and ev.band == bid for ev in other.core):
                core = tuple(
                    ev for ev in other.core if not (ev.kind == "bx" and ev.band == bid)
                )
                self.bands[other.id] = replace(other, core=core)

    def delete_vertex(self, vid: str, keep: str | None = None):
        v = self.vertices.pop(vid)
        for ref in (v.a, v.b):
            if ref[0] != keep and ref[0] in self.events:
                self.remove_slot(ref)

    def remap_slots(self, mapping: dict[SlotRef, SlotRef]):
        """Rewrite every reference according to mapping (old ref -> new ref)."""

        def m(ref: SlotRef) -> SlotRef:
            return mapping.get(ref, ref)

        for xid, x in list(self.crossings.items()):
            self.crossings[xid] = replace(x, over=m(x.over), under=m(x.under))
        for pid, p in list(self.piercings.items()):
            self.piercings[pid] = replace(p, strand=m(p.strand))
        for bid, b in list(self.bands.items()):
            core = tuple(
                replace(ev, target=m(ev.target)) if ev.kind == "x" else ev
                for ev in b.core
            )
            self.bands[bid] = replace(b, end_from=m(b.end_from), end_to=m(b.end_to), core=core)
        for vid, v in list(self.vertices.items()):
            self.vertices[vid] = replace(v, a=m(v.a), b=m(v.b))

    def remap_disks(self, mapping: dict[str, str]):
        for pid, p in list(self.piercings.items()):
            if p.disk in mapping:
                self.piercings[pid] = replace(p, disk=mapping[p.disk])
        for bid, b in list(self.bands.items()):
            core = tuple(
                replace(ev, disk=mapping[ev.disk])
                if ev.kind == "p" and ev.disk in mapping
                else ev
                for ev in b.core
            )
            self.bands[bid] = replace(b, core=core)

    def flip_arc_orientation(self, cid: str, arc_slots: set[str]):
        """Sign bookkeeping for reversing the traversal of part of a strand.

        Crossings with exactly one endpoint on the arc flip sign; piercings
        and vertices on the arc flip sign.
        """
        arc = {(cid, s) for s in arc_slots}
        for xid, x in list(self.crossings.items()):
            n = (x.over in arc) + (x.under in arc)
            if n == 1:
                self.crossings[xid] = replace(x, sign=-x.sign)
        for pid, p in list(self.piercings.items()):
            if p.strand in arc:
                self.piercings[pid] = replace(p, sign=-p.sign)
        for vid, v in list(self.vertices.items()):
            n = (v.a in arc) + (v.b in arc)
            if n == 1:
                self.vertices[vid] = replace(v, sign=-v.sign)
        for bid, b in list(self.bands.items()):
            core = tuple(
                replace(ev, sign=-ev.sign)
                if ev.kind == "x" and ev.target in arc
                else ev
                for ev in b.core
            )
            self.bands[bid] = replace(b, core=core)

    # -- output ---------------------------------------------------------

    def freeze(self) -> DiagramCode:
        comps = tuple(
            Component(cid, self.kind[cid], self.framing[cid], tuple(self.events[cid]))
            for cid in sorted(self.kind)
        )
        return DiagramCode(
            name=self.name,
            components=comps,
            crossings=tuple(self.crossings[k] for k in sorted(self.crossings)),
            piercings=tuple(self.piercings[k] for k in sorted(self.piercings)),
            r3=self.r3,
        )

    def freeze_banded(self) -> BandedUnlink:
        return BandedUnlink(
            code=self.freeze(),
            bands=tuple(self.bands[k] for k in sorted(self.bands)),
            vertices=tuple(self.vertices[k] for k in sorted(self.vertices)),
            resolutions_trivial=self.resolutions_trivial,
        )


# ---------------------------------------------------------------------------
# linking


def linking_number(d: DiagramCode | BandedUnlink, i: str, j: str) -> int:
    """Signed linking of two distinct components.

    Crossings contribute half their sign sum; passages through a spanning
    disk (piercings) contribute their sign directly.  For a framed/dotted
    pair this reduces to the signed piercing count of the dotted disk.
    """
    code = d.code if isinstance(d, BandedUnlink) else d
    ci, cj = code.component(i), code.component(j)
    if i == j:
        raise DiagramError("linking_number needs two distinct components (use writhe)")
    if ci.kind == DOTTED and cj.kind == DOTTED:
        raise DiagramError("linking number of two dotted components is undefined")
    total2 = 0
    for x in code.crossings:
        comps = {x.over[0], x.under[0]}
        if comps == {i, j}:
            total2 += x.sign
    pier = 0
    for p in code.piercings:
        if (p.disk, p.strand[0]) in ((i, j), (j, i)):
            pier += p.sign
    if total2 % 2:
        raise DiagramError(f"odd crossing parity between {i} and {j}")
    return total2 // 2 + pier


def writhe(d: DiagramCode | BandedUnlink, i: str) -> int:
    code = d.code if isinstance(d, BandedUnlink) else d
    return sum(
        x.sign for x in code.crossings if x.over[0] == i and x.under[0] == i
    )


def linking_matrix(d: DiagramCode):
    """Symmetric framed-link matrix: off-diagonal linking, diagonal framings."""
    from .snf import IntMatrix

    bad = [c.id for c in d.components if c.kind == SURFACE]
    if bad:
        raise DiagramError(f"linking_matrix needs a Kirby diagram, found surface {bad}")
    framed = [c for c in d.components if c.kind == FRAMED]
    n = len(framed)
    m = [[0] * n for _ in range(n)]
    for a in range(n):
        m[a][a] = framed[a].framing
        for b in range(a + 1, n):
            v = linking_number(d, framed[a].id, framed[b].id)
            m[a][b] = m[b][a] = v
    return IntMatrix(m)


# ---------------------------------------------------------------------------
# push-off


def push_off(d: DiagramCode | BandedUnlink, i: str):
    """Blackboard-parallel copy of component i plus correction clasps.

    Returns ``(new_diagram, copy_id)`` of the same type as the input.
    Postcondition: ``linking_number(result, i, copy) == framing`` (0 for
    dotted and surface components).
    """
    out, copy, _ = push_off_with_map(d, i)
    return out, copy


def push_off_group(b: BandedUnlink, circles) -> tuple[BandedUnlink, dict[str, str]]:
    """Parallel copy of a banded sphere group (circles plus their bands).

    Returns the enlarged diagram and the circle-id mapping.  Each copied
    circle is a 0-linking parallel of its source; copied bands duplicate
    their cores with fresh target slots next to the originals.
    """
    circles = sorted(circles)
    group_bands = [
        band
        for band in b.bands
        if band.end_from[0] in circles or band.end_to[0] in circles
    ]
    for band in group_bands:
        if not (band.end_from[0] in circles and band.end_to[0] in circles):
            raise DiagramError("push_off_group needs a band-closed circle set")
    refs = slot_events(b)
    bld = Builder.from_diagram(b)
    cmap: dict[str, str] = {}
    smap: dict[SlotRef, SlotRef] = {}
    for cid in circles:
        copy = bld.fresh_id(f"{cid}_p")
        bld.add_component(copy, SURFACE)
        cmap[cid] = copy
    for cid in circles:
        comp = b.code.component(cid)
        copy = cmap[cid]
        handled: set[str] = set()
        for s in comp.events:
            tag, payload = refs[(cid, s)]
            if tag in ("bf", "bt"):
                smap[(cid, s)] = bld.new_slot(copy)
            elif tag == "p":
                ref = bld.new_slot(copy)
                bld.add_piercing(payload.disk, ref, payload.sign)
            elif tag in ("xo", "xu"):
                x: Crossing = payload
                other = x.under if tag == "xo" else x.over
                if other[0] == cid or other[0] in circles:
                    if x.id in handled:
                        continue
                    handled.add(x.id)
                    c1 = bld.new_slot(cmap[x.over[0]])
                    c2 = bld.new_slot(cmap[x.under[0]])
                    bld.add_crossing(x.sign, c1, c2)
                    i1 = bld.new_slot(x.over[0], after=x.over[1])
                    bld.add_crossing(x.sign, i1, bld.new_slot(cmap[x.under[0]], after=c2[1]))
                    i2 = bld.new_slot(x.under[0], after=x.under[1])
                    bld.add_crossing(x.sign, bld.new_slot(cmap[x.over[0]], after=c1[1]), i2)
                else:
                    mine = bld.new_slot(copy)
                    theirs = bld.new_slot(other[0], after=other[1])
                    if tag == "xo":
                        bld.add_crossing(x.sign, mine, theirs)
                    else:
                        bld.add_crossing(x.sign, theirs, mine)
            elif tag in ("va", "vb"):
                raise DiagramError("cannot push off a sphere that meets vertices")
            else:
                raise DiagramError(f"unsupported event {tag} on {cid}.{s}")
        # 0-linking correction clasps per circle
        w = sum(
            x.sign
            for x in b.code.crossings
            if x.over[0] == cid and x.under[0] == cid
        )
        sign = 1 if -w > 0 else -1
        for _ in range(abs(w)):
            a1 = bld.new_slot(cid)
            b1 = bld.new_slot(copy)
            bld.add_crossing(sign, a1, b1)
            a2 = bld.new_slot(cid)
            b2 = bld.new_slot(copy)
            bld.add_crossing(sign, b2, a2)
    for band in group_bands:
        core = []
        for ev in band.core:
            if ev.kind == "x":
                t = bld.new_slot(ev.target[0], after=ev.target[1])
                core.append(replace(ev, target=t))
            elif ev.kind == "bx":
                raise DiagramError("cannot push off bands that cross other bands")
            else:
                core.append(ev)
        bld.add_band(
            smap[band.end_from],
            smap[band.end_to],
            band.half_twists,
            tuple(core),
            bid=bld.fresh_id(f"{band.id}_p"),
        )
    return bld.freeze_banded(), cmap


def push_off_with_map(d: DiagramCode | BandedUnlink, i: str):
    """push_off plus the source-slot -> copy-slot correspondence."""
    banded = isinstance(d, BandedUnlink)
    bu = as_banded(d)
    comp = bu.code.component(i)
    refs = slot_events(bu)
    for s in comp.events:
        if refs.get((i, s), ("?",))[0] in ("bf", "bt", "cx", "va", "vb"):
            raise DiagramError(f"push_off of {i}: slot {s} is claimed by band/vertex data")

    bld = Builder.from_diagram(bu)
    copy = bld.fresh_id(f"{i}_p")
    # the parallel copy is a longitude curve: framed sources keep their
    # framing, a dotted circle's push-off is its 0-framed longitude
    if comp.kind == FRAMED:
        bld.add_component(copy, FRAMED, comp.framing)
    elif comp.kind == DOTTED:
        bld.add_component(copy, FRAMED, 0)
    else:
        bld.add_component(copy, SURFACE)

    handled: set[str] = set()
    slotmap: dict[str, str] = {}
    for s in list(comp.events):
        tag, payload = refs[(i, s)]
        if tag == "p":
            p: Piercing = payload
            ref = bld.new_slot(copy)
            slotmap[s] = ref[1]
            bld.add_piercing(p.disk, ref, p.sign)
        elif tag in ("xo", "xu"):
            x: Crossing = payload
            other = x.under if tag == "xo" else x.over
            if other[0] != i:
                # crossing with another component: copy crosses it adjacently
                mine = bld.new_slot(copy)
                slotmap[s] = mine[1]
                theirs = bld.new_slot(other[0], after=other[1])
                if tag == "xo":
                    bld.add_crossing(x.sign, mine, theirs)
                else:
                    bld.add_crossing(x.sign, theirs, mine)
            else:
                # self-crossing: full parallel-doubling pattern, once per pair
                if x.id in handled:
                    continue
                handled.add(x.id)
                s1 = x.over[1]
                s2 = x.under[1]
                c1 = bld.new_slot(copy)  # copy strand alongside segment 1
                c2 = bld.new_slot(copy)  # copy strand alongside segment 2
                slotmap[s1] = c1[1]
                slotmap[s2] = c2[1]
                # copy self-crossing
                bld.add_crossing(x.sign, c1, c2)
                # mixed crossings: segment-1 strands over segment-2 strands
                i1 = bld.new_slot(i, after=s1)
                bld.add_crossing(x.sign, i1, bld.new_slot(copy, after=c2[1]))
                i2 = bld.new_slot(i, after=s2)
                bld.add_crossing(x.sign, bld.new_slot(copy, after=c1[1]), i2)
        else:  # pragma: no cover - guarded above
            raise DiagramError(f"unexpected event {tag}")

    target = comp.framing if comp.kind == FRAMED else 0
    k = target - writhe(bu, i)
    sign = 1 if k > 0 else -1
    for _ in range(abs(k)):
        a1 = bld.new_slot(i)
        b1 = bld.new_slot(copy)
        bld.add_crossing(sign, a1, b1)
        a2 = bld.new_slot(i)
        b2 = bld.new_slot(copy)
        bld.add_crossing(sign, b2, a2)

    out = bld.freeze_banded()
    return (out if banded else out.code), copy, slotmap


# ---------------------------------------------------------------------------
# band surgery


def _cyclic_arcs(events: list[str], cut1: str, cut2: str | None):
    """Split a cyclic list at one or two slots (removing them).

    With one cut returns the single arc starting after cut1.  With two cuts
    returns (arc from after cut1 to before cut2, arc from after cut2 to
    before cut1).
    """
    n = len(events)
    i1 = events.index(cut1)
    if cut2 is None:
        return [events[(i1 + k) % n] for k in range(1, n)]
    i2 = events.index(cut2)
    arc_x, arc_y = [], []
    k = (i1 + 1) % n
    while k != i2:
        arc_x.append(events[k])
        k = (k + 1) % n
    k = (i2 + 1) % n
    while k != i1:
        arc_y.append(events[k])
        k = (k + 1) % n
    return arc_x, arc_y


def band_surgery(b: BandedUnlink, band_ids) -> BandedUnlink:
    """Resolve the listed bands: cut the attachments, glue in the sides.

    Core events are duplicated onto both sides (the return side reversed and
    sign-flipped); half twists become self-crossings of the rerouted strand;
    odd twist counts reconnect with a reversed arc.  Vertices are preserved.
    Band-band crossings are expanded when the crossed band materializes, so
    a band may only be resolved after every band it crosses.
    """
    pending = list(dict.fromkeys(band_ids))
    for bid in pending:
        b.band(bid)  # raise early on unknown ids
    out = b
    todo = set(pending)
    while todo:
        progress = False
        for bid in list(pending):
            if bid not in todo:
                continue
            band = out.band(bid)
            if any(ev.kind == "bx" and ev.band in todo for ev in band.core):
                continue
            if any(
                ev.kind == "bx" and ev.band not in todo
                for ev in band.core
            ):
                raise DiagramError(
                    f"band {bid} crosses a band that is not being resolved"
                )
            out = _resolve_one_band(out, bid)
            todo.remove(bid)
            progress = True
        if not progress:
            raise DiagramError("bands cross each other cyclically; cannot resolve")
    return out


def _core_side_makers(bld: Builder, band: Band):
    """Per-core-event emitters for the two parallel sides of the band.

    Returns (side1, side2, foreign_updates); each side entry is
    ``make(ref, flipped)`` which records the side's copy of the event at
    strand slot ``ref``.  ``flipped`` says the side is traversed against
    the core orientation, which negates the event sign.

    Other bands whose cores cross *this* band (``bx`` records) get one
    crossing against each materialized side; the replacement core events
    accumulate in ``foreign_updates[(band id, index)]`` and must be applied
    after both sides are laid out.
    """
    foreign: dict[int, list] = {}
    updates: dict[tuple[str, int], list[CoreEvent]] = {}
    for other in bld.bands.values():
        for k, ev in enumerate(other.core):
            if ev.kind == "bx" and ev.band == band.id:
                pos = min(max(ev.pos, 0), len(band.core))
                foreign.setdefault(pos, []).append((other.id, k, ev))

    def foreign_maker(cid, k, ev):
        def mk(ref, flipped, ev=ev):
            sign = -ev.sign if flipped else ev.sign
            updates.setdefault((cid, k), []).append(
                CoreEvent("x", sign, over=ev.over, target=ref)
            )

        return mk

    side1, side2 = [], []
    for pos in range(len(band.core) + 1):
        for cid, k, ev in foreign.get(pos, []):
            mk = foreign_maker(cid, k, ev)
            side1.append(mk)
            side2.append(mk)
        if pos == len(band.core):
            break
        ev = band.core[pos]
        if ev.kind == "x":
            t1 = bld.new_slot(ev.target[0], after=ev.target[1])
            t2 = bld.new_slot(ev.target[0], after=t1[1])
            bld.remove_slot(ev.target)

            def make(ref, flipped, ev=ev, t=None):
                sign = -ev.sign if flipped else ev.sign
                if ev.over:
                    bld.add_crossing(sign, ref, t)
                else:
                    bld.add_crossing(sign, t, ref)

            side1.append(lambda ref, flipped, make=make, t=t1: make(ref, flipped, t=t))
            side2.append(lambda ref, flipped, make=make, t=t2: make(ref, flipped, t=t))
        elif ev.kind == "p":

            def make_p(ref, flipped, ev=ev):
                bld.add_piercing(ev.disk, ref, -ev.sign if flipped else ev.sign)

            side1.append(make_p)
            side2.append(make_p)
        else:
            raise DiagramError(
                f"band {band.id} crosses band {ev.band}; resolve {ev.band} first"
            )
    return side1, side2, updates


def _resolve_one_band(b: BandedUnlink, bid: str) -> BandedUnlink:
    band = b.band(bid)
    bld = Builder.from_diagram(b)
    del bld.bands[bid]

    cf, sf = band.end_from
    ct, st = band.end_to
    coherent = band.half_twists % 2 == 0
    side1, side2, foreign_updates = _core_side_makers(bld, band)
    ntw = abs(band.half_twists)
    twists: list[list] = []

    remap: dict[SlotRef, SlotRef] = {}

    def circle_ops(cid):
        def adopt(old_cid, slots):
            for s in slots:
                remap[(old_cid, s)] = bld.new_slot(cid)

        def lay(makers, flipped, reverse):
            ms = list(makers)
            if reverse:
                ms.reverse()
            for m in ms:
                m(bld.new_slot(cid), flipped)

        def lay_twists(first, forward=False):
            if first:
                for _ in range(ntw):
                    twists.append([bld.new_slot(cid), None])
            else:
                order = range(ntw) if forward else range(ntw - 1, -1, -1)
                for k in order:
                    twists[k][1] = bld.new_slot(cid)

        return adopt, lay, lay_twists

    merged = bld.fresh_id("L")
    bld.add_component(merged, SURFACE)
    adopt, lay, lay_twists = circle_ops(merged)

    if cf == ct:
        arc_x, arc_y = _cyclic_arcs(bld.events[cf], sf, st)
        if coherent:
            # splits into two circles: X + backward side, Y + forward side
            adopt(cf, arc_x)
            lay_twists(first=True)
            lay(side2, flipped=True, reverse=True)
            c2 = bld.fresh_id("L")
            bld.add_component(c2, SURFACE)
            adopt2, lay2, lay_twists2 = circle_ops(c2)
            adopt2(cf, arc_y)
            lay2(side1, flipped=False, reverse=False)
            lay_twists2(first=False)
        else:
            # one circle; the Y arc and both sides run against the core
            adopt(cf, arc_x)
            lay_twists(first=True)
            lay(side2, flipped=True, reverse=True)
            bld.flip_arc_orientation(cf, set(arc_y))
            adopt(cf, list(reversed(arc_y)))
            lay_twists(first=False, forward=True)
            lay(side1, flipped=True, reverse=True)
        bld.delete_component(cf, cascade=False)
    else:
        arc_a = _cyclic_arcs(bld.events[cf], sf, None)
        arc_b = _cyclic_arcs(bld.events[ct], st, None)
        adopt(cf, arc_a)
        lay(side1, flipped=False, reverse=False)
        lay_twists(first=True)
        if coherent:
            adopt(ct, arc_b)
        else:
            bld.flip_arc_orientation(ct, set(arc_b))
            adopt(ct, list(reversed(arc_b)))
        lay_twists(first=False)
        lay(side2, flipped=True, reverse=True)
        bld.delete_component(cf, cascade=False)
        bld.delete_component(ct, cascade=False)

    tw_sign = 1 if band.half_twists > 0 else -1
    for k, (r1, r2) in enumerate(twists):
        if k % 2 == 0:
            bld.add_crossing(tw_sign, r1, r2)
        else:
            bld.add_crossing(tw_sign, r2, r1)

    # apply in descending index order so earlier replacements don't shift
    for (cid, k), new_events in sorted(foreign_updates.items(), key=lambda t: -t[0][1]):
        core = list(bld.bands[cid].core)
        core[k : k + 1] = new_events
        bld.bands[cid] = replace(bld.bands[cid], core=tuple(core))

    bld.remap_slots(remap)
    disk_map = {cf: merged}
    if cf != ct:
        disk_map[ct] = merged
    bld.remap_disks(disk_map)
    return bld.freeze_banded()


# ---------------------------------------------------------------------------
# vertex resolution


def resolve_vertices(b: BandedUnlink, direction: str) -> BandedUnlink:
    """Replace every marked vertex by its non-crossing resolution.

    The resolution is recorded as an honest crossing: the marked diagonal's
    strand passes in front (positive direction) or behind (negative), so the
    crossing sign equals the vertex sign for the positive resolution and its
    negative for the negative resolution.
    """
    if direction not in ("positive", "negative"):
        raise DiagramError(f"direction {direction!r}")
    if not b.vertices:
        return b
    bld = Builder.from_diagram(b)
    for v in list(bld.vertices.values()):
        del bld.vertices[v.id]
        a_over = (v.marking == "ac") == (direction == "positive")
        sign = v.sign if direction == "positive" else -v.sign
        if a_over:
            bld.add_crossing(sign, v.a, v.b)
        else:
            bld.add_crossing(sign, v.b, v.a)
    return bld.freeze_banded()


def surface_euler_characteristic(b: BandedUnlink) -> int:
    """chi = |negative resolution| - |bands| + |fully banded positive resolution|."""
    neg = resolve_vertices(b, "negative")
    lminus = len(neg.surface_components)
    pos = resolve_vertices(b, "positive")
    lb = band_surgery(pos, [bb.id for bb in pos.bands])
    lplus = len(lb.surface_components)
    return lminus - len(b.bands) + lplus


def surface_groups(b: BandedUnlink) -> list[frozenset[str]]:
    """Surface components grouped by band-connectivity (one group per sphere)."""
    parent = {cid: cid for cid in b.surface_components}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for band in b.bands:
        a, c = band.end_from[0], band.end_to[0]
        parent[find(a)] = find(c)
    groups: dict[str, set[str]] = {}
    for cid in parent:
        groups.setdefault(find(cid), set()).add(cid)
    return sorted((frozenset(g) for g in groups.values()), key=min)


# ---------------------------------------------------------------------------
# unions


def _rename_clashes(bld: Builder, other: BandedUnlink) -> dict[str, str]:
    taken = set(bld.kind) | set(bld.crossings) | set(bld.piercings) | set(
        bld.bands
    ) | set(bld.vertices)
    mapping = {}
    ids = (
        [c.id for c in other.code.components]
        + [x.id for x in other.code.crossings]
        + [p.id for p in other.code.piercings]
        + [bb.id for bb in other.bands]
        + [v.id for v in other.vertices]
    )
    for oid in ids:
        new = oid
        n = 2
        while new in taken:
            new = f"{oid}_{n}"
            n += 1
        mapping[oid] = new
        taken.add(new)
    return mapping


def disjoint_union(
    d1: DiagramCode | BandedUnlink, d2: DiagramCode | BandedUnlink
):
    """Place two codes side by side, renaming clashing ids in the second."""
    out, _ = disjoint_union_with_map(d1, d2)
    return out


def disjoint_union_with_map(
    d1: DiagramCode | BandedUnlink, d2: DiagramCode | BandedUnlink
):
    """disjoint_union plus the id mapping applied to the second diagram."""
    both_plain = isinstance(d1, DiagramCode) and isinstance(d2, DiagramCode)
    b1, b2 = as_banded(d1), as_banded(d2)
    bld = Builder.from_diagram(b1)
    mapping = _rename_clashes(bld, b2)

    def mref(ref: SlotRef) -> SlotRef:
        return (mapping[ref[0]], ref[1])

    for c in b2.code.components:
        bld.add_component(mapping[c.id], c.kind, c.framing)
        bld.events[mapping[c.id]] = list(c.events)
    for x in b2.code.crossings:
        bld.crossings[mapping[x.id]] = Crossing(
            mapping[x.id], x.sign, mref(x.over), mref(x.under)
        )
    for p in b2.code.piercings:
        bld.piercings[mapping[p.id]] = Piercing(
            mapping[p.id], mapping[p.disk], mref(p.strand), p.sign
        )
    for band in b2.bands:
        core = tuple(
            replace(
                ev,
                target=mref(ev.target) if ev.target else None,
                disk=mapping.get(ev.disk, ev.disk) if ev.disk else None,
                band=mapping.get(ev.band, ev.band) if ev.band else None,
            )
            for ev in band.core
        )
        bld.bands[mapping[band.id]] = Band(
            mapping[band.id], mref(band.end_from), mref(band.end_to), band.half_twists, core
        )
    for v in b2.vertices:
        bld.vertices[mapping[v.id]] = Vertex(
            mapping[v.id], mref(v.a), mref(v.b), v.sign, v.marking
        )
    if b1.code.r3 is not None or b2.code.r3 is not None:
        bld.r3 = (b1.code.r3 or 0) + (b2.code.r3 or 0)
    bld.resolutions_trivial = b1.resolutions_trivial and b2.resolutions_trivial
    out = bld.freeze_banded()
    if both_plain and not out.bands and not out.vertices:
        return out.code, mapping
    return out, mapping


def pair_connected_sum(
    b1: BandedUnlink, c1: str, b2: BandedUnlink, c2: str
) -> BandedUnlink:
    """Disjoint union plus one untwisted joining band between c1 and c2."""
    for b, c in ((b1, c1), (b2, c2)):
        if b.code.component(c).kind != SURFACE:
            raise DiagramError(f"component {c} is not a surface component")
    union, mapping = disjoint_union_with_map(b1, b2)
    bld = Builder.from_diagram(as_banded(union))
    f = bld.new_slot(c1)
    t = bld.new_slot(mapping[c2])
    bld.add_band(f, t, 0, ())
    return bld.freeze_banded()
