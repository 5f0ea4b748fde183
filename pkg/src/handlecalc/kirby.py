"""Kirby move catalog: handle slides, cancelling pairs, blow-ups, dot-zero.

Slides are fully parameterized: the sliding band is data (attachment
positions, an orientation flag, optional interior crossings), never
inferred.  Framing arithmetic follows the slide formulas

    slide22:  m_i + m_j + 2 lk(K_i, push-off of K_j)
    slide21:  m_i + 2 lk(K_i, push-off of K_j)

with the linking number taken after orienting the push-off coherently with
the band (``flip`` traverses it the other way).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .codes import (
    Builder,
    CoreEvent,
    DOTTED,
    DiagramCode,
    DiagramError,
    FRAMED,
    SlotRef,
    as_banded,
    linking_number,
    push_off_with_map,
)
from .codes import BandedUnlink
from .isotopy import apply_isotopy


class MoveError(DiagramError):
    """A move's precondition failed at the named site."""


def _freeze_like(bld: Builder, d) -> DiagramCode:
    out = bld.freeze_banded()
    return out if isinstance(d, BandedUnlink) else out.code


def _code_of(d) -> DiagramCode:
    return d.code if isinstance(d, BandedUnlink) else d


@dataclass(frozen=True)
class KirbyMove:
    kind: str
    i: str | None = None
    j: str | None = None
    at: str | None = None  # slot of i after which the band leaves (None: end)
    jat: str | None = None  # slot of j whose copy the band lands after (None: start)
    flip: bool = False
    core: tuple[CoreEvent, ...] = ()
    site: str | None = None
    framing: int = 0
    sign: int = 1
    names: tuple[str, ...] = ()
    rewrite: str | None = None
    args: tuple = ()

    def label(self) -> str:
        if self.kind.startswith("slide"):
            return f"{self.kind} {self.i} over {self.j}"
        if self.kind == "isotopy":
            return f"isotopy {self.rewrite} {' '.join(map(str, self.args))}"
        bits = [self.kind]
        if self.site:
            bits.append(f"at {self.site}")
        return " ".join(bits)


SLIDE_KINDS = {"slide11", "slide21", "slide22"}
MANIFOLD_PRESERVING = SLIDE_KINDS | {
    "pair12_create",
    "pair12_annihilate",
    "pair23_create",
    "pair23_annihilate",
    "isotopy",
}


def apply_kirby(d, m: KirbyMove):
    if m.kind in SLIDE_KINDS:
        return _slide(d, m)
    if m.kind == "pair12_create":
        return _pair12_create(d, m)
    if m.kind == "pair12_annihilate":
        return _pair12_annihilate(d, m)
    if m.kind == "pair23_create":
        return _pair23_create(d, m)
    if m.kind == "pair23_annihilate":
        return _pair23_annihilate(d, m)
    if m.kind == "blowup":
        return _blowup(d, m)
    if m.kind == "blowdown":
        return _blowdown(d, m)
    if m.kind == "isotopy":
        return apply_isotopy(d, m.rewrite, *m.args)
    if m.kind == "dotzero":
        return dot_zero_exchange(d, m.site)
    raise MoveError(f"unknown kirby move {m.kind!r}")


# ---------------------------------------------------------------------------
# handle slides


def _slide(d, m: KirbyMove) -> DiagramCode:
    banded = not isinstance(d, DiagramCode)
    code = d.code if banded else d
    try:
        ci = code.component(m.i)
        cj = code.component(m.j)
    except DiagramError as e:
        raise MoveError(str(e)) from None
    if m.i == m.j:
        raise MoveError("cannot slide a component over itself")
    want = {
        "slide11": (DOTTED, DOTTED),
        "slide21": (FRAMED, DOTTED),
        "slide22": (FRAMED, FRAMED),
    }[m.kind]
    if (ci.kind, cj.kind) != want:
        raise MoveError(
            f"{m.kind} needs kinds {want}, got ({ci.kind}, {cj.kind})"
        )

    slid, copy, slotmap = push_off_with_map(d, m.j)
    lk = linking_number(slid, m.i, copy)
    if m.flip:
        lk = -lk

    bld = Builder.from_diagram(as_banded(slid))

    # interior crossings of the sliding band, both sides
    side1, side2 = [], []
    for ev in m.core:
        if ev.kind == "x":
            anchor = ev.target
            if anchor[0] in (m.i, m.j, copy):
                raise MoveError("sliding band may not cross the sliding components")
            t1 = (
                bld.new_slot(anchor[0])
                if anchor[1] == "end"
                else bld.new_slot(anchor[0], after=anchor[1])
            )
            t2 = bld.new_slot(anchor[0], after=t1[1])
            side1.append(("x", ev.sign, ev.over, t1))
            side2.append(("x", -ev.sign, ev.over, t2))
        elif ev.kind == "p":
            side1.append(("p", ev.sign, None, ev.disk))
            side2.append(("p", -ev.sign, None, ev.disk))
        else:
            raise MoveError("sliding bands cross strands and disks only")

    if m.flip:
        bld.flip_arc_orientation(copy, set(bld.events[copy]))
        bld.events[copy].reverse()

    # merged cyclic list: i's events up to `at`, side1, the copy's cycle
    # from after `jat`, side2, then the rest of i
    iev = list(bld.events[m.i])
    if m.at is None:
        cut = len(iev)
    else:
        if m.at not in iev:
            raise MoveError(f"band anchor {m.i}.{m.at} not found")
        cut = iev.index(m.at) + 1
    cev = list(bld.events[copy])
    if m.jat is not None:
        canchor = slotmap.get(m.jat)
        if canchor is None:
            raise MoveError(f"band anchor {m.j}.{m.jat} not found")
        pos = cev.index(canchor) + 1
        cev = cev[pos:] + cev[:pos]

    order: list = [("old", (m.i, s)) for s in iev[:cut]]
    order += [("side", e) for e in side1]
    order += [("old", (copy, s)) for s in cev]
    order += [("side", e) for e in reversed(side2)]
    order += [("old", (m.i, s)) for s in iev[cut:]]

    new_kind = ci.kind
    new_framing = None
    if m.kind == "slide22":
        new_framing = ci.framing + cj.framing + 2 * lk
    elif m.kind == "slide21":
        new_framing = ci.framing + 2 * lk

    merged = bld.fresh_id("tmp")
    bld.add_component(merged, FRAMED if new_kind == FRAMED else new_kind, new_framing)
    remap: dict[SlotRef, SlotRef] = {}
    for tag, payload in order:
        ref = bld.new_slot(merged)
        if tag == "old":
            remap[payload] = ref
        else:
            knd, sign, over, target = payload
            if knd == "x":
                if over:
                    bld.add_crossing(sign, ref, target)
                else:
                    bld.add_crossing(sign, target, ref)
            else:
                bld.add_piercing(target, ref, sign)

    # a 1-handle slide also sums the carved disks: strands through D_j now
    # run through D_i as well
    if m.kind == "slide11":
        orient = -1 if m.flip else 1
        for p in list(bld.piercings.values()):
            if p.disk == m.j:
                ref = bld.new_slot(p.strand[0], after=p.strand[1])
                bld.add_piercing(m.i, ref, p.sign * orient)

    bld.delete_component(m.i, cascade=False)
    bld.delete_component(copy, cascade=False)
    bld.remap_slots(remap)
    # give the merged component back the original id
    bld.kind[m.i] = bld.kind.pop(merged)
    bld.framing[m.i] = bld.framing.pop(merged)
    bld.events[m.i] = bld.events.pop(merged)
    bld.remap_slots({(merged, s): (m.i, s) for s in bld.events[m.i]})
    bld.remap_disks({merged: m.i})
    out = bld.freeze_banded()
    return out if banded else out.code


# ---------------------------------------------------------------------------
# cancelling pairs


def _pair12_create(d, m: KirbyMove):
    bld = Builder.from_diagram(d)
    cname = m.names[0] if m.names else bld.fresh_id("C")
    mname = m.names[1] if len(m.names) > 1 else bld.fresh_id("M")
    bld.add_component(cname, FRAMED, m.framing)
    bld.add_component(mname, DOTTED)
    bld.add_piercing(mname, bld.new_slot(cname), 1)
    return _freeze_like(bld, d)


def _dotted_piercings(d: DiagramCode, strand: str) -> list:
    dotted = {c.id for c in d.by_kind(DOTTED)}
    return [p for p in d.piercings if p.strand[0] == strand and p.disk in dotted]


def pair12_site(d, site: str) -> tuple[str, str]:
    """Resolve a (dotted, framed) cancelling pair from either member's id."""
    d = _code_of(d)
    try:
        c = d.component(site)
    except DiagramError as e:
        raise MoveError(str(e)) from None
    if c.kind == DOTTED:
        hits = [p for p in d.piercings if p.disk == site]
        if len(hits) != 1:
            raise MoveError(f"dotted {site} is pierced {len(hits)} times, need exactly 1")
        dotted_id, framed_id = site, hits[0].strand[0]
    elif c.kind == FRAMED:
        mine = _dotted_piercings(d, site)
        if len(mine) != 1:
            raise MoveError(
                f"framed {site} pierces dotted disks {len(mine)} times, need exactly 1"
            )
        dotted_id, framed_id = mine[0].disk, site
    else:
        raise MoveError(f"{site} is a surface component")
    # verify from both sides
    if len([p for p in d.piercings if p.disk == dotted_id]) != 1:
        raise MoveError(f"dotted {dotted_id} is pierced by something else")
    mine = _dotted_piercings(d, framed_id)
    if len(mine) != 1 or mine[0].disk != dotted_id:
        raise MoveError(f"framed {framed_id} runs through another dotted disk")
    if d.component(dotted_id).events:
        # the only permitted slot on the dotted circle is none at all
        raise MoveError(f"dotted {dotted_id} is not a clean meridian (has events)")
    return dotted_id, framed_id


def _pair12_annihilate(d, m: KirbyMove):
    dotted_id, framed_id = pair12_site(d, m.site)
    bld = Builder.from_diagram(d)
    bld.delete_component(framed_id)
    bld.delete_component(dotted_id)
    return _freeze_like(bld, d)


def _pair23_create(d, m: KirbyMove):
    bld = Builder.from_diagram(d)
    name = m.names[0] if m.names else bld.fresh_id("U")
    bld.add_component(name, FRAMED, 0)
    if bld.r3 is not None:
        bld.r3 += 1
    return _freeze_like(bld, d)


def _pair23_annihilate(d, m: KirbyMove):
    try:
        c = _code_of(d).component(m.site)
    except DiagramError as e:
        raise MoveError(str(e)) from None
    if c.kind != FRAMED or c.framing != 0:
        raise MoveError(f"{m.site} is not a 0-framed 2-handle")
    if c.events:
        raise MoveError(f"{m.site} is not split (it has events)")
    bld = Builder.from_diagram(d)
    bld.delete_component(m.site)
    if bld.r3 is not None:
        if bld.r3 < 1:
            raise MoveError("no implicit 3-handle available to cancel")
        bld.r3 -= 1
    return _freeze_like(bld, d)


def _blowup(d, m: KirbyMove):
    if m.sign not in (1, -1):
        raise MoveError("blow-up sign must be +1 or -1")
    bld = Builder.from_diagram(d)
    name = m.names[0] if m.names else bld.fresh_id("E")
    bld.add_component(name, FRAMED, m.sign)
    return _freeze_like(bld, d)


def _blowdown(d, m: KirbyMove):
    try:
        c = _code_of(d).component(m.site)
    except DiagramError as e:
        raise MoveError(str(e)) from None
    if c.kind != FRAMED or c.framing not in (1, -1):
        raise MoveError(f"{m.site} is not a (+/-1)-framed unknot")
    if c.events:
        raise MoveError(
            f"{m.site} has strands interacting with it; only split blow-downs "
            "are supported (general blow-down needs disk-passage data the "
            "code does not carry)"
        )
    bld = Builder.from_diagram(d)
    bld.delete_component(m.site)
    return _freeze_like(bld, d)


# ---------------------------------------------------------------------------
# enumeration


def annihilable_pairs(d) -> list[KirbyMove]:
    """Every cancelling-pair annihilation whose precondition holds."""
    d = _code_of(d)
    out = []
    for c in d.by_kind(DOTTED):
        try:
            pair12_site(d, c.id)
        except MoveError:
            continue
        out.append(KirbyMove("pair12_annihilate", site=c.id))
    for c in d.by_kind(FRAMED):
        if c.framing == 0 and not c.events:
            out.append(KirbyMove("pair23_annihilate", site=c.id))
    return out


# ---------------------------------------------------------------------------
# dotted <-> zero-framed boundary constructions


def dot_zero_exchange(d, site: str):
    """Replace one dotted circle by a 0-framed one (changes the 4-manifold,
    preserves its boundary).  Piercings of its disk become two same-signed
    crossings of the strand with the circle, keeping the linking number."""
    c = _code_of(d).component(site)
    if c.kind != DOTTED:
        raise MoveError(f"{site} is not dotted")
    bld = Builder.from_diagram(d)
    bld.kind[site] = FRAMED
    bld.framing[site] = 0
    for p in [p for p in bld.piercings.values() if p.disk == site]:
        del bld.piercings[p.id]
        strand, slot = p.strand
        s2 = bld.new_slot(strand, after=slot)
        d1 = bld.new_slot(site)
        d2 = bld.new_slot(site)
        # strand passes through the circle: over its near edge, under its far
        # edge, both crossings carrying the passage sign
        bld.add_crossing(p.sign, (strand, slot), d1)
        bld.add_crossing(p.sign, d2, s2)
    return _freeze_like(bld, d)


def boundary_diagram(d: DiagramCode) -> DiagramCode:
    """Surgery presentation of the boundary: every dot becomes a zero."""
    out = d
    for c in d.by_kind(DOTTED):
        out = dot_zero_exchange(out, c.id)
    return replace(out, r3=None)
