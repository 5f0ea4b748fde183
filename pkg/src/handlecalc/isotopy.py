"""Local isotopy rewrites shared by the Kirby and band move catalogs.

This is a closed, explicitly enumerated list of event-list rewrites.  Each
one is a planar isotopy (or a slide across a carved disk, which changes no
handle data):

* transpose       - slide an event past an adjacent non-interacting event
* cancel_x / insert_x     - second Reidemeister pair between two strands
* cancel_curl / insert_curl - first Reidemeister twist (framing labels are
  self-linking numbers, so they do not change)
* cancel_pp / insert_pp   - adjacent opposite passages through one disk
"""

from __future__ import annotations

from .codes import (
    BandedUnlink,
    Builder,
    DiagramCode,
    DiagramError,
    SlotRef,
    as_banded,
    slot_events,
)

REWRITES = (
    "transpose",
    "cancel_x",
    "insert_x",
    "cancel_curl",
    "insert_curl",
    "cancel_pp",
    "insert_pp",
)


def _adjacent(events: list[str], s1: str, s2: str) -> bool:
    n = len(events)
    if n < 2:
        return False
    i1, i2 = events.index(s1), events.index(s2)
    return (i1 + 1) % n == i2 or (i2 + 1) % n == i1


def _strandwise_adjacent(bld: Builder, a: SlotRef, b: SlotRef) -> bool:
    return a[0] == b[0] and _adjacent(bld.events[a[0]], a[1], b[1])


def apply_isotopy(d, rewrite: str, *args):
    """Apply one rewrite; returns the same diagram type as the input."""
    banded = isinstance(d, BandedUnlink)
    bld = Builder.from_diagram(as_banded(d))
    fn = {
        "transpose": _transpose,
        "cancel_x": _cancel_x,
        "insert_x": _insert_x,
        "cancel_curl": _cancel_curl,
        "insert_curl": _insert_curl,
        "cancel_pp": _cancel_pp,
        "insert_pp": _insert_pp,
    }.get(rewrite)
    if fn is None:
        raise DiagramError(f"unknown isotopy rewrite {rewrite!r}")
    fn(bld, *args)
    out = bld.freeze_banded()
    return out if banded else out.code


def _transpose(bld: Builder, at: SlotRef):
    """Swap a slot with its cyclic successor.

    Legal when the two slots belong to different events and at least one of
    them is not a crossing endpoint (moving a crossing point past another
    crossing needs a third-Reidemeister pattern that this catalog excludes).
    """
    cid, s = at
    ev = bld.events[cid]
    if len(ev) < 2:
        raise DiagramError("nothing to transpose past")
    i = ev.index(s)
    j = (i + 1) % len(ev)
    t = ev[j]
    refs = slot_events(bld.freeze_banded())
    e1 = refs.get((cid, s))
    e2 = refs.get((cid, t))
    if e1 is None or e2 is None:
        raise DiagramError("transpose of an unreferenced slot")
    same_event = (
        e1[0] in ("xo", "xu")
        and e2[0] in ("xo", "xu")
        and e1[1].id == e2[1].id
    )
    if same_event:
        raise DiagramError("cannot transpose a crossing past itself")
    both_crossings = e1[0] in ("xo", "xu") and e2[0] in ("xo", "xu")
    if both_crossings:
        raise DiagramError("transposing two crossings needs a triangle move")
    ev[i], ev[j] = ev[j], ev[i]


def _cancel_x(bld: Builder, x1: str, x2: str):
    """Remove a poke: two adjacent crossings of the same strands, opposite
    signs, with the same strand in front at both."""
    a = bld.crossings.get(x1)
    b = bld.crossings.get(x2)
    if a is None or b is None:
        raise DiagramError(f"no such crossing pair {x1},{x2}")
    if a.sign + b.sign != 0:
        raise DiagramError("crossings do not have opposite signs")
    pairings = [
        ((a.over, b.over), (a.under, b.under)),
    ]
    ok = False
    for (p1, p2), (q1, q2) in pairings:
        if _strandwise_adjacent(bld, p1, p2) and _strandwise_adjacent(bld, q1, q2):
            ok = True
    if not ok:
        raise DiagramError("crossings are not an adjacent matched pair")
    bld.delete_crossing(x1)
    bld.delete_crossing(x2)


def _insert_x(bld: Builder, over_at: SlotRef, under_at: SlotRef, sign: int):
    """Insert a poke: the strand of over_at passes over the strand of
    under_at and back; new crossings sit after the named slots (or at the
    end when the slot is 'end')."""
    o1 = _slot_at(bld, over_at)
    u1 = _slot_at(bld, under_at)
    o2 = bld.new_slot(o1[0], after=o1[1])
    u2 = bld.new_slot(u1[0], after=u1[1])
    bld.add_crossing(sign, o1, u1)
    bld.add_crossing(-sign, o2, u2)


def _slot_at(bld: Builder, spec: SlotRef) -> SlotRef:
    cid, s = spec
    if s == "end":
        return bld.new_slot(cid)
    return bld.new_slot(cid, after=s)


def _cancel_curl(bld: Builder, xid: str):
    x = bld.crossings.get(xid)
    if x is None:
        raise DiagramError(f"no crossing {xid}")
    if x.over[0] != x.under[0]:
        raise DiagramError("not a curl: endpoints on different components")
    if not _adjacent(bld.events[x.over[0]], x.over[1], x.under[1]):
        raise DiagramError("not a curl: slots not adjacent")
    bld.delete_crossing(xid)


def _insert_curl(bld: Builder, at: SlotRef, sign: int, over_first: bool = True):
    s1 = _slot_at(bld, at)
    s2 = bld.new_slot(s1[0], after=s1[1])
    if over_first:
        bld.add_crossing(sign, s1, s2)
    else:
        bld.add_crossing(sign, s2, s1)


def _cancel_pp(bld: Builder, p1: str, p2: str):
    """Cancel a strand dipping through a disk and straight back."""
    a = bld.piercings.get(p1)
    b = bld.piercings.get(p2)
    if a is None or b is None:
        raise DiagramError(f"no such piercing pair {p1},{p2}")
    if a.disk != b.disk or a.sign + b.sign != 0:
        raise DiagramError("piercings do not cancel")
    if not _strandwise_adjacent(bld, a.strand, b.strand):
        raise DiagramError("piercings are not adjacent on the strand")
    bld.delete_piercing(p1)
    bld.delete_piercing(p2)


def _insert_pp(bld: Builder, disk: str, at: SlotRef, sign: int):
    if disk not in bld.kind:
        raise DiagramError(f"no component {disk}")
    s1 = _slot_at(bld, at)
    s2 = bld.new_slot(s1[0], after=s1[1])
    bld.add_piercing(disk, s1, sign)
    bld.add_piercing(disk, s2, -sign)


# ---------------------------------------------------------------------------
# enumeration of reducing rewrites (used by the search engine)


def reducing_isotopies(d) -> list[tuple[str, tuple]]:
    """All cancel_x / cancel_curl / cancel_pp sites currently available."""
    bld = Builder.from_diagram(as_banded(d))
    out = []
    xs = list(bld.crossings.values())
    for i, a in enumerate(xs):
        if a.over[0] == a.under[0] and _adjacent(
            bld.events[a.over[0]], a.over[1], a.under[1]
        ):
            out.append(("cancel_curl", (a.id,)))
        for b in xs[i + 1 :]:
            if a.sign + b.sign:
                continue
            if _strandwise_adjacent(bld, a.over, b.over) and _strandwise_adjacent(
                bld, a.under, b.under
            ):
                out.append(("cancel_x", (a.id, b.id)))
    ps = list(bld.piercings.values())
    for i, a in enumerate(ps):
        for b in ps[i + 1 :]:
            if a.disk == b.disk and a.sign + b.sign == 0 and _strandwise_adjacent(
                bld, a.strand, b.strand
            ):
                out.append(("cancel_pp", (a.id, b.id)))
    return out


def normalize(d, budget: int = 1000):
    """Apply reducing rewrites until none are available."""
    cur = d
    for _ in range(budget):
        sites = reducing_isotopies(cur)
        if not sites:
            return cur
        rewrite, args = sites[0]
        cur = apply_isotopy(cur, rewrite, *args)
    return cur
