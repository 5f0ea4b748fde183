"""Heegaard diagrams for 5-manifolds and their constructive compilers.

A Heegaard diagram here is one decorated diagram code containing the base
Kirby diagram plus two disjoint families of surface circles (the alpha and
beta 2-sphere links, each presented as a banded unlink over the base) and
signed vertices pairing an alpha strand with a beta strand.

``alpha_duals`` records which 1-handle each alpha sphere algebraically
cancels: either a framed component of the base (the sphere is the belt
sphere of that 2-handle, as in double constructions) or a virtual token
(trivial spheres born from first stabilizations, or spheres whose dual
2-handle was cancelled away).  The 5-dimensional chain complex reads its
first boundary map off this table.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .bandmoves import BandMove, apply_band
from .codes import (
    Band,
    BandedUnlink,
    Builder,
    DOTTED,
    DiagramCode,
    DiagramError,
    FRAMED,
    SURFACE,
    SlotRef,
    Vertex,
    band_surgery,
    surface_groups,
    validate,
)
from .invariants import (
    AbelianGroup,
    Presentation,
    homology_of_complex,
    pi1_presentation,
)
from .kirby import KirbyMove, MoveError, apply_kirby
from .snf import IntMatrix


@dataclass(frozen=True)
class HeegaardDiagram:
    code: DiagramCode
    alpha: frozenset[str]
    beta: frozenset[str]
    bands: tuple[Band, ...] = ()
    vertices: tuple[Vertex, ...] = ()
    asserted_k: int | None = None
    asserted_r: int | None = None
    alpha_duals: tuple[tuple[str, str], ...] = ()  # circle -> framed id or "virtual:*"
    beta_duals: tuple[tuple[str, str], ...] = ()  # circle -> "virtual:*" 4-handle

    @property
    def duals(self) -> dict[str, str]:
        return dict(self.alpha_duals)

    def side_of(self, cid: str) -> str:
        if cid in self.alpha:
            return "alpha"
        if cid in self.beta:
            return "beta"
        return "base"

    def side_circles(self, side: str) -> frozenset[str]:
        return self.alpha if side == "alpha" else self.beta

    def side_bands(self, side: str) -> tuple[Band, ...]:
        circles = self.side_circles(side)
        return tuple(b for b in self.bands if b.end_from[0] in circles)

    def as_banded(self) -> BandedUnlink:
        return BandedUnlink(self.code, self.bands, self.vertices)

    def with_assertions(self, k=None, r=None) -> "HeegaardDiagram":
        return replace(
            self,
            asserted_k=self.asserted_k if k is None else k,
            asserted_r=self.asserted_r if r is None else r,
        )


def validate_heegaard(h: HeegaardDiagram) -> list[str]:
    out = validate(h.as_banded())
    surf = set(c.id for c in h.code.by_kind(SURFACE))
    if set(h.alpha) & set(h.beta):
        out.append("alpha and beta share components")
    if (set(h.alpha) | set(h.beta)) != surf:
        out.append("surface components not partitioned into alpha and beta")
    for b in h.bands:
        s1, s2 = h.side_of(b.end_from[0]), h.side_of(b.end_to[0])
        if s1 != s2 or s1 == "base":
            out.append(f"band {b.id} joins different sides")
    for v in h.vertices:
        if not (
            (v.a[0] in h.alpha and v.b[0] in h.beta)
            or (v.a[0] in h.beta and v.b[0] in h.alpha)
        ):
            out.append(f"vertex {v.id} does not pair an alpha strand with a beta one")
    duals = h.duals
    for cid, target in duals.items():
        if cid not in h.alpha:
            out.append(f"dual entry for non-alpha circle {cid}")
        if not target.startswith("virtual:") and (
            not h.code.has_component(target)
            or h.code.component(target).kind != FRAMED
        ):
            out.append(f"dual target {target} is not a framed component")
    groups = sphere_groups(h, "alpha")
    for g in groups:
        if len({duals[c] for c in g if c in duals}) > 1:
            out.append(f"alpha sphere {sorted(g)} has conflicting duals")
    for cid, target in h.beta_duals:
        if cid not in h.beta:
            out.append(f"beta dual entry for non-beta circle {cid}")
        if not target.startswith("virtual:"):
            out.append(f"beta dual {target} must be a virtual 4-handle")
    return out


def sphere_groups(h: HeegaardDiagram, side: str):
    """Band-connected circle groups: one group per embedded 2-sphere."""
    circles = h.side_circles(side)
    sub = BandedUnlink(
        code=replace(
            h.code,
            components=tuple(
                c for c in h.code.components if c.kind != SURFACE or c.id in circles
            ),
        ),
        bands=h.side_bands(side),
        vertices=(),
    )
    return surface_groups(sub)


def group_dual(h: HeegaardDiagram, group) -> str | None:
    duals = h.duals
    for cid in sorted(group):
        if cid in duals:
            return duals[cid]
    return None


# ---------------------------------------------------------------------------
# sides as banded unlinks / deletion


def strip_surfaces(bu: BandedUnlink) -> DiagramCode:
    """The underlying Kirby diagram with every trace of the surface data
    (anchor slots, surface-disk piercings, band-core targets) removed."""
    bld = Builder.from_diagram(bu)
    for cid in list(bu.surface_components):
        bld.delete_component(cid)
    for b in list(bld.bands.values()):
        bld.delete_band_record(b.id)
    return bld.freeze_banded().code


def delete_side(h: HeegaardDiagram, side: str) -> BandedUnlink:
    """The diagram with one side's spheres removed (their bands and every
    vertex go with them)."""
    bld = Builder.from_diagram(h.as_banded())
    for cid in sorted(h.side_circles(side)):
        bld.delete_component(cid)
    return bld.freeze_banded()


# ---------------------------------------------------------------------------
# moves


@dataclass(frozen=True)
class HeegaardMove:
    kind: str  # isotopy | slide | stab1..destab3 | kirby
    side: str = "alpha"
    band_move: BandMove | None = None
    kirby_move: KirbyMove | None = None
    i: str | None = None
    j: str | None = None
    at: str | None = None
    jat: str | None = None
    parity: int = 0
    core: tuple = ()
    site: str | None = None
    names: tuple[str, ...] = ()

    def label(self) -> str:
        if self.kind == "isotopy":
            return f"{self.side} {self.band_move.label()}"
        if self.kind == "kirby":
            return f"base {self.kirby_move.label()}"
        if self.kind == "slide":
            return f"slide {self.side} {self.i} over {self.j}"
        bits = [self.kind]
        if self.site:
            bits.append(f"at {self.site}")
        return " ".join(bits)


def apply_heegaard(h: HeegaardDiagram, m: HeegaardMove) -> HeegaardDiagram:
    if m.kind == "isotopy":
        return _isotopy_side(h, m)
    if m.kind == "kirby":
        return _base_kirby(h, m.kirby_move)
    if m.kind == "slide":
        return _heegaard_slide(h, m)
    if m.kind in ("stab1", "stab3"):
        return _stab_trivial(h, m)
    if m.kind in ("destab1", "destab3"):
        return _destab_trivial(h, m)
    if m.kind == "stab2":
        return _stab2(h, m)
    if m.kind == "destab2":
        return _destab2(h, m)
    raise MoveError(f"unknown heegaard move {m.kind!r}")


def _rebuild_sides(h: HeegaardDiagram, out: BandedUnlink) -> HeegaardDiagram:
    """Re-derive side membership after a banded rewrite: surviving circles
    keep their side, new circles join the side they are band-connected to."""
    known = {cid: "alpha" for cid in h.alpha}
    known.update({cid: "beta" for cid in h.beta})
    alpha, beta = set(), set()
    todo = []
    for cid in out.surface_components:
        side = known.get(cid)
        if side == "alpha":
            alpha.add(cid)
        elif side == "beta":
            beta.add(cid)
        else:
            todo.append(cid)
    groups = surface_groups(out)
    for cid in todo:
        group = next(g for g in groups if cid in g)
        sides = {known[c] for c in group if c in known}
        if len(sides) != 1:
            raise MoveError(f"cannot infer the side of new circle {cid}")
        (alpha if sides.pop() == "alpha" else beta).add(cid)
    duals = tuple((c, t) for c, t in h.alpha_duals if c in alpha)
    bduals = tuple((c, t) for c, t in h.beta_duals if c in beta)
    return replace(
        h,
        code=out.code,
        alpha=frozenset(alpha),
        beta=frozenset(beta),
        bands=out.bands,
        vertices=out.vertices,
        alpha_duals=duals,
        beta_duals=bduals,
    )


def _isotopy_side(h: HeegaardDiagram, m: HeegaardMove) -> HeegaardDiagram:
    bm = m.band_move
    if bm.kind in ("cup",) and bm.on is not None and h.side_of(bm.on) != m.side:
        raise MoveError(f"cup target {bm.on} is not on side {m.side}")
    if bm.band is not None:
        band = next((b for b in h.bands if b.id == bm.band), None)
        if band is not None and h.side_of(band.end_from[0]) not in (m.side,):
            raise MoveError(f"band {bm.band} is not on side {m.side}")
    out = apply_band(h.as_banded(), bm)
    return _rebuild_sides(h, out)


def _base_kirby(h: HeegaardDiagram, km: KirbyMove) -> HeegaardDiagram:
    before_framed = {c.id for c in h.code.by_kind(FRAMED)}
    out = apply_kirby(h.as_banded(), km)
    after_framed = {c.id for c in out.code.by_kind(FRAMED)}
    gone = before_framed - after_framed
    duals = []
    virtual = sum(1 for _, t in h.alpha_duals if t.startswith("virtual:"))
    for cid, target in h.alpha_duals:
        if target in gone:
            duals.append((cid, f"virtual:{virtual}"))
            virtual += 1
        else:
            duals.append((cid, target))
    return _rebuild_sides(replace(h, alpha_duals=tuple(duals)), out)


def _stab_trivial(h: HeegaardDiagram, m: HeegaardMove) -> HeegaardDiagram:
    side = "alpha" if m.kind == "stab1" else "beta"
    bld = Builder.from_diagram(h.as_banded())
    name = m.names[0] if m.names else bld.fresh_id("S")
    bld.add_component(name, SURFACE)
    out = bld.freeze_banded()
    if side == "alpha":
        virtual = sum(1 for _, t in h.alpha_duals if t.startswith("virtual:"))
        return replace(
            h,
            code=out.code,
            alpha=h.alpha | {name},
            alpha_duals=h.alpha_duals + ((name, f"virtual:{virtual}"),),
            asserted_k=None if h.asserted_k is None else h.asserted_k + 1,
        )
    virtual = sum(1 for _, t in h.beta_duals if t.startswith("virtual:"))
    return replace(
        h,
        code=out.code,
        beta=h.beta | {name},
        beta_duals=h.beta_duals + ((name, f"virtual:{virtual}"),),
        asserted_r=None if h.asserted_r is None else h.asserted_r + 1,
    )


def _destab_trivial(h: HeegaardDiagram, m: HeegaardMove) -> HeegaardDiagram:
    side = "alpha" if m.kind == "destab1" else "beta"
    cid = m.site
    if cid not in h.side_circles(side):
        raise MoveError(f"{cid} is not a {side} circle")
    comp = h.code.component(cid)
    if comp.events:
        raise MoveError(f"{cid} is not a split trivial sphere (has events)")
    if any(cid in (b.end_from[0], b.end_to[0]) for b in h.bands):
        raise MoveError(f"{cid} carries bands")
    if any(p.disk == cid for p in h.code.piercings) or any(
        ev.kind == "p" and ev.disk == cid for b in h.bands for ev in b.core
    ):
        raise MoveError(f"{cid} is pierced; not a trivial sphere")
    bld = Builder.from_diagram(h.as_banded())
    bld.delete_component(cid)
    out = bld.freeze_banded()
    if side == "alpha":
        return replace(
            h,
            code=out.code,
            alpha=h.alpha - {cid},
            alpha_duals=tuple((c, t) for c, t in h.alpha_duals if c != cid),
            asserted_k=None if h.asserted_k is None else h.asserted_k - 1,
        )
    return replace(
        h,
        code=out.code,
        beta=h.beta - {cid},
        beta_duals=tuple((c, t) for c, t in h.beta_duals if c != cid),
        asserted_r=None if h.asserted_r is None else h.asserted_r - 1,
    )


def _stab2(h: HeegaardDiagram, m: HeegaardMove) -> HeegaardDiagram:
    """Connected sum with (S2xS2, {x}xS2, S2x{y}): a 0-framed Hopf pair in
    the base, one alpha and one beta circle, one positive vertex."""
    bld = Builder.from_diagram(h.as_banded())
    names = list(m.names) + ["P", "Q", "SA", "SB", "SV"][len(m.names) :]
    p, q, sa, sb, sv = (bld.fresh_id(n) if n in bld.kind else n for n in names[:5])
    for cid in (p, q):
        bld.add_component(cid, FRAMED, 0)
    bld.add_crossing(1, bld.new_slot(p), bld.new_slot(q))
    bld.add_crossing(1, bld.new_slot(q), bld.new_slot(p))
    bld.add_component(sa, SURFACE)
    bld.add_component(sb, SURFACE)
    bld.add_piercing(sa, bld.new_slot(p), 1)
    bld.add_piercing(sb, bld.new_slot(q), 1)
    bld.add_vertex(bld.new_slot(sa), bld.new_slot(sb), 1, "ac", vid=sv)
    out = bld.freeze_banded()
    return replace(
        h,
        code=out.code,
        alpha=h.alpha | {sa},
        beta=h.beta | {sb},
        vertices=out.vertices,
        alpha_duals=h.alpha_duals + ((sa, p),),
    )


def _destab2(h: HeegaardDiagram, m: HeegaardMove) -> HeegaardDiagram:
    sa = m.site
    if sa not in h.alpha:
        raise MoveError(f"{sa} is not an alpha circle")
    duals = h.duals
    p = duals.get(sa)
    if p is None or p.startswith("virtual:"):
        raise MoveError(f"{sa} has no framed dual 2-handle")
    vs = [v for v in h.vertices if sa in (v.a[0], v.b[0])]
    if len(vs) != 1:
        raise MoveError(f"{sa} must meet exactly one vertex")
    v = vs[0]
    sb = v.b[0] if v.a[0] == sa else v.a[0]
    # the beta circle must be pierced once; its piercer is the Hopf partner
    qs = {pc.strand[0] for pc in h.code.piercings if pc.disk == sb}
    if len(qs) != 1:
        raise MoveError(f"{sb} is not pierced by exactly one 2-handle")
    q = qs.pop()
    comp_p, comp_q = h.code.component(p), h.code.component(q)
    if comp_p.framing != 0 or comp_q.framing != 0:
        raise MoveError("the dual pair is not 0-framed")
    between = [
        x
        for x in h.code.crossings
        if {x.over[0], x.under[0]} == {p, q}
    ]
    if len(between) != 2 or any(
        x.over[0] in (p, q) or x.under[0] in (p, q)
        for x in h.code.crossings
        if x not in between and (x.over[0] in (p, q) or x.under[0] in (p, q))
    ):
        raise MoveError("the dual pair is not a split Hopf pair")
    for cid, need in ((sa, 1), (sb, 1)):
        if len(h.code.component(cid).events) != need:
            raise MoveError(f"{cid} has extra events")
    if any(cid in (b.end_from[0], b.end_to[0]) for b in h.bands for cid in (sa, sb)):
        raise MoveError("the stabilization circles carry bands")
    piercers_a = {pc.strand[0] for pc in h.code.piercings if pc.disk == sa}
    if piercers_a != {p}:
        raise MoveError(f"{sa} is not the belt circle of {p}")
    bld = Builder.from_diagram(h.as_banded())
    for cid in (sa, sb, p, q):
        bld.delete_component(cid)
    out = bld.freeze_banded()
    return replace(
        h,
        code=out.code,
        alpha=h.alpha - {sa},
        beta=h.beta - {sb},
        vertices=out.vertices,
        alpha_duals=tuple((c, t) for c, t in h.alpha_duals if c != sa),
    )


def _heegaard_slide(h: HeegaardDiagram, m: HeegaardMove) -> HeegaardDiagram:
    """Cylinder sum realized as push-off + long band + rainbow band."""
    side = m.side
    circles = h.side_circles(side)
    if m.i not in circles or m.j not in circles:
        raise MoveError(f"{m.i} and {m.j} must both be {side} circles")
    groups = sphere_groups(h, side)
    gi = next(g for g in groups if m.i in g)
    gj = next(g for g in groups if m.j in g)
    if gi == gj:
        raise MoveError("cannot slide a sphere over itself")
    if any(v.a[0] in gj or v.b[0] in gj for v in h.vertices):
        raise MoveError("cannot slide over a sphere that meets the other side")

    from .codes import push_off_group

    slid, cmap = push_off_group(h.as_banded(), gj)
    copy = cmap[m.j]
    bld = Builder.from_diagram(slid)

    def emit_core(pos_events):
        out1, out2 = [], []
        from .codes import CoreEvent

        for ev in m.core:
            if ev.kind == "x":
                anchor = ev.target
                t1 = (
                    bld.new_slot(anchor[0])
                    if anchor[1] == "end"
                    else bld.new_slot(anchor[0], after=anchor[1])
                )
                t2 = bld.new_slot(anchor[0], after=t1[1])
                out1.append(CoreEvent("x", ev.sign, over=ev.over, target=t1))
                out2.append(CoreEvent("x", ev.sign, over=ev.over, target=t2))
            elif ev.kind == "p":
                out1.append(ev)
                out2.append(ev)
            else:
                raise MoveError("cylinder cores cross strands and disks only")
        return out1, out2

    core1, core2 = emit_core(m.core)
    a1 = bld.new_slot(m.i, after=m.at) if m.at else bld.new_slot(m.i)
    c1 = bld.new_slot(copy)
    bld.add_band(a1, c1, m.parity, tuple(core1), bid=bld.fresh_id("BL"))
    a2 = bld.new_slot(m.i, after=a1[1])
    c2 = bld.new_slot(copy, after=c1[1])
    bld.add_band(a2, c2, 0, tuple(core2), bid=bld.fresh_id("BR"))
    out = bld.freeze_banded()
    new_circles = frozenset(cmap.values())
    if side == "alpha":
        return _rebuild_sides(replace(h, alpha=h.alpha | new_circles), out)
    return _rebuild_sides(replace(h, beta=h.beta | new_circles), out)


# ---------------------------------------------------------------------------
# compilers


def surgery_kirby(h: HeegaardDiagram, side: str) -> DiagramCode:
    """Kirby diagram of the 2-surgery on the base along one side.

    The other side is deleted; surface circles become dotted circles; each
    band becomes a 0-framed 2-handle tracing the band boundary, whose ends
    pass once through the spanning disks of their host circles (sign - at
    the from-end, + at the to-end) and whose sides carry the doubled core
    pattern.
    """
    other = "beta" if side == "alpha" else "alpha"
    bu = delete_side(h, other)
    if bu.vertices:
        raise DiagramError("leftover vertices after deleting the other side")
    # every sphere group must be an honest 2-sphere
    groups = surface_groups(bu)
    resolved = band_surgery(bu, [b.id for b in bu.bands])
    total_lb = len(resolved.surface_components)
    for g in groups:
        sub_bands = [b for b in bu.bands if b.end_from[0] in g]
        sub = BandedUnlink(
            code=replace(
                bu.code,
                components=tuple(
                    c
                    for c in bu.code.components
                    if c.kind != SURFACE or c.id in g
                ),
            ),
            bands=tuple(sub_bands),
            vertices=(),
        )
        chi = len(g) - len(sub_bands) + len(
            band_surgery(sub, [b.id for b in sub_bands]).surface_components
        )
        if chi != 2:
            raise DiagramError(
                f"side {side} sphere {sorted(g)} has Euler characteristic {chi}, not 2"
            )

    bld = Builder.from_diagram(bu)
    for cid in list(bu.surface_components):
        bld.kind[cid] = DOTTED
    for band in sorted(bu.bands, key=lambda b: b.id):
        _band_to_two_handle(bld, band)
    out = bld.freeze_banded()
    code = out.code
    r3 = (h.code.r3 or 0) + total_lb
    return replace(code, r3=r3, name=f"{h.code.name}_{side}")


def _band_to_two_handle(bld: Builder, band: Band):
    """Replace one band by a 0-framed circle tracing its boundary."""
    del bld.bands[band.id]
    for other in bld.bands.values():
        if any(ev.kind == "bx" and ev.band == band.id for ev in other.core):
            raise DiagramError(
                "band-band crossings in a compiled side are not supported"
            )
    from .codes import _core_side_makers

    side1, side2, foreign = _core_side_makers(bld, band)
    if foreign:
        raise DiagramError("band-band crossings in a compiled side are not supported")
    nb = band.id
    bld.add_component(nb, FRAMED, 0)
    host_f, slot_f = band.end_from
    host_t, slot_t = band.end_to
    bld.remove_slot(band.end_from)
    bld.remove_slot(band.end_to)
    ntw = abs(band.half_twists)
    tw_pairs = []
    bld.add_piercing(host_f, bld.new_slot(nb), -1)
    for mk in side1:
        mk(bld.new_slot(nb), False)
    for _ in range(ntw):
        tw_pairs.append([bld.new_slot(nb), None])
    bld.add_piercing(host_t, bld.new_slot(nb), 1)
    for k in range(ntw - 1, -1, -1):
        tw_pairs[k][1] = bld.new_slot(nb)
    for mk in reversed(side2):
        mk(bld.new_slot(nb), True)
    sign = 1 if band.half_twists > 0 else -1
    for k, (r1, r2) in enumerate(tw_pairs):
        if k % 2 == 0:
            bld.add_crossing(sign, r1, r2)
        else:
            bld.add_crossing(sign, r2, r1)


def one_surgery(d: DiagramCode, circle: str, framing: int) -> DiagramCode:
    """Surgery on an embedded circle: frame it (0 or 1) and give it a
    0-framed meridian; the dotted meridian of the intermediate cancelling
    pair has already been traded for the 2-handle."""
    if framing not in (0, 1):
        raise DiagramError("circle surgeries admit exactly the framings 0 and 1")
    c = d.component(circle)
    if c.kind != FRAMED:
        raise DiagramError(
            f"{circle} must be present as a framed placeholder for the curve"
        )
    bld = Builder.from_diagram(d)
    bld.framing[circle] = framing
    mer = bld.fresh_id(f"{circle}m")
    bld.add_component(mer, FRAMED, 0)
    bld.add_crossing(1, bld.new_slot(mer), bld.new_slot(circle))
    bld.add_crossing(1, bld.new_slot(circle), bld.new_slot(mer))
    return bld.freeze()


def double_kirby(d: DiagramCode) -> DiagramCode:
    """Kirby diagram of the double: a 0-framed meridian for every 2-handle;
    the implicit 3-handle count equals the number of 1-handles."""
    if any(c.kind == SURFACE for c in d.components):
        raise DiagramError("double_kirby needs a 2-handlebody diagram")
    bld = Builder.from_diagram(d)
    for c in d.by_kind(FRAMED):
        mer = bld.fresh_id(f"{c.id}m")
        bld.add_component(mer, FRAMED, 0)
        bld.add_crossing(1, bld.new_slot(mer), bld.new_slot(c.id))
        bld.add_crossing(1, bld.new_slot(c.id), bld.new_slot(mer))
    bld.r3 = len(d.by_kind(DOTTED))
    return bld.freeze()


def handlebody_heegaard(d: DiagramCode) -> HeegaardDiagram:
    """Heegaard diagram of (the 4-manifold) x interval: the double plus one
    alpha circle parallel to each meridian, bounding the evident disk pair."""
    dd = double_kirby(d)
    bld = Builder.from_diagram(dd)
    alpha = []
    duals = []
    for c in d.by_kind(FRAMED):
        a = bld.fresh_id(f"{c.id}a")
        bld.add_component(a, SURFACE)
        bld.add_piercing(a, bld.new_slot(c.id), 1)
        alpha.append(a)
        duals.append((a, c.id))
    out = bld.freeze_banded()
    return HeegaardDiagram(
        code=out.code,
        alpha=frozenset(alpha),
        beta=frozenset(),
        asserted_k=len(d.by_kind(DOTTED)),
        alpha_duals=tuple(duals),
    )


def twisted_double_heegaard(
    d: DiagramCode, beta: BandedUnlink, cross: tuple[Vertex, ...] = ()
) -> HeegaardDiagram:
    """(double, belt spheres, their image under a boundary diffeomorphism).

    ``beta`` must be a banded unlink whose non-surface part is exactly the
    double of ``d``; its surface circles and bands become the beta side.
    Alpha circles are added as in handlebody_heegaard (named <2-handle>a).
    """
    from .ddc import serialize

    if serialize(strip_surfaces(beta)) != serialize(
        replace(double_kirby(d), name=beta.code.name)
    ):
        raise DiagramError("beta data is not drawn over the double of the input")
    bld = Builder.from_diagram(beta)
    alpha, duals = [], []
    for c in d.by_kind(FRAMED):
        a = bld.fresh_id(f"{c.id}a")
        bld.add_component(a, SURFACE)
        bld.add_piercing(a, bld.new_slot(c.id), 1)
        alpha.append(a)
        duals.append((a, c.id))
    for v in cross:
        bld.vertices[v.id] = v
    out = bld.freeze_banded()
    return HeegaardDiagram(
        code=out.code,
        alpha=frozenset(alpha),
        beta=frozenset(beta.surface_components),
        bands=out.bands,
        vertices=out.vertices,
        asserted_k=len(d.by_kind(DOTTED)),
        alpha_duals=tuple(duals),
    )


def s2bundles_to_double(d: DiagramCode) -> HeegaardDiagram:
    """Cobordism from a connected sum of sphere bundles to the double:
    meridians are added, then every dotted circle is re-encoded as a beta
    sphere (the strands that pierced it keep their passages)."""
    dd = double_kirby(d)
    bld = Builder.from_diagram(dd)
    beta = []
    for c in dd.by_kind(DOTTED):
        bld.kind[c.id] = SURFACE
        beta.append(c.id)
    bld.r3 = 0
    out = bld.freeze_banded()
    return HeegaardDiagram(
        code=out.code,
        alpha=frozenset(),
        beta=frozenset(beta),
    )


def gluck_cobordism(x: DiagramCode, k: BandedUnlink) -> HeegaardDiagram:
    """Heegaard diagram of the cobordism from X to its Gluck twist along k.

    Base: X plus a 1-framed/0-framed Hopf pair.  Alpha: the fiber sphere of
    the new summand (belt circle of the 1-framed handle).  Beta: k joined by
    a band to a second parallel fiber.
    """
    from .ddc import serialize

    if serialize(strip_surfaces(k)) != serialize(replace(x, name=k.code.name)):
        raise DiagramError("the 2-knot data is not drawn over the input diagram")
    groups = surface_groups(k)
    if len(groups) != 1:
        raise DiagramError("gluck_cobordism needs a single 2-knot")
    from .codes import surface_euler_characteristic

    if surface_euler_characteristic(k) != 2 or k.vertices:
        raise DiagramError("the Gluck twist needs an embedded 2-sphere")

    bld = Builder.from_diagram(k)
    g1 = bld.add_component(bld.fresh_id("G"), FRAMED, 1)
    g2 = bld.add_component(bld.fresh_id("G"), FRAMED, 0)
    bld.add_crossing(1, bld.new_slot(g1), bld.new_slot(g2))
    bld.add_crossing(1, bld.new_slot(g2), bld.new_slot(g1))
    fa = bld.add_component(bld.fresh_id("F"), SURFACE)
    bld.add_piercing(fa, bld.new_slot(g1), 1)
    fb = bld.add_component(bld.fresh_id("F"), SURFACE)
    bld.add_piercing(fb, bld.new_slot(g1), 1)
    anchor_circle = min(groups[0])
    bld.add_band(
        bld.new_slot(anchor_circle),
        bld.new_slot(fb),
        0,
        (),
        bid=bld.fresh_id("Bsum"),
    )
    out = bld.freeze_banded()
    return HeegaardDiagram(
        code=replace(out.code, name=f"{x.name}_gluck"),
        alpha=frozenset({fa}),
        beta=frozenset({fb}) | frozenset(k.surface_components),
        bands=out.bands,
        vertices=(),
        alpha_duals=((fa, g1),),
    )


# ---------------------------------------------------------------------------
# counts, Euler characteristics, homology


@dataclass(frozen=True)
class FiveManifoldClass:
    kind: str  # cobordism | threehandlebody | closed
    euler: int
    k: int
    alpha_count: int
    beta_count: int
    r: int


def euler_class(h: HeegaardDiagram, kind: str) -> FiveManifoldClass:
    a = len(sphere_groups(h, "alpha"))
    b = len(sphere_groups(h, "beta"))
    kind = kind.lower()
    if kind in ("cobordism", "twohandlebody"):
        k = h.asserted_k or 0
        chi = 1 - k + a
        return FiveManifoldClass("cobordism", chi, k, a, b, h.asserted_r or 0)
    if h.asserted_k is None:
        raise DiagramError("this kind needs asserted_k (Sigma(alpha) recognition)")
    k = h.asserted_k
    if kind == "threehandlebody":
        return FiveManifoldClass(kind, 1 - k + a - b, k, a, b, h.asserted_r or 0)
    if kind == "closed":
        if h.asserted_r is None:
            raise DiagramError("closed diagrams need asserted_r")
        r = h.asserted_r
        chi = 1 - k + a - b + r - 1
        if chi != 0:
            raise DiagramError(f"closed 5-manifold must have chi 0, got {chi}")
        return FiveManifoldClass(kind, chi, k, a, b, r)
    raise DiagramError(f"unknown kind {kind!r}")


def _boundary_maps(h: HeegaardDiagram):
    """d2 (1-handles x alpha) and d3 (alpha x beta) from the diagram."""
    agroups = sphere_groups(h, "alpha")
    bgroups = sphere_groups(h, "beta")
    dotted = sorted(c.id for c in h.code.by_kind(DOTTED))
    virtuals = sorted(
        {t for _, t in h.alpha_duals if t.startswith("virtual:")}
    )
    rows = dotted + virtuals
    ridx = {r: i for i, r in enumerate(rows)}
    pier: dict[tuple[str, str], int] = {}
    for p in h.code.piercings:
        if p.disk in ridx:
            key = (p.disk, p.strand[0])
            pier[key] = pier.get(key, 0) + p.sign
    d2 = [[0] * len(agroups) for _ in rows]
    for j, g in enumerate(agroups):
        target = group_dual(h, g)
        if target is None:
            continue
        if target.startswith("virtual:"):
            d2[ridx[target]][j] = 1
        else:
            for i, dcirc in enumerate(dotted):
                d2[i][j] = pier.get((dcirc, target), 0)
    circle_group_a = {c: i for i, g in enumerate(agroups) for c in g}
    circle_group_b = {c: i for i, g in enumerate(bgroups) for c in g}
    d3 = [[0] * len(bgroups) for _ in agroups]
    for v in h.vertices:
        a_arm, b_arm = (v.a, v.b) if v.a[0] in circle_group_a else (v.b, v.a)
        d3[circle_group_a[a_arm[0]]][circle_group_b[b_arm[0]]] += v.sign
    return rows, agroups, bgroups, IntMatrix(d2), IntMatrix(d3)


def homology_5manifold(
    h: HeegaardDiagram, kind: str, d4: IntMatrix | None = None
) -> list[AbelianGroup]:
    """H_0..H_5 of the capped 5-manifold from the handle chain complex."""
    kind = kind.lower()
    if kind not in ("threehandlebody", "closed"):
        raise DiagramError("homology is computed for 3-handlebodies and closed kinds")
    rows, agroups, bgroups, d2, d3 = _boundary_maps(h)
    if h.asserted_k is None:
        raise DiagramError("homology needs asserted_k")
    if h.asserted_k != len(rows):
        raise DiagramError(
            f"asserted_k={h.asserted_k} but the diagram carries {len(rows)} "
            "1-handles (dotted circles plus virtual duals)"
        )
    dims = [1, len(rows), len(agroups), len(bgroups)]
    maps = {1: IntMatrix.zero(1, len(rows)), 2: d2, 3: d3}
    if kind == "threehandlebody":
        hs = homology_of_complex(dims, maps)
        hs += [AbelianGroup(0)] * (6 - len(hs))
        return hs
    r = h.asserted_r
    if r is None:
        raise DiagramError("closed homology needs asserted_r")
    if d4 is None:
        tokens = sorted(t for _, t in h.beta_duals if t.startswith("virtual:"))
        if r != len(tokens):
            if r > 0:
                raise DiagramError(
                    "closed diagrams with unpaired 4-handles need an explicit d4"
                )
            tokens = []
        circle_group_b = {c: i for i, g in enumerate(bgroups) for c in g}
        bd = dict(h.beta_duals)
        cols = []
        for t in tokens:
            col = [0] * len(bgroups)
            circle = next(c for c, tt in h.beta_duals if tt == t)
            col[circle_group_b[circle]] = 1
            cols.append(col)
        d4 = IntMatrix(
            [[cols[j][i] for j in range(len(cols))] for i in range(len(bgroups))]
        ) if cols else IntMatrix.zero(len(bgroups), r)
    dims += [r, 1]
    maps[4] = d4
    maps[5] = IntMatrix.zero(r, 1)
    return homology_of_complex(dims, maps)


def pi1_heegaard(h: HeegaardDiagram) -> Presentation:
    """pi1 of the 5-manifold equals pi1 of the base 4-manifold."""
    base = replace(
        h.code,
        components=tuple(c for c in h.code.components if c.kind != SURFACE),
    )
    # surface piercings reference surface disks; drop them for the base view
    base = replace(
        base,
        piercings=tuple(
            p
            for p in base.piercings
            if h.code.component(p.disk).kind != SURFACE
        ),
    )
    return pi1_presentation(base)
