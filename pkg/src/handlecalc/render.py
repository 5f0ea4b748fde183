"""Schematic rendering: abstract graphs for clients, figures for reports.

The code carries no planar embedding, so drawings are schematic: components
sit on a circle of circles, event markers in traversal order around each,
and chords for crossings/piercings/bands/vertices.  Colors follow the usual
figure convention: base black, alpha side red, beta side blue.
"""

from __future__ import annotations

import math

from .codes import BandedUnlink, DiagramCode, DOTTED, FRAMED, SURFACE
from .heegaard import HeegaardDiagram


def render_graph(state) -> dict:
    """Abstract node/edge description of a diagram (no coordinates)."""
    if isinstance(state, HeegaardDiagram):
        bu = state.as_banded()
        side = lambda cid: state.side_of(cid)  # noqa: E731
    elif isinstance(state, BandedUnlink):
        bu = state
        side = lambda cid: "base" if state.code.component(cid).kind != SURFACE else "surface"  # noqa: E731
    else:
        bu = BandedUnlink(state, (), ())
        side = lambda cid: "base"  # noqa: E731
    nodes = []
    for c in bu.code.components:
        nodes.append(
            {
                "id": c.id,
                "kind": c.kind,
                "framing": c.framing,
                "slots": list(c.events),
                "side": side(c.id),
            }
        )
    edges = []
    for x in bu.code.crossings:
        edges.append(
            {
                "id": x.id,
                "kind": "crossing",
                "sign": x.sign,
                "ends": [list(x.over), list(x.under)],
            }
        )
    for p in bu.code.piercings:
        edges.append(
            {
                "id": p.id,
                "kind": "piercing",
                "sign": p.sign,
                "disk": p.disk,
                "ends": [list(p.strand)],
            }
        )
    for b in bu.bands:
        edges.append(
            {
                "id": b.id,
                "kind": "band",
                "twists": b.half_twists,
                "core_events": len(b.core),
                "ends": [list(b.end_from), list(b.end_to)],
            }
        )
    for v in bu.vertices:
        edges.append(
            {
                "id": v.id,
                "kind": "vertex",
                "sign": v.sign,
                "marking": v.marking,
                "ends": [list(v.a), list(v.b)],
            }
        )
    return {"nodes": nodes, "edges": edges}


_SIDE_COLORS = {"base": "black", "alpha": "tab:red", "beta": "tab:blue", "surface": "tab:green"}
_EDGE_COLORS = {"crossing": "0.45", "piercing": "tab:purple", "band": "tab:orange", "vertex": "tab:red"}


def draw_figure(state, path: str, title: str | None = None):
    """Write a schematic PNG/SVG of the diagram's render graph."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    graph = render_graph(state)
    nodes = graph["nodes"]
    fig, ax = plt.subplots(figsize=(6, 6))
    n = max(len(nodes), 1)
    big_r = 3.0 if n > 1 else 0.0
    centers = {}
    slot_pos = {}
    for i, node in enumerate(nodes):
        angle = 2 * math.pi * i / n
        cx, cy = big_r * math.cos(angle), big_r * math.sin(angle)
        centers[node["id"]] = (cx, cy)
        color = _SIDE_COLORS.get(node["side"], "black")
        style = "dashed" if node["kind"] == DOTTED else "solid"
        circ = plt.Circle((cx, cy), 1.0, fill=False, color=color, linestyle=style, lw=1.6)
        ax.add_patch(circ)
        label = node["id"]
        if node["kind"] == FRAMED:
            label += f" ({node['framing']})"
        elif node["kind"] == DOTTED:
            label += " (dot)"
        ax.annotate(label, (cx, cy), ha="center", va="center", fontsize=8, color=color)
        slots = node["slots"]
        for k, s in enumerate(slots):
            sa = 2 * math.pi * k / max(len(slots), 1)
            slot_pos[(node["id"], s)] = (cx + math.cos(sa), cy + math.sin(sa))

    def pos_of(end):
        key = (end[0], end[1]) if len(end) > 1 else None
        if key in slot_pos:
            return slot_pos[key]
        return centers.get(end[0], (0, 0))

    for e in graph["edges"]:
        color = _EDGE_COLORS.get(e["kind"], "gray")
        ends = e["ends"]
        if e["kind"] == "piercing":
            a = pos_of(ends[0])
            b = centers.get(e["disk"], (0, 0))
        elif len(ends) == 2:
            a, b = pos_of(ends[0]), pos_of(ends[1])
        else:
            continue
        ax.annotate(
            "",
            xy=b,
            xytext=a,
            arrowprops=dict(
                arrowstyle="-",
                color=color,
                lw=1.0,
                linestyle="dotted" if e["kind"] == "vertex" else "solid",
                shrinkA=0,
                shrinkB=0,
            ),
        )
        mx, my = (a[0] + b[0]) / 2, (a[1] + b[1]) / 2
        mark = e["id"]
        if "sign" in e:
            mark += "+" if e["sign"] > 0 else "-"
        ax.annotate(mark, (mx, my), fontsize=6, color=color)

    ax.set_aspect("equal")
    ax.set_xlim(-big_r - 1.8, big_r + 1.8)
    ax.set_ylim(-big_r - 1.8, big_r + 1.8)
    ax.axis("off")
    if title:
        ax.set_title(title, fontsize=10)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path
