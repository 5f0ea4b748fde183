"""Heegaard diagram file format (.hgd).

A DDC block for the base plus ``alpha:`` / ``beta:`` sub-blocks holding the
two sphere links, ``xvertex`` lines for their intersections, ``dual`` lines
pairing alpha spheres with the 2-handles they cancel, and an ``assert``
line with the k/r recognition assertions.  Serialization is canonical in
the same sense as the DDC format.
"""

from __future__ import annotations

from dataclasses import replace

from .codes import SURFACE, DiagramError
from .ddc import DdcSyntaxError, canonicalize, parse_ddc, serialize
from .heegaard import HeegaardDiagram, validate_heegaard

_SECTIONS = ("base:", "alpha:", "beta:")


def parse_hgd(text: str) -> HeegaardDiagram:
    name = "heegaard"
    asserted_k = None
    asserted_r = None
    duals: list[tuple[str, str]] = []
    section = "base"
    side_of_component: dict[str, str] = {}
    body: list[str] = []

    for ln, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        toks = stripped.split()
        kw = toks[0]
        if kw == "heegaard":
            if len(toks) != 2:
                raise DdcSyntaxError("heegaard line wants a single name", ln)
            name = toks[1]
        elif stripped in _SECTIONS:
            section = stripped[:-1]
        elif kw == "assert":
            for tok in toks[1:]:
                if tok.startswith("k="):
                    asserted_k = None if tok[2:] == "?" else int(tok[2:])
                elif tok.startswith("r="):
                    asserted_r = None if tok[2:] == "?" else int(tok[2:])
                else:
                    raise DdcSyntaxError(f"bad assertion {tok!r}", ln)
        elif kw == "dual":
            if len(toks) != 3:
                raise DdcSyntaxError("dual line is: dual <circle> <target>", ln)
            duals.append((toks[1], toks[2]))
        elif kw == "xvertex":
            body.append(" ".join(["vertex"] + toks[1:]))
        else:
            if kw == "component":
                if section in ("alpha", "beta"):
                    if len(toks) < 3 or toks[2] != "surface":
                        raise DdcSyntaxError(
                            f"{section} components must be surface kind", ln
                        )
                    side_of_component[toks[1]] = section
                elif len(toks) >= 3 and toks[2] == "surface":
                    raise DdcSyntaxError(
                        "surface components belong in alpha: or beta: sections", ln
                    )
            body.append(stripped)

    from .codes import as_banded

    parsed = parse_ddc("\n".join([f"diagram {name}"] + body) + "\n")
    bu = as_banded(parsed)
    alpha = frozenset(c for c, s in side_of_component.items() if s == "alpha")
    beta = frozenset(c for c, s in side_of_component.items() if s == "beta")
    h = HeegaardDiagram(
        code=bu.code,
        alpha=alpha,
        beta=beta,
        bands=bu.bands,
        vertices=bu.vertices,
        asserted_k=asserted_k,
        asserted_r=asserted_r,
        alpha_duals=tuple(sorted((c, t) for c, t in duals if c in alpha)),
        beta_duals=tuple(sorted((c, t) for c, t in duals if c in beta)),
    )
    problems = [
        p for p in validate_heegaard(h) if "unreferenced" not in p
    ]
    if problems:
        raise DiagramError("; ".join(problems))
    return h


def serialize_hgd(h: HeegaardDiagram) -> str:
    bu = canonicalize(h.as_banded())
    code = bu.code
    lines = [f"heegaard {code.name}"]
    k = "?" if h.asserted_k is None else str(h.asserted_k)
    r = "?" if h.asserted_r is None else str(h.asserted_r)
    lines.append(f"assert k={k} r={r}")
    for cid, target in sorted(h.alpha_duals) + sorted(h.beta_duals):
        lines.append(f"dual {cid} {target}")
    base_lines, alpha_lines, beta_lines, vertex_lines = [], [], [], []
    full = serialize(bu).splitlines()
    for raw in full[1:]:
        toks = raw.split()
        if toks[0] == "component":
            cid = toks[1]
            if cid in h.alpha:
                alpha_lines.append(raw)
            elif cid in h.beta:
                beta_lines.append(raw)
            else:
                base_lines.append(raw)
        elif toks[0] == "band":
            host = toks[2].split("=", 1)[1].split(".", 1)[0]
            (alpha_lines if host in h.alpha else beta_lines).append(raw)
        elif toks[0] == "vertex":
            vertex_lines.append("xvertex " + raw.split(" ", 1)[1])
        elif toks[0] == "flag":
            continue
        else:
            base_lines.append(raw)
    lines.append("base:")
    lines.extend(base_lines)
    lines.append("alpha:")
    lines.extend(alpha_lines)
    lines.append("beta:")
    lines.extend(beta_lines)
    lines.extend(vertex_lines)
    return "\n".join(lines) + "\n"


def hgd_equal(a: HeegaardDiagram, b: HeegaardDiagram) -> bool:
    return serialize_hgd(a) == serialize_hgd(b)
