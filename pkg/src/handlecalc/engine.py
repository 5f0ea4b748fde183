"""Move scripts, invariant watching, bounded simplification, recognition.

Scripts are line-oriented ``.kms`` files: one move directive per line, plus
``input``/``kind`` headers and ``expect`` assertions.  Traces record the
canonical serialization after every step, so identical scripts on identical
inputs produce byte-identical traces.
"""

from __future__ import annotations

import heapq
import os
from dataclasses import dataclass, field, replace

from .bandmoves import BandMove, apply_band, applicable_band_moves
from .codes import (
    BandedUnlink,
    CoreEvent,
    DOTTED,
    DiagramCode,
    DiagramError,
    FRAMED,
    SURFACE,
    surface_euler_characteristic,
)
from .ddc import parse_ddc, serialize
from .heegaard import (
    HeegaardDiagram,
    HeegaardMove,
    apply_heegaard,
    euler_class,
    gluck_cobordism,
    handlebody_heegaard,
    homology_5manifold,
    one_surgery,
    pi1_heegaard,
    s2bundles_to_double,
    strip_surfaces,
    double_kirby,
    surgery_kirby,
)
from .hgd import parse_hgd, serialize_hgd
from .invariants import abelianization, homology_4manifold, pi1_presentation
from .isotopy import reducing_isotopies
from .kirby import KirbyMove, MoveError, annihilable_pairs, apply_kirby

State = "DiagramCode | BandedUnlink | HeegaardDiagram"


def load_diagram(path: str):
    text = open(path, encoding="utf-8").read()
    if path.endswith(".hgd"):
        return parse_hgd(text)
    return parse_ddc(text)


def state_text(state) -> str:
    if isinstance(state, HeegaardDiagram):
        return serialize_hgd(state)
    return serialize(state)


def canonical_state(state):
    """Renumber slots and sort parts so scripts can name sites stably."""
    from .ddc import canonicalize

    if isinstance(state, HeegaardDiagram):
        bu = canonicalize(state.as_banded())
        return replace(state, code=bu.code, bands=bu.bands, vertices=bu.vertices)
    return canonicalize(state)


# ---------------------------------------------------------------------------
# directive parsing


def _opts(tokens):
    """key=value and bare-flag tokens to a dict; core=( ... ) handled."""
    out = {}
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok.startswith("core=("):
            group = []
            if tok != "core=(":
                raise DiagramError("core=( wants a space after the paren")
            i += 1
            while i < len(tokens) and tokens[i] != ")":
                group.append(tokens[i])
                i += 1
            if i == len(tokens):
                raise DiagramError("unterminated core=( ... )")
            out["core"] = group
        elif "=" in tok:
            k, v = tok.split("=", 1)
            out[k] = v
        else:
            out[tok] = True
        i += 1
    return out


def _sign_of(v: str) -> int:
    return {"+": 1, "+1": 1, "-": -1, "-1": -1}[v]


def _slotref_of(v: str):
    c, s = v.split(".", 1)
    return (c, s)


def _parse_core_specs(tokens):
    """Core records for moves: targets are insertion anchors (comp@slot)."""
    out = []
    for tok in tokens:
        parts = tok.split(":")
        if parts[0] == "x" and len(parts) == 4:
            comp, anchor = (
                parts[3].split("@", 1) if "@" in parts[3] else (parts[3], "end")
            )
            out.append(
                CoreEvent(
                    "x",
                    _sign_of(parts[1]),
                    over=parts[2] == "over",
                    target=(comp, anchor),
                )
            )
        elif parts[0] == "p" and len(parts) == 3:
            out.append(CoreEvent("p", _sign_of(parts[1]), disk=parts[2]))
        else:
            raise DiagramError(f"bad core record {tok!r}")
    return tuple(out)


def parse_kirby_directive(tokens) -> KirbyMove:
    sub = tokens[0]
    if sub in ("slide11", "slide21", "slide22"):
        o = _opts(tokens[1:])
        return KirbyMove(
            sub,
            i=o.get("i"),
            j=o.get("j"),
            at=o.get("at"),
            jat=o.get("jat"),
            flip=bool(o.get("flip")),
            core=_parse_core_specs(o.get("core", ())),
        )
    if sub in ("pair12", "pair23"):
        action = tokens[1]
        o = _opts(tokens[2:])
        names = tuple(o.get("names", "").split(",")) if o.get("names") else ()
        if action == "create":
            return KirbyMove(
                f"{sub}_create", framing=int(o.get("framing", 0)), names=names
            )
        if action == "annihilate":
            return KirbyMove(f"{sub}_annihilate", site=o.get("site"))
        raise DiagramError(f"unknown {sub} action {action!r}")
    if sub == "blowup":
        o = _opts(tokens[1:])
        names = tuple(o.get("names", "").split(",")) if o.get("names") else ()
        return KirbyMove("blowup", sign=_sign_of(o.get("sign", "+")), names=names)
    if sub == "blowdown":
        o = _opts(tokens[1:])
        return KirbyMove("blowdown", site=o.get("site"))
    if sub == "dotzero":
        o = _opts(tokens[1:])
        return KirbyMove("dotzero", site=o.get("site"))
    if sub == "isotopy":
        rewrite = tokens[1]
        args = tuple(_slotref_of(a) if "." in a else _maybe_int(a) for a in tokens[2:])
        return KirbyMove("isotopy", rewrite=rewrite, args=args)
    raise DiagramError(f"unknown kirby directive {sub!r}")


def _maybe_int(tok):
    try:
        return int(tok)
    except ValueError:
        return tok


def parse_band_directive(tokens) -> BandMove:
    sub = tokens[0]
    o = _opts(tokens[1:])
    common = dict(
        band=o.get("b") or o.get("band"),
        over=o.get("over"),
        on=o.get("on"),
        end=o.get("end", "from"),
        pos=int(o.get("pos", 0)),
        sign=_sign_of(o.get("sign", "+")),
        remove=bool(o.get("remove")),
        flip=bool(o.get("flip")),
        vertex=o.get("v") or o.get("vertex"),
        arm=o.get("arm", "a"),
        anchor_j=o.get("anchor"),
    )
    if sub == "isotopy":
        rewrite = tokens[1]
        args = tuple(
            _slotref_of(a) if "." in a else _maybe_int(a) for a in tokens[2:]
        )
        return BandMove("isotopy", rewrite=rewrite, args=args)
    if sub == "cup":
        names = tuple(o.get("names", "").split(",")) if o.get("names") else ()
        return BandMove(
            "cup",
            on=o.get("on"),
            at=o.get("at"),
            twists=int(o.get("twists", 0)),
            core=_parse_core_specs(o.get("core", ())),
            names=names,
        )
    if sub in (
        "cap",
        "slide",
        "swim",
        "handleslide",
        "handleswim",
        "dottedslide",
        "vertexslide",
        "vertexpass",
        "vertexswim",
    ):
        return BandMove(sub, **common)
    raise DiagramError(f"unknown band directive {sub!r}")


def parse_heegaard_directive(tokens) -> HeegaardMove:
    sub = tokens[0]
    o = _opts(tokens[1:])
    names = tuple(o.get("names", "").split(",")) if o.get("names") else ()
    if sub in ("stab1", "stab2", "stab3"):
        return HeegaardMove(sub, names=names)
    if sub in ("destab1", "destab2", "destab3"):
        return HeegaardMove(sub, site=o.get("site"))
    if sub == "slide":
        return HeegaardMove(
            "slide",
            side=o.get("side", "alpha"),
            i=o.get("i"),
            j=o.get("j"),
            at=o.get("at"),
            jat=o.get("jat"),
            parity=int(o.get("parity", 0)),
            core=_parse_core_specs(o.get("core", ())),
        )
    raise DiagramError(f"unknown heegaard directive {sub!r}")


NON_PRESERVING_KIRBY = {"blowup", "blowdown", "dotzero"}


@dataclass(frozen=True)
class Directive:
    line: str
    family: str  # kirby | band | heegaard | compile
    payload: object

    @property
    def preserving(self) -> bool:
        if self.family == "compile":
            return False
        if self.family == "kirby":
            return self.payload.kind not in NON_PRESERVING_KIRBY
        return True


def parse_directive(line: str) -> Directive:
    tokens = line.split()
    family = tokens[0]
    if family == "kirby":
        return Directive(line, "kirby", parse_kirby_directive(tokens[1:]))
    if family == "band":
        return Directive(line, "band", parse_band_directive(tokens[1:]))
    if family == "heegaard":
        return Directive(line, "heegaard", parse_heegaard_directive(tokens[1:]))
    if family == "compile":
        return Directive(line, "compile", tuple(tokens[1:]))
    raise DiagramError(f"unknown directive {family!r}")


def apply_directive(state, d: Directive):
    return canonical_state(_apply_directive_raw(state, d))


def _apply_directive_raw(state, d: Directive):
    if d.family == "kirby":
        if isinstance(state, HeegaardDiagram):
            return apply_heegaard(state, HeegaardMove("kirby", kirby_move=d.payload))
        return apply_kirby(state, d.payload)
    if d.family == "band":
        if isinstance(state, HeegaardDiagram):
            side = _band_move_side(state, d.payload)
            return apply_heegaard(
                state, HeegaardMove("isotopy", side=side, band_move=d.payload)
            )
        if isinstance(state, DiagramCode):
            raise MoveError("band moves need a banded unlink or Heegaard diagram")
        return apply_band(state, d.payload)
    if d.family == "heegaard":
        if not isinstance(state, HeegaardDiagram):
            raise MoveError("heegaard moves need a Heegaard diagram")
        return apply_heegaard(state, d.payload)
    if d.family == "compile":
        return _compile(state, d.payload)
    raise AssertionError(d.family)


def _band_move_side(h: HeegaardDiagram, bm: BandMove) -> str:
    if bm.band is not None:
        band = next((b for b in h.bands if b.id == bm.band), None)
        if band is not None:
            return h.side_of(band.end_from[0])
    if bm.on is not None and h.side_of(bm.on) != "base":
        return h.side_of(bm.on)
    return "alpha"


def _compile(state, args: tuple[str, ...]):
    what = args[0]
    o = _opts(list(args[1:]))
    if what == "surgery":
        if not isinstance(state, HeegaardDiagram):
            raise MoveError("compile surgery needs a Heegaard diagram")
        return surgery_kirby(state, o.get("side", "alpha"))
    if what == "double":
        return double_kirby(_as_code(state))
    if what == "heegaard":
        return handlebody_heegaard(_as_code(state))
    if what == "s2double":
        return s2bundles_to_double(_as_code(state))
    if what == "one-surgery":
        return one_surgery(_as_code(state), o.get("circle"), int(o.get("framing", 0)))
    if what == "gluck":
        if not isinstance(state, BandedUnlink):
            raise MoveError("compile gluck needs a banded unlink over the base")
        return gluck_cobordism(strip_surfaces(state), state)
    if what == "boundary":
        from .kirby import boundary_diagram

        return boundary_diagram(_as_code(state))
    raise DiagramError(f"unknown compile target {what!r}")


def _as_code(state) -> DiagramCode:
    if isinstance(state, HeegaardDiagram):
        raise MoveError("this compiler needs a Kirby diagram, not a Heegaard one")
    if isinstance(state, BandedUnlink):
        if state.surface_components:
            raise MoveError("this compiler needs a Kirby diagram without surfaces")
        return state.code
    return state


# ---------------------------------------------------------------------------
# invariant evaluation


def canonical_recognize(state) -> str:
    """Exact pattern match of canonical small diagrams; never guesses."""
    code = state.code if isinstance(state, (BandedUnlink, HeegaardDiagram)) else state
    comps = code.components
    if not comps:
        return "EmptyS4orB5"
    if code.crossings or code.piercings:
        pass
    if all(c.kind == DOTTED and not c.events for c in comps):
        return f"DottedUnlink({len(comps)})"
    if all(
        c.kind == FRAMED and c.framing == 0 and not c.events for c in comps
    ):
        return f"FramedZeroUnlink({len(comps)})"
    hopf = _hopf_pairs(code)
    if hopf is not None:
        return f"HopfPairs({hopf[0]},{hopf[1]})"
    return "Unknown"


def _hopf_pairs(code: DiagramCode):
    if code.piercings or any(c.kind != FRAMED for c in code.components):
        return None
    partners: dict[str, dict[str, int]] = {}
    for x in code.crossings:
        a, b = x.over[0], x.under[0]
        if a == b:
            return None
        partners.setdefault(a, {}).setdefault(b, 0)
        partners.setdefault(b, {}).setdefault(a, 0)
        partners[a][b] += x.sign
        partners[b][a] += x.sign
    seen = set()
    m = n = 0
    for c in code.components:
        if c.id in seen:
            continue
        links = partners.get(c.id, {})
        if len(links) != 1:
            return None
        other, total = next(iter(links.items()))
        if other in seen or abs(total) != 2:
            return None
        oc = code.component(other)
        if len(partners.get(other, {})) != 1:
            return None
        framings = {c.framing, oc.framing}
        if 0 not in framings:
            return None
        odd = (c.framing + oc.framing) % 2
        if odd:
            n += 1
        else:
            m += 1
        seen.add(c.id)
        seen.add(other)
    if len(seen) != len(code.components):
        return None
    return (m, n)


INVARIANT_KEYS = (
    "h0", "h1", "h2", "h3", "h4", "h5",
    "pi1ab", "recognize", "components", "crossings", "bands", "chi", "euler",
    "schi",
)


def evaluate_invariant(state, key: str, kind: str = "threehandlebody") -> str:
    if key == "recognize":
        return canonical_recognize(state)
    if isinstance(state, HeegaardDiagram):
        if key.startswith("h") and key[1:].isdigit():
            return str(homology_5manifold(state, kind)[int(key[1:])])
        if key == "pi1ab":
            return str(abelianization(pi1_heegaard(state)))
        if key == "euler" or key == "chi":
            return str(euler_class(state, kind).euler)
        if key == "components":
            return str(len(state.code.components))
        if key == "crossings":
            return str(len(state.code.crossings))
        if key == "bands":
            return str(len(state.bands))
        raise DiagramError(f"unknown invariant {key!r}")
    code = state.code if isinstance(state, BandedUnlink) else state
    if key.startswith("h") and key[1:].isdigit():
        idx = int(key[1:])
        closed = code.r3 is not None
        hs = homology_4manifold(code, closed=closed)
        if idx >= len(hs):
            return "0"
        return str(hs[idx])
    if key == "pi1ab":
        return str(abelianization(pi1_presentation(code)))
    if key == "components":
        return str(len(code.components))
    if key == "crossings":
        return str(len(code.crossings))
    if key == "bands":
        return str(len(state.bands)) if isinstance(state, BandedUnlink) else "0"
    if key == "schi":
        if not isinstance(state, BandedUnlink):
            raise DiagramError("schi needs a banded unlink")
        return str(surface_euler_characteristic(state))
    if key in ("chi", "euler"):
        nd = len(code.by_kind(DOTTED))
        nf = len(code.by_kind(FRAMED))
        if code.r3 is not None:
            return str(1 - nd + nf - code.r3 + 1)
        return str(1 - nd + nf)
    raise DiagramError(f"unknown invariant {key!r}")


# ---------------------------------------------------------------------------
# scripts


@dataclass(frozen=True)
class ScriptStep:
    lineno: int
    kind: str  # input | kind | move | expect
    text: str
    directive: Directive | None = None
    expect: tuple[str, str] | None = None


@dataclass(frozen=True)
class MoveScript:
    steps: tuple[ScriptStep, ...]
    input_path: str | None
    manifold_kind: str

    @classmethod
    def parse(cls, text: str) -> "MoveScript":
        steps = []
        input_path = None
        kind = "threehandlebody"
        for ln, raw in enumerate(text.splitlines(), start=1):
            body = raw.split("#", 1)[0].strip()
            if not body:
                continue
            toks = body.split()
            if toks[0] == "input":
                input_path = body.split(None, 1)[1]
                steps.append(ScriptStep(ln, "input", body))
            elif toks[0] == "kind":
                kind = toks[1]
                steps.append(ScriptStep(ln, "kind", body))
            elif toks[0] == "expect":
                rest = body[len("expect") :].strip()
                if "=" not in rest:
                    raise DiagramError(f"line {ln}: expect wants key = value")
                key, value = (p.strip() for p in rest.split("=", 1))
                steps.append(ScriptStep(ln, "expect", body, expect=(key, value)))
            else:
                steps.append(
                    ScriptStep(ln, "move", body, directive=parse_directive(body))
                )
        return cls(tuple(steps), input_path, kind)


@dataclass
class TraceEntry:
    step: ScriptStep | None
    state_text: str
    note: str = ""


@dataclass
class Trace:
    entries: list[TraceEntry] = field(default_factory=list)
    ok: bool = True
    failures: list[str] = field(default_factory=list)
    final_state: object = None

    def text(self) -> str:
        out = []
        for e in self.entries:
            head = e.step.text if e.step else "(start)"
            out.append(f"== {head}")
            if e.note:
                out.append(f"-- {e.note}")
            out.append(e.state_text)
        return "\n".join(out)


def resolve_input(path: str, base_dir: str | None) -> str:
    if os.path.isabs(path) and os.path.exists(path):
        return path
    candidates = []
    if base_dir:
        candidates.append(os.path.join(base_dir, path))
    env = os.environ.get("HANDLECALC_FIXTURES")
    if env:
        candidates.append(os.path.join(env, path))
    candidates.append(path)
    for c in candidates:
        if os.path.exists(c):
            return c
    raise DiagramError(f"input diagram {path!r} not found")


def run_script(
    script: MoveScript, base_dir: str | None = None, initial=None
) -> Trace:
    trace = Trace()
    state = initial
    kind = script.manifold_kind
    if state is not None:
        trace.entries.append(TraceEntry(None, state_text(state)))
    for step in script.steps:
        try:
            if step.kind == "input":
                state = canonical_state(
                    load_diagram(resolve_input(step.text.split(None, 1)[1], base_dir))
                )
                trace.entries.append(TraceEntry(step, state_text(state)))
            elif step.kind == "kind":
                kind = step.text.split()[1]
                trace.entries.append(TraceEntry(step, state_text(state) if state else ""))
            elif step.kind == "move":
                if state is None:
                    raise MoveError("no input diagram loaded")
                state = apply_directive(state, step.directive)
                trace.entries.append(TraceEntry(step, state_text(state)))
            else:  # expect
                key, want = step.expect
                got = evaluate_invariant(state, key, kind)
                ok = got == want
                note = f"expect {key} = {want}: {'PASS' if ok else f'FAIL (got {got})'}"
                trace.entries.append(TraceEntry(step, state_text(state), note))
                if not ok:
                    trace.ok = False
                    trace.failures.append(f"step {step.lineno}: {note}")
        except DiagramError as e:
            trace.ok = False
            trace.failures.append(f"step {step.lineno}: {step.text}: {e}")
            trace.entries.append(
                TraceEntry(step, state_text(state) if state is not None else "", str(e))
            )
            break
    trace.final_state = state
    return trace


def watch_invariants(
    script: MoveScript,
    watch: tuple[str, ...] = ("h1", "pi1ab"),
    base_dir: str | None = None,
    initial=None,
) -> list[str]:
    """Recompute the watched invariants after every step; return a report.

    Steps whose move kind preserves the manifold must not change them; other
    steps may, and their changes are labelled as permitted.
    """
    report = []
    state = initial
    kind = script.manifold_kind
    prev: dict[str, str] | None = None
    if state is not None:
        prev = {k: evaluate_invariant(state, k, kind) for k in watch}
    for step in script.steps:
        if step.kind == "input":
            state = canonical_state(
                load_diagram(resolve_input(step.text.split(None, 1)[1], base_dir))
            )
            prev = {k: evaluate_invariant(state, k, kind) for k in watch}
            continue
        if step.kind == "kind":
            kind = step.text.split()[1]
            prev = {k: evaluate_invariant(state, k, kind) for k in watch}
            continue
        if step.kind != "move":
            continue
        state = apply_directive(state, step.directive)
        cur = {}
        for k in watch:
            try:
                cur[k] = evaluate_invariant(state, k, kind)
            except DiagramError as e:
                cur[k] = f"<{e}>"
        changes = {k: (prev[k], cur[k]) for k in watch if prev and prev[k] != cur[k]}
        if changes:
            label = "permitted" if not step.directive.preserving else "VIOLATION"
            for k, (a, b) in changes.items():
                report.append(f"step {step.lineno} [{step.text}] {k}: {a} -> {b} ({label})")
        prev = cur
    return report


def check_resolutions_trivial(b: BandedUnlink, budget: int = 12) -> bool | None:
    """Bounded verifier for the trusted unlink conditions.

    Both resolutions (negative; positive with every band resolved) are
    simplified by at most ``budget`` reducing isotopies; the check passes
    when no crossing touches a surface circle afterwards.  This is only a
    sufficient condition: the fully banded resolution needs to be trivial
    in the surgered boundary, which a diagram-level search cannot decide,
    so the verifier returns None (inconclusive) rather than False.
    """
    from .codes import band_surgery, resolve_vertices
    from .isotopy import normalize

    def crossing_free(bu: BandedUnlink) -> bool:
        nn = normalize(bu, budget=budget)
        surf = set(nn.surface_components)
        return not any(
            x.over[0] in surf or x.under[0] in surf for x in nn.code.crossings
        )

    neg = resolve_vertices(b, "negative")
    pos = band_surgery(resolve_vertices(b, "positive"), [x.id for x in b.bands])
    return True if crossing_free(neg) and crossing_free(pos) else None


# ---------------------------------------------------------------------------
# bounded simplification search


def _score(state) -> tuple[int, int, int]:
    if isinstance(state, HeegaardDiagram):
        return (
            len(state.code.components),
            len(state.code.crossings),
            len(state.bands),
        )
    code = state.code if isinstance(state, BandedUnlink) else state
    bands = len(state.bands) if isinstance(state, BandedUnlink) else 0
    return (len(code.components), len(code.crossings), bands)


def _candidate_moves(state) -> list[Directive]:
    out: list[Directive] = []
    code = (
        state.code
        if isinstance(state, (BandedUnlink, HeegaardDiagram))
        else state
    )
    for mv in annihilable_pairs(code):
        if mv.kind == "pair12_annihilate":
            out.append(parse_directive(f"kirby pair12 annihilate site={mv.site}"))
        else:
            out.append(parse_directive(f"kirby pair23 annihilate site={mv.site}"))
    for rewrite, args in reducing_isotopies(
        state.as_banded() if isinstance(state, HeegaardDiagram) else state
    ):
        rendered = " ".join(
            f"{a[0]}.{a[1]}" if isinstance(a, tuple) else str(a) for a in args
        )
        out.append(parse_directive(f"kirby isotopy {rewrite} {rendered}"))
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
                out.append(parse_directive(f"heegaard {stab} site={cid}"))
    # meridian slides: a framed component piercing exactly one dotted disk
    # whose circle also has a 0-framed meridian present
    dotted = {c.id for c in code.by_kind(DOTTED)}
    by_strand: dict[str, list] = {}
    for p in code.piercings:
        if p.disk in dotted:
            by_strand.setdefault(p.strand[0], []).append(p)
    for c in code.by_kind(FRAMED):
        pier = by_strand.get(c.id, [])
        disks = {p.disk for p in pier}
        if len(disks) != 1 or len(pier) < 2:
            continue
        for mer in code.by_kind(FRAMED):
            if mer.id == c.id or mer.framing != 0:
                continue
            between = [
                x
                for x in code.crossings
                if {x.over[0], x.under[0]} == {c.id, mer.id}
            ]
            if len(between) == 2 and len(mer.events) == 2:
                for flip in ("", " flip"):
                    out.append(
                        parse_directive(
                            f"kirby slide22 i={c.id} j={mer.id}{flip}"
                        )
                    )
    return out


@dataclass
class SearchResult:
    best: object
    script: tuple[str, ...]
    expanded: int

    def replay(self, start) -> object:
        cur = start
        for line in self.script:
            cur = apply_directive(cur, parse_directive(line))
        return cur


def simplify_search(state, budget: int = 500) -> SearchResult:
    """Best-first search over annihilations, destabilizations and reducing
    isotopies (plus auto-generated meridian slides), scored by
    (components, crossings, bands) lexicographically."""
    start_key = state_text(state)
    best = (_score(state), start_key, state, ())
    seen = {start_key}
    counter = 0
    frontier = [( _score(state), start_key, counter, state, ())]
    expanded = 0
    while frontier and expanded < budget:
        _, key, _, cur, path = heapq.heappop(frontier)
        expanded += 1
        for mv in _candidate_moves(cur):
            try:
                nxt = apply_directive(cur, mv)
            except DiagramError:
                continue
            nkey = state_text(nxt)
            if nkey in seen:
                continue
            seen.add(nkey)
            npath = path + (mv.line,)
            cand = (_score(nxt), nkey, nxt, npath)
            if cand[:2] < best[:2]:
                best = cand
            counter += 1
            heapq.heappush(frontier, (_score(nxt), nkey, counter, nxt, npath))
    return SearchResult(best[2], tuple(best[3]), expanded)
