"""Seeded random diagram generation for property suites.

Codes built here are valid by construction (every slot claimed exactly once)
but otherwise arbitrary; realizability is trusted as everywhere else.
"""

from __future__ import annotations

import random

from .codes import Builder, DOTTED, DiagramCode, FRAMED


def random_kirby_diagram(
    rng: random.Random,
    n_dotted: int,
    n_framed: int,
    max_crossings: int = 8,
    max_piercings: int = 6,
    closed: bool = False,
) -> DiagramCode:
    """Random valid code; crossing counts between distinct components are
    kept even (closed curves cross an even number of times)."""
    bld = Builder("fuzz", r3=0 if closed else None)
    dotted = [bld.add_component(f"D{i}", DOTTED) for i in range(n_dotted)]
    framed = [
        bld.add_component(f"K{i}", FRAMED, rng.randint(-2, 2)) for i in range(n_framed)
    ]
    parity: dict[tuple[str, str], int] = {}
    if framed:
        for _ in range(rng.randint(0, max_crossings) // 2 * 2):
            a = rng.choice(framed)
            b = rng.choice(framed)
            bld.add_crossing(rng.choice((1, -1)), bld.new_slot(a), bld.new_slot(b))
            if a != b:
                key = tuple(sorted((a, b)))
                parity[key] = parity.get(key, 0) ^ 1
    for (a, b), odd in parity.items():
        if odd:
            bld.add_crossing(rng.choice((1, -1)), bld.new_slot(a), bld.new_slot(b))
    if dotted and framed:
        for _ in range(rng.randint(0, max_piercings)):
            disk = rng.choice(dotted)
            strand = rng.choice(framed)
            bld.add_piercing(disk, bld.new_slot(strand), rng.choice((1, -1)))
    for cid in dotted + framed:
        rng.shuffle(bld.events[cid])
    return bld.freeze()


def random_closed_kirby_diagram(rng: random.Random) -> DiagramCode:
    """An honestly closed diagram: the double of a random 2-handlebody,
    optionally padded with a cancelling (2,3)-pair."""
    from .heegaard import double_kirby
    from .kirby import KirbyMove, apply_kirby

    seed = random_kirby_diagram(
        rng, rng.randint(0, 1), rng.randint(0, 1), max_crossings=4, max_piercings=3
    )
    d = double_kirby(seed)
    if rng.random() < 0.3:
        d = apply_kirby(d, KirbyMove("pair23_create"))
    return d


def random_preserving_move(rng: random.Random, d: DiagramCode):
    """One applicable manifold-preserving Kirby move, or None.

    Drawn from slides, cancelling-pair creations/annihilations and local
    isotopy insertions; every returned move leaves the presented manifold
    unchanged (pair23 bookkeeping assumes the diagram tracks r3).
    """
    from .kirby import KirbyMove, annihilable_pairs

    dotted = [c.id for c in d.by_kind(DOTTED)]
    framed = [c.id for c in d.by_kind(FRAMED)]
    options = []
    options.append(KirbyMove("pair12_create", framing=rng.randint(-2, 2)))
    if d.r3 is not None:
        options.append(KirbyMove("pair23_create"))
    options.extend(annihilable_pairs(d))
    if len(dotted) >= 2:
        i, j = rng.sample(dotted, 2)
        options.append(KirbyMove("slide11", i=i, j=j, flip=rng.random() < 0.5))
    if framed and dotted:
        options.append(
            KirbyMove(
                "slide21",
                i=rng.choice(framed),
                j=rng.choice(dotted),
                flip=rng.random() < 0.5,
            )
        )
    if len(framed) >= 2:
        i, j = rng.sample(framed, 2)
        options.append(KirbyMove("slide22", i=i, j=j, flip=rng.random() < 0.5))
    if framed:
        options.append(
            KirbyMove(
                "isotopy",
                rewrite="insert_curl",
                args=((rng.choice(framed), "end"), rng.choice((1, -1))),
            )
        )
    if len(framed) >= 2:
        a, b = rng.sample(framed, 2)
        options.append(
            KirbyMove(
                "isotopy",
                rewrite="insert_x",
                args=((a, "end"), (b, "end"), rng.choice((1, -1))),
            )
        )
    if dotted and framed:
        options.append(
            KirbyMove(
                "isotopy",
                rewrite="insert_pp",
                args=(rng.choice(dotted), (rng.choice(framed), "end"), rng.choice((1, -1))),
            )
        )
    return rng.choice(options) if options else None
