"""Algebraic invariants read off diagrams.

Homology comes from the handle chain complex via Smith normal form.  For a
4-dimensional 2-handlebody the complex is honest (there are no handles above
index 2); for a closed diagram the missing boundary maps of the 3- and
4-handles are recovered from Poincare duality and the Euler characteristic
instead of being guessed, so cancelling-pair moves leave every group fixed.

Fundamental groups use the dotted-circle convention: one generator per
dotted component, one relator per framed component read off as its cyclic
word of signed disk passages.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .codes import (
    BandedUnlink,
    DOTTED,
    DiagramCode,
    DiagramError,
    FRAMED,
    SURFACE,
)
from .snf import IntMatrix, smith_normal_form


@dataclass(frozen=True)
class AbelianGroup:
    """Finitely generated abelian group: free rank plus torsion divisors."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion


def cokernel(rank: int, image: IntMatrix) -> AbelianGroup:
    """Z^rank / column span of image."""
    if image.cols == 0 or image.rows == 0:
        return AbelianGroup(rank)
    f = smith_normal_form(image)
    torsion = tuple(d for d in f.d if d > 1)
    return AbelianGroup(rank - f.rank, torsion)


def kernel_rank(m: IntMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return m.cols
    return m.cols - smith_normal_form(m).rank


def homology_of_complex(dims: list[int], maps: dict[int, IntMatrix]) -> list[AbelianGroup]:
    """Homology of a finite chain complex; maps[k]: C_k -> C_{k-1}."""
    out = []
    for k in range(len(dims)):
        dk = maps.get(k)
        ker = dims[k] if dk is None or dk.cols == 0 else kernel_rank(dk)
        dk1 = maps.get(k + 1)
        if dk1 is None or dk1.cols == 0 or dk1.rows == 0:
            out.append(AbelianGroup(ker))
        else:
            # H_k = ker d_k / im d_{k+1}; compute inside the kernel lattice
            out.append(_subquotient(dims[k], dk, dk1))
    return out


def _subquotient(dim: int, dk: IntMatrix | None, dk1: IntMatrix) -> AbelianGroup:
    """ker(dk) / im(dk1) inside Z^dim (dk may be None for the zero map)."""
    if dk is None or dk.rows == 0 or dk.cols == 0:
        return cokernel(dim, dk1)
    # basis of the kernel via SNF of dk: columns of right with zero diagonal
    f = smith_normal_form(dk)
    r = f.rank
    # kernel basis = last (cols - r) columns of f.right
    kb = [[f.right.entries[i][j] for j in range(r, dk.cols)] for i in range(dk.cols)]
    kdim = dk.cols - r
    if kdim == 0:
        return AbelianGroup(0)
    # express im(dk1) in the kernel basis: solve kb * X = dk1 over Z.
    # Since kb extends to a unimodular matrix (columns of f.right), the
    # coordinates are read off with right^{-1} = (left-style inverse): use
    # the full f.right inverse via adjugate-free route: f.right is
    # unimodular, invert by solving with SNF again.
    rinv = _unimodular_inverse(f.right)
    coords = rinv * dk1
    # rows r.. of coords are the kernel-basis coordinates
    sub = IntMatrix([coords.entries[i] for i in range(r, dk.cols)])
    # sanity: rows 0..r-1 must vanish (im dk1 lies in ker dk) after dividing
    return cokernel(kdim, sub)


def _unimodular_inverse(u: IntMatrix) -> IntMatrix:
    f = smith_normal_form(u)
    if any(d != 1 for d in f.d) or len(f.d) != u.rows:
        raise DiagramError("matrix is not unimodular")
    # left * u * right = I  =>  u^{-1} = right * left
    return f.right * f.left


# ---------------------------------------------------------------------------
# 4-manifold homology


def piercing_matrix(d: DiagramCode) -> IntMatrix:
    """Rows = dotted components, columns = framed; signed disk passages."""
    dotted = [c.id for c in d.by_kind(DOTTED)]
    framed = [c.id for c in d.by_kind(FRAMED)]
    idx_d = {cid: i for i, cid in enumerate(dotted)}
    idx_f = {cid: j for j, cid in enumerate(framed)}
    m = [[0] * len(framed) for _ in dotted]
    for p in d.piercings:
        if p.disk in idx_d and p.strand[0] in idx_f:
            m[idx_d[p.disk]][idx_f[p.strand[0]]] += p.sign
    return IntMatrix(m)


def homology_4manifold(d: DiagramCode, closed: bool = False) -> list[AbelianGroup]:
    """H_0..H_4 of the 4-manifold the Kirby diagram presents.

    Open case: the 2-handlebody M (0-, 1-, 2-handles only), chain complex
    C_2 -> C_1 -> C_0 with the piercing matrix as the only boundary map.
    Closed case: requires r3 on the diagram; H_2 and H_3 are reconstructed
    from H_1, the Euler characteristic and duality of the closed orientable
    manifold rather than from fabricated 3-/4-handle maps.
    """
    if any(c.kind == SURFACE for c in d.components):
        raise DiagramError("homology_4manifold needs a Kirby diagram (no surface parts)")
    nd = len(d.by_kind(DOTTED))
    nf = len(d.by_kind(FRAMED))
    d2 = piercing_matrix(d)
    rank2 = 0 if nd == 0 or nf == 0 else smith_normal_form(d2).rank
    h1 = cokernel(nd, d2)
    if not closed:
        h2 = AbelianGroup(nf - rank2)
        return [AbelianGroup(1), h1, h2, AbelianGroup(0), AbelianGroup(0)]
    if d.r3 is None:
        raise DiagramError("closed homology needs the diagram's r3 count")
    chi = 1 - nd + nf - d.r3 + 1
    b1 = h1.free_rank
    b2 = chi - 2 + 2 * b1
    if b2 < 0:
        raise DiagramError(f"inconsistent closed diagram: chi={chi}, b1={b1}")
    h2 = AbelianGroup(b2, h1.torsion)  # torsion H_2 = torsion H_1 by duality
    h3 = AbelianGroup(b1)
    return [AbelianGroup(1), h1, h2, h3, AbelianGroup(1)]


# ---------------------------------------------------------------------------
# presentations


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[tuple[tuple[str, int], ...], ...]

    def __str__(self) -> str:
        gens = ",".join(self.generators)
        rels = " ".join(word_str(w) for w in self.relators)
        return f"<{gens} | {rels}>".replace("|  ", "| ") if rels else f"<{gens} | >"


def word_str(word) -> str:
    return (
        "".join(g if e == 1 else f"{g}^{e}" for g, e in word) if word else "1"
    )


def free_reduce(word):
    out = []
    for g, e in word:
        if e == 0:
            continue
        if out and out[-1][0] == g:
            s = out[-1][1] + e
            out.pop()
            if s:
                out.append((g, s))
        else:
            out.append((g, e))
    return tuple(out)


def _expand(word):
    """Syllables to letters: (g, 2) -> (g,1),(g,1)."""
    out = []
    for g, e in word:
        step = 1 if e > 0 else -1
        for _ in range(abs(e)):
            out.append((g, step))
    return out


def cyclic_reduce(word):
    w = list(free_reduce(word))
    while len(w) >= 2 and w[0][0] == w[-1][0] and w[0][1] * w[-1][1] < 0:
        head = _expand([w[0]])
        tail = _expand([w[-1]])
        head.pop(0)
        tail.pop()
        w = list(free_reduce(tuple(head) + tuple(w[1:-1]) + tuple(tail)))
    return free_reduce(tuple(w))


def invert_word(word):
    return tuple((g, -e) for g, e in reversed(word))


def pi1_presentation(d: DiagramCode) -> Presentation:
    """Generators = dotted circles; relators = framed components' passage words.

    Empty relator words (framed circles missing every dotted disk) are
    dropped; they present the same group.
    """
    if any(c.kind == SURFACE for c in d.components):
        raise DiagramError("pi1_presentation needs a Kirby diagram")
    dotted = [c.id for c in d.by_kind(DOTTED)]
    by_slot = {}
    for p in d.piercings:
        if p.disk in set(dotted):
            by_slot[p.strand] = (p.disk, p.sign)
    relators = []
    for c in d.by_kind(FRAMED):
        word = []
        for s in c.events:
            hit = by_slot.get((c.id, s))
            if hit:
                word.append(hit)
        word = free_reduce(tuple(word))
        if word:
            relators.append(word)
    return Presentation(tuple(dotted), tuple(relators))


def abelianization(p: Presentation) -> AbelianGroup:
    idx = {g: i for i, g in enumerate(p.generators)}
    cols = []
    for w in p.relators:
        v = [0] * len(p.generators)
        for g, e in w:
            v[idx[g]] += e
        cols.append(v)
    mat = IntMatrix(
        [[cols[j][i] for j in range(len(cols))] for i in range(len(p.generators))]
    )
    return cokernel(len(p.generators), mat)


def tietze_simplify(p: Presentation, budget: int = 100) -> Presentation:
    """Budgeted Tietze simplification.

    Moves: free/cyclic reduction, dropping empty relators, eliminating a
    generator that appears exactly once in some relator, and shortening a
    relator against another (replace a long overlap with the complement).
    Each move preserves the isomorphism class.
    """
    gens = list(p.generators)
    rels = [cyclic_reduce(w) for w in p.relators]
    steps = 0

    def spent() -> bool:
        return steps >= budget

    changed = True
    while changed and not spent():
        changed = False
        rels = [cyclic_reduce(w) for w in rels if cyclic_reduce(w)]
        # generator elimination: relator with a unique single occurrence of g
        for ri, w in enumerate(rels):
            letters = _expand(w)
            counts: dict[str, int] = {}
            for g, _ in letters:
                counts[g] = counts.get(g, 0) + 1
            target = next(
                (g for g, n in counts.items() if n == 1), None
            )
            if target is None:
                continue
            k = next(i for i, (g, _) in enumerate(letters) if g == target)
            g, e = letters[k]
            rest = letters[k + 1 :] + letters[:k]  # g^e = inverse(rest)
            value = invert_word(tuple(rest)) if e == 1 else tuple(rest)
            # substitute everywhere
            new_rels = []
            for rj, w2 in enumerate(rels):
                if rj == ri:
                    continue
                out = []
                for g2, e2 in _expand(w2):
                    if g2 == target:
                        out.extend(value if e2 == 1 else invert_word(value))
                    else:
                        out.append((g2, e2))
                new_rels.append(cyclic_reduce(tuple(out)))
            gens.remove(target)
            rels = [w for w in new_rels if w]
            steps += 1
            changed = True
            break
        if changed or spent():
            continue
        # relator-vs-relator shortening
        for i, j in product(range(len(rels)), repeat=2):
            if i == j:
                continue
            shorter = _shorten_against(rels[i], rels[j])
            if shorter is not None:
                rels[i] = shorter
                steps += 1
                changed = True
                break
    rels = [w for w in (cyclic_reduce(w) for w in rels) if w]
    return Presentation(tuple(gens), tuple(rels))


def _shorten_against(r, s):
    """If more than half of s (or its inverse) occurs in r cyclically, rewrite."""
    rl = _expand(r)
    if not rl:
        return None
    for cand in (tuple(_expand(s)), tuple(_expand(invert_word(s)))):
        n, m = len(rl), len(cand)
        if m < 2:
            continue
        need = m // 2 + 1
        doubled = rl + rl
        for start in range(n):
            for length in range(min(m, n), need - 1, -1):
                window = tuple(doubled[start : start + length])
                if len(window) < length:
                    continue
                for off in range(m):
                    piece = tuple(cand[(off + k) % m] for k in range(length))
                    if window == piece:
                        # window = piece; replace with inverse of the rest
                        rest = tuple(cand[(off + length + k) % m] for k in range(m - length))
                        repl = invert_word(rest)
                        new = tuple(rl[:start]) + repl + tuple(rl[start + length :])
                        if start + length > n:
                            continue
                        new = cyclic_reduce(new)
                        if sum(abs(e) for _, e in new) < sum(abs(e) for _, e in r):
                            return new
    return None


# ---------------------------------------------------------------------------
# permutation groups and homomorphism counting


def perm_mul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """(a*b)(x) = a(b(x))."""
    return tuple(a[b[i]] for i in range(len(a)))


def perm_inv(a: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(a)
    for i, v in enumerate(a):
        out[v] = i
    return tuple(out)


def close_group(generators, bound: int = 10000):
    """All products of the generators (finite closure)."""
    degree = len(generators[0]) if generators else 1
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for h in generators:
                v = perm_mul(g, h)
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
                    if len(seen) > bound:
                        raise DiagramError(f"group order exceeds bound {bound}")
        frontier = nxt
    return sorted(seen)


def alternating_group(n: int):
    """Generator permutations of A_n (0-indexed)."""
    if n < 3:
        return [tuple(range(n))]
    cycle3 = tuple([1, 2, 0] + list(range(3, n)))
    if n % 2:
        full = tuple(list(range(1, n)) + [0])  # n-cycle, even for odd n
        return [cycle3, full]
    shifted = tuple([0] + list(range(2, n)) + [1])
    return [cycle3, shifted]


def symmetric_group(n: int):
    if n < 2:
        return [tuple(range(n))]
    swap = tuple([1, 0] + list(range(2, n)))
    cyc = tuple(list(range(1, n)) + [0])
    return [swap, cyc]


def hom_count(
    p: Presentation, target_generators, order_bound: int = 60
) -> tuple[int, int]:
    """Count homomorphisms and surjections into the generated group.

    Exhaustive assignment of presentation generators to group elements with
    pruning: a relator is checked as soon as all its letters are assigned.
    """
    group = close_group(target_generators, bound=order_bound)
    if len(group) > order_bound:
        raise DiagramError(f"group order {len(group)} exceeds bound {order_bound}")
    degree = len(group[0])
    ident = tuple(range(degree))
    gens = list(p.generators)
    n = len(gens)
    gidx = {g: i for i, g in enumerate(gens)}

    rel_letters = [_expand(w) for w in p.relators]
    rel_support = [sorted({gidx[g] for g, _ in letters}) for letters in rel_letters]

    # a relator is checked once its last-assigned generator gets a value
    checked_at = [[] for _ in range(n)]
    for ri, sup in enumerate(rel_support):
        if sup:
            checked_at[max(sup)].append(ri)

    assign: list[tuple[int, ...] | None] = [None] * n
    total = 0
    surj = 0
    group_set = set(group)

    def evaluate(letters) -> tuple[int, ...]:
        acc = ident
        for g, e in letters:
            v = assign[gidx[g]]
            acc = perm_mul(acc, v if e == 1 else perm_inv(v))
        return acc

    def rec(k: int):
        nonlocal total, surj
        if k == n:
            total += 1
            if len(close_group([a for a in assign if a is not None] or [ident], bound=order_bound + 1)) == len(group_set):
                surj += 1
            return
        for g in group:
            assign[k] = g
            if all(evaluate(rel_letters[ri]) == ident for ri in checked_at[k]):
                rec(k + 1)
        assign[k] = None

    if n == 0:
        ok = all(evaluate(ls) == ident for ls in rel_letters)
        return (1, 1 if len(group) == 1 else 0) if ok else (0, 0)
    rec(0)
    return total, surj
