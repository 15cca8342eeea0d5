"""Multisections: d x d grids of bisections carrying permutation embeddings.

Entry (i, j) moves domain component i to component j; the grid satisfies
grid[i2][i3] o grid[i1][i2] = grid[i1][i3] and the diagonal consists of
identity bisections with pairwise disjoint sources.  Embedding a
permutation yields a full group element; the images of 3-cycles generate
the alternating part.
"""

from __future__ import annotations

import itertools

from .bisection import Bisection
from .cylinder import ClopenSet
from .errors import ValidationError
from .fullgroup import FullGroupElement
from .germs import GermContext

Permutation = tuple[int, ...]


def perm_compose(p: Permutation, q: Permutation) -> Permutation:
    """Permutation acting as p after q."""
    return tuple(p[q[i]] for i in range(len(p)))


def perm_inverse(p: Permutation) -> Permutation:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def perm_parity(p: Permutation) -> int:
    seen = [False] * len(p)
    parity = 0
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        parity ^= (length - 1) & 1
    return parity


def cycle(d: int, *points: int) -> Permutation:
    out = list(range(d))
    for a, b in zip(points, points[1:] + points[:1]):
        out[a] = b
    return tuple(out)


def symmetric_group(d: int):
    return [tuple(p) for p in itertools.permutations(range(d))]


def alternating_group(d: int):
    return [p for p in symmetric_group(d) if perm_parity(p) == 0]


class Multisection:
    __slots__ = ("ctx", "degree", "grid")

    def __init__(self, ctx: GermContext, grid, validate: bool = True):
        self.ctx = ctx
        self.grid = tuple(tuple(row) for row in grid)
        self.degree = len(self.grid)
        if any(len(row) != self.degree for row in self.grid):
            raise ValidationError("multisection grid must be square")
        if validate:
            problems = self.violations()
            if problems:
                raise ValidationError("; ".join(problems))

    # -- validation -----------------------------------------------------------

    def violations(self) -> list[str]:
        """Check both axioms exactly; name the offending entries."""
        out = []
        d = self.degree
        for i in range(d):
            if not self.grid[i][i].is_identity_bisection():
                out.append(f"diagonal entry ({i},{i}) is not an identity bisection")
        for i in range(d):
            for j in range(i + 1, d):
                if not self.component(i).is_disjoint(self.component(j)):
                    out.append(f"domain components {i} and {j} overlap")
        for i in range(d):
            for j in range(d):
                if not self.grid[j][i].equals(self.grid[i][j].inverse()):
                    out.append(f"entry ({j},{i}) is not the inverse of ({i},{j})")
        for i1, i2, i3 in itertools.product(range(d), repeat=3):
            got = self.grid[i2][i3].compose(self.grid[i1][i2])
            if not got.equals(self.grid[i1][i3]):
                out.append(f"cocycle fails on triple ({i1},{i2},{i3})")
        return out

    def component(self, i: int) -> ClopenSet:
        return self.grid[i][i].source()

    def domain(self) -> ClopenSet:
        out = ClopenSet.empty(self.ctx.space)
        for i in range(self.degree):
            out = out.union(self.component(i))
        return out

    def __eq__(self, other):
        return (
            isinstance(other, Multisection)
            and self.ctx == other.ctx
            and self.grid == other.grid
        )

    def __hash__(self):
        return hash(self.grid)

    def __repr__(self):
        return f"Multisection(degree={self.degree}, domain={self.domain()!r})"


def from_spokes(spokes: list[Bisection], w: ClopenSet) -> Multisection:
    """Multisection with entries (H_j W)(H_i W)^-1 from spoke bisections.

    Requires W inside every spoke source, the first spoke restricting to
    the identity on W, and pairwise disjoint spoke ranges over W.
    """
    if not spokes:
        raise ValidationError("need at least one spoke")
    ctx = spokes[0].ctx
    problems = []
    for idx, h in enumerate(spokes):
        if not w.is_subset(h.source()):
            problems.append(f"spoke {idx} does not contain the base set in its source")
    cut = [h.restrict(w) for h in spokes]
    if not cut[0].is_identity_bisection():
        problems.append("spoke 0 must restrict to the identity on the base set")
    for i in range(len(cut)):
        for j in range(i + 1, len(cut)):
            if not cut[i].range().is_disjoint(cut[j].range()):
                problems.append(f"spoke ranges {i} and {j} overlap")
    if problems:
        raise ValidationError("; ".join(problems))
    d = len(spokes)
    grid = [[cut[j].compose(cut[i].inverse()) for j in range(d)] for i in range(d)]
    return Multisection(ctx, grid)


def embed(m: Multisection, perm: Permutation) -> FullGroupElement:
    """The full group element moving component i to component perm(i)."""
    if len(perm) != m.degree:
        raise ValidationError("permutation degree mismatch")
    table = Bisection.identity_on(m.ctx, m.domain().complement())
    for i in range(m.degree):
        table = table.union(m.grid[i][perm[i]])
    return FullGroupElement(table)


def alternating_generators(m: Multisection) -> list[FullGroupElement]:
    """Images of the 3-cycles (0 1 k); empty below degree 3."""
    if m.degree < 3:
        return []
    return [embed(m, cycle(m.degree, 0, 1, k)) for k in range(2, m.degree)]


def restrict(m: Multisection, u: ClopenSet, i: int) -> Multisection:
    """Restriction to U inside component i: components become r(F_ij U)."""
    if not u.is_subset(m.component(i)):
        raise ValidationError("restriction set must sit inside the chosen component")
    comps = [m.grid[i][j].restrict(u).range() for j in range(m.degree)]
    grid = [
        [m.grid[j][k].restrict(comps[j]) for k in range(m.degree)]
        for j in range(m.degree)
    ]
    return Multisection(m.ctx, grid)


def split_by_cover(m: Multisection, cover_a: Multisection, cover_b: Multisection):
    """Intersection and difference multisections of a two-part cover.

    For covers A, B with entrywise union equal to m, returns (P, D1, D2)
    with P = A meet B, D1 = A minus B, D2 = B minus A; entries partition
    those of m.
    """
    if cover_a.degree != m.degree or cover_b.degree != m.degree:
        raise ValidationError("cover degree mismatch")
    d = m.degree
    for i in range(d):
        for j in range(d):
            joined = cover_a.grid[i][j].union(cover_b.grid[i][j])
            if not joined.equals(m.grid[i][j]):
                raise ValidationError(f"cover entries do not unite to entry ({i},{j})")
    p_grid = [[cover_a.grid[i][j].intersection(cover_b.grid[i][j]) for j in range(d)] for i in range(d)]
    d1_grid = [[cover_a.grid[i][j].difference(cover_b.grid[i][j]) for j in range(d)] for i in range(d)]
    d2_grid = [[cover_b.grid[i][j].difference(cover_a.grid[i][j]) for j in range(d)] for i in range(d)]
    return (
        Multisection(m.ctx, p_grid),
        Multisection(m.ctx, d1_grid),
        Multisection(m.ctx, d2_grid),
    )


def glue(g: Multisection, h: Multisection) -> Multisection:
    """Join two multisections overlapping exactly in their (0,0) components.

    Both are restricted to U = G_00 meet H_00; the result has degree
    d1 + d2 - 1 and consists of all compositions through U.
    """
    if g.degree < 3 or h.degree < 3:
        raise ValidationError("glue needs degrees at least 3")
    u = g.component(0).intersect(h.component(0))
    overlap = g.domain().intersect(h.domain())
    if overlap != u:
        raise ValidationError("domains may only overlap inside the two (0,0) components")
    if u.is_empty():
        raise ValidationError("the (0,0) components do not meet")
    gr = restrict(g, u, 0)
    hr = restrict(h, u, 0)
    d1, d2 = g.degree, h.degree
    d = d1 + d2 - 1

    def entry(a: int, b: int) -> Bisection:
        # indices 0..d1-1 live in gr; d1..d-1 are hr components 1..d2-1
        if a < d1 and b < d1:
            return gr.grid[a][b]
        if a >= d1 and b >= d1:
            return hr.grid[a - d1 + 1][b - d1 + 1]
        if a < d1:
            return hr.grid[0][b - d1 + 1].compose(gr.grid[a][0])
        return gr.grid[0][b].compose(hr.grid[a - d1 + 1][0])

    grid = [[entry(a, b) for b in range(d)] for a in range(d)]
    return Multisection(g.ctx, grid)
