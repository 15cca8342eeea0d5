"""Elements of the topological full group: whole-space bisection tables.

``multiply(g, h)`` applies ``h`` first, matching the composition of the
underlying bisections.  Fullness (source = range = whole space) is
checked eagerly at construction; partial tables are rejected.
"""

from __future__ import annotations

from .bisection import Bisection
from .cylinder import ClopenSet
from .errors import ValidationError
from .germs import GermContext


class FullGroupElement:
    __slots__ = ("table",)

    def __init__(self, table: Bisection):
        if not table.source().is_whole() or not table.range().is_whole():
            raise ValidationError("full group elements need source = range = whole space")
        self.table = table

    @property
    def ctx(self) -> GermContext:
        return self.table.ctx

    @property
    def space(self):
        return self.table.space

    @classmethod
    def from_table(cls, ctx, dom, germ, ran) -> "FullGroupElement":
        return cls(Bisection.from_table(ctx, dom, germ, ran))

    def __eq__(self, other):
        return isinstance(other, FullGroupElement) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"FullGroupElement{self.table!r}"

    def equals(self, other: "FullGroupElement") -> bool:
        return self.table.equals(other.table)

    def apply_word(self, w):
        return self.table.apply_word(w)


def identity(ctx: GermContext) -> FullGroupElement:
    return FullGroupElement(Bisection.identity(ctx))


def multiply(g: FullGroupElement, h: FullGroupElement) -> FullGroupElement:
    """The element acting as g after h."""
    return FullGroupElement(g.table.compose(h.table))


def invert(g: FullGroupElement) -> FullGroupElement:
    return FullGroupElement(g.table.inverse())


def conjugate(g: FullGroupElement, k: FullGroupElement) -> FullGroupElement:
    """k^-1 g k."""
    return multiply(multiply(invert(k), g), k)


def commutator(g: FullGroupElement, h: FullGroupElement) -> FullGroupElement:
    """g^-1 h^-1 g h."""
    return multiply(multiply(invert(g), invert(h)), multiply(g, h))


def power(g: FullGroupElement, n: int) -> FullGroupElement:
    out = identity(g.ctx)
    step = g if n >= 0 else invert(g)
    for _ in range(abs(n)):
        out = multiply(step, out)
    return out


def support(g: FullGroupElement) -> ClopenSet:
    """Canonical clopen closure of the moved points."""
    return g.table.source().difference(g.table.identity_locus())


def is_identity(g: FullGroupElement) -> bool:
    return g.table.is_identity_bisection()


def tau(f: Bisection) -> FullGroupElement:
    """The involution swapping s(F) and r(F) through F, identity elsewhere."""
    s, r = f.source(), f.range()
    if not s.is_disjoint(r):
        raise ValidationError("tau needs disjoint source and range")
    rest = s.union(r).complement()
    table = f
    table = table.union(f.inverse())
    table = table.union(Bisection.identity_on(f.ctx, rest))
    return FullGroupElement(table)
