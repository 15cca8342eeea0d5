"""Compact open bisections as finite germ-labeled prefix-exchange tables.

An arrow (v, q, u) is the partial homeomorphism  v·w  ->  u·q(w).  A
bisection is a finite set of arrows whose dom words and ran words each
form a prefix antichain.  Tables are kept in a canonical form: arrow
families that are exactly the one-letter expansion of a declared germ
are merged back, so structurally equal tables describe equal germ sets.

Composition follows the groupoid convention: ``compose(B1, B2)`` acts as
B1 after B2 (apply the right factor first).
"""

from __future__ import annotations

from typing import Iterable, NamedTuple

from .cylinder import ClopenSet, SequenceSpace, Word, is_prefix
from .errors import SpaceMismatch, ValidationError
from .germs import ID, GermContext, GermWord


class Arrow(NamedTuple):
    dom: Word
    germ: GermWord
    ran: Word


class Bisection:
    __slots__ = ("space", "ctx", "arrows", "_source", "_range")

    def __init__(self, ctx: GermContext, arrows: Iterable[Arrow], canonical: bool = False):
        self.ctx = ctx
        self.space: SequenceSpace = ctx.space
        arrows = frozenset(Arrow(tuple(d), tuple(g), tuple(r)) for d, g, r in arrows)
        if not canonical:
            for a in arrows:
                self._validate_arrow(a)
            arrows = self._canonicalize(arrows)
            self._check_antichains(arrows)
        self.arrows = arrows
        self._source = None
        self._range = None

    # -- validation ----------------------------------------------------------

    def _validate_arrow(self, a: Arrow):
        self.space.require_word(a.dom)
        self.space.require_word(a.ran)
        if self.space.level_dependent:
            if a.germ != ID:
                raise ValidationError("level-dependent spaces carry the trivial germ only")
            if len(a.dom) != len(a.ran):
                raise ValidationError("path-space exchanges must preserve length")
            if self.space.letters_after(a.dom) != self.space.letters_after(a.ran):
                raise ValidationError(
                    f"arrow {a} joins prefixes with different continuations"
                )
            return
        ctx = self.ctx
        dom_next = self.space.letters_after(a.dom)
        ran_next = set(self.space.letters_after(a.ran))
        image = {ctx.step(a.germ, x)[0] for x in dom_next}
        if image != ran_next:
            raise ValidationError(f"arrow {a}: germ does not map tail space onto tail space")

    def _check_antichains(self, arrows):
        doms = sorted(a.dom for a in arrows)
        rans = sorted(a.ran for a in arrows)
        for ws in (doms, rans):
            for i in range(len(ws) - 1):
                if is_prefix(ws[i], ws[i + 1]):
                    raise ValidationError("table words are not a prefix antichain")

    # -- canonical form --------------------------------------------------------

    def _canonicalize(self, arrows: frozenset[Arrow]) -> frozenset[Arrow]:
        """Merge arrow families that expand a declared germ.

        Candidates are the identity and the declared states only, which
        keeps the form independent of whatever product labels happen to
        exist in the registry.
        """
        ctx = self.ctx
        pool = {a.dom: a for a in arrows}
        if len(pool) != len(arrows):
            raise ValidationError("two arrows share a dom word")
        candidates = [ID] + [ctx.canon(w) for w in ctx.declared]
        changed = True
        while changed:
            changed = False
            if not pool:
                break
            for length in sorted({len(d) for d in pool}, reverse=True):
                if length == 0:
                    continue
                parents: dict[Word, list[Arrow]] = {}
                for d, a in pool.items():
                    if len(d) == length:
                        parents.setdefault(d[:-1], []).append(a)
                for parent, family in parents.items():
                    letters = self.space.letters_after(parent)
                    if len(family) != len(letters):
                        continue
                    by_letter = {a.dom[-1]: a for a in family}
                    if set(by_letter) != set(letters):
                        continue
                    if any(not a.ran for a in family):
                        continue
                    stems = {a.ran[:-1] for a in family}
                    if len(stems) != 1:
                        continue
                    stem = stems.pop()
                    for cand in candidates:
                        ok = True
                        for x in letters:
                            arr = by_letter[x]
                            y, res = ctx.step(cand, x)
                            if arr.ran[-1] != y or not ctx.equal(res, arr.germ):
                                ok = False
                                break
                        if ok:
                            for a in family:
                                del pool[a.dom]
                            pool[parent] = Arrow(parent, cand, stem)
                            changed = True
                            break
                if changed:
                    break
        return frozenset(pool.values())

    # -- basic queries -----------------------------------------------------------

    @classmethod
    def empty(cls, ctx) -> "Bisection":
        return cls(ctx, ())

    @classmethod
    def identity_on(cls, ctx, u: ClopenSet) -> "Bisection":
        return cls(ctx, [Arrow(w, ID, w) for w in u.words])

    @classmethod
    def identity(cls, ctx) -> "Bisection":
        return cls.identity_on(ctx, ClopenSet.whole(ctx.space))

    @classmethod
    def from_table(cls, ctx, dom, germ, ran) -> "Bisection":
        """Build from the table literal: parallel lists of words and labels."""
        if not (len(dom) == len(germ) == len(ran)):
            raise ValidationError("table rows must have equal length")
        arrows = [
            Arrow(ctx.space.parse_word(d), ctx.parse(g), ctx.space.parse_word(r))
            for d, g, r in zip(dom, germ, ran)
        ]
        return cls(ctx, arrows)

    def table(self) -> dict:
        rows = sorted(self.arrows, key=lambda a: (a.dom, a.ran))
        return {
            "dom": [self.space.format_word(a.dom) for a in rows],
            "germ": [self.ctx.format(a.germ) for a in rows],
            "ran": [self.space.format_word(a.ran) for a in rows],
        }

    def is_empty(self) -> bool:
        return not self.arrows

    def apply_word(self, w: Word) -> Word | None:
        """Image of the cylinder ``w`` when some arrow's dom is a prefix of it."""
        for a in self.arrows:
            if is_prefix(a.dom, w):
                tail = w[len(a.dom):]
                return a.ran + self.ctx.apply(a.germ, tail)
        return None

    def source(self) -> ClopenSet:
        if self._source is None:
            self._source = ClopenSet(self.space, [a.dom for a in self.arrows])
        return self._source

    def range(self) -> ClopenSet:
        if self._range is None:
            self._range = ClopenSet(self.space, [a.ran for a in self.arrows])
        return self._range

    # -- operations ------------------------------------------------------------

    def _require_ctx(self, other: "Bisection"):
        if self.ctx != other.ctx:
            raise SpaceMismatch("bisections over different presentations")

    def compose(self, other: "Bisection") -> "Bisection":
        """The bisection acting as ``self`` after ``other``."""
        self._require_ctx(other)
        ctx = self.ctx
        out = []
        for a2 in other.arrows:
            for a1 in self.arrows:
                if is_prefix(a1.dom, a2.ran):
                    s = a2.ran[len(a1.dom):]
                    germ = ctx.compose(ctx.residual(a1.germ, s), a2.germ)
                    out.append(Arrow(a2.dom, germ, a1.ran + ctx.apply(a1.germ, s)))
                elif is_prefix(a2.ran, a1.dom):
                    t = a1.dom[len(a2.ran):]
                    t_back = ctx.apply(ctx.inverse(a2.germ), t)
                    germ = ctx.compose(a1.germ, ctx.residual(a2.germ, t_back))
                    out.append(Arrow(a2.dom + t_back, germ, a1.ran))
        return Bisection(ctx, out)

    def inverse(self) -> "Bisection":
        ctx = self.ctx
        return Bisection(ctx, [Arrow(a.ran, ctx.inverse(a.germ), a.dom) for a in self.arrows])

    def restrict(self, u: ClopenSet) -> "Bisection":
        """Sub-bisection with source cut down to ``u``."""
        if u.space != self.space:
            raise SpaceMismatch("restriction set over a different space")
        ctx = self.ctx
        out = []
        for a in self.arrows:
            for w in u.words:
                if is_prefix(w, a.dom):
                    out.append(a)
                elif is_prefix(a.dom, w):
                    t = w[len(a.dom):]
                    out.append(Arrow(w, ctx.residual(a.germ, t), a.ran + ctx.apply(a.germ, t)))
        return Bisection(ctx, out)

    def restrict_range(self, u: ClopenSet) -> "Bisection":
        return self.inverse().restrict(u).inverse()

    def is_identity_bisection(self) -> bool:
        """Whether every arrow is a germ of the identity on its cylinder."""
        return all(a.dom == a.ran and self.ctx.is_identity(a.germ) for a in self.arrows)

    def equals(self, other: "Bisection") -> bool:
        """Exact equality as sets of germs."""
        self._require_ctx(other)
        if self.arrows == other.arrows:
            return True
        if self.source() != other.source():
            return False
        delta = self.compose(other.inverse())
        return delta.is_identity_bisection()

    def identity_locus(self) -> ClopenSet:
        """Clopen set of points whose arrow is a germ of the identity.

        An arrow with dom != ran is nowhere a germ of identity; an arrow
        (v, q, v) is one exactly off the closure of the moved set of q.
        """
        pieces = []
        for a in self.arrows:
            if a.dom != a.ran:
                continue
            prev = a.dom[-1] if a.dom else None
            moved = ClopenSet(self.space, [a.dom + m for m in self.ctx.moved_words(a.germ, prev)])
            pieces.extend(ClopenSet(self.space, [a.dom]).difference(moved).words)
        return ClopenSet(self.space, pieces)

    def agreement_source(self, other: "Bisection") -> ClopenSet:
        """Clopen set of source points where both define the same germ."""
        self._require_ctx(other)
        delta = self.compose(other.inverse())
        return other.restrict_range(delta.identity_locus()).source()

    def intersection(self, other: "Bisection") -> "Bisection":
        """Largest common sub-bisection (as sets of germs)."""
        return self.restrict(self.agreement_source(other))

    def difference(self, other: "Bisection") -> "Bisection":
        """Sub-bisection of ``self`` on points where ``other`` has no equal germ."""
        return self.restrict(self.source().difference(self.agreement_source(other)))

    def union(self, other: "Bisection") -> "Bisection":
        """Union of germ sets; fails if the union is not a bisection."""
        self._require_ctx(other)
        overlap_s = self.source().intersect(other.source())
        overlap_r = self.range().intersect(other.range())
        if not self.restrict(overlap_s).equals(other.restrict(overlap_s)):
            raise ValidationError("union of tables disagrees on the common source")
        if not self.restrict_range(overlap_r).equals(other.restrict_range(overlap_r)):
            raise ValidationError("union of tables is not injective on ranges")
        extra = other.restrict(other.source().difference(overlap_s))
        # sources now disjoint; ranges may still need refining to merge cleanly
        merged = []
        for b in (self, extra):
            for a in b.arrows:
                merged.append(a)
        return Bisection(self.ctx, self._split_conflicts(merged))

    def _split_conflicts(self, arrows: list[Arrow]) -> list[Arrow]:
        # refine dom words until neither doms nor rans violate the antichain rule
        ctx = self.ctx
        work = list(arrows)
        for _ in range(64):
            bad = set()
            for i, a in enumerate(work):
                for j, b in enumerate(work):
                    if i != j and (
                        (is_prefix(a.dom, b.dom) and a.dom != b.dom)
                        or (is_prefix(a.ran, b.ran) and a.ran != b.ran)
                    ):
                        bad.add(i)
            if not bad:
                return work
            nxt = []
            for i, a in enumerate(work):
                if i in bad:
                    for x in self.space.letters_after(a.dom):
                        y, res = ctx.step(a.germ, x)
                        nxt.append(Arrow(a.dom + (x,), res, a.ran + (y,)))
                else:
                    nxt.append(a)
            work = nxt
        raise ValidationError("could not refine tables into a bisection")

    # -- value semantics ----------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, Bisection)
            and self.ctx == other.ctx
            and self.arrows == other.arrows
        )

    def __hash__(self):
        return hash(self.arrows)

    def __repr__(self):
        rows = sorted(self.arrows, key=lambda a: (a.dom, a.ran))
        cols = [
            f"{self.space.format_word(a.dom)}-[{self.ctx.format(a.germ)}]->{self.space.format_word(a.ran)}"
            for a in rows
        ]
        return "Bisection(" + ", ".join(cols) + ")"
