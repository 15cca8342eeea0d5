"""Exact algebra of clopen subsets of one-sided Cantor sequence spaces.

A space is a full shift, a one-step subshift of finite type, or a Bratteli
path space (level-dependent alphabets; the last described level repeats
forever).  Points are never touched individually: every set is a finite
union of cylinders, stored as a canonical prefix antichain, so structural
equality coincides with equality of the represented clopen sets.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator

from .errors import InvalidWord, SpaceMismatch, ValidationError

Word = tuple[str, ...]

EPSILON: Word = ()


class SequenceSpace:
    """Alphabet-and-transition data describing the allowed infinite paths."""

    def __init__(self, kind, level_alphabets, level_successors, meta=None):
        # level_alphabets: tuple of tuples of letters, one per described level;
        # level_successors: tuple of dicts letter -> tuple of letters at the
        # next level.  Levels beyond the description repeat the last entry.
        self.kind = kind
        self._alphabets = tuple(tuple(a) for a in level_alphabets)
        self._successors = tuple(
            {k: tuple(v) for k, v in succ.items()} for succ in level_successors
        )
        self.meta = meta or {}
        self._check()

    # -- construction -----------------------------------------------------

    @classmethod
    def full_shift(cls, alphabet: Iterable[str]) -> "SequenceSpace":
        alphabet = tuple(alphabet)
        succ = {x: alphabet for x in alphabet}
        return cls("full_shift", (alphabet,), (succ,))

    @classmethod
    def sft(cls, alphabet: Iterable[str], allowed: Iterable[tuple[str, str]]) -> "SequenceSpace":
        """One-step SFT: ``allowed`` lists the admissible adjacent pairs."""
        alphabet = tuple(alphabet)
        succ = {x: tuple(b for a, b in allowed if a == x) for x in alphabet}
        return cls("sft", (alphabet,), (succ,))

    @classmethod
    def bratteli(cls, levels, edges) -> "SequenceSpace":
        """Path space of a Bratteli diagram.

        ``levels``: list of vertex lists V_1, V_2, ...;  ``edges``: list of
        edge lists, edges[n] = [(edge_name, source_vertex, range_vertex)]
        connecting V_{n+1} to V_{n+2} ... The first edge level starts at
        V_1; the final described level repeats forever (stationary tail),
        which requires its source and range vertex sets to coincide.
        """
        if not levels or not edges:
            raise ValidationError("bratteli data needs at least one level of vertices and edges")
        levels = [tuple(v) for v in levels]
        edges = [tuple((e, s, r) for e, s, r in lvl) for lvl in edges]
        vertex_sets = levels + [levels[-1]] * max(0, len(edges) + 1 - len(levels))
        src = []
        rng = []
        alphabets = []
        for n, lvl in enumerate(edges):
            vs = set(vertex_sets[n] if n < len(vertex_sets) else vertex_sets[-1])
            vr = set(vertex_sets[n + 1] if n + 1 < len(vertex_sets) else vertex_sets[-1])
            names = [e for e, _, _ in lvl]
            if len(set(names)) != len(names):
                raise ValidationError("duplicate edge names in one level")
            for e, s, r in lvl:
                if s not in vs or r not in vr:
                    raise ValidationError(f"edge {e} references unknown vertex")
            if {s for _, s, _ in lvl} != vs:
                raise ValidationError("source map not surjective at some level")
            if {r for _, _, r in lvl} != vr:
                raise ValidationError("range map not surjective at some level")
            alphabets.append(tuple(names))
            src.append({e: s for e, s, _ in lvl})
            rng.append({e: r for e, _, r in lvl})
        # stationary tail consistency
        last = edges[-1]
        last_sources = {s for _, s, _ in last}
        last_ranges = {r for _, _, r in last}
        if last_sources != last_ranges:
            raise ValidationError("stationary tail needs matching source/range vertex sets")
        succs = []
        for n in range(len(edges)):
            nxt = min(n + 1, len(edges) - 1)
            succs.append(
                {
                    e: tuple(f for f in alphabets[nxt] if src[nxt][f] == rng[n][e])
                    for e in alphabets[n]
                }
            )
        meta = {"levels": [list(v) for v in levels], "edges": [[list(t) for t in lvl] for lvl in edges]}
        return cls("bratteli", tuple(alphabets), tuple(succs), meta)

    @classmethod
    def from_description(cls, desc: dict) -> "SequenceSpace":
        kind = desc.get("kind")
        if kind == "full_shift":
            return cls.full_shift(desc["alphabet"])
        if kind == "sft":
            return cls.sft(desc["alphabet"], [tuple(p) for p in desc["allowed"]])
        if kind == "bratteli":
            return cls.bratteli(desc["levels"], desc["edges"])
        raise ValidationError(f"unknown space kind {kind!r}")

    def describe(self) -> dict:
        if self.kind == "full_shift":
            return {"kind": "full_shift", "alphabet": list(self._alphabets[0])}
        if self.kind == "sft":
            allowed = [[a, b] for a in self._alphabets[0] for b in self._successors[0][a]]
            return {"kind": "sft", "alphabet": list(self._alphabets[0]), "allowed": allowed}
        return {"kind": "bratteli", **self.meta}

    def _check(self):
        for succ in self._successors:
            for letter, nxt in succ.items():
                if not nxt:
                    raise ValidationError(f"letter {letter!r} has no allowed successor (dead end)")

    # -- structure queries -------------------------------------------------

    @property
    def level_dependent(self) -> bool:
        return self.kind == "bratteli"

    def alphabet(self, level: int = 0) -> tuple[str, ...]:
        return self._alphabets[min(level, len(self._alphabets) - 1)]

    def successors(self, level: int, letter: str) -> tuple[str, ...]:
        succ = self._successors[min(level, len(self._successors) - 1)]
        try:
            return succ[letter]
        except KeyError:
            raise InvalidWord(f"letter {letter!r} unknown at level {level}") from None

    def letters_after(self, word: Word) -> tuple[str, ...]:
        """Letters allowed at position len(word) after the prefix ``word``."""
        if not word:
            return self.alphabet(0)
        return self.successors(len(word) - 1, word[-1])

    def valid_word(self, word: Word) -> bool:
        if not word:
            return True
        if word[0] not in self.alphabet(0):
            return False
        for i in range(len(word) - 1):
            if word[i + 1] not in self.successors(i, word[i]):
                return False
        return True

    def require_word(self, word: Word) -> Word:
        word = tuple(word)
        if not self.valid_word(word):
            raise InvalidWord(f"{word!r} is not a valid prefix in this space")
        return word

    def extensions(self, word: Word) -> list[Word]:
        return [word + (x,) for x in self.letters_after(word)]

    def cylinders(self, depth: int) -> list[Word]:
        """All valid words of the given length, in lexicographic order."""
        out = [EPSILON]
        for _ in range(depth):
            out = [w + (x,) for w in out for x in self.letters_after(w)]
        return out

    def parse_word(self, text) -> Word:
        """Parse a word from a string (single-character letters) or list."""
        if isinstance(text, (list, tuple)):
            return self.require_word(tuple(text))
        if text == "":
            return EPSILON
        letters = set(itertools.chain.from_iterable(self._alphabets))
        if all(len(x) == 1 for x in letters):
            return self.require_word(tuple(text))
        raise InvalidWord("multi-character letters: words must be given as lists")

    def format_word(self, word: Word) -> str:
        letters = set(itertools.chain.from_iterable(self._alphabets))
        if all(len(x) == 1 for x in letters):
            return "".join(word) if word else "e"
        return ".".join(word) if word else "e"

    # -- value semantics ---------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, SequenceSpace)
            and self.kind == other.kind
            and self._alphabets == other._alphabets
            and self._successors == other._successors
        )

    def __hash__(self):
        return hash((self.kind, self._alphabets, tuple(tuple(sorted(s.items())) for s in self._successors)))

    def __repr__(self):
        return f"SequenceSpace({self.kind}, {self._alphabets[0]!r}...)"


def is_prefix(p: Word, w: Word) -> bool:
    return len(p) <= len(w) and w[: len(p)] == p


def _check_same_space(a: "ClopenSet", b: "ClopenSet"):
    if a.space != b.space:
        raise SpaceMismatch("clopen sets over different spaces")


def canonical_words(space: SequenceSpace, words: Iterable[Word]) -> frozenset[Word]:
    """Unique canonical antichain with the same union of cylinders.

    Absorbs words that extend shorter ones, then merges complete sibling
    families bottom-up (if every allowed one-letter extension of w is
    present, the family collapses to w).
    """
    pool = {space.require_word(w) for w in words}
    if not pool:
        return frozenset()
    # absorb longer words under shorter prefixes
    keep = set()
    for w in sorted(pool, key=len):
        if not any(is_prefix(p, w) for p in keep if len(p) < len(w)):
            keep.add(w)
    # merge complete sibling families, deepest first
    maxlen = max(len(w) for w in keep)
    for length in range(maxlen, 0, -1):
        by_parent: dict[Word, set[Word]] = {}
        for w in keep:
            if len(w) == length:
                by_parent.setdefault(w[:-1], set()).add(w)
        for parent, family in by_parent.items():
            allowed = {parent + (x,) for x in space.letters_after(parent)}
            if family == allowed:
                keep -= family
                keep.add(parent)
    return frozenset(keep)


class ClopenSet:
    """A clopen subset stored as a canonical prefix antichain."""

    __slots__ = ("space", "words")

    def __init__(self, space: SequenceSpace, words: Iterable[Word] = ()):
        self.space = space
        self.words = canonical_words(space, words)

    @classmethod
    def empty(cls, space) -> "ClopenSet":
        return cls(space, ())

    @classmethod
    def whole(cls, space) -> "ClopenSet":
        return cls(space, (EPSILON,))

    @classmethod
    def cylinder(cls, space, word) -> "ClopenSet":
        return cls(space, (space.parse_word(word),))

    def is_empty(self) -> bool:
        return not self.words

    def is_whole(self) -> bool:
        return self.words == frozenset({EPSILON})

    def contains_cylinder(self, word: Word) -> bool:
        """Whether the whole cylinder of ``word`` lies inside this set.

        Exact for words at least as deep as every antichain word; used by
        the depth-n enumeration oracles in the tests.
        """
        return any(is_prefix(p, word) for p in self.words)

    def union(self, other: "ClopenSet") -> "ClopenSet":
        _check_same_space(self, other)
        return ClopenSet(self.space, self.words | other.words)

    def intersect(self, other: "ClopenSet") -> "ClopenSet":
        _check_same_space(self, other)
        out = []
        for a in self.words:
            for b in other.words:
                if is_prefix(a, b):
                    out.append(b)
                elif is_prefix(b, a):
                    out.append(a)
        return ClopenSet(self.space, out)

    def complement(self) -> "ClopenSet":
        return ClopenSet(self.space, self._complement_below(EPSILON, list(self.words)))

    def _complement_below(self, prefix: Word, rel: list[Word]) -> list[Word]:
        # rel: suffixes of antichain words relative to prefix
        if any(w == EPSILON for w in rel):
            return []
        if not rel:
            return [prefix]
        out = []
        for x in self.space.letters_after(prefix):
            out.extend(self._complement_below(prefix + (x,), [w[1:] for w in rel if w[0] == x]))
        return out

    def difference(self, other: "ClopenSet") -> "ClopenSet":
        return self.intersect(other.complement())

    def is_disjoint(self, other: "ClopenSet") -> bool:
        return self.intersect(other).is_empty()

    def is_subset(self, other: "ClopenSet") -> bool:
        return self.intersect(other) == self

    def __eq__(self, other):
        return (
            isinstance(other, ClopenSet)
            and self.space == other.space
            and self.words == other.words
        )

    def __hash__(self):
        return hash(self.words)

    def __repr__(self):
        inner = ", ".join(sorted(self.space.format_word(w) for w in self.words))
        return "{" + inner + "}"


def refine(inputs: list[ClopenSet], space: SequenceSpace | None = None) -> list[ClopenSet]:
    """Coarsest clopen partition of the space refining every input and its
    complement.  ``refine([])`` is the one-cell partition."""
    if space is None:
        if not inputs:
            raise ValidationError("refine([]) needs an explicit space")
        space = inputs[0].space
    cells = [ClopenSet.whole(space)]
    for u in inputs:
        if u.space != space:
            raise SpaceMismatch("refine over mixed spaces")
        nxt = []
        for cell in cells:
            inside = cell.intersect(u)
            outside = cell.difference(u)
            if not inside.is_empty():
                nxt.append(inside)
            if not outside.is_empty():
                nxt.append(outside)
        cells = nxt
    return sorted(cells, key=lambda c: sorted(c.words))
