"""Decidable calculus of germ labels: invertible Mealy-automaton transformations.

A germ label is a reduced word over declared automaton states (and their
inverses); it acts on tails of sequences letter by letter.  Under germ
semantics two labels are equal when they induce the same transformation,
decided by bisimulation; under action semantics labels are compared as
reduced formal words.  Labels are only supported over stationary spaces
(full shifts and SFTs); Bratteli path spaces carry the trivial germ only.
"""

from __future__ import annotations

from typing import Iterable

from .cylinder import SequenceSpace, Word
from .errors import StateBoundExceeded, ValidationError

IDENTITY_STATE = "id"

GermWord = tuple[str, ...]

ID: GermWord = ()


def inverse_name(name: str) -> str:
    return name[:-3] if name.endswith("^-1") else name + "^-1"


class Automaton:
    """A finite invertible Mealy automaton over the space's alphabet.

    ``states`` maps a state name to ``{letter: (output_letter, next_state)}``.
    Each state must act as a permutation of the alphabet and preserve the
    transition relation of the space.
    """

    def __init__(self, name: str, states: dict[str, dict[str, tuple[str, str]]]):
        self.name = name
        self.states = {
            s: {x: (str(o), str(n)) for x, (o, n) in trans.items()} for s, trans in states.items()
        }

    @classmethod
    def from_description(cls, desc: dict) -> "Automaton":
        states = {}
        for state, records in desc["states"].items():
            states[state] = {r["on"]: (r["out"], r["to"]) for r in records}
        return cls(desc.get("name", "automaton"), states)


class GermContext:
    """State registry for one presentation: declared automata, the identity
    state, inverses, and a lazily grown table of canonical representatives
    for product labels (germ semantics compares by bisimulation)."""

    def __init__(
        self,
        space: SequenceSpace,
        automata: Iterable[Automaton] = (),
        semantics: str = "germs",
        max_states: int = 64,
    ):
        if semantics not in ("germs", "action"):
            raise ValidationError(f"unknown germ semantics {semantics!r}")
        self.space = space
        self.semantics = semantics
        self.max_states = max_states
        self.base: dict[str, dict[str, tuple[str, str]]] = {}
        alphabet = space.alphabet(0)
        self.base[IDENTITY_STATE] = {x: (x, IDENTITY_STATE) for x in alphabet}
        automata = list(automata)
        if automata and space.level_dependent:
            raise ValidationError("automata require a stationary space")
        for aut in automata:
            for state, trans in aut.states.items():
                if state == IDENTITY_STATE:
                    raise ValidationError("the identity state is implicit; do not redeclare it")
                if state in self.base:
                    raise ValidationError(f"duplicate state name {state!r}")
                self.base[state] = dict(trans)
        self._add_inverses()
        self._validate_states()
        # canonical representatives, seeded with the declared states
        self.declared: tuple[GermWord, ...] = tuple((s,) for s in self.base if s != IDENTITY_STATE)
        self._reps: list[GermWord] = [ID] + list(self.declared)
        self._canon_memo: dict[GermWord, GermWord] = {ID: ID}
        for rep in self.declared:
            self._canon_memo[rep] = rep
        self._equal_memo: dict[tuple[GermWord, GermWord], tuple[bool, Word | None]] = {}

    # -- construction helpers ----------------------------------------------

    def _add_inverses(self):
        base_names = [n for n in self.base if n != IDENTITY_STATE and not n.endswith("^-1")]
        for name in base_names:
            inv = inverse_name(name)
            if inv in self.base:
                continue
            trans = {}
            for x, (y, nxt) in self.base[name].items():
                if y in trans:
                    raise ValidationError(f"state {name!r} is not a permutation of the alphabet")
                nxt_inv = nxt if nxt == IDENTITY_STATE else inverse_name(nxt)
                trans[y] = (x, nxt_inv)
            self.base[inv] = trans
        for name, trans in self.base.items():
            for _, (_, nxt) in trans.items():
                if nxt not in self.base:
                    raise ValidationError(f"state {name!r} steps to unknown state {nxt!r}")

    def _validate_states(self):
        alphabet = set(self.space.alphabet(0))
        for name, trans in self.base.items():
            if set(trans) != alphabet:
                raise ValidationError(f"state {name!r} does not cover the alphabet")
            if {o for o, _ in trans.values()} != alphabet:
                raise ValidationError(f"state {name!r} is not a permutation of the alphabet")
        if self.space.kind == "sft":
            for name, trans in self.base.items():
                for a in alphabet:
                    out_a, nxt = trans[a]
                    for b in self.space.successors(0, a):
                        out_b, _ = self.base[nxt][b]
                        if out_b not in self.space.successors(0, out_a):
                            raise ValidationError(
                                f"state {name!r} breaks the transition relation on ({a},{b})"
                            )

    # -- germ word arithmetic ----------------------------------------------

    def reduce(self, word: Iterable[str]) -> GermWord:
        out: list[str] = []
        for s in word:
            if s == IDENTITY_STATE:
                continue
            if s not in self.base:
                raise ValidationError(f"unknown germ state {s!r}")
            if out and out[-1] == inverse_name(s):
                out.pop()
            else:
                out.append(s)
        return tuple(out)

    def step(self, word: GermWord, letter: str) -> tuple[str, GermWord]:
        """One input letter through the composite: output letter + residual."""
        residual: list[str] = []
        x = letter
        for s in reversed(word):
            x, nxt = self.base[s][x]
            residual.append(nxt)
        return x, self.reduce(reversed(residual))

    def apply(self, word: GermWord, letters: Word) -> Word:
        out = []
        g = word
        for x in letters:
            y, g = self.step(g, x)
            out.append(y)
        return tuple(out)

    def residual(self, word: GermWord, letters: Word) -> GermWord:
        g = word
        for x in letters:
            _, g = self.step(g, x)
        return g

    def compose(self, g1: GermWord, g2: GermWord) -> GermWord:
        """Label of the transformation w -> g1(g2(w))."""
        return self.canon(self.reduce(g1 + g2))

    def inverse(self, word: GermWord) -> GermWord:
        return self.canon(self.reduce(inverse_name(s) for s in reversed(word)))

    # -- equality -----------------------------------------------------------

    def equal(self, g1: GermWord, g2: GermWord) -> bool:
        return self.equal_with_witness(g1, g2)[0]

    def equal_with_witness(self, g1: GermWord, g2: GermWord):
        """Decide equality; on failure return a separating input word.

        Germ semantics: bisimulation of the two composites (the reachable
        residual pairs are finite since residual words never grow).
        Action semantics: reduced words compared literally.
        """
        g1, g2 = self.reduce(g1), self.reduce(g2)
        if g1 == g2:
            return True, None
        if self.semantics == "action":
            return False, None
        key = (g1, g2) if g1 <= g2 else (g2, g1)
        if key in self._equal_memo:
            return self._equal_memo[key]
        # parametrize by the previous letter so SFT germs are only compared
        # on letters that can actually occur
        seen: set[tuple[GermWord, GermWord, str | None]] = set()
        stack: list[tuple[GermWord, GermWord, str | None, Word]] = [(g1, g2, None, ())]
        verdict, witness = True, None
        while stack:
            a, b, prev, path = stack.pop()
            if a == b:
                continue
            state = (a, b, prev)
            if state in seen:
                continue
            seen.add(state)
            letters = self.space.alphabet(0) if prev is None else self.space.successors(0, prev)
            for x in letters:
                ya, ra = self.step(a, x)
                yb, rb = self.step(b, x)
                if ya != yb:
                    verdict, witness = False, path + (x,)
                    stack.clear()
                    break
                stack.append((ra, rb, x, path + (x,)))
        self._equal_memo[key] = (verdict, witness)
        return verdict, witness

    def is_identity(self, word: GermWord) -> bool:
        return self.equal(word, ID)

    # -- canonical representatives ------------------------------------------

    def canon(self, word: GermWord) -> GermWord:
        """First-seen canonical representative of the label's class.

        Structural equality of canonical labels then matches germ equality
        within one context.  The registry is bounded by ``max_states``.
        """
        word = self.reduce(word)
        hit = self._canon_memo.get(word)
        if hit is not None:
            return hit
        if self.semantics == "action":
            self._canon_memo[word] = word
            return word
        for rep in self._reps:
            if self.equal(word, rep):
                self._canon_memo[word] = rep
                return rep
        if len(self._reps) >= self.max_states:
            raise StateBoundExceeded(
                f"germ closure exceeded {self.max_states} states (raise max_states)"
            )
        self._reps.append(word)
        self._canon_memo[word] = word
        return word

    def format(self, word: GermWord) -> str:
        return "*".join(word) if word else IDENTITY_STATE

    def parse(self, text) -> GermWord:
        """Parse a germ label: 'id', '1', 'a', 'a^-1', or '*'-joined products."""
        if isinstance(text, (list, tuple)):
            return self.canon(self.reduce(text))
        if text in ("1", IDENTITY_STATE, ""):
            return ID
        return self.canon(self.reduce(text.split("*")))

    # -- support ------------------------------------------------------------

    def moved_words(self, word: GermWord, prev: str | None = None) -> list[Word]:
        """Relative antichain carrying the closure of the moved points.

        The interior of the fixed set is a union of cylinders; a recursion
        revisiting the same (label, previous letter) state has shrunk to a
        single limit point, whose interior contribution is empty.
        """
        word = self.reduce(word)
        return self._moved(word, prev, frozenset())

    def _moved(self, word, prev, path):
        if self.is_identity(word):
            return []
        state = (word, prev)
        if state in path:
            return [()]
        path = path | {state}
        letters = self.space.alphabet(0) if prev is None else self.space.successors(0, prev)
        pieces: list[Word] = []
        full = True
        for x in letters:
            y, res = self.step(word, x)
            if y != x:
                pieces.append((x,))
                continue
            sub = self._moved(res, x, path)
            if sub != [()]:
                full = False
            pieces.extend((x,) + s for s in sub)
        if full and pieces:
            return [()]
        return pieces

    # -- value semantics ------------------------------------------------------

    def signature(self):
        return (
            self.space,
            self.semantics,
            tuple(sorted((n, tuple(sorted(t.items()))) for n, t in self.base.items())),
        )

    def __eq__(self, other):
        return isinstance(other, GermContext) and self.signature() == other.signature()

    def __hash__(self):
        return hash(self.signature())
