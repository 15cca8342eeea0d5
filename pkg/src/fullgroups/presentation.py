"""Presentation files: one JSON schema shared by every subcommand.

A presentation bundles a sequence space, automata for germ labels, named
bisections (some of which are marked as the basic generating bisections
of the groupoid), named full-group elements (tables or expressions),
multisections, and named covers.  Everything is validated on load.
"""

from __future__ import annotations

import json
import re
from importlib import resources

from .bisection import Bisection
from .errors import ValidationError
from .fullgroup import FullGroupElement, commutator, invert, multiply, power, tau
from .germs import Automaton, GermContext
from .cylinder import SequenceSpace
from .multisection import Multisection

SCHEMA_VERSION = 1


class Presentation:
    def __init__(self, data: dict, name: str = "presentation"):
        self.name = name
        version = data.get("version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise ValidationError(f"unsupported presentation version {version}")
        try:
            self.space = SequenceSpace.from_description(data["space"])
        except KeyError:
            raise ValidationError("presentation needs a 'space' entry") from None
        automata = [Automaton.from_description(d) for d in data.get("automata", [])]
        self.ctx = GermContext(
            self.space,
            automata,
            semantics=data.get("semantics", "germs"),
            max_states=data.get("max_germ_states", 64),
        )
        self.bisections: dict[str, Bisection] = {}
        for bname, table in data.get("bisections", {}).items():
            self.bisections[bname] = self._parse_table(table, f"bisection {bname!r}")
        self.basics: list[str] = list(data.get("basics", []))
        for bname in self.basics:
            if bname not in self.bisections:
                raise ValidationError(f"basic bisection {bname!r} is not defined")
        self.elements: dict[str, FullGroupElement] = {}
        for ename, spec in data.get("elements", {}).items():
            if isinstance(spec, dict):
                table = self._parse_table(spec, f"element {ename!r}")
                self.elements[ename] = FullGroupElement(table)
            else:
                self.elements[ename] = self.eval(spec)
        self.multisections: dict[str, Multisection] = {}
        for mname, grid in data.get("multisections", {}).items():
            rows = [[self._parse_table(t, f"multisection {mname!r}") for t in row] for row in grid]
            self.multisections[mname] = Multisection(self.ctx, rows)
        self.covers: dict[str, list[str]] = {}
        for cname, names in data.get("covers", {}).items():
            for bname in names:
                if bname not in self.bisections:
                    raise ValidationError(f"cover {cname!r} references unknown bisection {bname!r}")
            self.covers[cname] = list(names)

    def _parse_table(self, table: dict, what: str) -> Bisection:
        try:
            return Bisection.from_table(self.ctx, table["dom"], table["germ"], table["ran"])
        except (KeyError, ValidationError) as exc:
            raise ValidationError(f"{self.name}: {what}: {exc}") from None

    def basic_bisections(self) -> list[Bisection]:
        return [self.bisections[n] for n in self.basics]

    def cover(self, name: str) -> list[tuple[str, Bisection]]:
        return [(n, self.bisections[n]) for n in self.covers[name]]

    # -- element expressions -------------------------------------------------

    def eval(self, expr: str) -> FullGroupElement:
        """Evaluate an element expression: names, g*h, g^-1, [g,h], tau(F)."""
        tokens = _tokenize(expr)
        value, rest = self._parse_product(tokens)
        if rest:
            raise ValidationError(f"trailing input in expression {expr!r}")
        return value

    def _parse_product(self, tokens):
        value, tokens = self._parse_factor(tokens)
        while tokens and tokens[0] == "*":
            rhs, tokens = self._parse_factor(tokens[1:])
            value = multiply(value, rhs)
        return value, tokens

    def _parse_factor(self, tokens):
        value, tokens = self._parse_atom(tokens)
        while tokens and tokens[0] == "^":
            if len(tokens) < 2 or not re.fullmatch(r"-?\d+", tokens[1]):
                raise ValidationError("exponent must be an integer")
            value = power(value, int(tokens[1]))
            tokens = tokens[2:]
        return value, tokens

    def _parse_atom(self, tokens):
        if not tokens:
            raise ValidationError("unexpected end of expression")
        head, rest = tokens[0], tokens[1:]
        if head == "(":
            value, rest = self._parse_product(rest)
            if not rest or rest[0] != ")":
                raise ValidationError("missing closing parenthesis")
            return value, rest[1:]
        if head == "[":
            left, rest = self._parse_product(rest)
            if not rest or rest[0] != ",":
                raise ValidationError("commutator needs two arguments")
            right, rest = self._parse_product(rest[1:])
            if not rest or rest[0] != "]":
                raise ValidationError("missing closing bracket")
            return commutator(left, right), rest[1:]
        if head == "tau":
            if len(rest) < 3 or rest[0] != "(" or rest[2] != ")":
                raise ValidationError("tau takes one named bisection")
            bname = rest[1]
            if bname not in self.bisections:
                raise ValidationError(f"unknown bisection {bname!r}")
            return tau(self.bisections[bname]), rest[3:]
        if re.fullmatch(r"\w+", head):
            if head not in self.elements:
                raise ValidationError(f"unknown element {head!r}")
            return self.elements[head], rest
        raise ValidationError(f"unexpected token {head!r}")


def _tokenize(expr: str):
    tokens = re.findall(r"\w+|\^|-?\d+|[*\[\],()]", expr.replace(" ", ""))
    if "".join(tokens).replace(" ", "") != expr.replace(" ", ""):
        raise ValidationError(f"cannot tokenize expression {expr!r}")
    return tokens


def load(path) -> Presentation:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: not valid JSON: {exc}") from None
    return Presentation(data, name=str(path))


def load_bundled(name: str) -> Presentation:
    """Load one of the presentations shipped inside the package."""
    ref = resources.files("fullgroups").joinpath("data", f"{name}.json")
    with ref.open("r", encoding="utf-8") as fh:
        data = json.load(fh)
    return Presentation(data, name=name)


def bundled_names() -> list[str]:
    out = []
    for entry in resources.files("fullgroups").joinpath("data").iterdir():
        if entry.name.endswith(".json"):
            out.append(entry.name[:-5])
    return sorted(out)
