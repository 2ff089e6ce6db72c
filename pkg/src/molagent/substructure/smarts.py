"""Compiler for a SMARTS subset.

Supported atom primitives: ``*``, ``a``, ``A``, element symbols (uppercase
aliphatic, lowercase aromatic), ``#n``, ``H<n>``, ``D<n>``, ``X<n>``,
``v<n>``, ``R``/``R<n>``, ``r``/``r<n>``, ``x<n>``, charges and isotopes,
combined with ``!``, ``&``, ``,`` and ``;``. Bond primitives: ``-``, ``=``,
``#``, ``:``, ``~``, ``@``, ``/`` and ``\\`` with the same operators.
Recursive ``$()`` expressions and ``.`` component grouping are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..molgraph import elements
from ..molgraph.model import AROMATIC, DOUBLE, SINGLE, TRIPLE, Molecule


class SmartsError(ValueError):
    """Malformed SMARTS text."""

    def __init__(self, reason: str, position: int, token: str = ""):
        self.reason = reason
        self.position = position
        self.token = token
        super().__init__(f"position {position}: {reason}")


class UnsupportedSmartsError(SmartsError):
    """SMARTS uses a construct outside the supported subset."""


# ---------------------------------------------------------------- predicates


@dataclass(frozen=True)
class AtomPrimitive:
    kind: str
    value: object = None

    def __call__(self, m: Molecule, i: int) -> bool:
        a = m.atoms[i]
        k, v = self.kind, self.value
        if k == "any":
            return True
        if k == "aromatic":
            return a.aromatic
        if k == "aliphatic":
            return not a.aromatic
        if k == "element":
            z, arom = v
            return a.element == z and a.aromatic == arom
        if k == "atomic_number":
            return a.element == v
        if k == "hcount":
            return a.hydrogens == v
        if k == "degree":
            return m.degree(i) == v
        if k == "connectivity":
            return m.degree(i) + a.hydrogens == v
        if k == "valence":
            return m.valence(i) == v
        if k == "ring_count":
            return a.ring_member if v is None else m.ring_counts[i] == v
        if k == "ring_size":
            if v is None:
                return a.ring_member
            return m.smallest_ring_sizes[i] == v if v else not a.ring_member
        if k == "ring_connectivity":
            return a.ring_member if v is None else m.ring_bond_counts[i] == v
        if k == "charge":
            return a.charge == v
        if k == "isotope":
            return a.isotope == v
        raise AssertionError(k)

    def describe(self) -> str:
        k, v = self.kind, self.value
        if k == "any":
            return "any atom"
        if k in ("aromatic", "aliphatic"):
            return k
        if k == "element":
            z, arom = v
            return f"{'aromatic' if arom else 'aliphatic'} {elements.symbol(z)}"
        if k == "atomic_number":
            return f"atomic number {v}"
        if k == "ring_count" and v is None:
            return "in a ring"
        if k == "ring_size" and v is None:
            return "in a ring"
        names = {
            "hcount": "hydrogen count",
            "degree": "degree",
            "connectivity": "connectivity",
            "valence": "valence",
            "ring_count": "ring membership count",
            "ring_size": "smallest ring size",
            "ring_connectivity": "ring bond count",
            "charge": "charge",
            "isotope": "isotope",
        }
        return f"{names[k]} {v}"


@dataclass(frozen=True)
class BondPrimitive:
    kind: str

    def __call__(self, m: Molecule, b: int) -> bool:
        bond = m.bonds[b]
        k = self.kind
        if k == "any":
            return True
        if k == "ring":
            return bond.in_ring
        if k == "default":
            return bond.order in (SINGLE, AROMATIC)
        return bond.order == k

    def describe(self) -> str:
        return {"any": "any bond", "ring": "ring bond", "default": "single or aromatic"}.get(
            self.kind, f"{self.kind} bond"
        )


@dataclass(frozen=True)
class Not:
    item: object

    def __call__(self, m, i) -> bool:
        return not self.item(m, i)

    def describe(self) -> str:
        return f"not {self.item.describe()}"


@dataclass(frozen=True)
class And:
    items: tuple

    def __call__(self, m, i) -> bool:
        return all(p(m, i) for p in self.items)

    def describe(self) -> str:
        return " and ".join(_wrap(p) for p in self.items)


@dataclass(frozen=True)
class Or:
    items: tuple

    def __call__(self, m, i) -> bool:
        return any(p(m, i) for p in self.items)

    def describe(self) -> str:
        return " or ".join(_wrap(p) for p in self.items)


def _wrap(p) -> str:
    text = p.describe()
    return f"({text})" if isinstance(p, (And, Or)) else text


ANY_BOND_DEFAULT = BondPrimitive("default")


@dataclass(frozen=True)
class Pattern:
    """A compiled, connected SMARTS pattern."""

    source: str
    atoms: tuple
    bonds: tuple  # (i, j, predicate)
    min_count: int = 1
    adjacency: tuple = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        if not self.adjacency:
            adj = [[] for _ in self.atoms]
            for k, (i, j, _) in enumerate(self.bonds):
                adj[i].append((j, k))
                adj[j].append((i, k))
            object.__setattr__(self, "adjacency", tuple(tuple(a) for a in adj))

    def describe(self) -> str:
        if len(self.atoms) == 1 and not self.bonds:
            return self.atoms[0].describe()
        return f"{len(self.atoms)}-atom pattern {self.source}"


# ---------------------------------------------------------------- parsing

_BOND_KINDS = {"-": SINGLE, "=": DOUBLE, "#": TRIPLE, ":": AROMATIC, "~": "any", "@": "ring", "/": SINGLE, "\\": SINGLE}
_BOND_CHARS = set(_BOND_KINDS) | {"!", "&", ";", ","}
_UNBRACKETED = {
    "Cl": (17, False), "Br": (35, False), "B": (5, False), "C": (6, False), "N": (7, False),
    "O": (8, False), "P": (15, False), "S": (16, False), "F": (9, False), "I": (53, False),
    "b": (5, True), "c": (6, True), "n": (7, True), "o": (8, True), "p": (15, True), "s": (16, True),
}
_AROMATIC_SYMBOLS = {"b": 5, "c": 6, "n": 7, "o": 8, "p": 15, "s": 16, "se": 34, "as": 33, "te": 52}
_COUNT_PRIMS = {"D": ("degree", 1), "X": ("connectivity", 1), "v": ("valence", 1), "x": ("ring_connectivity", None)}


class _ExprParser:
    """Operator-precedence parser for bracket atom and bond expressions."""

    def __init__(self, text: str, start: int, end: int, primitive):
        self.t = text
        self.i = start
        self.end = end
        self.primitive = primitive

    def parse(self):
        node = self.low_and()
        if self.i != self.end:
            raise SmartsError(f"unexpected '{self.t[self.i]}'", self.i + 1, self.t[self.i])
        return node

    def low_and(self):
        items = [self.or_expr()]
        while self.i < self.end and self.t[self.i] == ";":
            self.i += 1
            items.append(self.or_expr())
        return items[0] if len(items) == 1 else And(tuple(items))

    def or_expr(self):
        items = [self.high_and()]
        while self.i < self.end and self.t[self.i] == ",":
            self.i += 1
            items.append(self.high_and())
        return items[0] if len(items) == 1 else Or(tuple(items))

    def high_and(self):
        items = [self.unary()]
        while self.i < self.end and self.t[self.i] not in ";,":
            if self.t[self.i] == "&":
                self.i += 1
            items.append(self.unary())
        return items[0] if len(items) == 1 else And(tuple(items))

    def unary(self):
        if self.i >= self.end:
            raise SmartsError("expression ends unexpectedly", self.i + 1)
        if self.t[self.i] == "!":
            self.i += 1
            return Not(self.unary())
        node, self.i = self.primitive(self.t, self.i, self.end)
        return node


def _digits(t: str, i: int, end: int) -> tuple[int | None, int]:
    j = i
    while j < end and t[j].isdigit():
        j += 1
    return (int(t[i:j]) if j > i else None), j


def _atom_primitive(t: str, i: int, end: int):
    ch = t[i]
    pos = i + 1
    if ch == "$":
        raise UnsupportedSmartsError("recursive SMARTS '$(' is not supported", pos, "$(")
    if ch == "*":
        return AtomPrimitive("any"), i + 1
    if ch == "#":
        num, j = _digits(t, i + 1, end)
        if num is None:
            raise SmartsError("'#' must be followed by an atomic number", pos, "#")
        return AtomPrimitive("atomic_number", num), j
    if ch.isdigit():
        num, j = _digits(t, i, end)
        return AtomPrimitive("isotope", num), j
    if ch in "+-":
        sign = 1 if ch == "+" else -1
        j = i + 1
        num, j2 = _digits(t, j, end)
        if num is not None:
            return AtomPrimitive("charge", sign * num), j2
        mag = 1
        while j < end and t[j] == ch:
            mag += 1
            j += 1
        return AtomPrimitive("charge", sign * mag), j
    two = t[i : i + 2] if i + 1 < end else ""
    if ch.isupper() and two[1:].islower() and two in elements.ATOMIC_NUMBERS:
        return AtomPrimitive("element", (elements.ATOMIC_NUMBERS[two], False)), i + 2
    if ch == "H":
        num, j = _digits(t, i + 1, end)
        return AtomPrimitive("hcount", 1 if num is None else num), j
    if ch in _COUNT_PRIMS:
        kind, default = _COUNT_PRIMS[ch]
        num, j = _digits(t, i + 1, end)
        return AtomPrimitive(kind, default if num is None else num), j
    if ch == "R":
        num, j = _digits(t, i + 1, end)
        if num == 0:
            return Not(AtomPrimitive("ring_count", None)), j
        return AtomPrimitive("ring_count", num), j
    if ch == "r":
        num, j = _digits(t, i + 1, end)
        return AtomPrimitive("ring_size", num), j
    if two in _AROMATIC_SYMBOLS:
        return AtomPrimitive("element", (_AROMATIC_SYMBOLS[two], True)), i + 2
    if ch == "a":
        return AtomPrimitive("aromatic"), i + 1
    if ch == "A":
        return AtomPrimitive("aliphatic"), i + 1
    if ch in _AROMATIC_SYMBOLS:
        return AtomPrimitive("element", (_AROMATIC_SYMBOLS[ch], True)), i + 1
    if ch.isupper() and ch in elements.ATOMIC_NUMBERS:
        return AtomPrimitive("element", (elements.ATOMIC_NUMBERS[ch], False)), i + 1
    raise UnsupportedSmartsError(f"unsupported SMARTS primitive '{ch}'", pos, ch)


def _bond_primitive(t: str, i: int, end: int):
    ch = t[i]
    if ch in _BOND_KINDS:
        return BondPrimitive(_BOND_KINDS[ch]), i + 1
    raise UnsupportedSmartsError(f"unsupported SMARTS bond primitive '{ch}'", i + 1, ch)


def _bracket_atom(t: str, i: int):
    close = t.find("]", i)
    if close == -1:
        raise SmartsError("unclosed bracket atom", i + 1, "[")
    if "$" in t[i:close] or "(" in t[i:close]:
        k = t.index("$", i) if "$" in t[i:close] else t.index("(", i)
        raise UnsupportedSmartsError("recursive SMARTS '$(' is not supported", k + 1, "$(")
    body = t[i + 1 : close]
    if not body:
        raise SmartsError("empty bracket atom", i + 1, "[]")
    stripped = body.lstrip("0123456789")
    if stripped and stripped[0] == "H" and all(c in "+-0123456789" for c in stripped[1:]):
        # lone hydrogen atom, e.g. [H] or [2H+]
        iso, j = _digits(t, i + 1, close)
        node = AtomPrimitive("atomic_number", 1)
        rest = _ExprParser(t, j + 1, close, _atom_primitive).parse() if j + 1 < close else None
        if iso is not None:
            node = And((AtomPrimitive("isotope", iso), node))
        if rest is not None:
            node = And((node, rest))
        return node, close + 1
    return _ExprParser(t, i + 1, close, _atom_primitive).parse(), close + 1


def compile_pattern(text: str, min_count: int = 1) -> Pattern:
    """Compile SMARTS text into a Pattern.

    Raises:
        UnsupportedSmartsError: for constructs outside the subset; the
            offending token is in ``.token``.
        SmartsError: for malformed input.
    """
    if min_count < 1:
        raise ValueError("min_count must be a positive integer")
    t = text.strip()
    if not t:
        raise SmartsError("empty SMARTS", 1)
    atoms: list = []
    bonds: list = []
    prev = None
    pending = None
    branches: list[int] = []
    rings: dict[int, tuple[int, object, int]] = {}
    i = 0
    n = len(t)
    while i < n:
        ch = t[i]
        if ch == ".":
            raise UnsupportedSmartsError("component-level '.' is not supported", i + 1, ".")
        if ch == "(":
            if prev is None:
                raise SmartsError("branch before any atom", i + 1, "(")
            branches.append(prev)
            i += 1
            continue
        if ch == ")":
            if not branches:
                raise SmartsError("unmatched ')'", i + 1, ")")
            if pending is not None:
                raise SmartsError("bond not followed by an atom", i + 1, ")")
            prev = branches.pop()
            i += 1
            continue
        if ch in _BOND_CHARS:
            if prev is None:
                raise SmartsError(f"bond '{ch}' without preceding atom", i + 1, ch)
            j = i
            while j < n and t[j] in _BOND_CHARS:
                j += 1
            pending = _ExprParser(t, i, j, _bond_primitive).parse()
            i = j
            continue
        if ch.isdigit() or ch == "%":
            if prev is None:
                raise SmartsError("ring closure without preceding atom", i + 1, ch)
            if ch == "%":
                num, j = _digits(t, i + 1, min(n, i + 3))
                if num is None or j != i + 3:
                    raise SmartsError("'%' must be followed by two digits", i + 1, "%")
            else:
                num, j = int(ch), i + 1
            if num in rings:
                other, pred, _ = rings.pop(num)
                if other == prev:
                    raise SmartsError("ring closure to the same atom", i + 1, ch)
                bonds.append((other, prev, pending or pred or ANY_BOND_DEFAULT))
            else:
                rings[num] = (prev, pending, i + 1)
            pending = None
            i = j
            continue
        if ch == "[":
            node, i = _bracket_atom(t, i)
        else:
            two = t[i : i + 2]
            if two in _UNBRACKETED:
                node, i = AtomPrimitive("element", _UNBRACKETED[two]), i + 2
            elif ch in _UNBRACKETED:
                node, i = AtomPrimitive("element", _UNBRACKETED[ch]), i + 1
            elif ch == "*":
                node, i = AtomPrimitive("any"), i + 1
            elif ch == "a":
                node, i = AtomPrimitive("aromatic"), i + 1
            elif ch == "A":
                node, i = AtomPrimitive("aliphatic"), i + 1
            else:
                raise UnsupportedSmartsError(f"unsupported SMARTS token '{ch}'", i + 1, ch)
        atoms.append(node)
        idx = len(atoms) - 1
        if prev is not None:
            bonds.append((prev, idx, pending or ANY_BOND_DEFAULT))
        prev = idx
        pending = None
    if pending is not None:
        raise SmartsError("bond not followed by an atom", n, "")
    if branches:
        raise SmartsError("unclosed branch", n, "(")
    if rings:
        num, (_, _, pos) = min(rings.items(), key=lambda kv: kv[1][2])
        raise SmartsError(f"unclosed ring closure {num}", pos, str(num))
    return Pattern(t, tuple(atoms), tuple(bonds), min_count)
