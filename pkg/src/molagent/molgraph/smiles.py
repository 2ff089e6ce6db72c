"""SMILES parser producing immutable Molecule graphs."""

from __future__ import annotations

from dataclasses import dataclass

from . import elements
from .aromaticity import AtomState, perceive
from .model import (
    AROMATIC,
    DOUBLE,
    SINGLE,
    TRIPLE,
    Atom,
    Bond,
    Molecule,
    SmilesError,
)
from .rings import connected_components, ring_edges, sssr

_BOND_SYMBOLS = {"-": SINGLE, "=": DOUBLE, "#": TRIPLE, ":": AROMATIC, "/": SINGLE, "\\": SINGLE}
_KEKULE_STEP_LIMIT = 200_000


@dataclass
class _RawAtom:
    element: int
    aromatic: bool
    pos: int
    bracket: bool = False
    charge: int = 0
    hcount: int = 0
    isotope: int | None = None
    chirality: str | None = None
    atom_class: int | None = None


@dataclass
class _RawBond:
    a: int
    b: int
    symbol: str | None
    pos: int


def default_hydrogens(element: int, aromatic: bool, bond_sum: int, n_aromatic: int) -> int | None:
    """Implicit H count for an organic-subset atom, or None on valence error.

    ``bond_sum`` counts aromatic bonds as 1; when the atom is aromatic one
    extra unit is reserved for its pi bond where the valence rules demand it.
    """
    allowed = elements.VALENCES.get(element)
    if allowed is None:
        return 0
    s = bond_sum + (1 if aromatic and _needs_pi(element, False, bond_sum, 0, 0, n_aromatic) else 0)
    for v in allowed:
        if v >= s:
            return v - s
    return None


def _needs_pi(element: int, bracket: bool, s: int, hcount: int, charge: int, n_aromatic: int) -> bool:
    """Whether an aromatic atom must receive a double bond in the Kekulé form."""
    if n_aromatic == 0:
        return False
    total = s + (hcount if bracket else 0)
    allowed = elements.allowed_valences(element, charge if bracket else 0)
    if not allowed:
        return False
    target = next((v for v in allowed if v >= total), None)
    if target is None or target == total:
        return False
    if bracket or element in (5, 6):
        return True
    return (target - total) % 2 == 1


class _Parser:
    def __init__(self, text: str):
        self.text = text
        stripped = text.strip()
        self.offset = len(text) - len(text.lstrip())
        self.s = stripped
        self.atoms: list[_RawAtom] = []
        self.bonds: list[_RawBond] = []
        self.bonded: set[frozenset] = set()

    def error(self, reason: str, i: int) -> SmilesError:
        return SmilesError(reason, i + 1 + self.offset)

    def parse(self):
        s = self.s
        n = len(s)
        prev: int | None = None
        pending: tuple[str, int] | None = None
        branches: list[tuple[int, int]] = []
        open_rings: dict[int, tuple[int, str | None, int]] = {}
        last = ""
        i = 0
        while i < n:
            ch = s[i]
            if ch == "(":
                if prev is None:
                    raise self.error("branch opened before any atom", i)
                if pending is not None:
                    raise self.error(f"bond symbol '{pending[0]}' before branch", pending[1])
                branches.append((prev, i))
                last = "("
                i += 1
                continue
            if ch == ")":
                if not branches:
                    raise self.error("unmatched closing parenthesis", i)
                if pending is not None:
                    raise self.error(f"bond symbol '{pending[0]}' not followed by an atom", pending[1])
                if last == "(":
                    raise self.error("empty branch", i)
                prev = branches.pop()[0]
                last = ")"
                i += 1
                continue
            if ch in _BOND_SYMBOLS or ch == "$":
                if ch == "$":
                    raise self.error("quadruple bonds are not supported", i)
                if prev is None:
                    raise self.error(f"bond symbol '{ch}' without preceding atom", i)
                if pending is not None:
                    raise self.error("two consecutive bond symbols", i)
                pending = (ch, i)
                last = "bond"
                i += 1
                continue
            if ch == ".":
                if pending is not None:
                    raise self.error(f"bond symbol '{pending[0]}' not followed by an atom", pending[1])
                if prev is None or last == "(":
                    raise self.error("empty component before '.'", i)
                if branches:
                    raise self.error("component separator inside a branch", i)
                prev = None
                last = "."
                i += 1
                continue
            if ch.isdigit() or ch == "%":
                start = i
                if ch == "%":
                    digits = s[i + 1 : i + 3]
                    if len(digits) == 2 and digits.isdigit():
                        num = int(digits)
                        i += 3
                    else:
                        raise self.error("'%' must be followed by two digits", i)
                else:
                    num = int(ch)
                    i += 1
                if prev is None:
                    raise self.error(f"ring-closure {num} without preceding atom", start)
                sym = pending[0] if pending else None
                if num in open_rings:
                    other, osym, opos = open_rings.pop(num)
                    if other == prev:
                        raise self.error(f"ring closure {num} bonds an atom to itself", start)
                    if osym and sym and osym != sym:
                        raise self.error(f"conflicting bond symbols for ring closure {num}", start)
                    self._add_bond(other, prev, sym or osym, start)
                else:
                    open_rings[num] = (prev, sym, start)
                pending = None
                last = "ring"
                continue
            start = i
            if ch == "[":
                atom, i = self._bracket(i)
            else:
                atom, i = self._organic(i)
            idx = len(self.atoms)
            self.atoms.append(atom)
            if prev is not None:
                self._add_bond(prev, idx, pending[0] if pending else None, pending[1] if pending else start)
            pending = None
            prev = idx
            last = "atom"
        if pending is not None:
            raise self.error(f"bond symbol '{pending[0]}' not followed by an atom", pending[1])
        if branches:
            raise self.error("unclosed branch", branches[-1][1])
        if open_rings:
            num, (_, _, pos) = min(open_rings.items(), key=lambda kv: kv[1][2])
            raise self.error(f"unclosed ring bond {num}", pos)
        if last == ".":
            raise self.error("empty component after '.'", n - 1)
        if not self.atoms:
            raise self.error("no atoms in SMILES", 0)

    def _add_bond(self, a: int, b: int, symbol: str | None, pos: int):
        key = frozenset((a, b))
        if key in self.bonded:
            raise self.error("duplicate bond between the same two atoms", pos)
        self.bonded.add(key)
        self.bonds.append(_RawBond(a, b, symbol, pos + 1 + self.offset))

    def _organic(self, i: int) -> tuple[_RawAtom, int]:
        s = self.s
        pos = i + 1 + self.offset
        two = s[i : i + 2]
        if two in ("Cl", "Br"):
            return _RawAtom(elements.ATOMIC_NUMBERS[two], False, pos), i + 2
        ch = s[i]
        if (
            len(two) == 2
            and two in elements.ATOMIC_NUMBERS
            and two[1] not in elements.AROMATIC_ORGANIC
        ):
            raise self.error(f"atom symbol '{two}' must be written in brackets", i)
        if ch in elements.ORGANIC_SUBSET:
            return _RawAtom(elements.ATOMIC_NUMBERS[ch], False, pos), i + 1
        if ch in elements.AROMATIC_ORGANIC:
            return _RawAtom(elements.ATOMIC_NUMBERS[ch.upper()], True, pos), i + 1
        if ch == "*":
            return _RawAtom(0, False, pos), i + 1
        if ch.isalpha():
            return self._unknown(i)
        raise self.error(f"unexpected character '{ch}'", i)

    def _unknown(self, i: int):
        s = self.s
        sym = s[i : i + 2] if i + 1 < len(s) and s[i + 1].islower() and s[i : i + 2] in elements.ATOMIC_NUMBERS else s[i]
        if sym in elements.ATOMIC_NUMBERS and sym != "*":
            raise self.error(f"atom symbol '{sym}' must be written in brackets", i)
        raise self.error(f"unknown atom symbol '{sym}'", i)

    def _bracket(self, i: int) -> tuple[_RawAtom, int]:
        s = self.s
        close = s.find("]", i)
        if close == -1:
            raise self.error("unclosed bracket atom", i)
        j = i + 1
        pos = i + 1 + self.offset

        def num_at(k):
            start = k
            while k < close and s[k].isdigit():
                k += 1
            return (int(s[start:k]) if k > start else None), k

        isotope, j = num_at(j)
        if j >= close:
            raise self.error("bracket atom without element symbol", j)
        aromatic = False
        if s[j] == "*":
            element, j = 0, j + 1
        elif s[j].islower():
            two = s[j : j + 2]
            if two in elements.AROMATIC_BRACKET and j + 1 < close:
                sym, j = two, j + 2
            elif s[j] in elements.AROMATIC_BRACKET:
                sym, j = s[j], j + 1
            else:
                raise self.error(f"unknown aromatic symbol '{s[j]}'", j)
            element = elements.ATOMIC_NUMBERS[sym.capitalize()]
            aromatic = True
        elif s[j].isupper():
            two = s[j : j + 2]
            if j + 1 < close and s[j + 1].islower() and two in elements.ATOMIC_NUMBERS:
                sym, j = two, j + 2
            elif s[j] in elements.ATOMIC_NUMBERS:
                sym, j = s[j], j + 1
            else:
                raise self.error(f"unknown atom symbol '{s[j]}'", j)
            element = elements.ATOMIC_NUMBERS[sym]
        else:
            raise self.error(f"unexpected character '{s[j]}' in bracket atom", j)

        chirality = None
        if j < close and s[j] == "@":
            k = j + 1
            if k < close and s[k] == "@":
                k += 1
            elif s[k : k + 2] in ("TH", "AL", "SP", "TB", "OH"):
                k += 2
                while k < close and s[k].isdigit():
                    k += 1
            chirality = s[j:k]
            j = k
        hcount = 0
        if j < close and s[j] == "H":
            n_h, j = num_at(j + 1)
            hcount = 1 if n_h is None else n_h
        charge = 0
        if j < close and s[j] in "+-":
            sign = 1 if s[j] == "+" else -1
            ch = s[j]
            k = j + 1
            if k < close and s[k].isdigit():
                mag, k = num_at(k)
            else:
                mag = 1
                while k < close and s[k] == ch:
                    mag += 1
                    k += 1
            charge = sign * mag
            j = k
        atom_class = None
        if j < close and s[j] == ":":
            atom_class, k = num_at(j + 1)
            if atom_class is None:
                raise self.error("atom class ':' without a number", j)
            j = k
        if j != close:
            raise self.error(f"unexpected character '{s[j]}' in bracket atom", j)
        atom = _RawAtom(
            element,
            aromatic,
            pos,
            bracket=True,
            charge=charge,
            hcount=hcount,
            isotope=isotope,
            chirality=chirality,
            atom_class=atom_class,
        )
        return atom, close + 1


def _kekulize(need: list[bool], arom_adj: list[list[int]], atoms: list[_RawAtom]) -> dict[frozenset, int]:
    """Choose double bonds among aromatic bonds so every pi-needing atom gets exactly one."""
    nodes = [i for i, flag in enumerate(need) if flag]
    partners = {i: [j for j in arom_adj[i] if need[j]] for i in nodes}
    match: dict[int, int] = {}
    steps = 0

    def solve() -> bool:
        nonlocal steps
        steps += 1
        if steps > _KEKULE_STEP_LIMIT:
            return False
        best, best_opts = None, None
        for v in nodes:
            if v in match:
                continue
            opts = [w for w in partners[v] if w not in match]
            if best_opts is None or len(opts) < len(best_opts):
                best, best_opts = v, opts
                if not opts:
                    break
        if best is None:
            return True
        for w in best_opts:
            match[best] = w
            match[w] = best
            if solve():
                return True
            del match[best]
            del match[w]
        return False

    if not solve():
        unmatched = [v for v in nodes if v not in match] or nodes
        raise SmilesError("cannot kekulize aromatic system", atoms[unmatched[0]].pos)
    return {frozenset((v, w)): 2 for v, w in match.items() if v < w}


def parse_smiles(text: str) -> Molecule:
    """Parse SMILES text into a Molecule.

    Raises:
        SmilesError: with a 1-based position on syntax or valence problems.
    """
    if text is None or not str(text).strip():
        raise SmilesError("empty SMILES", 1)
    p = _Parser(str(text))
    p.parse()
    atoms, raw_bonds = p.atoms, p.bonds
    n = len(atoms)

    orders: list[str] = []
    for b in raw_bonds:
        a1, a2 = atoms[b.a], atoms[b.b]
        if b.symbol is None:
            orders.append(AROMATIC if a1.aromatic and a2.aromatic else SINGLE)
        else:
            order = _BOND_SYMBOLS[b.symbol]
            if order == AROMATIC and not (a1.aromatic and a2.aromatic):
                raise SmilesError("aromatic bond between non-aromatic atoms", b.pos)
            orders.append(order)

    edges = [(b.a, b.b) for b in raw_bonds]
    cyclic = ring_edges(n, edges)
    in_ring_atom = [False] * n
    for k in cyclic:
        in_ring_atom[edges[k][0]] = in_ring_atom[edges[k][1]] = True
    for k, b in enumerate(raw_bonds):
        if orders[k] == AROMATIC and k not in cyclic:
            if b.symbol is None:
                # implicit bond between aromatic atoms of different rings
                orders[k] = SINGLE
            else:
                raise SmilesError("aromatic bond outside a ring", b.pos)
    for i, a in enumerate(atoms):
        if a.aromatic and not in_ring_atom[i]:
            raise SmilesError("aromatic atom outside a ring", a.pos)

    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for k, (x, y) in enumerate(edges):
        adj[x].append((y, k))
        adj[y].append((x, k))

    int_order = {SINGLE: 1, DOUBLE: 2, TRIPLE: 3, AROMATIC: 1}
    need = [False] * n
    arom_adj: list[list[int]] = [[] for _ in range(n)]
    for i, a in enumerate(atoms):
        if not a.aromatic:
            continue
        s = sum(int_order[orders[k]] for _, k in adj[i])
        n_arom = sum(1 for _, k in adj[i] if orders[k] == AROMATIC)
        arom_adj[i] = [j for j, k in adj[i] if orders[k] == AROMATIC]
        need[i] = _needs_pi(a.element, a.bracket, s, a.hcount, a.charge, n_arom)
    doubles = _kekulize(need, arom_adj, atoms)
    kekule = []
    for k, (x, y) in enumerate(edges):
        if orders[k] == AROMATIC:
            kekule.append(doubles.get(frozenset((x, y)), 1))
        else:
            kekule.append(int_order[orders[k]])

    hydrogens = [0] * n
    for i, a in enumerate(atoms):
        s = sum(kekule[k] for _, k in adj[i])
        if a.bracket:
            hydrogens[i] = a.hcount
            allowed = elements.allowed_valences(a.element, a.charge)
            if allowed is not None and s + a.hcount > max(allowed):
                raise SmilesError(
                    f"valence error: {_label(a)} has valence {s + a.hcount}, maximum is {max(allowed)}",
                    a.pos,
                )
        else:
            allowed = elements.VALENCES.get(a.element)
            if allowed is None:
                continue
            v = next((v for v in allowed if v >= s), None)
            if v is None:
                raise SmilesError(
                    f"valence error: {_label(a)} has valence {s}, maximum is {max(allowed)}",
                    a.pos,
                )
            hydrogens[i] = v - s

    ring_list = sssr(n, edges)
    states = [AtomState(a.element, a.charge, hydrogens[i], len(adj[i])) for i, a in enumerate(atoms)]
    ring_flags = [k in cyclic for k in range(len(edges))]
    bond_triples = [(x, y, kekule[k]) for k, (x, y) in enumerate(edges)]
    arom_atoms, arom_bonds = perceive(states, bond_triples, ring_flags, ring_list)
    for k, (x, y) in enumerate(edges):
        # a declared aromatic bond between perceived aromatic atoms that perception
        # left out (a fused interior bond) keeps its Kekule order
        if orders[k] == AROMATIC and not (x in arom_atoms and y in arom_atoms and ring_flags[k]):
            arom_bonds.add(k)
    for i, a in enumerate(atoms):
        if a.aromatic:
            arom_atoms.add(i)

    # fold plain explicit hydrogens into their heavy neighbour
    drop = set()
    for i, a in enumerate(atoms):
        if (
            a.element == 1
            and a.isotope is None
            and a.charge == 0
            and a.hcount == 0
            and len(adj[i]) == 1
            and atoms[adj[i][0][0]].element != 1
            and kekule[adj[i][0][1]] == 1
        ):
            drop.add(i)
            hydrogens[adj[i][0][0]] += 1
    remap = {}
    for i in range(n):
        if i not in drop:
            remap[i] = len(remap)

    final_atoms = []
    for i, a in enumerate(atoms):
        if i in drop:
            continue
        final_atoms.append(
            Atom(
                index=remap[i],
                element=a.element,
                charge=a.charge,
                explicit_h=(a.hcount if a.bracket else None),
                aromatic=i in arom_atoms,
                ring_member=in_ring_atom[i],
                hydrogens=hydrogens[i],
                isotope=a.isotope,
                chirality=a.chirality,
                atom_class=a.atom_class,
                position=a.pos,
            )
        )
    final_bonds = []
    for k, (x, y) in enumerate(edges):
        if x in drop or y in drop:
            continue
        sym = raw_bonds[k].symbol
        final_bonds.append(
            Bond(
                index=len(final_bonds),
                begin=remap[x],
                end=remap[y],
                order=AROMATIC if k in arom_bonds else {1: SINGLE, 2: DOUBLE, 3: TRIPLE}[kekule[k]],
                in_ring=k in cyclic,
                kekule=kekule[k],
                stereo=sym if sym in ("/", "\\") else None,
            )
        )
    rings = tuple(tuple(remap[a] for a in r) for r in ring_list)
    kept_edges = [(b.begin, b.end) for b in final_bonds]
    comps = len(set(connected_components(len(final_atoms), kept_edges)))
    return Molecule(tuple(final_atoms), tuple(final_bonds), rings, str(text), comps)


def _label(a: _RawAtom) -> str:
    sym = elements.symbol(a.element)
    return sym.lower() if a.aromatic else sym
