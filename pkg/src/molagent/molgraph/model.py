"""Immutable molecular graph types."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from . import elements

SINGLE = "single"
DOUBLE = "double"
TRIPLE = "triple"
AROMATIC = "aromatic"

BOND_ORDERS = (SINGLE, DOUBLE, TRIPLE, AROMATIC)
_ORDER_VALUE = {SINGLE: 1.0, DOUBLE: 2.0, TRIPLE: 3.0, AROMATIC: 1.5}


class SmilesError(ValueError):
    """Raised for unparsable or chemically invalid SMILES.

    Attributes:
        position: 1-based character offset the problem was detected at.
        reason: message without the position prefix.
    """

    def __init__(self, reason: str, position: int):
        self.reason = reason
        self.position = position
        super().__init__(f"position {position}: {reason}")


@dataclass(frozen=True)
class Atom:
    """A heavy atom with its implicit/explicit hydrogens folded in.

    ``explicit_h`` is the bracket H count, or None for organic-subset atoms
    whose hydrogens were inferred from default valences. ``hydrogens`` is the
    total attached H either way.
    """

    index: int
    element: int
    charge: int = 0
    explicit_h: int | None = None
    aromatic: bool = False
    ring_member: bool = False
    hydrogens: int = 0
    isotope: int | None = None
    chirality: str | None = None
    atom_class: int | None = None
    position: int = 0

    @property
    def symbol(self) -> str:
        return elements.symbol(self.element)

    @property
    def bracketed(self) -> bool:
        return self.explicit_h is not None


@dataclass(frozen=True)
class Bond:
    """A bond between two atoms.

    ``kekule`` is an integer order (1, 2 or 3) from a valid Kekulé
    assignment, used for valence bookkeeping on aromatic systems.
    """

    index: int
    begin: int
    end: int
    order: str
    in_ring: bool = False
    kekule: int = 1
    stereo: str | None = None

    @property
    def endpoints(self) -> tuple[int, int]:
        return (self.begin, self.end)

    @property
    def valence(self) -> float:
        return _ORDER_VALUE[self.order]

    def other(self, atom: int) -> int:
        return self.end if atom == self.begin else self.begin


@dataclass(frozen=True)
class Molecule:
    """Attributed molecular graph parsed from SMILES.

    ``rings`` holds a smallest set of smallest rings, each as an ordered
    cycle of atom indices.
    """

    atoms: tuple[Atom, ...]
    bonds: tuple[Bond, ...]
    rings: tuple[tuple[int, ...], ...] = ()
    source: str = ""
    components: int = 1
    _adjacency: tuple[tuple[tuple[int, int], ...], ...] = field(
        default=(), repr=False, compare=False
    )

    def __post_init__(self):
        if not self._adjacency:
            adj: list[list[tuple[int, int]]] = [[] for _ in self.atoms]
            for b in self.bonds:
                adj[b.begin].append((b.end, b.index))
                adj[b.end].append((b.begin, b.index))
            object.__setattr__(self, "_adjacency", tuple(tuple(a) for a in adj))

    def __len__(self) -> int:
        return len(self.atoms)

    def neighbors(self, i: int) -> tuple[tuple[int, int], ...]:
        """(neighbor atom, bond index) pairs for atom ``i``."""
        return self._adjacency[i]

    def neighbor_atoms(self, i: int) -> list[int]:
        return [n for n, _ in self._adjacency[i]]

    def degree(self, i: int) -> int:
        return len(self._adjacency[i])

    def bond_between(self, i: int, j: int) -> Bond | None:
        for n, b in self._adjacency[i]:
            if n == j:
                return self.bonds[b]
        return None

    def valence(self, i: int) -> int:
        """Total valence: Kekulé bond-order sum plus hydrogens."""
        total = sum(self.bonds[b].kekule for _, b in self._adjacency[i])
        return total + self.atoms[i].hydrogens

    @cached_property
    def _bond_lookup(self) -> dict[frozenset, int]:
        return {frozenset(b.endpoints): b.index for b in self.bonds}

    def bond_index(self, i: int, j: int) -> int | None:
        return self._bond_lookup.get(frozenset((i, j)))

    @cached_property
    def ring_counts(self) -> tuple[int, ...]:
        counts = [0] * len(self.atoms)
        for ring in self.rings:
            for a in ring:
                counts[a] += 1
        return tuple(counts)

    @cached_property
    def smallest_ring_sizes(self) -> tuple[int, ...]:
        sizes = [0] * len(self.atoms)
        for ring in self.rings:
            for a in ring:
                if sizes[a] == 0 or len(ring) < sizes[a]:
                    sizes[a] = len(ring)
        return tuple(sizes)

    @cached_property
    def ring_bond_counts(self) -> tuple[int, ...]:
        return tuple(
            sum(1 for _, b in self._adjacency[i] if self.bonds[b].in_ring)
            for i in range(len(self.atoms))
        )

    @cached_property
    def ring_bond_sets(self) -> tuple[frozenset[int], ...]:
        out = []
        for ring in self.rings:
            n = len(ring)
            out.append(frozenset(self.bond_index(ring[k], ring[(k + 1) % n]) for k in range(n)))
        return tuple(out)

    def heavy_atom_count(self) -> int:
        return sum(1 for a in self.atoms if a.element != 1)
