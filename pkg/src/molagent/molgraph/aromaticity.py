"""Hückel-style aromaticity perception over a Kekulé structure."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .elements import ELECTRONEGATIVITY

MAX_FUSED_COMBINATION = 6


@dataclass
class AtomState:
    element: int
    charge: int
    hydrogens: int
    degree: int  # heavy plus explicit H neighbours


def pi_electrons(
    st: AtomState,
    incident: list[tuple[int, int, bool]],
    elements: list[int],
) -> int | None:
    """Electrons donated to a ring by one atom, or None if it cannot take part.

    ``incident`` holds (neighbour, kekule order, bond is in a ring) triples.
    """
    if any(order == 3 for _, order, _ in incident):
        return None
    doubles = [(nbr, ring) for nbr, order, ring in incident if order == 2]
    if len(doubles) > 1:
        return None
    if doubles:
        nbr, in_ring = doubles[0]
        if in_ring:
            return 1
        en_self = ELECTRONEGATIVITY.get(st.element, 2.0)
        en_other = ELECTRONEGATIVITY.get(elements[nbr], 2.0)
        return 0 if en_other > en_self else None
    connections = st.degree + st.hydrogens
    z, q = st.element, st.charge
    if z == 6:
        if q == -1 and connections <= 3:
            return 2
        if q == 1 and connections <= 3:
            return 0
        return None
    if z == 5:
        return 0 if q == 0 and connections <= 3 else None
    if z in (7, 15, 33):
        if q == 0 and connections == 3:
            return 2
        if q == -1 and connections == 2:
            return 2
        return None
    if z in (8, 16, 34, 52):
        if q == 0 and connections == 2:
            return 2
        return None
    return None


def _huckel(n: int) -> bool:
    return n >= 2 and (n - 2) % 4 == 0


def perceive(
    states: list[AtomState],
    bonds: list[tuple[int, int, int]],
    ring_bond: list[bool],
    rings: list[tuple[int, ...]],
) -> tuple[set[int], set[int]]:
    """Return (aromatic atom indices, aromatic bond indices).

    Each SSSR ring is tested alone; rings in a fused system that fail alone
    are retested as unions of up to MAX_FUSED_COMBINATION neighbouring rings.
    """
    if not rings:
        return set(), set()
    incident: list[list[tuple[int, int, bool]]] = [[] for _ in states]
    lookup: dict[frozenset, int] = {}
    for k, (a, b, order) in enumerate(bonds):
        incident[a].append((b, order, ring_bond[k]))
        incident[b].append((a, order, ring_bond[k]))
        lookup[frozenset((a, b))] = k
    elements = [s.element for s in states]
    electrons = [pi_electrons(s, incident[i], elements) for i, s in enumerate(states)]

    ring_bonds = []
    for ring in rings:
        n = len(ring)
        ring_bonds.append({lookup[frozenset((ring[i], ring[(i + 1) % n]))] for i in range(n)})

    candidates = [i for i, r in enumerate(rings) if all(electrons[a] is not None for a in r)]
    aromatic_rings: set[int] = set()
    arom_bonds: set[int] = set()
    for i in candidates:
        if _huckel(sum(electrons[a] for a in rings[i])):
            aromatic_rings.add(i)
            arom_bonds.update(ring_bonds[i])

    # group candidate rings into fused systems by shared bonds
    systems: list[list[int]] = []
    seen: set[int] = set()
    for i in candidates:
        if i in seen:
            continue
        group, todo = [], [i]
        seen.add(i)
        while todo:
            r = todo.pop()
            group.append(r)
            for j in candidates:
                if j not in seen and ring_bonds[r] & ring_bonds[j]:
                    seen.add(j)
                    todo.append(j)
        if len(group) > 1:
            systems.append(sorted(group))

    for group in systems:
        if all(r in aromatic_rings for r in group):
            continue
        limit = min(len(group), MAX_FUSED_COMBINATION)
        for size in range(2, limit + 1):
            for combo in combinations(group, size):
                if all(r in aromatic_rings for r in combo):
                    continue
                if not _connected(combo, ring_bonds):
                    continue
                atoms = set().union(*(rings[r] for r in combo))
                if _huckel(sum(electrons[a] for a in atoms)):
                    aromatic_rings.update(combo)
                    # only the perimeter of the combined system; shared bonds stay as they are
                    arom_bonds.update(b for b in set().union(*(ring_bonds[r] for r in combo))
                                      if sum(b in ring_bonds[r] for r in combo) == 1)

    arom_atoms: set[int] = set()
    for r in aromatic_rings:
        arom_atoms.update(rings[r])
    return arom_atoms, arom_bonds


def _connected(combo, ring_bonds) -> bool:
    members = list(combo)
    reached = {members[0]}
    todo = [members[0]]
    while todo:
        r = todo.pop()
        for s in members:
            if s not in reached and ring_bonds[r] & ring_bonds[s]:
                reached.add(s)
                todo.append(s)
    return len(reached) == len(members)
