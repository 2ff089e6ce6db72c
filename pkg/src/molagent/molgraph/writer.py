"""SMILES writer and molecular formula."""

from __future__ import annotations

from collections import Counter

from . import elements
from .model import AROMATIC, DOUBLE, SINGLE, TRIPLE, Molecule
from .smiles import default_hydrogens

_AROMATIC_WRITABLE = {5, 6, 7, 8, 15, 16}
_ORGANIC_Z = {elements.ATOMIC_NUMBERS[s] for s in elements.ORGANIC_SUBSET}


def molecular_formula(m: Molecule) -> dict[str, int]:
    """Element symbol to count, hydrogens included."""
    counts: Counter[str] = Counter()
    for a in m.atoms:
        counts[a.symbol] += 1
        if a.hydrogens:
            counts["H"] += a.hydrogens
    return dict(sorted(counts.items()))


def formula_string(m: Molecule) -> str:
    """Hill-order formula text, e.g. ``C6H6``."""
    counts = molecular_formula(m)
    order = []
    if "C" in counts:
        order.append("C")
        if "H" in counts:
            order.append("H")
    order += sorted(k for k in counts if k not in order)
    return "".join(f"{k}{counts[k] if counts[k] > 1 else ''}" for k in order)


def _atom_text(m: Molecule, i: int) -> str:
    a = m.atoms[i]
    sym = a.symbol
    if a.aromatic and a.element in _AROMATIC_WRITABLE | {33, 34, 52}:
        sym = sym.lower()
    plain = (
        a.charge == 0
        and a.isotope is None
        and a.atom_class is None
        and a.element in _ORGANIC_Z
        and (not a.aromatic or a.element in _AROMATIC_WRITABLE)
    )
    if plain:
        bonds = [m.bonds[b] for _, b in m.neighbors(i)]
        n_arom = sum(1 for b in bonds if b.order == AROMATIC)
        bond_sum = sum(1 if b.order == AROMATIC else b.kekule for b in bonds)
        if default_hydrogens(a.element, a.aromatic, bond_sum, n_arom) == a.hydrogens:
            return sym
    text = "["
    if a.isotope is not None:
        text += str(a.isotope)
    text += sym
    if a.hydrogens:
        text += "H" + (str(a.hydrogens) if a.hydrogens > 1 else "")
    if a.charge:
        text += ("+" if a.charge > 0 else "-") + (str(abs(a.charge)) if abs(a.charge) > 1 else "")
    if a.atom_class is not None:
        text += f":{a.atom_class}"
    return text + "]"


def _bond_text(m: Molecule, b) -> str:
    arom_ends = m.atoms[b.begin].aromatic and m.atoms[b.end].aromatic
    if b.order == AROMATIC:
        return ""
    if b.order == SINGLE:
        return "-" if arom_ends else ""
    return {DOUBLE: "=", TRIPLE: "#"}[b.order]


def write_smiles(m: Molecule) -> str:
    """Write a SMILES string that reparses to a graph isomorphic to ``m``.

    Stereo marks are not written. Output follows atom order, so it is not
    canonical across differently ordered inputs.
    """
    n = len(m.atoms)
    visited = [False] * n
    parts = []
    for root in range(n):
        if visited[root]:
            continue
        parts.append(_write_component(m, root, visited))
    return ".".join(parts)


def _write_component(m: Molecule, root: int, visited: list[bool]) -> str:
    # pass 1: DFS tree and ring-closure bonds
    order: list[int] = []
    parent_bond: dict[int, int | None] = {root: None}
    children: dict[int, list[int]] = {}
    closures: dict[int, list[int]] = {}  # atom -> closure bond indices at that atom
    seen_bonds: set[int] = set()
    visited[root] = True
    dfs_stack = [(root, iter(sorted(m.neighbors(root))))]
    children[root] = []
    order.append(root)
    while dfs_stack:
        v, it = dfs_stack[-1]
        advanced = False
        for w, b in it:
            if b in seen_bonds:
                continue
            seen_bonds.add(b)
            if visited[w]:
                closures.setdefault(w, []).append(b)
                closures.setdefault(v, []).append(b)
                continue
            visited[w] = True
            parent_bond[w] = b
            children[v].append(w)
            children[w] = []
            order.append(w)
            dfs_stack.append((w, iter(sorted(m.neighbors(w)))))
            advanced = True
            break
        if not advanced:
            dfs_stack.pop()

    # pass 2: emit, assigning ring numbers in order of first appearance
    rank = {a: k for k, a in enumerate(order)}
    free: list[int] = []
    next_num = [1]
    open_num: dict[int, int] = {}

    def take() -> int:
        if free:
            free.sort()
            return free.pop(0)
        num = next_num[0]
        next_num[0] += 1
        return num

    def ring_label(num: int) -> str:
        return str(num) if num < 10 else f"%{num:02d}"

    out: list[str] = []

    def emit(v: int):
        out.append(_atom_text(m, v))
        for b in sorted(closures.get(v, []), key=lambda b: rank[m.bonds[b].other(v)]):
            if b in open_num:
                num = open_num.pop(b)
                out.append(ring_label(num))
                free.append(num)
            else:
                num = take()
                open_num[b] = num
                out.append(_bond_text(m, m.bonds[b]) + ring_label(num))
        kids = children[v]
        for k, w in enumerate(kids):
            bond = m.bonds[parent_bond[w]]
            last = k == len(kids) - 1
            if not last:
                out.append("(")
            out.append(_bond_text(m, bond))
            emit(w)
            if not last:
                out.append(")")

    emit(root)
    return "".join(out)
