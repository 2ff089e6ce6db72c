"""The eight QED descriptors."""

from __future__ import annotations

from dataclasses import astuple, dataclass, fields

from ..molgraph import elements
from ..molgraph.model import AROMATIC, DOUBLE, SINGLE, TRIPLE, Molecule
from ..molgraph.rings import connected_components
from ..substructure.match import count_matches, has_match
from ..substructure.smarts import compile_pattern
from . import tables


@dataclass(frozen=True)
class DescriptorSet:
    """QED input properties, in explanation order."""

    MW: float
    ALOGP: float
    HBA: int
    HBD: int
    PSA: float
    ROTB: int
    AROM: int
    ALERTS: int

    @classmethod
    def names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))

    def values(self) -> tuple:
        return astuple(self)

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.names(), self.values()))


def molecular_weight(m: Molecule) -> float:
    total = 0.0
    for a in m.atoms:
        total += elements.WEIGHTS[a.element] + a.hydrogens * elements.WEIGHTS[1]
    return total


def crippen_logp(m: Molecule) -> float:
    """Atom-contribution logP; hydrogens are typed by their heavy neighbour."""
    rows = tables.crippen_rows()
    heavy = [r for r in rows if not r.hydrogen]
    hydro = [r for r in rows if r.hydrogen]
    total = 0.0
    for i, a in enumerate(m.atoms):
        if a.element == 1:
            continue
        for r in heavy:
            if has_match(r.pattern, m, root=i):
                total += r.logp
                break
        if a.hydrogens:
            for r in hydro:
                if has_match(r.pattern, m, root=i):
                    total += a.hydrogens * r.logp
                    break
    return total


def _in_3_ring(m: Molecule, i: int) -> bool:
    return any(len(r) == 3 and i in r for r in m.rings)


def tpsa(m: Molecule) -> float:
    """Topological polar surface area from N and O fragment contributions."""
    rows = tables.tpsa_rows()
    total = 0.0
    for i, a in enumerate(m.atoms):
        if a.element not in (7, 8):
            continue
        sym = a.symbol
        counts = {SINGLE: 0, DOUBLE: 0, TRIPLE: 0, AROMATIC: 0}
        nbrs = 0
        for j, b in m.neighbors(i):
            if m.atoms[j].element == 1:
                continue
            nbrs += 1
            counts[m.bonds[b].order] += 1
        ring3 = _in_3_ring(m, i)
        value = None
        for r in rows:
            if (
                r.element == sym
                and r.neighbours == nbrs
                and r.hydrogens == a.hydrogens
                and r.charge == a.charge
                and r.single == counts[SINGLE]
                and r.double == counts[DOUBLE]
                and r.triple == counts[TRIPLE]
                and r.aromatic == counts[AROMATIC]
                and (r.in_3_ring == "*" or (r.in_3_ring == "1") == ring3)
            ):
                value = r.psa
                break
        if value is None:
            if sym == "N":
                value = 30.5 - nbrs * 8.2 + a.hydrogens * 1.5
            else:
                value = 28.5 - nbrs * 8.6 + a.hydrogens * 1.5
            value = max(value, 0.0)
        total += value
    return total


def hb_acceptors(m: Molecule) -> int:
    total = 0
    for pattern, exclude in tables.acceptor_rows():
        for i in range(len(m.atoms)):
            if pattern.atoms[0](m, i) and (exclude is None or not has_match(exclude, m, root=i)):
                total += 1
    return total


_DONOR = compile_pattern("[N&!H0&v3,N&!H0&+1&v4,O&H1&+0,S&H1&+0,n&+0&H1]")


def hb_donors(m: Molecule) -> int:
    return sum(1 for i in range(len(m.atoms)) if _DONOR.atoms[0](m, i))


_ROT_BLOCKERS = tuple(
    compile_pattern(s)
    for s in ("*#*", "C(F)(F)F", "C(Cl)(Cl)Cl", "C(Br)(Br)Br", "C([CH3])([CH3])[CH3]")
)
_AMIDE_LIKE = tuple(
    compile_pattern(s)
    for s in (
        "[CD3](=[N,O,S])-!@[#7,O,S!D1]",
        "[#7,O,S!D1]-!@[CD3]=[N,O,S]",
        "[CD3](=[N+])-!@[#7!D1]",
        "[#7!D1]-!@[CD3]=[N+]",
    )
)


def _rot_blocked(m: Molecule, i: int) -> bool:
    return m.degree(i) == 1 or any(has_match(p, m, root=i) for p in _ROT_BLOCKERS)


def _amide_like(m: Molecule, i: int) -> bool:
    return any(has_match(p, m, root=i) for p in _AMIDE_LIKE)


def rotatable_bonds(m: Molecule) -> int:
    """Strict count: non-ring single bonds, excluding terminal, CX3, t-butyl and amide-type bonds."""
    total = 0
    for b in m.bonds:
        if b.in_ring or b.order not in (SINGLE, AROMATIC):
            continue
        x, y = b.begin, b.end
        if m.atoms[x].element == 1 or m.atoms[y].element == 1:
            continue
        if _rot_blocked(m, x) or _rot_blocked(m, y):
            continue
        if _amide_like(m, x) and _amide_like(m, y):
            continue
        total += 1
    return total


def aromatic_rings(m: Molecule) -> int:
    """Rings left after deleting aliphatic ring atoms with a non-aromatic neighbour."""
    drop = set()
    for i, a in enumerate(m.atoms):
        if a.ring_member and not a.aromatic:
            if any(not m.atoms[j].aromatic for j, _ in m.neighbors(i)):
                drop.add(i)
    keep = [i for i in range(len(m.atoms)) if i not in drop]
    if not keep:
        return 0
    index = {a: k for k, a in enumerate(keep)}
    edges = [(index[b.begin], index[b.end]) for b in m.bonds if b.begin in index and b.end in index]
    comps = len(set(connected_components(len(keep), edges)))
    return len(edges) - len(keep) + comps


def structural_alerts(m: Molecule) -> int:
    total = 0
    for row in tables.alert_rows():
        if not row.implemented:
            continue
        for p in row.alternatives:
            if (row.min_count == 1 and has_match(p, m)) or (
                row.min_count > 1 and count_matches(p, m, limit=row.min_count) >= row.min_count
            ):
                total += 1
                break
    return total


def descriptors(m: Molecule) -> DescriptorSet:
    return DescriptorSet(
        MW=molecular_weight(m),
        ALOGP=crippen_logp(m),
        HBA=hb_acceptors(m),
        HBD=hb_donors(m),
        PSA=tpsa(m),
        ROTB=rotatable_bonds(m),
        AROM=aromatic_rings(m),
        ALERTS=structural_alerts(m),
    )
