"""Molecular graphs from SMILES: parsing, rings, aromaticity, writing."""

from .model import AROMATIC, DOUBLE, SINGLE, TRIPLE, Atom, Bond, Molecule, SmilesError
from .smiles import parse_smiles
from .writer import formula_string, molecular_formula, write_smiles


def perceive_rings(m: Molecule) -> list[tuple[int, ...]]:
    """Smallest set of smallest rings, as ordered atom cycles."""
    return list(m.rings)


__all__ = [
    "AROMATIC",
    "DOUBLE",
    "SINGLE",
    "TRIPLE",
    "Atom",
    "Bond",
    "Molecule",
    "SmilesError",
    "formula_string",
    "molecular_formula",
    "parse_smiles",
    "perceive_rings",
    "write_smiles",
]
