"""Novelty lookup against a reference compound set."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from ..molgraph import Molecule, SmilesError, molecular_formula, parse_smiles
from ..substructure.maccs import maccs_fingerprint

log = logging.getLogger(__name__)


def _key(m: Molecule):
    return maccs_fingerprint(m).on_bits, tuple(sorted(molecular_formula(m).items()))


@dataclass
class NoveltySet:
    """Known compounds keyed by fingerprint and formula.

    ``lookup`` is an optional remote check returning True when the compound is
    known; a raised exception makes the answer "not checked" (None).
    """

    keys: set = field(default_factory=set)
    lookup: Callable[[Molecule], bool] | None = None

    def add(self, m: Molecule) -> None:
        self.keys.add(_key(m))

    def __len__(self) -> int:
        return len(self.keys)

    @classmethod
    def from_smiles(cls, smiles) -> "NoveltySet":
        s = cls()
        for text in smiles:
            s.add(parse_smiles(text))
        return s

    @classmethod
    def from_file(cls, path: str | Path) -> "NoveltySet":
        s = cls()
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                s.add(parse_smiles(line.split()[0]))
            except SmilesError as exc:
                log.warning("%s:%d: skipping unparsable SMILES (%s)", path, lineno, exc)
        return s


def novelty_check(m: Molecule, novelty: NoveltySet) -> bool | None:
    """True if novel, False if known, None if the lookup could not be done."""
    if _key(m) in novelty.keys:
        return False
    if novelty.lookup is None:
        return True
    try:
        return not novelty.lookup(m)
    except Exception as exc:  # transport errors from any client
        log.warning("novelty lookup failed: %s", exc)
        return None
