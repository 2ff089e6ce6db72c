"""Loaders for the versioned contribution tables shipped with the package."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from ..substructure.smarts import Pattern, compile_pattern


def _read(name: str) -> list[str]:
    text = resources.files(__package__).joinpath(f"data/{name}").read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# "):
        raise ValueError(f"{name}: missing version header")
    return lines


def _rows(lines: list[str]):
    for lineno, line in enumerate(lines, start=1):
        if line.startswith("#") or not line.strip():
            continue
        yield lineno, line.split("\t")


@dataclass(frozen=True)
class CrippenRow:
    type: str
    smarts: str
    logp: float
    pattern: Pattern
    hydrogen: bool  # row types a hydrogen via the atom it is attached to


@lru_cache(maxsize=1)
def crippen_rows() -> tuple[CrippenRow, ...]:
    rows = []
    for lineno, f in _rows(_read("crippen.txt")):
        kind, smarts, logp = f[0], f[1], float(f[2])
        hydrogen = smarts.startswith("[#1]")
        body = smarts[len("[#1]") :] if hydrogen else smarts
        rows.append(CrippenRow(kind, smarts, logp, compile_pattern(body or "*"), hydrogen))
    return tuple(rows)


@dataclass(frozen=True)
class TpsaRow:
    element: str
    neighbours: int
    hydrogens: int
    charge: int
    single: int
    double: int
    triple: int
    aromatic: int
    in_3_ring: str
    psa: float


@lru_cache(maxsize=1)
def tpsa_rows() -> tuple[TpsaRow, ...]:
    out = []
    for _, f in _rows(_read("tpsa.txt")):
        out.append(TpsaRow(f[0], *(int(x) for x in f[1:8]), f[8], float(f[9])))
    return tuple(out)


@dataclass(frozen=True)
class AdsParameter:
    name: str
    A: float
    B: float
    C: float
    D: float
    E: float
    F: float
    DMAX: float
    weight: float
    optimal: str


@lru_cache(maxsize=1)
def qed_parameters() -> tuple[AdsParameter, ...]:
    out = []
    for _, f in _rows(_read("qed_params.txt")):
        out.append(AdsParameter(f[0], *(float(x) for x in f[1:9]), f[9]))
    return tuple(out)


@dataclass(frozen=True)
class AlertRow:
    original: str
    implemented: bool
    min_count: int
    alternatives: tuple[Pattern, ...]


@lru_cache(maxsize=1)
def alert_rows() -> tuple[AlertRow, ...]:
    out = []
    for _, f in _rows(_read("qed_alerts.txt")):
        implemented = f[0] == "1"
        alts = tuple(compile_pattern(a.strip()) for a in f[2].split(" || ")) if implemented else ()
        out.append(AlertRow(f[3], implemented, int(f[1]), alts))
    return tuple(out)


def alert_manifest() -> tuple[str, ...]:
    """Alert patterns that are never counted."""
    return tuple(r.original for r in alert_rows() if not r.implemented)


@lru_cache(maxsize=1)
def acceptor_rows() -> tuple[tuple[Pattern, Pattern | None], ...]:
    out = []
    for _, f in _rows(_read("qed_acceptors.txt")):
        exclude = f[1].strip() if len(f) > 1 else ""
        out.append((compile_pattern(f[0]), compile_pattern(exclude) if exclude else None))
    return tuple(out)
