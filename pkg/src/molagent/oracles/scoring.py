"""Objective functions F and their sub-scores."""

from __future__ import annotations

import math
import re

from ..molgraph import Molecule, molecular_formula
from ..properties import qed
from ..properties.descriptors import crippen_logp, molecular_weight, tpsa
from ..substructure.maccs import maccs_fingerprint, tanimoto
from .modifiers import apply_modifier
from .task import Component


def rediscovery_score(m: Molecule, ref: Molecule) -> float:
    return tanimoto(maccs_fingerprint(m), maccs_fingerprint(ref))


def sim_qed_score(m: Molecule, ref: Molecule) -> tuple[float, dict[str, float]]:
    sim = rediscovery_score(m, ref)
    q = qed(m).score
    return (sim + q) / 2.0, {"similarity": sim, "QED": q}


def raw_property(name: str, m: Molecule, ref: Molecule | None = None) -> float:
    """Raw quantity named by an MPO component."""
    key = name.lower()
    if key == "similarity":
        if ref is None:
            raise ValueError("similarity needs a reference molecule")
        return rediscovery_score(m, ref)
    if key in ("tpsa", "psa"):
        return tpsa(m)
    if key in ("alogp", "logp"):
        return crippen_logp(m)
    if key == "mw":
        return molecular_weight(m)
    if key == "qed":
        return qed(m).score
    raise ValueError(f"unknown MPO property {name!r}")


def weighted_gmean(terms: dict[str, float], weights: dict[str, float]) -> float:
    if any(v <= 0.0 for v in terms.values()):
        return 0.0
    total = sum(weights.values())
    return math.exp(sum(weights[k] * math.log(v) for k, v in terms.items()) / total)


def mpo_score(
    m: Molecule, components: tuple[Component, ...], ref: Molecule | None = None
) -> tuple[float, dict[str, float], dict[str, float]]:
    """Return (aggregate, modified terms, raw values)."""
    raw = {c.name: raw_property(c.property or c.name, m, ref) for c in components}
    terms = {c.name: apply_modifier(c.modifier, raw[c.name]) for c in components}
    return weighted_gmean(terms, {c.name: c.weight for c in components}), terms, raw


_FORMULA_TOKEN = re.compile(r"([A-Z][a-z]?)(\d*)")


def parse_formula(text: str) -> dict[str, int]:
    text = text.strip()
    out: dict[str, int] = {}
    pos = 0
    for mt in _FORMULA_TOKEN.finditer(text):
        if mt.start() != pos:
            break
        out[mt.group(1)] = out.get(mt.group(1), 0) + int(mt.group(2) or 1)
        pos = mt.end()
    if pos != len(text) or not out:
        raise ValueError(f"cannot parse molecular formula {text!r}")
    return out


def isomer_score(m: Molecule, target: dict[str, int]) -> float:
    if not target:
        raise ValueError("isomer target formula is empty")
    have = molecular_formula(m)
    sq = sum((have.get(e, 0) - target.get(e, 0)) ** 2 for e in set(have) | set(target))
    return math.exp(-0.5 * sq)
