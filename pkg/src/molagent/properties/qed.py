"""Quantitative estimate of drug-likeness with per-property breakdown."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..molgraph.model import Molecule
from .descriptors import DescriptorSet, descriptors
from .tables import AdsParameter, qed_parameters


def _sigmoid_denominator(z: float) -> float:
    # 1 + exp(z) without overflow for extreme descriptor values
    return math.inf if z > 700 else 1.0 + math.exp(z)


def desirability(x: float, p: AdsParameter) -> float:
    """Asymmetric double sigmoid normalised by its maximum."""
    e1 = _sigmoid_denominator(-(x - p.C + p.D / 2) / p.E)
    e2 = _sigmoid_denominator(-(x - p.C - p.D / 2) / p.F)
    return (p.A + p.B / e1 * (1 - 1 / e2)) / p.DMAX


@dataclass(frozen=True)
class QedResult:
    score: float
    descriptors: DescriptorSet
    desirabilities: dict[str, float]
    weighted_log_contributions: dict[str, float]  # w * ln(d); summed and divided by sum(w) gives ln(score)
    optimal_ranges: dict[str, str]

    @property
    def values(self) -> dict[str, float]:
        return self.descriptors.as_dict()


def qed_from_descriptors(ds: DescriptorSet) -> QedResult:
    params = qed_parameters()
    values = ds.as_dict()
    des, contrib, ranges = {}, {}, {}
    for p in params:
        d = desirability(float(values[p.name]), p)
        des[p.name] = d
        contrib[p.name] = p.weight * math.log(d)
        ranges[p.name] = p.optimal
    total_w = sum(p.weight for p in params)
    score = math.exp(sum(contrib.values()) / total_w)
    return QedResult(score, ds, des, contrib, ranges)


def qed(m: Molecule) -> QedResult:
    return qed_from_descriptors(descriptors(m))
