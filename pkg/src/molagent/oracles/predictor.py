"""Additive potency predictor over fingerprint bits."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from ..substructure.maccs import Fingerprint

HEADER = "# additive-predictor v1"


@dataclass(frozen=True)
class AdditivePredictor:
    """pIC50 = intercept + sum of weights over set bits.

    ``baseline`` holds background bit frequencies E[x]; missing bits count as 0.
    """

    intercept: float
    weights: dict[int, float] = field(default_factory=dict)
    baseline: dict[int, float] = field(default_factory=dict)

    def predict(self, fp: Fingerprint) -> float:
        return self.intercept + sum(w for k, w in self.weights.items() if k in fp)

    def expected_value(self) -> float:
        return self.intercept + sum(w * self.baseline.get(k, 0.0) for k, w in self.weights.items())

    def features(self) -> list[int]:
        return sorted(self.weights)


def ic50_nm(pic50: float) -> float:
    return 10.0 ** (9.0 - pic50)


def parse_predictor(text: str) -> AdditivePredictor:
    lines = text.splitlines()
    if not lines or lines[0].strip() != HEADER:
        raise ValueError(f"predictor file must start with {HEADER!r}")
    intercept = None
    weights, baseline = {}, {}
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        f = line.split()
        try:
            if f[0] == "intercept":
                intercept = float(f[1])
                continue
            bit = int(f[0])
            weights[bit] = float(f[1])
            if len(f) > 2:
                baseline[bit] = float(f[2])
        except (IndexError, ValueError) as exc:
            raise ValueError(f"predictor line {lineno}: expected 'bit weight [baseline]'") from exc
        if not 1 <= bit <= 166:
            raise ValueError(f"predictor line {lineno}: bit {bit} outside 1..166")
    if intercept is None:
        raise ValueError("predictor file has no intercept row")
    return AdditivePredictor(intercept, weights, baseline)


def load_predictor(path: str | Path) -> AdditivePredictor:
    return parse_predictor(Path(path).read_text(encoding="utf-8"))
