"""Score modifiers mapping raw property values into [0, 1]."""

from __future__ import annotations

import math
from dataclasses import dataclass

KINDS = ("clip", "min_gauss", "max_gauss", "identity")


@dataclass(frozen=True)
class Modifier:
    kind: str = "identity"
    t: float | None = None
    mu: float | None = None
    sigma: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown modifier kind {self.kind!r}")
        if self.kind == "clip" and (self.t is None or not 0 < self.t <= 1):
            raise ValueError("clip needs a threshold t in (0, 1]")
        if self.kind in ("min_gauss", "max_gauss"):
            if self.mu is None or self.sigma is None or self.sigma <= 0:
                raise ValueError(f"{self.kind} needs mu and a positive sigma")

    def __call__(self, x: float) -> float:
        return apply_modifier(self, x)

    def describe(self) -> str:
        if self.kind == "clip":
            return f"clip(t={self.t:g})"
        if self.kind == "identity":
            return "identity"
        return f"{self.kind}(mu={self.mu:g}, sigma={self.sigma:g})"


def apply_modifier(mod: Modifier, x: float) -> float:
    if math.isnan(x):
        return x
    if mod.kind == "clip":
        return 1.0 if x >= mod.t else x / mod.t
    if mod.kind == "min_gauss":
        return 1.0 if x <= mod.mu else math.exp(-0.5 * ((x - mod.mu) / mod.sigma) ** 2)
    if mod.kind == "max_gauss":
        return 1.0 if x >= mod.mu else math.exp(-0.5 * ((x - mod.mu) / mod.sigma) ** 2)
    return min(1.0, max(0.0, x))
