"""Optimization curves, AUC, bootstrap intervals and cross-task sums."""

from __future__ import annotations

import heapq
import logging
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

log = logging.getLogger(__name__)

DEFAULT_FALLBACK = {"maximize": 0.0, "minimize": 1_000_000.0}


@dataclass(frozen=True)
class OptimizationCurve:
    values: tuple[float, ...]
    k: int = 1
    direction: str = "maximize"
    fallback: float | None = None

    @property
    def budget(self) -> int:
        return len(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]


def _finite(s) -> bool:
    return s is not None and not (isinstance(s, float) and math.isnan(s))


def _fallback(direction: str, fallback: float | None) -> float:
    return DEFAULT_FALLBACK[direction] if fallback is None else fallback


def topk_curve(
    scores: Sequence[float | None],
    k: int = 10,
    direction: str = "maximize",
    fallback: float | None = None,
) -> OptimizationCurve:
    """Mean of the min(k, n) best finite scores seen so far; n counts finite scores only.

    None and NaN entries carry the previous value; positions before the first finite
    score take ``fallback`` (0 for maximize, 1e6 for minimize by default).
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if direction not in DEFAULT_FALLBACK:
        raise ValueError(f"unknown direction {direction!r}")
    fb = _fallback(direction, fallback)
    sign = 1.0 if direction == "maximize" else -1.0
    heap: list[float] = []  # min-heap of the k best, in sign-adjusted space
    current = fb
    out = []
    for s in scores:
        if _finite(s):
            v = sign * float(s)
            changed = True
            if len(heap) < k:
                heapq.heappush(heap, v)
            elif v > heap[0]:
                heapq.heapreplace(heap, v)
            else:
                changed = False
            if changed:
                # recomputed rather than updated incrementally, so k=1 is exact
                current = sign * math.fsum(heap) / len(heap)
        out.append(current)
    return OptimizationCurve(tuple(out), k, direction, fallback)


def best_so_far_curve(scores, direction: str = "maximize", fallback: float | None = None) -> OptimizationCurve:
    return topk_curve(scores, 1, direction, fallback)


def auc(curve: OptimizationCurve | Sequence[float]) -> float:
    values = curve.values if isinstance(curve, OptimizationCurve) else tuple(curve)
    if not values:
        raise ValueError("empty curve")
    return math.fsum(values) / len(values)


def hold_fixed_extend(curve: OptimizationCurve, t_prime: int) -> OptimizationCurve:
    """Extend to ``t_prime`` calls, holding the final value."""
    if t_prime < len(curve):
        raise ValueError("t_prime must be at least the curve length")
    values = curve.values + (curve.values[-1],) * (t_prime - len(curve))
    return OptimizationCurve(values, curve.k, curve.direction, curve.fallback)


def hold_fixed_auc(auc_t: float, s_t: float, t: int, t_prime: int) -> float:
    return (auc_t * t + s_t * (t_prime - t)) / t_prime


def pad_or_truncate(scores: Sequence[float | None], budget: int) -> list[float | None]:
    """Scores for exactly ``budget`` calls; missing calls become None."""
    scores = list(scores[:budget])
    return scores + [None] * (budget - len(scores))


def best_at(scores, n: int, direction: str = "maximize", fallback: float | None = None) -> float:
    return best_so_far_curve(pad_or_truncate(scores, n), direction, fallback).values[-1]


@dataclass(frozen=True)
class Interval:
    point: float
    lower: float
    upper: float
    level: float = 0.95


def bootstrap_ci(values: Sequence[float], level: float = 0.95, resamples: int = 10_000, seed: int = 0) -> Interval:
    """Percentile bootstrap of the mean; bounds are clamped to contain the point."""
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        raise ValueError("bootstrap needs at least one value")
    if np.all(x == x[0]):
        v = float(x[0])
        return Interval(v, v, v, level)
    point = math.fsum(x.tolist()) / x.size
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, x.size, size=(resamples, x.size))
    means = x[idx].mean(axis=1)
    alpha = (1.0 - level) / 2.0
    lo, hi = np.quantile(means, [alpha, 1.0 - alpha])
    return Interval(point, min(float(lo), point), max(float(hi), point), level)


@dataclass
class MetricReport:
    per_run: dict[str, list[dict[str, float]]] = field(default_factory=dict)
    per_task: dict[str, dict[str, Interval]] = field(default_factory=dict)
    sums: dict[str, Interval] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    budgets: tuple[int, ...] = ()


def run_metrics(
    scores: Sequence[float | None],
    budgets: Sequence[int] = (50,),
    ks: Sequence[int] = (1, 10),
    direction: str = "maximize",
    fallback: float | None = None,
) -> dict[str, float]:
    out: dict[str, float] = {}
    for b in budgets:
        padded = pad_or_truncate(scores, b)
        for k in ks:
            out[f"top{k}_auc@{b}"] = auc(topk_curve(padded, k, direction, fallback))
        out[f"best@{b}"] = best_at(scores, b, direction, fallback)
    return out


def aggregate(
    per_task: Mapping[str, Sequence[Mapping[str, float]]],
    expected_tasks: Sequence[str] = (),
    level: float = 0.95,
    resamples: int = 10_000,
    seed: int = 0,
) -> MetricReport:
    """Per-task means with CIs and cross-task sums with a jointly resampled CI."""
    report = MetricReport(per_run={t: [dict(r) for r in runs] for t, runs in per_task.items()})
    for t in expected_tasks:
        if t not in per_task or not per_task[t]:
            report.warnings.append(f"missing task: {t}")
    tasks = [t for t in per_task if per_task[t]]
    if not tasks:
        return report
    metrics = sorted(set.intersection(*(set(r) for t in tasks for r in per_task[t])))
    for t in tasks:
        report.per_task[t] = {
            m: bootstrap_ci([r[m] for r in per_task[t]], level, resamples, seed) for m in metrics
        }
    rng = np.random.default_rng(seed)
    draws = {t: rng.integers(0, len(per_task[t]), size=(resamples, len(per_task[t]))) for t in tasks}
    alpha = (1.0 - level) / 2.0
    for m in metrics:
        point = math.fsum(report.per_task[t][m].point for t in tasks)
        sim = np.zeros(resamples)
        for t in tasks:
            x = np.array([r[m] for r in per_task[t]], dtype=float)
            sim += x[draws[t]].mean(axis=1)
        lo, hi = np.quantile(sim, [alpha, 1.0 - alpha])
        report.sums[m] = Interval(point, min(float(lo), point), max(float(hi), point), level)
    return report
