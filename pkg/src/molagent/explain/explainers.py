"""Builders for the explanation payloads of each sub-score."""

from __future__ import annotations

from ..properties.qed import QedResult
from ..substructure.maccs import Fingerprint, FingerprintVersionError, KeyTable, key_table
from .payload import ExplanationPayload

TOP_N = 10


def explain_qed(q: QedResult) -> ExplanationPayload:
    values = q.descriptors.as_dict()
    lines = [
        (name, q.weighted_log_contributions[name], values[name], q.optimal_ranges[name])
        for name in q.descriptors.names()
    ]
    return ExplanationPayload("qed_decomposition", {"lines": lines})


def explain_similarity(target: Fingerprint, query: Fingerprint, table: KeyTable | None = None) -> ExplanationPayload:
    if target.key_table_version != query.key_table_version:
        raise FingerprintVersionError(f"cannot compare {target.key_table_version} with {query.key_table_version}")
    table = table or key_table()
    target_only = [(k, table[k].display) for k in sorted(target.on_bits - query.on_bits)]
    query_only = [(k, table[k].display) for k in sorted(query.on_bits - target.on_bits)]
    return ExplanationPayload("similarity_diff", {"target_only": target_only, "query_only": query_only})


def attributions(predictor, fp: Fingerprint) -> dict[int, float]:
    """Exact Shapley values of an additive model: w_i * (x_i - E[x_i])."""
    return {k: w * ((1.0 if k in fp else 0.0) - predictor.baseline.get(k, 0.0)) for k, w in predictor.weights.items()}


def attribution_table(
    predictor,
    fp: Fingerprint,
    table: KeyTable | None = None,
    label: str = "pIC50",
    up_note: str = "pushing towards higher pIC50 values therefore lower IC50 values",
    down_note: str = "pushing towards lower pIC50 values therefore higher IC50 values",
) -> ExplanationPayload:
    table = table or key_table()
    attr = attributions(predictor, fp)
    prediction = predictor.predict(fp)
    expected = predictor.expected_value()
    total = sum(attr.values())
    rows = [(a, fp[k], k, table[k].display) for k, a in attr.items() if a != 0.0]
    positive = sorted((r for r in rows if r[0] > 0), key=lambda r: (-r[0], r[2]))[:TOP_N]
    negative = sorted((r for r in rows if r[0] < 0), key=lambda r: (r[0], r[2]))[:TOP_N]
    negative.sort(key=lambda r: (-r[0], r[2]))
    body = {
        "label": label,
        "prediction": prediction,
        "expected_value": expected,
        "total": total,
        "error": prediction - (expected + total),
        "top": positive,
        "bottom": negative,
        "attributions": attr,
        "up_note": up_note,
        "down_note": down_note,
    }
    return ExplanationPayload("attribution_table", body)


def explain_remote(close_residues, confidence) -> ExplanationPayload:
    return ExplanationPayload(
        "remote_passthrough", {"close_residues": list(close_residues), "confidence": dict(confidence), "cutoff": 5.0}
    )


def verbalize(payloads: dict[str, ExplanationPayload], mode: str, designated: str = "QED") -> str:
    """Explanation text for a feedback message.

    Partial mode shows only the designated component; full mode shows every
    payload in component order; the other modes show nothing.
    """
    if mode == "partial_explanation":
        chosen = [payloads[designated]] if designated in payloads else []
    elif mode == "full_explanation":
        chosen = list(payloads.values())
    else:
        chosen = []
    return "\n\n".join(p.rendered for p in chosen if p.rendered)
