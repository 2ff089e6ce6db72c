"""Explanation payloads and their text rendering."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

KINDS = ("qed_decomposition", "similarity_diff", "attribution_table", "remote_passthrough")

QED_HEADER = "Weighted log contributions (closer to 0 = better, negative values hurt score):"
TABLE_HEADER = (
    "| Attribution | MACCS fingerprint value | MACCS key | SMARTS substructure |\n"
    "|-------------|-------------------------|-----------|---------------------|"
)


@dataclass(frozen=True)
class ExplanationPayload:
    kind: str
    body: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown explanation kind {self.kind!r}")

    @property
    def rendered(self) -> str:
        return RENDERERS[self.kind](self.body)


def _fmt_value(value) -> str:
    return str(value) if isinstance(value, int) else f"{value:.2f}"


def render_qed(body) -> str:
    lines = [QED_HEADER, ""]
    for name, contrib, value, optimal in body["lines"]:
        c = f"{contrib:.3f}"
        if c == "0.000":
            c = "-0.000"
        lines.append(f"{name}: {c} (value={_fmt_value(value)}, optimal={optimal})")
    return "\n".join(lines)


def _feature_count(n: int) -> str:
    return f"{n} feature is" if n == 1 else f"{n} features are"


def render_similarity(body) -> str:
    out = []
    for title, key in (("TARGET", "target_only"), ("QUERY", "query_only")):
        other = "QUERY" if title == "TARGET" else "TARGET"
        rows = body[key]
        if not rows:
            out += [f"No features are present in {title} but not in {other}.", "", ""]
            continue
        out.append(f"The following {_feature_count(len(rows))} present in {title} but not in {other} (reducing similarity):")
        out.append("")
        out.extend(f"Key {k}: {smarts}" for k, smarts in rows)
        out.append("")
        out.append("")
    return "\n".join(out).rstrip("\n")


def _table(rows) -> list[str]:
    out = [TABLE_HEADER]
    out.extend(f"| {a:.6f} | {v} | {k} | {s} |" for a, v, k, s in rows)
    return out


def render_attribution(body) -> str:
    label = body.get("label", "pIC50")
    out = [
        "The following attribution values are exact Shapley values of the additive predictor. "
        "They depend on the individual input:",
        "",
        "error = prediction - (expected value + total attribution)",
        f"prediction ({label}) = {body['prediction']:.6f}",
        f"expected value = {body['expected_value']:.6f}",
        f"total attribution = {body['total']:.6f}",
        f"error = {body['error']:.6g}",
        "",
        "",
        f"Top {len(body['top'])}: highest attribution values ({body.get('up_note', 'pushing the prediction up')}):",
        "",
        *_table(body["top"]),
        "",
        "",
        f"Bottom {len(body['bottom'])}: lowest attribution values ({body.get('down_note', 'pushing the prediction down')}):",
        "",
        *_table(body["bottom"]),
    ]
    return "\n".join(out)


def render_remote(body) -> str:
    out = []
    if body.get("close_residues"):
        out += [f"Close Residues (within {body.get('cutoff', 5.0):.1f} Å): ", "", ", ".join(body["close_residues"]), "", ""]
    if body.get("confidence"):
        out += ["Confidence Scores:", ""]
        out += [f"{k}: {v:.4f}" for k, v in body["confidence"].items()]
    return "\n".join(out).rstrip("\n")


RENDERERS = {
    "qed_decomposition": render_qed,
    "similarity_diff": render_similarity,
    "attribution_table": render_attribution,
    "remote_passthrough": render_remote,
}
