from .explainers import (
    attribution_table,
    attributions,
    explain_qed,
    explain_remote,
    explain_similarity,
    verbalize,
)
from .payload import QED_HEADER, ExplanationPayload

__all__ = [
    "ExplanationPayload",
    "QED_HEADER",
    "attribution_table",
    "attributions",
    "explain_qed",
    "explain_remote",
    "explain_similarity",
    "verbalize",
]
