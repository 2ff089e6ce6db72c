"""Lenient extraction of the {"reason", "smiles"} reply object."""

from __future__ import annotations

import json
from dataclasses import dataclass

FORMAT_REMINDER = 'Respond with a single JSON object: {"reason": "<short explanation>", "smiles": "<SMILES string>"}'


@dataclass(frozen=True)
class Proposal:
    reason: str
    smiles: str
    raw: str


class ProposalError(ValueError):
    """The reply holds no usable proposal; ``kind`` selects the correction text."""

    def __init__(self, kind: str, detail: str):
        super().__init__(detail)
        self.kind = kind  # no_object | missing_field | non_string_field
        self.detail = detail


def _objects(text: str):
    """Yield every balanced {...} span, honouring JSON string quoting."""
    n = len(text)
    for start in range(n):
        if text[start] != "{":
            continue
        depth, in_str, esc = 0, False, False
        for i in range(start, n):
            ch = text[i]
            if in_str:
                if esc:
                    esc = False
                elif ch == "\\":
                    esc = True
                elif ch == '"':
                    in_str = False
            elif ch == '"':
                in_str = True
            elif ch == "{":
                depth += 1
            elif ch == "}":
                depth -= 1
                if depth == 0:
                    yield text[start : i + 1]
                    break


def parse_proposal(raw: str) -> Proposal:
    if raw is None or not raw.strip():
        raise ProposalError("no_object", "the reply was empty")
    first_error: ProposalError | None = None
    for span in _objects(raw):
        try:
            obj = json.loads(span)
        except json.JSONDecodeError:
            continue
        if not isinstance(obj, dict):
            continue
        missing = [k for k in ("reason", "smiles") if k not in obj]
        wrong = [k for k in ("reason", "smiles") if k in obj and not isinstance(obj[k], str)]
        if not missing and not wrong and obj["smiles"].strip():
            return Proposal(obj["reason"], obj["smiles"].strip(), raw)
        if first_error is None:
            if missing:
                first_error = ProposalError("missing_field", f"the JSON object has no {missing[0]!r} field")
            elif wrong:
                first_error = ProposalError("non_string_field", f"the {wrong[0]!r} field must be a string")
            else:
                first_error = ProposalError("missing_field", "the 'smiles' field is empty")
    if first_error is not None:
        raise first_error
    raise ProposalError("no_object", "no JSON object was found in the reply")


# FORMAT_REMINDER holds literal braces, so it is appended after formatting
CORRECTIONS = {
    "no_object": "No JSON object could be read from your reply ({detail}). Reply with the JSON object only.",
    "missing_field": "Your JSON object is incomplete: {detail}.",
    "non_string_field": "Your JSON object has a field of the wrong type: {detail}. Both fields must be JSON strings.",
    "invalid_smiles": "The SMILES {smiles!r} is not valid: {detail}. Propose a corrected molecule.",
}


def correction_text(kind: str, detail: str, smiles: str = "") -> str:
    return CORRECTIONS[kind].format(detail=detail, smiles=smiles) + " " + FORMAT_REMINDER
