"""HTTP adapter for a remote binding-probability oracle."""

from __future__ import annotations

import logging
import math
import threading
from dataclasses import dataclass, field

import httpx

log = logging.getLogger(__name__)

DEFAULT_TIMEOUT_S = 300.0
PROBABILITY_FIELDS = ("probability", "affinity_probability_binary")


@dataclass(frozen=True)
class RemoteResult:
    probability: float  # NaN on any failure
    close_residues: tuple[str, ...] = ()
    confidence: dict[str, float] = field(default_factory=dict)
    error: str | None = None


def _parse_body(body) -> RemoteResult:
    if not isinstance(body, dict):
        return RemoteResult(math.nan, error="response body is not an object")
    p = None
    for key in PROBABILITY_FIELDS:
        if key in body:
            p = body[key]
            break
    if isinstance(p, bool) or not isinstance(p, (int, float)) or not 0.0 <= p <= 1.0:
        return RemoteResult(math.nan, error="response has no usable probability field")
    residues: tuple[str, ...] = ()
    confidence: dict[str, float] = {}
    try:
        residues = tuple(str(r) for r in body.get("close_residues") or ())
        confidence = {str(k): float(v) for k, v in (body.get("confidence") or {}).items()}
    except (TypeError, ValueError, AttributeError):
        # explanation parts are optional; a bad one is dropped, the score kept
        residues, confidence = (), {}
    return RemoteResult(float(p), residues, confidence)


class RemoteOracle:
    """POSTs {smiles, task_id} and reads a probability; one request in flight at a time."""

    def __init__(self, endpoint: str, task_id: str, timeout_s: float = DEFAULT_TIMEOUT_S, client: httpx.Client | None = None):
        self.endpoint = endpoint
        self.task_id = task_id
        self.timeout_s = timeout_s
        self._client = client
        self._lock = threading.Lock()

    def evaluate(self, smiles: str) -> RemoteResult:
        with self._lock:
            try:
                if self._client is not None:
                    resp = self._client.post(self.endpoint, json={"smiles": smiles, "task_id": self.task_id}, timeout=self.timeout_s)
                else:
                    resp = httpx.post(self.endpoint, json={"smiles": smiles, "task_id": self.task_id}, timeout=self.timeout_s)
            except httpx.TimeoutException:
                log.warning("remote oracle timed out after %.0f s", self.timeout_s)
                return RemoteResult(math.nan, error="timeout")
            except httpx.HTTPError as exc:
                log.warning("remote oracle transport error: %s", exc)
                return RemoteResult(math.nan, error=f"transport error: {exc}")
        if resp.status_code != 200:
            return RemoteResult(math.nan, error=f"status {resp.status_code}")
        try:
            body = resp.json()
        except ValueError:
            return RemoteResult(math.nan, error="response body is not JSON")
        return _parse_body(body)
