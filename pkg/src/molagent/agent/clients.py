"""LLM clients: an OpenAI-style HTTP chat client and a scripted mock."""

from __future__ import annotations

import logging
import time
from pathlib import Path
from typing import Callable, Protocol, Sequence

import httpx

from .conversation import Message

log = logging.getLogger(__name__)

BACKOFF_S = (1.0, 4.0, 16.0)


class LlmError(RuntimeError):
    """The client could not produce a reply."""

    retryable = False


class LlmTransportError(LlmError):
    retryable = True


class MockExhausted(LlmError):
    """The scripted mock has no replies left."""


class LlmClient(Protocol):
    def complete(self, messages: Sequence[Message], purpose: str = "propose") -> str: ...


class ScriptedMock:
    """Replays canned replies in order; ``summary`` answers the finalisation call."""

    kind = "scripted_mock"

    def __init__(self, replies: Sequence[str], summary: str | None = None):
        self.replies = list(replies)
        self.summary = summary
        self.calls = 0
        self.seen: list[list[Message]] = []

    def complete(self, messages, purpose="propose") -> str:
        self.seen.append(list(messages))
        if purpose == "summary":
            if self.summary is None:
                raise LlmError("mock script has no SUMMARY line")
            return self.summary
        if self.calls >= len(self.replies):
            raise MockExhausted(f"mock script exhausted after {len(self.replies)} replies")
        reply = self.replies[self.calls]
        self.calls += 1
        return reply

    @classmethod
    def parse(cls, text: str) -> "ScriptedMock":
        """One reply per line; '#' starts a comment line; 'SUMMARY:' lines form the summary."""
        replies, summary = [], []
        for line in text.splitlines():
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            if line.startswith("SUMMARY:"):
                summary.append(line[len("SUMMARY:") :].strip())
            else:
                replies.append(line)
        return cls(replies, "\n".join(summary) if summary else None)

    @classmethod
    def from_file(cls, path: str | Path) -> "ScriptedMock":
        return cls.parse(Path(path).read_text(encoding="utf-8"))


class HttpChatClient:
    """Chat-completions client; sends the whole conversation on every call."""

    kind = "http_chat"

    def __init__(
        self,
        endpoint: str,
        model: str,
        api_key: str | None = None,
        params: dict | None = None,
        timeout_s: float = 120.0,
        client: httpx.Client | None = None,
    ):
        self.endpoint = endpoint
        self.model = model
        self.api_key = api_key
        self.params = dict(params or {})
        self.timeout_s = timeout_s
        self._client = client or httpx.Client(timeout=timeout_s)

    def complete(self, messages, purpose="propose") -> str:
        payload = {"model": self.model, "messages": [{"role": m.role, "content": m.text} for m in messages]}
        payload.update(self.params)
        headers = {"Authorization": f"Bearer {self.api_key}"} if self.api_key else {}
        try:
            resp = self._client.post(self.endpoint, json=payload, headers=headers)
        except httpx.HTTPError as exc:
            raise LlmTransportError(f"request failed: {exc}") from exc
        if resp.status_code >= 500 or resp.status_code == 429:
            raise LlmTransportError(f"server returned {resp.status_code}")
        if resp.status_code != 200:
            raise LlmError(f"server returned {resp.status_code}: {resp.text[:200]}")
        try:
            return resp.json()["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise LlmTransportError("malformed chat completion response") from exc


def with_retries(
    call: Callable[[], str],
    retries: int = 3,
    backoff: Sequence[float] = BACKOFF_S,
    sleep: Callable[[float], None] = time.sleep,
) -> str:
    """Run ``call``, retrying transport errors with the given waits."""
    attempt = 0
    while True:
        try:
            return call()
        except LlmError as exc:
            if not exc.retryable or attempt >= retries:
                raise
            wait = backoff[min(attempt, len(backoff) - 1)]
            log.warning("LLM call failed (%s); retrying in %.0f s", exc, wait)
            sleep(wait)
            attempt += 1
