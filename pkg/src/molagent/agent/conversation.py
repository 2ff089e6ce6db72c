"""Append-only chat history."""

from __future__ import annotations

from dataclasses import dataclass, field

ROLES = ("system", "user", "assistant")


@dataclass(frozen=True)
class Message:
    role: str
    text: str


@dataclass
class Conversation:
    messages: list[Message] = field(default_factory=list)

    def append(self, role: str, text: str) -> None:
        if role not in ROLES:
            raise ValueError(f"unknown role {role!r}")
        self.messages.append(Message(role, text))

    @property
    def token_estimate(self) -> int:
        # rough chars/4 heuristic; only used for the context-size warning
        return sum(len(m.text) for m in self.messages) // 4

    def __len__(self) -> int:
        return len(self.messages)
