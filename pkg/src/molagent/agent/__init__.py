from .clients import BACKOFF_S, HttpChatClient, LlmClient, LlmError, LlmTransportError, MockExhausted, ScriptedMock, with_retries
from .conversation import Conversation, Message
from .loop import (
    RunResult,
    best_record,
    build_correction,
    build_feedback,
    build_first_message,
    digest,
    finalize,
    format_score,
    run,
    system_prompt,
    template_summary,
)
from .proposal import CORRECTIONS, FORMAT_REMINDER, Proposal, ProposalError, correction_text, parse_proposal

__all__ = [
    "BACKOFF_S",
    "best_record",
    "build_correction",
    "build_feedback",
    "build_first_message",
    "Conversation",
    "correction_text",
    "CORRECTIONS",
    "digest",
    "finalize",
    "FORMAT_REMINDER",
    "format_score",
    "HttpChatClient",
    "LlmClient",
    "LlmError",
    "LlmTransportError",
    "Message",
    "MockExhausted",
    "parse_proposal",
    "Proposal",
    "ProposalError",
    "run",
    "RunResult",
    "ScriptedMock",
    "system_prompt",
    "template_summary",
    "with_retries",
]
