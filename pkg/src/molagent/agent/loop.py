"""The online proposal loop: generate, parse, validate, evaluate, feed back."""

from __future__ import annotations

import json
import logging
import math
import time
from dataclasses import dataclass
from importlib import resources
from typing import Callable

from ..explain import verbalize
from ..harness.trajectory import StepRecord, Trajectory
from ..molgraph import SmilesError, parse_smiles
from ..oracles import Oracle, OracleOutcome, TaskSpec
from .clients import BACKOFF_S, LlmClient, LlmError, with_retries
from .conversation import Conversation, Message
from .proposal import ProposalError, correction_text, parse_proposal

log = logging.getLogger(__name__)

DEFAULT_TOKEN_WARNING = 150_000

FIRST_REPLY_SHAPE = (
    'Respond with a single JSON object: {"reason": "<why this is a reasonable starting point '
    'for this objective>", "smiles": "<SMILES string>"}'
)

BLACK_BOX_TEXT = (
    "Optimization task: each molecule you propose is evaluated by a hidden scoring function "
    "that returns a single number. Nothing else about the function is disclosed."
)

SUMMARY_INSTRUCTIONS = (
    "You are reviewing a finished molecule optimization run. Using only the records below, "
    "write a short summary for a medicinal chemist: which structural changes improved or "
    "degraded the score, and which molecule was best."
)


def system_prompt() -> str:
    return resources.files("molagent.agent").joinpath("data/system_prompt.txt").read_text(encoding="utf-8").strip()


def format_score(x: float | None) -> str:
    if x is None or math.isnan(x):
        return "NaN"
    return f"{x:.2f}" if abs(x) >= 1 else f"{x:.3f}"


def build_first_message(spec: TaskSpec, mode: str | None = None) -> str:
    mode = mode or spec.mode
    goal = "maximize" if spec.direction == "maximize" else "minimize"
    if mode == "no_description":
        lines = [
            BLACK_BOX_TEXT,
            "Objective:",
            f"- {goal} the score ({'higher' if goal == 'maximize' else 'lower'} is better).",
        ]
        first = "Propose a single initial molecule as a SMILES string."
    else:
        lines = [spec.description_text.rstrip()]
        first = spec.first_step or "Propose a single initial molecule as a SMILES string."
    lines += [
        f"- You will have {spec.budget} iterations to optimize the molecule.",
        "Step 1:",
        first,
        FIRST_REPLY_SHAPE,
    ]
    return "\n".join(lines)


def _scores_line(outcome: OracleOutcome) -> str:
    parts = [f'"{k}": {format_score(v)}' for k, v in outcome.subscores.items()]
    if outcome.novel is not None or "novelty" in outcome.violated:
        parts.append('"Novelty": ' + {True: "Yes", False: "No", None: "not checked"}[outcome.novel])
    return "Scores: " + ", ".join(parts)


def build_feedback(
    spec: TaskSpec,
    iteration: int,
    outcome: OracleOutcome,
    mode: str | None = None,
    duplicate_of: int | None = None,
) -> str:
    """Feedback for an evaluated proposal; scalar only in no_description mode."""
    mode = mode or spec.mode
    head = f"Iteration {iteration}/{spec.budget} | score: {format_score(outcome.aggregate)}"
    if mode == "no_description":
        lines = [head]
    else:
        lines = [head, _scores_line(outcome)]
        if outcome.violated:
            lines.append("Constraints violated: " + ", ".join(outcome.violated))
        text = verbalize(outcome.explanations, mode, spec.explained_component)
        if text:
            lines += ["", text]
    if duplicate_of is not None:
        lines += ["", f"This molecule was already proposed at iteration {duplicate_of}; the cached result is repeated."]
    return "\n".join(lines)


def build_correction(spec: TaskSpec, iteration: int, kind: str, detail: str, smiles: str = "") -> str:
    return f"Iteration {iteration}/{spec.budget} | invalid proposal\n" + correction_text(kind, detail, smiles)


def _better(a: float, b: float, direction: str) -> bool:
    return a > b if direction == "maximize" else a < b


def best_record(records, direction: str) -> StepRecord | None:
    """Best feasible finite record, else best finite; earliest wins ties."""
    finite = [r for r in records if r.evaluated and not r.nan_flag and r.aggregate is not None]
    pool = [r for r in finite if r.feasible is not False] or finite
    best = None
    for r in pool:
        if best is None or _better(r.aggregate, best.aggregate, direction):
            best = r
    return best


@dataclass
class RunResult:
    trajectory: Trajectory
    best: StepRecord | None
    summary: str
    conversation: Conversation

    @property
    def incomplete(self) -> bool:
        return self.trajectory.incomplete


def _record_from_outcome(rec: StepRecord, outcome: OracleOutcome) -> None:
    rec.evaluated = True
    rec.nan_flag = outcome.is_nan
    rec.aggregate = None if outcome.is_nan else outcome.aggregate
    rec.subscores = {k: (None if v != v else v) for k, v in outcome.subscores.items()}
    rec.feasible = outcome.feasible
    rec.violated = list(outcome.violated)
    rec.novel = outcome.novel
    rec.call_index = outcome.call_index


def run(
    spec: TaskSpec,
    oracle: Oracle,
    client: LlmClient,
    seed: int = 0,
    mode: str | None = None,
    retries: int = 3,
    backoff=BACKOFF_S,
    sleep: Callable[[float], None] = time.sleep,
    clock: Callable[[], float] = time.perf_counter,
    token_warning: int = DEFAULT_TOKEN_WARNING,
    summarize: bool = True,
) -> RunResult:
    mode = mode or spec.mode
    traj = Trajectory(spec.task_id, mode, seed, spec.direction, spec.budget, spec.fallback)
    conv = Conversation()
    conv.append("system", system_prompt())
    conv.append("user", build_first_message(spec, mode))
    cache: dict[str, tuple[int, OracleOutcome]] = {}
    warned = False

    for t in range(1, spec.budget + 1):
        start = clock()
        try:
            raw = with_retries(lambda: client.complete(list(conv.messages)), retries, backoff, sleep)
        except LlmError as exc:
            log.error("run %s aborted at iteration %d: %s", spec.task_id, t, exc)
            traj.incomplete = True
            traj.incomplete_reason = str(exc)
            break
        conv.append("assistant", raw)
        rec = StepRecord(iteration=t, raw_reply=raw)
        try:
            prop = parse_proposal(raw)
        except ProposalError as exc:
            rec.error = f"{exc.kind}: {exc.detail}"
            rec.feedback_text = build_correction(spec, t, exc.kind, exc.detail)
        else:
            rec.reason, rec.smiles = prop.reason, prop.smiles
            if prop.smiles in cache:
                first, outcome = cache[prop.smiles]
                rec.duplicate_of = first
                _record_from_outcome(rec, outcome)
                rec.feedback_text = build_feedback(spec, t, outcome, mode, duplicate_of=first)
            else:
                try:
                    mol = parse_smiles(prop.smiles)
                except SmilesError as exc:
                    rec.error = f"invalid_smiles: {exc}"
                    rec.feedback_text = build_correction(spec, t, "invalid_smiles", str(exc), prop.smiles)
                else:
                    outcome = oracle.evaluate(mol, mode)
                    cache[prop.smiles] = (t, outcome)
                    _record_from_outcome(rec, outcome)
                    rec.feedback_text = build_feedback(spec, t, outcome, mode)
        conv.append("user", rec.feedback_text)
        rec.wall_time_ms = (clock() - start) * 1000.0
        traj.records.append(rec)
        if not warned and conv.token_estimate > token_warning:
            log.warning("conversation is about %d tokens; context may overflow", conv.token_estimate)
            warned = True
        if rec.evaluated and rec.duplicate_of is None and spec.reached(
            math.nan if rec.nan_flag else rec.aggregate, bool(rec.feasible)
        ):
            log.info("target reached at iteration %d", t)
            break

    best = best_record(traj.records, spec.direction)
    summary = finalize(traj, client, spec, retries=retries, backoff=backoff, sleep=sleep) if summarize else ""
    return RunResult(traj, best, summary, conv)


def digest(traj: Trajectory, direction: str = "maximize") -> str:
    """Structured per-molecule digest; each evaluated SMILES appears once."""
    rows, seen = [], set()
    for r in traj.records:
        if not r.evaluated or r.smiles in seen:
            continue
        seen.add(r.smiles)
        rows.append(
            {
                "iteration": r.iteration,
                "smiles": r.smiles,
                "reason": r.reason,
                "score": format_score(r.score),
                "subscores": {k: format_score(v) for k, v in r.subscores.items()},
                "feasible": r.feasible,
            }
        )
    best = best_record(traj.records, direction)
    lines = [f"Task: {traj.task_id} ({direction}); iterations used: {len(traj.records)}"]
    lines += [json.dumps(row, ensure_ascii=False) for row in rows]
    if best is not None:
        lines.append(f"Best: iteration {best.iteration}, score {format_score(best.aggregate)}")
    return "\n".join(lines)


def template_summary(traj: Trajectory, direction: str = "maximize") -> str:
    best = best_record(traj.records, direction)
    n = len(traj.records)
    if best is None:
        return f"No molecule was scored in {n} iterations."
    return (
        f"Best score {format_score(best.aggregate)} for {best.smiles} "
        f"(iteration {best.iteration} of {n} iterations)."
    )


def finalize(traj: Trajectory, client: LlmClient, spec: TaskSpec | None = None, retries: int = 3,
             backoff=BACKOFF_S, sleep=time.sleep) -> str:
    """One extra LLM call over the digest; falls back to a template on failure."""
    direction = spec.direction if spec is not None else traj.direction
    messages = [Message("system", SUMMARY_INSTRUCTIONS), Message("user", digest(traj, direction))]
    try:
        return with_retries(lambda: client.complete(messages, purpose="summary"), retries, backoff, sleep)
    except LlmError as exc:
        log.warning("summary call failed (%s); using template summary", exc)
        return template_summary(traj, direction)
