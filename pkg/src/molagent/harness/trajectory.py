"""Trajectory records and their line-delimited file format."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

SCHEMA = "molagent.trajectory/1"


class TrajectoryFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


@dataclass
class StepRecord:
    """One loop iteration. ``evaluated`` is true iff the oracle produced an outcome."""

    iteration: int
    smiles: str | None = None
    reason: str | None = None
    raw_reply: str = ""
    error: str | None = None
    evaluated: bool = False
    aggregate: float | None = None  # None when not evaluated or NaN
    nan_flag: bool = False
    subscores: dict[str, float | None] = field(default_factory=dict)
    feasible: bool | None = None
    violated: list[str] = field(default_factory=list)
    novel: bool | None = None
    duplicate_of: int | None = None
    call_index: int | None = None
    feedback_text: str = ""
    wall_time_ms: float = 0.0

    @property
    def score(self) -> float | None:
        """Aggregate for metrics: NaN for failed evaluations, None if not evaluated."""
        if not self.evaluated:
            return None
        return math.nan if self.nan_flag else self.aggregate

    @property
    def curve_score(self) -> float | None:
        """Score that enters optimisation curves; repeats and NaN carry no new information."""
        s = self.score
        if s is None or self.duplicate_of is not None or math.isnan(s):
            return None
        return s

    def to_json(self) -> dict:
        d = asdict(self)
        d["subscores"] = {k: (None if v is None or math.isnan(v) else v) for k, v in self.subscores.items()}
        return d

    @classmethod
    def from_json(cls, d: dict) -> "StepRecord":
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ValueError(f"unknown record fields {sorted(unknown)}")
        if "iteration" not in d:
            raise ValueError("record has no iteration")
        return cls(**d)


@dataclass
class Trajectory:
    task_id: str
    mode: str
    seed: int
    direction: str = "maximize"
    budget: int | None = None
    fallback: float | None = None
    incomplete: bool = False
    incomplete_reason: str | None = None
    records: list[StepRecord] = field(default_factory=list)

    def header(self) -> dict:
        return {
            "schema": SCHEMA,
            "task_id": self.task_id,
            "mode": self.mode,
            "seed": self.seed,
            "direction": self.direction,
            "budget": self.budget,
            "fallback": self.fallback,
            "incomplete": self.incomplete,
            "incomplete_reason": self.incomplete_reason,
        }

    def scores(self, feasible_only: bool = False) -> list[float | None]:
        """Per-call curve inputs; infeasible points are dropped when requested."""
        out = []
        for r in self.records:
            s = r.curve_score
            if feasible_only and r.feasible is False:
                s = None
            out.append(s)
        return out

    def dumps(self, include_wall_time: bool = True) -> str:
        lines = [json.dumps(self.header(), sort_keys=True)]
        for r in self.records:
            d = r.to_json()
            if not include_wall_time:
                d.pop("wall_time_ms")
            lines.append(json.dumps(d, sort_keys=True, allow_nan=False))
        return "\n".join(lines) + "\n"


def save_trajectory(traj: Trajectory, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(traj.dumps(), encoding="utf-8")
    tmp.replace(path)
    return path


def loads_trajectory(text: str) -> Trajectory:
    lines = text.splitlines()
    if not lines:
        raise TrajectoryFormatError("empty trajectory file", 1)
    try:
        head = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise TrajectoryFormatError(f"header is not JSON ({exc.msg})", 1) from exc
    if not isinstance(head, dict) or head.get("schema") != SCHEMA:
        got = head.get("schema") if isinstance(head, dict) else None
        raise TrajectoryFormatError(f"unsupported schema {got!r}, expected {SCHEMA!r}", 1)
    traj = Trajectory(
        task_id=head.get("task_id", ""),
        mode=head.get("mode", ""),
        seed=head.get("seed", 0),
        direction=head.get("direction", "maximize"),
        budget=head.get("budget"),
        fallback=head.get("fallback"),
        incomplete=head.get("incomplete", False),
        incomplete_reason=head.get("incomplete_reason"),
    )
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            traj.records.append(StepRecord.from_json(json.loads(line)))
        except (json.JSONDecodeError, ValueError, TypeError) as exc:
            raise TrajectoryFormatError(f"malformed record ({exc})", lineno) from exc
    return traj


def _score_value(text, lineno):
    if text is None:
        return None
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        return float(text)
    t = str(text).strip()
    if t == "":
        return None
    try:
        return float(t)
    except ValueError as exc:
        raise TrajectoryFormatError(f"score {t!r} is not a number", lineno) from exc


def _flag(text) -> bool | None:
    if text is None or text == "":
        return None
    if isinstance(text, bool):
        return text
    return str(text).strip().lower() in ("1", "true", "yes", "y")


def _score_record(i: int, smiles, score, feasible) -> StepRecord:
    if score is None:
        return StepRecord(iteration=i, smiles=smiles or None, error="no score")
    nan = math.isnan(score)
    return StepRecord(
        iteration=i,
        smiles=smiles or None,
        evaluated=True,
        aggregate=None if nan else score,
        nan_flag=nan,
        feasible=feasible,
    )


def load_external_trace(path: str | Path, task_id: str | None = None, direction: str = "maximize") -> Trajectory:
    """Load a (smiles, score) trace from CSV or JSONL; optional 'feasible' column."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    traj = Trajectory(task_id=task_id or path.stem, mode="external", seed=0, direction=direction)
    if path.suffix == ".jsonl" or text.lstrip().startswith("{"):
        n = 0
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                d = json.loads(line)
            except json.JSONDecodeError as exc:
                raise TrajectoryFormatError(f"not JSON ({exc.msg})", lineno) from exc
            if not isinstance(d, dict) or "score" not in d:
                raise TrajectoryFormatError("record needs a 'score' field", lineno)
            n += 1
            traj.records.append(_score_record(n, d.get("smiles"), _score_value(d["score"], lineno), _flag(d.get("feasible"))))
        return traj
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or "score" not in reader.fieldnames:
        raise TrajectoryFormatError("CSV trace needs a 'score' column", 1)
    for n, row in enumerate(reader, start=1):
        traj.records.append(_score_record(n, row.get("smiles"), _score_value(row["score"], n + 1), _flag(row.get("feasible"))))
    return traj


def load_trajectory(path: str | Path) -> Trajectory:
    """Load a trajectory file, or an external score trace if it has no schema header."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    first = text.split("\n", 1)[0]
    if '"schema"' in first:
        return loads_trajectory(text)
    return load_external_trace(path)
