"""Task definitions and their INI loader."""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from .modifiers import Modifier

OBJECTIVE_KINDS = (
    "rediscovery",
    "similarity_qed",
    "mpo",
    "isomer",
    "constrained_potency",
    "remote",
    "qed",
)
MODES = ("no_description", "no_explanation", "partial_explanation", "full_explanation")
DIRECTIONS = ("maximize", "minimize")


class TaskError(ValueError):
    """A task file is malformed or names a missing resource."""


@dataclass(frozen=True)
class Component:
    name: str
    weight: float = 1.0
    modifier: Modifier = Modifier()
    property: str = ""  # raw quantity the modifier is applied to


@dataclass(frozen=True)
class TaskSpec:
    task_id: str
    objective_kind: str
    direction: str = "maximize"
    components: tuple[Component, ...] = ()
    reference: str | None = None  # SMILES, or a formula such as C7H8N2O2 for isomer tasks
    target_score: float | None = None
    budget: int = 50
    mode: str = "full_explanation"
    description_text: str = ""
    first_step: str = ""
    explained_component: str = "QED"  # the one payload shown in partial mode
    qed_threshold: float = 0.6
    fallback: float | None = None  # curve value before the first feasible score
    resources: dict[str, str] = field(default_factory=dict)
    approximation: str = ""
    base_dir: str = "."

    def __post_init__(self):
        if self.objective_kind not in OBJECTIVE_KINDS:
            raise TaskError(f"unknown objective kind {self.objective_kind!r}")
        if self.direction not in DIRECTIONS:
            raise TaskError(f"direction must be maximize or minimize, got {self.direction!r}")
        if self.mode not in MODES:
            raise TaskError(f"unknown mode {self.mode!r}")
        if self.budget < 1:
            raise TaskError("budget must be at least 1")
        names = [c.name for c in self.components]
        if len(set(names)) != len(names):
            raise TaskError("component names must be unique")
        if any(c.weight <= 0 for c in self.components):
            raise TaskError("component weights must be positive")

    def resource_path(self, key: str) -> Path | None:
        value = self.resources.get(key)
        if not value:
            return None
        p = Path(value)
        return p if p.is_absolute() else Path(self.base_dir) / p

    def reached(self, aggregate: float, feasible: bool = True) -> bool:
        """Whether an outcome meets the early-stop target."""
        if self.target_score is None or aggregate != aggregate or not feasible:
            return False
        if self.direction == "maximize":
            return aggregate >= self.target_score
        return aggregate <= self.target_score

    def with_overrides(self, **kw) -> "TaskSpec":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


def _modifier(section) -> Modifier:
    def num(key):
        return float(section[key]) if key in section else None

    return Modifier(section.get("modifier", "identity"), num("t"), num("mu"), num("sigma"))


def parse_task(text: str, base_dir: str = ".") -> TaskSpec:
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise TaskError(f"cannot parse task file: {exc}") from exc
    if "task" not in cp:
        raise TaskError("task file has no [task] section")
    t = cp["task"]
    components = []
    for name in cp.sections():
        if name.startswith("component:"):
            s = cp[name]
            try:
                components.append(
                    Component(name.split(":", 1)[1], float(s.get("weight", "1")), _modifier(s), s.get("property", ""))
                )
            except ValueError as exc:
                raise TaskError(f"[{name}]: {exc}") from exc
    res = dict(cp["resources"]) if "resources" in cp else {}

    def opt_float(key):
        v = t.get(key, "").strip()
        return float(v) if v else None

    try:
        return TaskSpec(
            task_id=t["task_id"],
            objective_kind=t["objective_kind"],
            direction=t.get("direction", "maximize"),
            components=tuple(components),
            reference=t.get("reference") or None,
            target_score=opt_float("target_score"),
            budget=int(t.get("budget", "50")),
            mode=t.get("mode", "full_explanation"),
            description_text=t.get("description", "").strip("\n"),
            first_step=t.get("first_step", "").strip(),
            explained_component=t.get("explained_component", "QED"),
            qed_threshold=float(t.get("qed_threshold", "0.6")),
            fallback=opt_float("fallback"),
            resources=res,
            approximation=t.get("approximation", ""),
            base_dir=base_dir,
        )
    except KeyError as exc:
        raise TaskError(f"task file is missing key {exc.args[0]!r}") from exc


def builtin_tasks() -> list[str]:
    root = resources.files("molagent").joinpath("tasks")
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".ini"))


def load_task(name_or_path: str) -> TaskSpec:
    """Load a task from a file path or a built-in task name."""
    p = Path(name_or_path)
    if p.is_file():
        return parse_task(p.read_text(encoding="utf-8"), str(p.parent))
    root = resources.files("molagent").joinpath("tasks")
    builtin = root.joinpath(f"{name_or_path}.ini")
    if builtin.is_file():
        return parse_task(builtin.read_text(encoding="utf-8"), str(root))
    raise TaskError(f"no task file or built-in task named {name_or_path!r}")
