from .modifiers import Modifier, apply_modifier
from .novelty import NoveltySet, novelty_check
from .oracle import Oracle, OracleOutcome, build_oracle
from .predictor import AdditivePredictor, ic50_nm, load_predictor, parse_predictor
from .remote import RemoteOracle, RemoteResult
from .scoring import isomer_score, mpo_score, parse_formula, rediscovery_score, sim_qed_score, weighted_gmean
from .task import DIRECTIONS, MODES, OBJECTIVE_KINDS, Component, TaskError, TaskSpec, builtin_tasks, load_task, parse_task


def constrained_potency(m, predictor: AdditivePredictor, novelty: NoveltySet, qed_threshold: float = 0.6, mode="no_explanation"):
    """One-off constrained potency evaluation outside a task file."""
    spec = TaskSpec("constrained_potency", "constrained_potency", direction="minimize", qed_threshold=qed_threshold, mode=mode)
    return Oracle(spec, predictor, novelty).evaluate(m)


def remote_evaluate(m, endpoint: str, timeout_s: float = 300.0, task_id: str = "remote", mode="full_explanation"):
    spec = TaskSpec(task_id, "remote", mode=mode)
    return Oracle(spec, remote=RemoteOracle(endpoint, task_id, timeout_s)).evaluate(m)


__all__ = [
    "AdditivePredictor",
    "DIRECTIONS",
    "MODES",
    "OBJECTIVE_KINDS",
    "Component",
    "Modifier",
    "NoveltySet",
    "Oracle",
    "OracleOutcome",
    "RemoteOracle",
    "RemoteResult",
    "TaskError",
    "TaskSpec",
    "apply_modifier",
    "build_oracle",
    "builtin_tasks",
    "constrained_potency",
    "ic50_nm",
    "isomer_score",
    "load_predictor",
    "load_task",
    "mpo_score",
    "novelty_check",
    "parse_formula",
    "parse_predictor",
    "parse_task",
    "rediscovery_score",
    "remote_evaluate",
    "sim_qed_score",
    "weighted_gmean",
]
