"""Oracle facade: evaluates a molecule for a task and packages the outcome."""

from __future__ import annotations

import math
import os
import threading
from dataclasses import dataclass, field

from ..explain import ExplanationPayload, attribution_table, explain_qed, explain_remote, explain_similarity
from ..molgraph import Molecule, SmilesError, parse_smiles, write_smiles
from ..properties import qed
from ..substructure.maccs import maccs_fingerprint, tanimoto
from .novelty import NoveltySet, novelty_check
from .predictor import AdditivePredictor, ic50_nm, load_predictor
from .remote import DEFAULT_TIMEOUT_S, RemoteOracle
from .scoring import isomer_score, mpo_score, parse_formula
from .task import TaskError, TaskSpec

EXPLAINED_MODES = ("partial_explanation", "full_explanation")


@dataclass(frozen=True)
class OracleOutcome:
    aggregate: float  # NaN when a remote evaluation failed
    subscores: dict[str, float] = field(default_factory=dict)
    feasible: bool = True
    violated: tuple[str, ...] = ()
    novel: bool | None = None  # None: not checked
    explanations: dict[str, ExplanationPayload] = field(default_factory=dict)
    call_index: int = 0
    raw: dict[str, float] = field(default_factory=dict)

    @property
    def is_nan(self) -> bool:
        return math.isnan(self.aggregate)


class Oracle:
    """Scores molecules for one task; call_index counts every evaluation."""

    def __init__(
        self,
        spec: TaskSpec,
        predictor: AdditivePredictor | None = None,
        novelty: NoveltySet | None = None,
        remote: RemoteOracle | None = None,
    ):
        self.spec = spec
        self.predictor = predictor
        self.novelty = novelty
        self.remote = remote
        self.reference: Molecule | None = None
        self.target_formula: dict[str, int] | None = None
        kind = spec.objective_kind
        if kind == "isomer":
            if not spec.reference:
                raise TaskError("isomer task needs a reference formula")
            self.target_formula = parse_formula(spec.reference)
        elif kind in ("rediscovery", "similarity_qed") or (
            kind == "mpo" and any((c.property or c.name).lower() == "similarity" for c in spec.components)
        ):
            if not spec.reference:
                raise TaskError(f"{kind} task needs a reference SMILES")
            try:
                self.reference = parse_smiles(spec.reference)
            except SmilesError as exc:
                raise TaskError(f"reference SMILES does not parse: {exc}") from exc
        if kind == "constrained_potency" and (predictor is None or novelty is None):
            raise TaskError("constrained_potency needs a predictor and a novelty set")
        if kind == "remote" and remote is None:
            raise TaskError("remote task needs an endpoint")
        if kind == "mpo" and not spec.components:
            raise TaskError("mpo task has no components")
        self._ref_fp = maccs_fingerprint(self.reference) if self.reference is not None else None
        self._calls = 0
        self._lock = threading.Lock()

    @property
    def calls(self) -> int:
        return self._calls

    def _next_index(self) -> int:
        with self._lock:
            self._calls += 1
            return self._calls

    def evaluate(self, m: Molecule, mode: str | None = None) -> OracleOutcome:
        mode = mode or self.spec.mode
        explain = mode in EXPLAINED_MODES
        full = mode == "full_explanation"
        want = self.spec.explained_component

        def wanted(name: str) -> bool:
            return explain and (full or name == want)

        kind = self.spec.objective_kind
        expl: dict[str, ExplanationPayload] = {}
        raw: dict[str, float] = {}
        feasible, violated, novel = True, (), None

        if kind in ("rediscovery", "similarity_qed"):
            fp = maccs_fingerprint(m)
            sim = tanimoto(self._ref_fp, fp)
            if wanted("similarity"):
                expl["similarity"] = explain_similarity(self._ref_fp, fp)
            if kind == "rediscovery":
                subs = {"similarity": sim}
                agg = sim
            else:
                q = qed(m)
                subs = {"similarity": sim, "QED": q.score}
                agg = (sim + q.score) / 2.0
                if wanted("QED"):
                    expl["QED"] = explain_qed(q)
        elif kind == "qed":
            q = qed(m)
            subs = {"QED": q.score}
            agg = q.score
            if wanted("QED"):
                expl["QED"] = explain_qed(q)
        elif kind == "mpo":
            ref = self.reference
            agg, subs, raw = mpo_score(m, self.spec.components, ref)
            if ref is not None and wanted("similarity"):
                expl["similarity"] = explain_similarity(self._ref_fp, maccs_fingerprint(m))
        elif kind == "isomer":
            agg = isomer_score(m, self.target_formula)
            subs = {"isomer": agg}
        elif kind == "constrained_potency":
            fp = maccs_fingerprint(m)
            pic50 = self.predictor.predict(fp)
            q = qed(m)
            ic50 = ic50_nm(pic50)
            subs = {"IC50": ic50, "QED": q.score}
            raw["pIC50"] = pic50
            novel = novelty_check(m, self.novelty)
            bad = []
            if q.score < self.spec.qed_threshold:
                bad.append("QED")
            if novel is not True:
                bad.append("novelty")
            feasible, violated = not bad, tuple(bad)
            agg = ic50
            if wanted("IC50"):
                expl["IC50"] = attribution_table(self.predictor, fp)
            if wanted("QED"):
                expl["QED"] = explain_qed(q)
        elif kind == "remote":
            res = self.remote.evaluate(m.source or write_smiles(m))
            agg = res.probability
            subs = {"binding_probability": agg}
            if not math.isnan(agg) and explain and (res.close_residues or res.confidence):
                expl["binding"] = explain_remote(res.close_residues, res.confidence)
        else:  # pragma: no cover - guarded by TaskSpec validation
            raise TaskError(f"unsupported objective kind {kind!r}")
        return OracleOutcome(agg, subs, feasible, violated, novel, expl, self._next_index(), raw)


def build_oracle(spec: TaskSpec) -> Oracle:
    """Construct an oracle, loading the resources that the task names."""
    predictor = novelty = remote = None
    if spec.objective_kind == "constrained_potency":
        for key in ("predictor", "novelty"):
            path = spec.resource_path(key)
            if path is None:
                raise TaskError(f"constrained_potency task is missing the {key!r} resource")
            if not path.is_file():
                raise TaskError(f"{key} resource not found: {path}")
        try:
            predictor = load_predictor(spec.resource_path("predictor"))
        except ValueError as exc:
            raise TaskError(f"predictor resource is malformed: {exc}") from exc
        novelty = NoveltySet.from_file(spec.resource_path("novelty"))
    if spec.objective_kind == "remote":
        endpoint = spec.resources.get("endpoint") or os.environ.get(spec.resources.get("endpoint_env", ""), "")
        if not endpoint:
            raise TaskError("remote task has no endpoint (set 'endpoint' or 'endpoint_env' under [resources])")
        timeout = float(spec.resources.get("timeout_s", DEFAULT_TIMEOUT_S))
        remote = RemoteOracle(endpoint, spec.task_id, timeout)
    return Oracle(spec, predictor, novelty, remote)
