"""Command line entry point: ``molagent run | replay | explain``."""

from __future__ import annotations

import argparse
import configparser
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .agent import HttpChatClient, ScriptedMock, run
from .explain import verbalize
from .harness import (
    TrajectoryFormatError,
    aggregate,
    auc,
    best_so_far_curve,
    hold_fixed_extend,
    load_trajectory,
    run_metrics,
    save_trajectory,
)
from .molgraph import SmilesError, parse_smiles
from .oracles import MODES, TaskError, build_oracle, load_task

log = logging.getLogger("molagent")


class ConfigError(ValueError):
    pass


@dataclass
class LlmConfig:
    endpoint_env: str = "MOLAGENT_LLM_URL"
    api_key_env: str = "MOLAGENT_LLM_API_KEY"
    model: str = ""
    timeout_s: float = 120.0
    params: dict = field(default_factory=dict)


@dataclass
class RunConfig:
    task: str
    mode: str | None = None
    budget: int | None = None
    reps: int = 1
    seed: int = 0
    mock_script: str | None = None
    jobs: int = 1
    out: str = "runs"
    llm: LlmConfig = field(default_factory=LlmConfig)

    def validate(self):
        if self.reps < 1:
            raise ConfigError("--reps must be at least 1")
        if self.jobs < 1:
            raise ConfigError("--jobs must be at least 1")
        if self.mode is not None and self.mode not in MODES:
            raise ConfigError(f"--mode must be one of {', '.join(MODES)}")
        if self.budget is not None and self.budget < 1:
            raise ConfigError("--budget must be at least 1")


def _literal(text: str):
    try:
        return json.loads(text)
    except ValueError:
        return text


def read_config(path: str | None) -> tuple[dict, LlmConfig]:
    """Flat INI: [run] defaults, [llm] client settings, [sampling] pass-through params."""
    llm = LlmConfig()
    if path is None:
        return {}, llm
    cp = configparser.ConfigParser(interpolation=None)
    try:
        if not cp.read(path, encoding="utf-8"):
            raise ConfigError(f"config file not found: {path}")
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc
    run_defaults = dict(cp["run"]) if "run" in cp else {}
    if "llm" in cp:
        s = cp["llm"]
        llm.endpoint_env = s.get("endpoint_env", llm.endpoint_env)
        llm.api_key_env = s.get("api_key_env", llm.api_key_env)
        llm.model = s.get("model", llm.model)
        llm.timeout_s = s.getfloat("timeout_s", llm.timeout_s)
    if "sampling" in cp:
        llm.params = {k: _literal(v) for k, v in cp["sampling"].items()}
    return run_defaults, llm


def _make_client(cfg: RunConfig):
    if cfg.mock_script:
        return ScriptedMock.from_file(cfg.mock_script)
    endpoint = os.environ.get(cfg.llm.endpoint_env, "")
    if not endpoint:
        raise ConfigError(f"no LLM endpoint: set ${cfg.llm.endpoint_env} or pass --mock-script")
    if not cfg.llm.model:
        raise ConfigError("no model name configured under [llm]")
    return HttpChatClient(
        endpoint, cfg.llm.model, os.environ.get(cfg.llm.api_key_env), cfg.llm.params, cfg.llm.timeout_s
    )


def _run_one(cfg: RunConfig, spec, rep: int) -> tuple[int, dict]:
    seed = cfg.seed + rep
    oracle = build_oracle(spec)
    client = _make_client(cfg)
    result = run(spec, oracle, client, seed=seed, mode=cfg.mode)
    out_dir = Path(cfg.out)
    stem = f"{spec.task_id}_rep{rep + 1}_seed{seed}"
    path = save_trajectory(result.trajectory, out_dir / f"{stem}.jsonl")
    (out_dir / f"{stem}.summary.txt").write_text(result.summary + "\n", encoding="utf-8")
    traj = result.trajectory
    curve = best_so_far_curve(
        _padded(traj.scores(feasible_only=True), spec.budget), spec.direction, spec.fallback
    )
    line = {
        "trajectory": str(path),
        "seed": seed,
        "iterations": len(traj.records),
        "best": None if result.best is None else result.best.aggregate,
        "best_smiles": None if result.best is None else result.best.smiles,
        "auc": auc(curve),
        "incomplete": traj.incomplete,
    }
    return rep, line


def _padded(scores, budget):
    return list(scores[:budget]) + [None] * max(0, budget - len(scores))


def cmd_run(args) -> int:
    defaults, llm = read_config(args.config)

    def pick(name, conv=str, default=None):
        v = getattr(args, name)
        if v is not None:
            return v
        if name in defaults:
            return conv(defaults[name])
        return default

    cfg = RunConfig(
        task=pick("task"),
        mode=pick("mode"),
        budget=pick("budget", int),
        reps=pick("reps", int, 1),
        seed=pick("seed", int, 0),
        mock_script=pick("mock_script"),
        jobs=pick("jobs", int, 1),
        out=pick("out", str, "runs"),
        llm=llm,
    )
    if not cfg.task:
        raise ConfigError("--task is required")
    cfg.validate()
    spec = load_task(cfg.task).with_overrides(budget=cfg.budget, mode=cfg.mode)
    build_oracle(spec)  # fail fast on missing resources before any LLM call
    if not cfg.mock_script:
        _make_client(cfg)
    with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
        results = sorted(pool.map(lambda r: _run_one(cfg, spec, r), range(cfg.reps)))
    incomplete = False
    for _, line in results:
        print(json.dumps(line, sort_keys=True))
        incomplete |= line["incomplete"]
    if incomplete:
        log.error("at least one repetition ended early; partial trajectories were kept")
        return 3
    return 0


def _load_trace(path: str, direction: str | None, fallback: float | None):
    traj = load_trajectory(path)
    if direction:
        traj.direction = direction
    if fallback is not None:
        traj.fallback = fallback
    return traj


def cmd_replay(args) -> int:
    failures = 0
    per_task: dict[str, list[dict]] = {}
    rows = []
    budgets = tuple(args.budgets)
    for path in args.traces:
        try:
            traj = _load_trace(path, args.direction, args.fallback)
        except (OSError, TrajectoryFormatError) as exc:
            log.error("%s: %s", path, exc)
            failures += 1
            continue
        scores = traj.scores(feasible_only=not args.no_filter)
        m = run_metrics(scores, budgets, tuple(args.k), traj.direction, traj.fallback)
        for tp in args.hold_fixed or ():
            for b in budgets:
                curve = best_so_far_curve(_padded(scores, b), traj.direction, traj.fallback)
                m[f"top1_auc@{b}->{tp}"] = auc(hold_fixed_extend(curve, max(tp, b)))
        per_task.setdefault(traj.task_id, []).append(m)
        rows.append((path, traj.task_id, m))
    report = aggregate(per_task, args.expect_task or (), seed=args.seed, resamples=args.resamples)
    metric_names = sorted({k for _, _, m in rows for k in m})
    out = sys.stdout
    print("\t".join(["file", "task"] + metric_names), file=out)
    for path, task, m in rows:
        print("\t".join([path, task] + [f"{m[k]:.6g}" if k in m else "" for k in metric_names]), file=out)
    for task, cis in report.per_task.items():
        for k, ci in cis.items():
            print(f"task\t{task}\t{k}\t{ci.point:.6g}\t[{ci.lower:.6g}, {ci.upper:.6g}]", file=out)
    for k, ci in report.sums.items():
        print(f"sum\t{k}\t{ci.point:.6g}\t[{ci.lower:.6g}, {ci.upper:.6g}]", file=out)
    for w in report.warnings:
        log.warning(w)
    if args.table:
        with open(args.table, "w", encoding="utf-8") as fh:
            fh.write("\t".join(["file", "task"] + metric_names) + "\n")
            for path, task, m in rows:
                fh.write("\t".join([path, task] + [repr(m.get(k, "")) for k in metric_names]) + "\n")
    return 1 if failures else 0


def cmd_explain(args) -> int:
    spec = load_task(args.task)
    try:
        mol = parse_smiles(args.smiles)
    except SmilesError as exc:
        print(f"error: invalid SMILES: {exc}", file=sys.stderr)
        return 2
    oracle = build_oracle(spec)
    outcome = oracle.evaluate(mol, "full_explanation")
    text = verbalize(outcome.explanations, "full_explanation")
    print(text if text else "(this objective has no explanation)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="molagent", description="Online LLM molecule optimization with explained feedback")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run optimization repetitions")
    r.add_argument("--task", help="task file or built-in task name")
    r.add_argument("--mode", choices=MODES)
    r.add_argument("--budget", type=int)
    r.add_argument("--reps", type=int)
    r.add_argument("--seed", type=int)
    r.add_argument("--mock-script", help="scripted mock replies, one per line")
    r.add_argument("--jobs", type=int, help="repetitions to run in parallel")
    r.add_argument("--out", help="output directory (default: runs)")
    r.add_argument("--config", help="INI config with [run], [llm] and [sampling] sections")
    r.set_defaults(func=cmd_run)

    rp = sub.add_parser("replay", help="recompute metrics from saved or external traces")
    rp.add_argument("traces", nargs="+")
    rp.add_argument("--budgets", type=int, nargs="+", default=[50])
    rp.add_argument("--k", type=int, nargs="+", default=[1, 10])
    rp.add_argument("--hold-fixed", type=int, nargs="*", help="also report top-1 AUC extended to these budgets")
    rp.add_argument("--direction", choices=("maximize", "minimize"), help="override trace direction")
    rp.add_argument("--fallback", type=float, help="curve value before the first feasible score")
    rp.add_argument("--no-filter", action="store_true", help="ignore per-record feasibility")
    rp.add_argument("--expect-task", nargs="*", help="warn when these task ids have no trace")
    rp.add_argument("--seed", type=int, default=0)
    rp.add_argument("--resamples", type=int, default=10_000)
    rp.add_argument("--table", help="write a machine-readable TSV table here")
    rp.set_defaults(func=cmd_replay)

    e = sub.add_parser("explain", help="print the full explanation for one molecule")
    e.add_argument("smiles")
    e.add_argument("--task", required=True)
    e.set_defaults(func=cmd_explain)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except (ConfigError, TaskError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
