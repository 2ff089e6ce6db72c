"""The ten acceptance criteria, one test each; a PASS/FAIL line per criterion is printed at the end."""

import functools
import json
import math
import random
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from bruteforce import embeddings, shapley_bruteforce, topk_bruteforce, unique_match_count
from conftest import ACCEPTANCE_RESULTS, read_c4, small_molecules
from molagent.agent import ScriptedMock, run
from molagent.explain import attribution_table, attributions, explain_similarity
from molagent.harness import (
    auc,
    best_at,
    best_so_far_curve,
    bootstrap_ci,
    hold_fixed_auc,
    hold_fixed_extend,
    load_external_trace,
    load_trajectory,
    save_trajectory,
    topk_curve,
)
from molagent.molgraph import parse_smiles
from molagent.oracles import AdditivePredictor, Modifier, apply_modifier, build_oracle, load_task, parse_task
from molagent.properties import qed
from molagent.substructure import count_matches, fingerprint_from_bits, key_table, maccs_fingerprint
from molagent.substructure.match import matched_roots


def criterion(n, title):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*a, **kw):
            t0 = time.perf_counter()
            try:
                detail = fn(*a, **kw)
            except BaseException as exc:
                ACCEPTANCE_RESULTS[n] = (False, f"{title}: {type(exc).__name__}: {str(exc).splitlines()[0][:120]}")
                raise
            dt = time.perf_counter() - t0
            ACCEPTANCE_RESULTS[n] = (True, f"{title} ({detail}, {dt:.2f} s)" if detail else f"{title} ({dt:.2f} s)")

        return wrapper

    return deco


QUERCETIN = "O=C1c3c(O/C(=C1/O)c2ccc(O)c(O)c2)cc(O)cc3O"
QUERCETIN_QUERY = "O=C1c2c(OC)cc(O)cc2OC(=C1OC)c3ccc(OC)cc3"


@criterion(1, "MACCS similarity diff on the quercetin pair")
def test_c1_quercetin_similarity_diff():
    t0 = time.perf_counter()
    target = maccs_fingerprint(parse_smiles(QUERCETIN))
    query = maccs_fingerprint(parse_smiles(QUERCETIN_QUERY))
    body = explain_similarity(target, query).body
    dt = time.perf_counter() - t0
    assert [k for k, _ in body["target_only"]] == [53, 54, 131]
    assert [k for k, _ in body["query_only"]] == [93, 126, 141, 149, 160]
    assert dt < 1.0
    return "target-only {53,54,131}, query-only {93,126,141,149,160}"


@criterion(2, "QED within 0.05 of the transcribed trajectory values")
def test_c2_qed_fixture():
    t0 = time.perf_counter()
    rows = [r for r in read_c4() if r[1] is not None]
    assert len(rows) >= 10
    errors = [abs(qed(parse_smiles(s)).score - q) for _, s, _, q, _ in rows]
    dt = time.perf_counter() - t0
    assert max(errors) <= 0.05
    assert dt < 5.0
    spot = {it: q for it, _, _, q, _ in rows}
    assert (spot[2], spot[29], spot[13]) == (0.836, 0.899, 0.942)
    return f"{len(rows)} pairs, max error {max(errors):.4f}"


@criterion(3, "MPO modifier unit values")
def test_c3_modifiers():
    assert apply_modifier(Modifier("clip", t=0.8), 0.9) == 1.0
    for mu in (0.0, 0.85, 1.0, 100.0):
        assert apply_modifier(Modifier("min_gauss", mu=mu, sigma=0.1), mu) == 1.0
    assert abs(apply_modifier(Modifier("max_gauss", mu=100, sigma=10), 90) - math.exp(-0.5)) <= 1e-12
    return "clip(0.9,0.8)=1, min_gauss(mu)=1, max_gauss(90;100,10)=exp(-0.5)"


@criterion(4, "top-k curves and AUC equal brute force; hold-fixed identity")
def test_c4_metric_equivalence():
    t0 = time.perf_counter()
    rng = random.Random(20240614)
    worst = 0.0
    for trial in range(1000):
        T = rng.randint(1, 200)
        direction = rng.choice(("maximize", "minimize"))
        fallback = 0.0 if direction == "maximize" else 1e6
        scores = []
        for _ in range(T):
            u = rng.random()
            scores.append(None if u < 0.05 else math.nan if u < 0.1 else rng.uniform(-5, 5))
        for k in (1, 10):
            curve = topk_curve(scores, k, direction, fallback)
            ref = topk_bruteforce(scores, k, direction, fallback)
            assert len(curve) == T
            worst = max(worst, max(abs(a - b) for a, b in zip(curve.values, ref)))
            assert abs(auc(curve) - sum(ref) / T) <= 1e-9
        curve = best_so_far_curve(scores, direction, fallback)
        t_prime = T + rng.randint(0, 10_000)
        ext = hold_fixed_extend(curve, t_prime)
        s_T = curve.values[-1]
        assert ext.values[:T] == curve.values and set(ext.values[T:]) <= {s_T}
        assert math.isclose(auc(ext), hold_fixed_auc(auc(curve), s_T, T, t_prime), rel_tol=1e-12, abs_tol=1e-12)
    assert worst <= 1e-9
    dt = time.perf_counter() - t0
    assert dt < 30.0
    return f"1000 traces, max curve deviation {worst:.1e}"


def _c4_trace(tmp_path):
    path = tmp_path / "c4_trace.csv"
    lines = ["smiles,score,feasible"]
    for _, s, ic50, q, nov in read_c4():
        if s is None:
            lines.append(",,")
        else:
            lines.append(f"{s},{ic50},{'yes' if q >= 0.6 and nov == 'Yes' else 'no'}")
    path.write_text("\n".join(lines) + "\n")
    return load_external_trace(path, task_id="c4", direction="minimize")


@criterion(5, "constraint-filtered replay of the transcribed trajectory")
def test_c5_constraint_filtered_replay(tmp_path):
    traj = _c4_trace(tmp_path)
    assert len(traj.records) == 50
    assert not traj.records[43].evaluated  # iteration 44 produced no molecule
    scores = traj.scores(feasible_only=True)
    best = best_at(scores, 50, "minimize", 1_000_000)
    assert best == 2.47
    curve = best_so_far_curve(scores, "minimize", 1_000_000)
    assert curve.values[0] == curve.values[1] == 1_000_000
    assert curve.values[2] < 1_000_000
    assert all(b <= a for a, b in zip(curve.values, curve.values[1:]))
    return f"best feasible IC50 at 50 calls = {best} nM"


SIM_QED_MOCK = [
    json.dumps({"reason": "start from the reference", "smiles": QUERCETIN}),
    '{"reason": "open a ring", "smiles": "C1CC(O"}',
    "Here is my choice:\n```json\n" + json.dumps({"reason": "methylate", "smiles": QUERCETIN_QUERY}) + "\n```",
    json.dumps({"reason": "repeat the first", "smiles": QUERCETIN}),
    json.dumps({"reason": "flavone core", "smiles": "O=c1cc(-c2ccccc2)oc2ccccc12"}),
]


def _mock_run(out_path):
    spec = load_task("quercetin_sim_qed").with_overrides(budget=5)
    client = ScriptedMock(SIM_QED_MOCK, summary="canned summary")
    result = run(spec, build_oracle(spec), client, seed=7, sleep=lambda s: None)
    save_trajectory(result.trajectory, out_path)
    return result


@criterion(6, "end-to-end scripted mock run")
def test_c6_mock_run(tmp_path):
    t0 = time.perf_counter()
    a = _mock_run(tmp_path / "a.jsonl")
    b = _mock_run(tmp_path / "b.jsonl")
    recs = a.trajectory.records
    assert len(recs) == 5
    assert [r.iteration for r in recs] == [1, 2, 3, 4, 5]
    assert not recs[1].evaluated and recs[1].error.startswith("invalid_smiles")
    assert recs[1].call_index is None
    assert recs[3].duplicate_of == 1
    assert recs[3].aggregate == recs[0].aggregate and recs[3].subscores == recs[0].subscores
    assert recs[3].call_index == recs[0].call_index  # served from cache, no new oracle call
    assert a.summary == "canned summary"
    loaded = load_trajectory(tmp_path / "a.jsonl")
    assert loaded == a.trajectory
    assert a.trajectory.dumps(include_wall_time=False) == b.trajectory.dumps(include_wall_time=False)
    assert len(a.conversation) == 2 + 2 * 5
    dt = time.perf_counter() - t0
    assert dt < 5.0
    return "5 records, invalid and duplicate handled, reload equal, replay byte-identical"


@criterion(7, "count_matches equals exhaustive subgraph enumeration")
def test_c7_matcher_bruteforce():
    t0 = time.perf_counter()
    mols = [parse_smiles(s) for s in small_molecules()]
    assert len(mols) >= 50
    assert all(sum(1 for a in m.atoms if a.element > 1) <= 10 for m in mols)
    checked = 0
    for m in mols:
        for k, key in key_table().keys.items():
            if not key.implemented:
                continue
            if key.rooted:
                expected = set()
                got = set()
                for p in key.patterns:
                    expected |= {e[0] for e in embeddings(p, m)}
                    got |= matched_roots(p, m)
                assert got == expected, (k, m.source)
                assert key.count(m) == len(expected)
            else:
                p = key.patterns[0]
                assert count_matches(p, m) == unique_match_count(p, m), (k, m.source)
            checked += 1
    dt = time.perf_counter() - t0
    assert dt < 60.0
    return f"{checked} key/molecule pairs over {len(mols)} molecules"


@criterion(8, "attribution completeness and equality with brute-force Shapley")
def test_c8_attribution():
    rng = random.Random(8)
    worst_gap = worst_shap = 0.0
    for trial in range(100):
        # completeness at any size
        feats = rng.sample(range(1, 167), rng.randint(1, 166))
        pred = AdditivePredictor(
            rng.uniform(3, 8),
            {k: rng.uniform(-1, 1) for k in feats},
            {k: rng.random() for k in feats},
        )
        fp = fingerprint_from_bits(k for k in range(1, 167) if rng.random() < 0.4)
        body = attribution_table(pred, fp).body
        gap = body["prediction"] - body["expected_value"] - sum(body["attributions"].values())
        worst_gap = max(worst_gap, abs(gap))
        assert abs(gap) <= 1e-9
        # brute force over all subsets for a small predictor
        n = rng.randint(1, 12)
        feats = rng.sample(range(1, 167), n)
        background = [[int(rng.random() < 0.5) for _ in range(n)] for _ in range(rng.randint(1, 6))]
        mean = {k: sum(b[i] for b in background) / len(background) for i, k in enumerate(feats)}
        small = AdditivePredictor(rng.uniform(3, 8), {k: rng.uniform(-1, 1) for k in feats}, mean)
        x = [int(rng.random() < 0.5) for _ in range(n)]
        fpx = fingerprint_from_bits(k for i, k in enumerate(feats) if x[i])

        def f(z, feats=feats, small=small):
            return small.predict(fingerprint_from_bits(k for i, k in enumerate(feats) if z[i]))

        phi = shapley_bruteforce(f, x, background)
        lin = attributions(small, fpx)
        for i, k in enumerate(feats):
            worst_shap = max(worst_shap, abs(phi[i] - lin[k]))
            assert abs(phi[i] - lin[k]) <= 1e-9
    return f"max completeness gap {worst_gap:.1e}, max Shapley deviation {worst_shap:.1e}"


@criterion(9, "seeded bootstrap reproducibility")
def test_c9_bootstrap():
    values = [0.61, 0.72, 0.55, 0.8, 0.66]
    a = bootstrap_ci(values, seed=11)
    b = bootstrap_ci(values, seed=11)
    assert a == b
    assert a.lower <= a.point <= a.upper and a.lower < a.upper
    c = bootstrap_ci([0.42] * 7, seed=3)
    assert c.lower == c.point == c.upper == pytest.approx(0.42)
    return f"interval [{a.lower:.4f}, {a.upper:.4f}] repeated, constant input zero width"


class _SlowHandler(BaseHTTPRequestHandler):
    def do_POST(self):
        body = json.loads(self.rfile.read(int(self.headers["Content-Length"])))
        if body["smiles"] == "CCO":
            time.sleep(3.0)
        payload = json.dumps({"probability": 0.7}).encode()
        try:
            self.send_response(200)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(payload)))
            self.end_headers()
            self.wfile.write(payload)
        except (BrokenPipeError, ConnectionResetError):
            pass

    def log_message(self, *args):
        pass


@pytest.fixture
def slow_server():
    server = ThreadingHTTPServer(("127.0.0.1", 0), _SlowHandler)
    server.daemon_threads = True
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_address[1]}/score"
    server.shutdown()
    server.server_close()


@criterion(10, "remote oracle timeout yields a recorded NaN")
def test_c10_remote_timeout(slow_server):
    spec = parse_task(
        "[task]\ntask_id = remote_stub\nobjective_kind = remote\nbudget = 2\nmode = full_explanation\n"
        "description = Binding task.\n[resources]\n"
        f"endpoint = {slow_server}\ntimeout_s = 2\n"
    )
    client = ScriptedMock(
        [json.dumps({"reason": "a", "smiles": "CCO"}), json.dumps({"reason": "b", "smiles": "CCN"})]
    )
    t0 = time.perf_counter()
    result = run(spec, build_oracle(spec), client, summarize=False)
    elapsed = time.perf_counter() - t0
    first, second = result.trajectory.records
    assert first.evaluated and first.nan_flag and first.aggregate is None
    assert math.isnan(first.score)
    assert first.call_index == 1
    assert second.aggregate == 0.7
    fed_back = client.seen[1][-1].text
    assert fed_back.splitlines()[0] == "Iteration 1/2 | score: NaN"
    curve = best_so_far_curve(result.trajectory.scores(), "maximize", 0.0)
    assert curve.values == (0.0, 0.7)
    assert elapsed < 10
    return "NaN recorded, fed back as 'score: NaN', skipped by the curve"


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
