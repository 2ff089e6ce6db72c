import json
import math

import httpx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from molagent.agent import (
    CORRECTIONS,
    FORMAT_REMINDER,
    HttpChatClient,
    LlmError,
    LlmTransportError,
    Message,
    MockExhausted,
    ProposalError,
    ScriptedMock,
    best_record,
    build_feedback,
    build_first_message,
    correction_text,
    digest,
    finalize,
    format_score,
    parse_proposal,
    run,
    with_retries,
)
from molagent.harness import StepRecord, Trajectory
from molagent.oracles import OracleOutcome, TaskSpec, build_oracle, load_task


def reply(smiles, reason="try this"):
    return json.dumps({"reason": reason, "smiles": smiles})


def no_sleep(_):
    pass


# ---------------------------------------------------------------- proposal parsing

def test_parse_exact_and_fenced():
    assert parse_proposal(reply("CCO")).smiles == "CCO"
    fenced = 'Here you go:\n```json\n{"reason": "small {polar}", "smiles": " c1ccccc1O "}\n```'
    p = parse_proposal(fenced)
    assert p.smiles == "c1ccccc1O" and p.reason == "small {polar}" and p.raw == fenced


def test_parse_skips_non_matching_objects():
    assert parse_proposal('{"note": 1} then {"reason": "x", "smiles": "C"}').smiles == "C"


@pytest.mark.parametrize(
    "raw,kind",
    [
        ("", "no_object"),
        ("just text CCO", "no_object"),
        ('{"reason": "x"}', "missing_field"),
        ('{"reason": "x", "smiles": ""}', "missing_field"),
        ('{"reason": "x", "smiles": 42}', "non_string_field"),
        ('["CCO"]', "no_object"),
    ],
)
def test_parse_errors(raw, kind):
    with pytest.raises(ProposalError) as exc:
        parse_proposal(raw)
    assert exc.value.kind == kind


def test_corrections_are_distinct_and_end_with_format():
    texts = {k: correction_text(k, "detail", "C1CC") for k in CORRECTIONS}
    assert len(set(texts.values())) == len(CORRECTIONS)
    assert all(t.endswith(FORMAT_REMINDER) for t in texts.values())
    assert "'C1CC'" in texts["invalid_smiles"]


@given(st.text(max_size=60))
def test_parse_never_crashes(raw):
    try:
        p = parse_proposal(raw)
    except ProposalError as exc:
        assert exc.kind in CORRECTIONS
    else:
        assert p.smiles


# ---------------------------------------------------------------- clients

def test_mock_parse_and_exhaustion(tmp_path):
    f = tmp_path / "script.txt"
    f.write_text("# comment\n" + reply("C") + "\n\nSUMMARY: all done\n" + reply("CC") + "\n")
    mock = ScriptedMock.from_file(f)
    assert mock.replies == [reply("C"), reply("CC")] and mock.summary == "all done"
    assert mock.complete([]) == reply("C") and mock.complete([]) == reply("CC")
    with pytest.raises(MockExhausted):
        mock.complete([])
    assert mock.complete([], purpose="summary") == "all done"


class Flaky:
    def __init__(self, failures, then="ok"):
        self.failures = failures
        self.then = then
        self.calls = 0

    def __call__(self):
        self.calls += 1
        if self.calls <= self.failures:
            raise LlmTransportError("503")
        return self.then


def test_retries_wait_one_four_sixteen():
    waits = []
    assert with_retries(Flaky(3), sleep=waits.append) == "ok"
    assert waits == [1.0, 4.0, 16.0]
    waits.clear()
    with pytest.raises(LlmTransportError):
        with_retries(Flaky(4), sleep=waits.append)
    assert waits == [1.0, 4.0, 16.0]


def test_non_retryable_error_is_not_retried():
    f = Flaky(0)

    def call():
        f.calls += 1
        raise LlmError("400")

    with pytest.raises(LlmError):
        with_retries(call, sleep=no_sleep)
    assert f.calls == 1


def test_http_client_sends_whole_conversation():
    seen = []

    def handler(request):
        seen.append(json.loads(request.content))
        return httpx.Response(200, json={"choices": [{"message": {"content": reply("CCO")}}]})

    client = HttpChatClient(
        "http://llm.test/v1/chat/completions", "m1", "key", {"temperature": 0.7},
        client=httpx.Client(transport=httpx.MockTransport(handler)),
    )
    msgs = [Message("system", "s"), Message("user", "u"), Message("assistant", "a"), Message("user", "u2")]
    assert client.complete(msgs) == reply("CCO")
    assert seen[0]["model"] == "m1" and seen[0]["temperature"] == 0.7
    assert [m["role"] for m in seen[0]["messages"]] == ["system", "user", "assistant", "user"]


@pytest.mark.parametrize("status,retryable", [(503, True), (429, True), (400, False)])
def test_http_client_status_errors(status, retryable):
    client = HttpChatClient("http://llm.test", "m", client=httpx.Client(transport=httpx.MockTransport(lambda r: httpx.Response(status))))
    with pytest.raises(LlmError) as exc:
        client.complete([Message("user", "x")])
    assert exc.value.retryable is retryable


# ---------------------------------------------------------------- prompts and feedback

BLACKLIST = ("similarity", "qed", "ic50", "tanimoto", "celecoxib", "quercetin", "maccs")


@pytest.mark.parametrize("task", ["celecoxib_rediscovery", "quercetin_sim_qed", "mpro_constrained_potency"])
def test_no_description_hides_objective(task):
    text = build_first_message(load_task(task), "no_description").lower()
    assert not any(word in text for word in BLACKLIST)
    assert "50 iterations" in text


def test_described_first_message():
    text = build_first_message(load_task("celecoxib_rediscovery"), "no_explanation")
    assert "Tanimoto similarity" in text and "- You will have 50 iterations to optimize the molecule." in text
    assert text.rstrip().endswith('"smiles": "<SMILES string>"}')


def test_format_score():
    assert format_score(math.nan) == "NaN" and format_score(None) == "NaN"
    assert format_score(2.4712) == "2.47" and format_score(0.51234) == "0.512"


def test_feedback_per_mode():
    spec = load_task("quercetin_sim_qed")
    oracle = build_oracle(spec)
    from molagent.molgraph import parse_smiles

    m = parse_smiles("Oc1ccc(cc1)C1=COc2ccccc2C1=O")
    bare = build_feedback(spec, 3, oracle.evaluate(m, "no_description"), "no_description")
    assert len(bare.splitlines()) == 1 and bare.startswith("Iteration 3/50 | score: ")
    full = build_feedback(spec, 3, oracle.evaluate(m, "full_explanation"), "full_explanation")
    assert "Weighted log contributions" in full and "present in TARGET but not in QUERY" in full
    assert full.splitlines()[1].startswith('Scores: "similarity": ')


def test_feedback_lists_violations_and_novelty():
    spec = TaskSpec("c", "constrained_potency", direction="minimize", mode="no_explanation")
    out = OracleOutcome(250.0, {"IC50": 250.0, "QED": 0.5}, False, ("QED",), True)
    text = build_feedback(spec, 1, out)
    assert text.splitlines() == [
        "Iteration 1/50 | score: 250.00",
        'Scores: "IC50": 250.00, "QED": 0.500, "Novelty": Yes',
        "Constraints violated: QED",
    ]


# ---------------------------------------------------------------- loop

@pytest.fixture
def rediscovery():
    spec = load_task("celecoxib_rediscovery").with_overrides(budget=5)
    return spec, build_oracle(spec)


def test_run_stops_when_target_reached(rediscovery):
    spec, oracle = rediscovery
    mock = ScriptedMock([reply("CCO"), reply("c1ccccc1"), reply(spec.reference), reply("CC")], summary="done")
    res = run(spec, oracle, mock, sleep=no_sleep)
    assert len(res.trajectory.records) == 3 and res.best.iteration == 3 and res.best.aggregate == 1.0
    assert res.summary == "done" and not res.incomplete


def test_invalid_then_valid(rediscovery):
    spec, oracle = rediscovery
    mock = ScriptedMock(["no json here", reply("C1CC"), reply("CCO")] + [reply("C" * k) for k in range(2, 4)])
    res = run(spec, oracle, mock, sleep=no_sleep)
    recs = res.trajectory.records
    assert recs[0].error.startswith("no_object") and recs[1].error.startswith("invalid_smiles")
    assert not recs[0].evaluated and recs[2].evaluated and oracle.calls == 3
    assert "Iteration 2/5 | invalid proposal" in res.conversation.messages[5].text


def test_budget_exhaustion_gives_exactly_budget_records(rediscovery):
    spec, oracle = rediscovery
    mock = ScriptedMock([reply("C" * k) for k in range(1, 9)])
    res = run(spec, oracle, mock, sleep=no_sleep, summarize=False)
    assert len(res.trajectory.records) == 5 and mock.calls == 5
    # system + first message, then one assistant and one user message per iteration
    assert len(res.conversation) == 2 + 2 * 5


def test_llm_failure_after_retries_marks_incomplete(rediscovery):
    spec, oracle = rediscovery

    class Down:
        def complete(self, messages, purpose="propose"):
            raise LlmTransportError("connection refused")

    waits = []
    res = run(spec, oracle, Down(), sleep=waits.append)
    assert res.incomplete and res.trajectory.records == [] and waits[:3] == [1.0, 4.0, 16.0]
    assert res.summary.startswith("No molecule was scored")


def test_mock_running_out_keeps_partial_trajectory(rediscovery):
    spec, oracle = rediscovery
    res = run(spec, oracle, ScriptedMock([reply("CCO"), reply("CCN")]), sleep=no_sleep)
    assert res.incomplete and len(res.trajectory.records) == 2
    assert "exhausted" in res.trajectory.incomplete_reason


def test_duplicates_reuse_cached_outcome(rediscovery):
    spec, oracle = rediscovery
    res = run(spec, oracle, ScriptedMock([reply("CCO"), reply("CCN"), reply("CCO"), reply("CCS"), reply("CCF")]), sleep=no_sleep)
    dup = res.trajectory.records[2]
    assert dup.duplicate_of == 1 and dup.call_index == res.trajectory.records[0].call_index
    assert oracle.calls == 4 and "already proposed at iteration 1" in dup.feedback_text


def test_best_is_extreme_finite_value():
    recs = []
    for i, v in enumerate([0.2, math.nan, 0.7, 0.7, 0.1], start=1):
        r = StepRecord(iteration=i, smiles="C" * i, evaluated=True, nan_flag=math.isnan(v), aggregate=None if math.isnan(v) else v)
        recs.append(r)
    assert best_record(recs, "maximize").iteration == 3
    assert best_record(recs, "minimize").iteration == 5
    recs[4].feasible = False
    assert best_record(recs, "minimize").iteration == 1


# ---------------------------------------------------------------- finalisation

def _traj():
    t = Trajectory("t", "full_explanation", 0, "maximize", 3)
    for i, (s, v) in enumerate([("CCO", 0.3), ("CCN", 0.5), ("CCO", 0.3)], start=1):
        t.records.append(StepRecord(iteration=i, smiles=s, evaluated=True, aggregate=v, duplicate_of=1 if i == 3 else None))
    return t


def test_digest_lists_each_molecule_once():
    lines = digest(_traj()).splitlines()
    rows = [json.loads(line) for line in lines[1:-1]]
    assert [r["smiles"] for r in rows] == ["CCO", "CCN"]
    assert lines[-1] == "Best: iteration 2, score 0.500"


def test_finalize_uses_canned_summary_or_template():
    assert finalize(_traj(), ScriptedMock([], summary="canned")) == "canned"
    text = finalize(_traj(), ScriptedMock([]), sleep=no_sleep)
    assert text == "Best score 0.500 for CCN (iteration 2 of 3 iterations)."
