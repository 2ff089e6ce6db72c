import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import read_c4, read_reference_properties
from molagent.molgraph import parse_smiles
from molagent.properties import (
    DescriptorSet,
    alert_manifest,
    descriptors,
    desirability,
    qed,
    qed_from_descriptors,
)
from molagent.properties.tables import qed_parameters

PARAMS = {p.name: p for p in qed_parameters()}
TOL = {"MW": 1e-3, "ALOGP": 1e-3, "PSA": 1e-2, "QED": 1e-3}


def test_descriptors_match_reference_table():
    for row in read_reference_properties():
        r = qed(parse_smiles(row["smiles"]))
        got = r.descriptors.as_dict()
        for name in ("HBA", "HBD", "ROTB", "AROM", "ALERTS"):
            assert got[name] == int(row[name]), (row["smiles"], name)
        for name in ("MW", "ALOGP", "PSA"):
            assert abs(got[name] - float(row[name])) <= TOL[name], (row["smiles"], name)
        assert abs(r.score - float(row["QED"])) <= TOL["QED"], row["smiles"]


@pytest.mark.parametrize(
    "smiles,expected,score",
    [
        ("c1ccccc1", DescriptorSet(78.114, 1.6866, 0, 0, 0.0, 0, 1, 0), 0.44263),
        ("CCO", DescriptorSet(46.069, -0.0014, 1, 1, 20.23, 0, 0, 0), 0.40681),
    ],
)
def test_small_examples(smiles, expected, score):
    r = qed(parse_smiles(smiles))
    for name, want in expected.as_dict().items():
        assert r.values[name] == pytest.approx(want, abs=1e-3), name
    assert r.score == pytest.approx(score, abs=1e-5)


def test_c4_iteration4_block():
    r = qed(parse_smiles("Fc1ccc(S(=O)(=O)Nc2nc3ccccc3s2)cc1C(=O)NC1CCCCC1"))
    shown = {k: round(v, 3) for k, v in r.weighted_log_contributions.items()}
    assert shown == {
        "MW": -0.618, "ALOGP": -0.121, "HBA": -0.006, "HBD": -0.142,
        "PSA": -0.013, "ROTB": -0.107, "AROM": -0.653, "ALERTS": -0.163,
    }
    assert round(r.values["MW"], 2) == 433.53 and round(r.values["PSA"], 2) == 88.16
    assert r.optimal_ranges["MW"] == "281-332 Da"


def test_c4_qed_column():
    worst = 0.0
    for _, s, _, q, _ in read_c4():
        if s is None or q is None:
            continue
        worst = max(worst, abs(qed(parse_smiles(s)).score - q))
    assert worst <= 5e-3


def test_desirability_peaks_at_one():
    for p in PARAMS.values():
        span = 1000.0 if p.name in ("MW", "PSA") else 20.0
        grid = [-5 + k * span / 20000 for k in range(20001)]
        top = max(desirability(x, p) for x in grid)
        assert 0.999 <= top <= 1.0 + 1e-6, p.name


def test_mw_penalty_grows_above_optimum():
    p = PARAMS["MW"]
    values = [desirability(x, p) for x in range(340, 900, 10)]
    assert all(b < a for a, b in zip(values, values[1:]))


def test_extreme_inputs_do_not_overflow():
    r = qed_from_descriptors(DescriptorSet(5000.0, 40.0, 50, 50, 900.0, 80, 12, 20))
    assert 0.0 < r.score < 1e-2 and all(math.isfinite(v) for v in r.weighted_log_contributions.values())


def test_alert_manifest_lists_uncounted_patterns():
    # only the multi-component alert is outside the matcher subset
    assert alert_manifest() == ("C(=O)O[C,H1].C(=O)O[C,H1].C(=O)O[C,H1]",)


descriptor_sets = st.builds(
    DescriptorSet,
    st.floats(20, 900),
    st.floats(-6, 10),
    st.integers(0, 15),
    st.integers(0, 10),
    st.floats(0, 250),
    st.integers(0, 20),
    st.integers(0, 6),
    st.integers(0, 6),
)


@given(descriptor_sets)
def test_log_decomposition_identity(ds):
    r = qed_from_descriptors(ds)
    total_w = sum(p.weight for p in PARAMS.values())
    assert math.log(r.score) == pytest.approx(sum(r.weighted_log_contributions.values()) / total_w, abs=1e-12)
    assert 0.0 < r.score <= 1.0 + 1e-9
    assert all(c <= 1e-6 for c in r.weighted_log_contributions.values())
    for name, d in r.desirabilities.items():
        assert r.weighted_log_contributions[name] == pytest.approx(PARAMS[name].weight * math.log(d))


def test_descriptors_are_deterministic():
    s = "CC(=O)Oc1ccccc1C(=O)O"
    assert descriptors(parse_smiles(s)) == descriptors(parse_smiles(s))
