import csv
from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"

# filled by tests/test_acceptance.py, printed after the run
ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


def read_c4():
    """Transcribed example trajectory: (iteration, smiles, ic50, qed, novelty); blanks for invalid."""
    rows = []
    with open(DATA / "c4_trajectory.csv", newline="") as fh:
        for r in csv.DictReader(fh):
            rows.append(
                (
                    int(r["iteration"]),
                    r["smiles"] or None,
                    float(r["ic50_nm"]) if r["ic50_nm"] else None,
                    float(r["qed"]) if r["qed"] else None,
                    r["novelty"] or None,
                )
            )
    return rows


def read_reference_properties():
    rows = []
    with open(DATA / "reference_properties.tsv") as fh:
        lines = [l for l in fh if not l.startswith("#")]
    head = lines[0].rstrip("\n").split("\t")
    for line in lines[1:]:
        d = dict(zip(head, line.rstrip("\n").split("\t")))
        d["maccs"] = {int(b) for b in d["maccs"].split()} if d["maccs"] else set()
        rows.append(d)
    return rows


def small_molecules():
    return [l.strip() for l in (DATA / "small_molecules.txt").read_text().splitlines() if l.strip()]


@pytest.fixture
def c4_rows():
    return read_c4()
