import json

import pytest

from cli import (
    EXIT_ERROR,
    EXIT_INCONCLUSIVE,
    EXIT_NOT_SPLIT,
    EXIT_SPLIT,
    JobSpec,
    JobSpecError,
    euler_table,
    join_negative_values,
    main,
    run_corpus,
    validate_payload,
)
from bundles import Window
from picard_lattice import ChernData, DivisorClass, Surface

F0 = Surface.hirzebruch(0)


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_cohomology_text(capsys):
    assert run(capsys, "cohomology", "--surface", "F1", "--div", "1,0") == (0, "1 0 0\n")
    assert run(capsys, "cohomology", "--surface", "F0", "--div", "0,0") == (0, "1 0 0\n")
    assert run(capsys, "cohomology", "--surface", "P2", "--div", "2") == (0, "6 0 0\n")
    assert run(capsys, "cohomology", "--surface", "F1", "--div", "0,-2", "--oracle", "both") == (0, "0 1 0\n")


def test_cohomology_json(capsys):
    code, out = run(capsys, "cohomology", "--surface", "F2", "--div", "-1,0", "--format", "json", "--oracle", "cech")
    assert code == 0
    assert json.loads(out) == {"surface": "F2", "divisor": [-1, 0], "h": [0, 0, 0]}


def test_table_json_and_csv(capsys):
    code, out = run(capsys, "table", "--surface", "F1", "--bundle", "sum:0,0/0,-2", "--window", "-2,2,-2,2")
    assert code == 0
    payload = json.loads(out)
    validate_payload(payload, "table.schema.json")
    assert len(payload["entries"]) == 25
    assert payload["entries"][0]["twist"] == [-2, -2]

    code, out = run(
        capsys, "table", "--surface", "F1", "--bundle", "sum:0,0/0,-2", "--window", "-2,2,-2,2", "--format", "csv"
    )
    rows = out.splitlines()
    assert code == 0
    assert rows[0] == "a,b,h0,h1,h2"
    assert len(rows) == 26


def test_table_output_file(capsys, tmp_path):
    path = tmp_path / "t.json"
    code, out = run(capsys, "table", "--surface", "P2", "--bundle", "sum:0/-2", "--window", "-1,1", "--output", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["window"] == [-1, 1]


def test_decide_exit_codes(capsys):
    code, out = run(capsys, "decide", "--surface", "F2", "--bundle", "sum:1,0/-1,0")
    assert code == EXIT_SPLIT
    assert sorted(json.loads(out)["summands"]) == [[-1, 0], [1, 0]]

    code, out = run(capsys, "decide", "--surface", "F1", "--bundle", "ext:0,-2/0,0#0")
    assert code == EXIT_SPLIT
    assert json.loads(out)["summands"] == [[0, -1], [0, -1]]

    code, out = run(capsys, "decide", "--surface", "F0", "--bundle", "ext:0,0/2,-1#0")
    assert code == EXIT_NOT_SPLIT
    payload = json.loads(out)
    validate_payload(payload, "verdict.schema.json")
    assert payload["verdict"] == "not_split"


def test_decide_against(capsys):
    code, out = run(capsys, "decide", "--surface", "F2", "--bundle", "ext:0,-2/0,0#0", "--against", "sum:0,-1/0,-1")
    assert code == EXIT_SPLIT
    assert json.loads(out)["summands"] == [[0, -1], [0, -1]]

    code, _ = run(capsys, "decide", "--surface", "F2", "--bundle", "sum:0,0/0,0", "--against", "ext:0,-2/0,0#0")
    assert code == EXIT_ERROR


def test_decide_from_table_file(capsys, tmp_path):
    # Euler characteristics of c1 = 0, c2 = 1 on F0: no split bundle has them
    window = Window.square(F0, 3)
    entries = euler_table(F0, ChernData(DivisorClass((0, 0)), 1), window)
    payload = {
        "surface": "F0",
        "window": window.to_list(),
        "entries": [{"twist": t.to_list(), "h": entries[t].to_list()} for t in window],
    }
    path = tmp_path / "table.json"
    path.write_text(json.dumps(payload))
    code, out = run(capsys, "decide", "--surface", "F0", "--table", str(path))
    assert code == EXIT_INCONCLUSIVE
    assert json.loads(out) == {"verdict": "inconclusive", "reason": "not_normalizable:provably_none"}

    code, _ = run(capsys, "decide", "--surface", "F1", "--table", str(path))
    assert code == EXIT_ERROR


def test_negative_values(capsys):
    assert run(capsys, "cohomology", "--surface", "F1", "--div", "-1,0") == (0, "0 0 0\n")
    assert run(capsys, "cohomology", "--surface", "P2", "--div", "-3") == (0, "0 0 1\n")
    assert join_negative_values(["table", "--window", "-2,2,-2,2", "--div", "--x"]) == [
        "table",
        "--window=-2,2,-2,2",
        "--div",
        "--x",
    ]


def test_usage_errors_are_errors(capsys):
    assert run(capsys, "decide")[0] == EXIT_ERROR
    assert run(capsys, "cohomology", "--surface", "F1", "--div")[0] == EXIT_ERROR


def test_decide_large_summand_gap(capsys):
    code, out = run(capsys, "decide", "--surface", "F0", "--bundle", "sum:5,0/-5,0")
    assert code == EXIT_INCONCLUSIVE
    assert json.loads(out) == {"verdict": "inconclusive", "reason": "unbounded_normalizations"}

    code, out = run(capsys, "decide", "--surface", "F0", "--bundle", "sum:5,0/-5,0", "--against", "sum:5,0/-5,0")
    assert code == EXIT_SPLIT
    assert json.loads(out)["summands"] == [[5, 0], [-5, 0]]


def test_bad_jobs(capsys):
    assert run(capsys, "decide", "--surface", "F-2", "--bundle", "sum:0,0/0,0")[0] == EXIT_ERROR
    assert run(capsys, "decide", "--surface", "F1", "--bundle", "sum:0,0")[0] == EXIT_ERROR
    assert run(capsys, "decide", "--surface", "F1")[0] == EXIT_ERROR
    assert run(capsys, "cohomology", "--surface", "P2", "--div", "1,0")[0] == EXIT_ERROR


def test_output_is_byte_stable(capsys):
    argv = ("decide", "--surface", "F0", "--bundle", "ext:0,0/2,-1#0")
    assert run(capsys, *argv) == run(capsys, *argv)


def test_job_spec_text():
    spec = JobSpec(command="decide", surface="F2", bundle="ext:0,-2/0,0#0", format="json")
    assert spec.to_text() == "command=decide;surface=F2;bundle=ext:0,-2/0,0#0;format=json;oracle=closed"
    assert JobSpec.from_text(spec.to_text()) == spec
    with pytest.raises(JobSpecError):
        JobSpec.from_text("surface=F2")
    with pytest.raises(JobSpecError):
        JobSpec.from_text("command=decide;colour=red")
    with pytest.raises(JobSpecError):
        JobSpec(command="decide", surface="F1", bundle="sum:0,0/0,0", table="t.json").validate()


def test_corpus_reports_mismatches():
    report = run_corpus(
        [{"slug": "wrong", "surface": "F1", "bundle": "sum:0,0/0,0", "expected": "not_split"}]
    )
    assert report["status"] == "partial"
    assert report["instances"]["wrong"]["status"] == "mismatch"

    report = run_corpus([{"slug": "broken", "surface": "F1", "bundle": "nonsense", "expected": "split"}])
    assert report["instances"]["broken"]["status"] == "error"


@pytest.mark.slow
def test_corpus(capsys):
    code, out = run(capsys, "corpus")
    assert code == 0
    report = json.loads(out)
    assert report["status"] == "success"
    assert all(r["status"] == "success" for r in report["instances"].values())
