import csv
import io
import json

import pytest

from abactions.cli import (CENSUS_COLUMNS, EXIT_CEILING, EXIT_INFEASIBLE, EXIT_OK, EXIT_SCOPE, EXIT_USAGE,
                           EXIT_VERIFY, TABLE51_COLUMNS, main)


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_table51_family_rows(capsys):
    code, out = run(capsys, "table51", "--prime", "5", "--prime", "7", "--prime", "11", "--prime", "13",
                    "--pair", "4,2", "--format", "json")
    rows = json.loads(out)
    assert code == EXIT_OK
    assert [r["closed_form"] for r in rows] == [4, 6, 10, 14]
    assert [r["pipeline"] for r in rows] == [4, 6, 10, 14]
    assert all(r["match"] for r in rows)


def test_table51_small_rows(capsys):
    code, out = run(capsys, "table51", "--prime", "2", "--pair", "3,1", "--format", "json")
    assert json.loads(out)[0] | {} == {"r": 3, "v": 1, "p": 2, "closed_form": 0, "oracle": 0, "pipeline": None,
                                       "match": True}
    code, out = run(capsys, "table51", "--prime", "7", "--prime", "11", "--pair", "3,2", "--format", "json")
    assert [r["closed_form"] for r in json.loads(out)] == [1, 1]


def test_csv_and_json_agree(capsys):
    argv = ["table51", "--prime", "3", "--prime", "5", "--pair", "3,1", "--pair", "4,1"]
    _, js = run(capsys, *argv, "--format", "json")
    _, cs = run(capsys, *argv, "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(cs)))
    assert list(rows[0]) == TABLE51_COLUMNS
    for j, c in zip(json.loads(js), rows):
        for k in ("closed_form", "oracle", "pipeline"):
            assert (str(j[k]) if j[k] is not None else "") == c[k]


def test_classify_examples(capsys):
    code, out = run(capsys, "classify", "--prime", "5", "--rank", "2", "--signature", "2;-", "--format", "json")
    assert code == EXIT_OK and json.loads(out)["total"] == 2
    code, out = run(capsys, "classify", "--prime", "5", "--rank", "2", "--signature", "0;5,5,5", "--format", "json")
    assert json.loads(out)["entries"][0]["count"] == 1
    code, out = run(capsys, "classify", "--group", "4,4", "--genus-check", "--format", "json")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["genus"] == 17 and rep["classes"] == 3
    assert len(rep["representatives"]) == 3


def test_census_csv_and_notes(capsys, tmp_path):
    path = tmp_path / "census.csv"
    code, _ = run(capsys, "classify", "--prime", "5", "--rank", "2", "--genus", "26", "--format", "csv",
                  "--out", str(path))
    data = path.read_bytes()
    assert code == EXIT_OK and b"\r\n" not in data
    rows = list(csv.DictReader(io.StringIO(data.decode("utf-8"))))
    assert list(rows[0]) == CENSUS_COLUMNS
    assert rows[-1]["signature"] == "total"
    assert int(rows[-1]["count"]) == sum(int(r["count"]) for r in rows[:-1])
    _, text = run(capsys, "classify", "--prime", "5", "--rank", "2", "--genus", "26")
    assert "note:" in text and "31" in text


def test_exit_codes(capsys):
    assert main(["classify", "--prime", "5", "--rank", "1", "--signature", "0;5"]) == EXIT_INFEASIBLE
    assert main(["classify", "--prime", "5", "--rank", "2", "--signature", "2;-", "--genus", "30"]) == EXIT_INFEASIBLE
    assert main(["classify", "--prime", "3", "--rank", "2", "--signature", "0;3,3,3,3,3",
                 "--oracle-ceiling", "100"]) == EXIT_CEILING
    assert main(["classify", "--group", "4,2", "--signature", "0;4,4"]) == EXIT_SCOPE
    assert main(["classify", "--prime", "5"]) == EXIT_USAGE
    for argv in (["table51", "--prime", "4"], ["verify", "nonsense"], ["table51", "--pair", "9,9"],
                 ["classify", "--oracle-ceiling", "0"]):
        with pytest.raises(SystemExit) as e:
            main(argv)
        assert e.value.code == EXIT_USAGE
    capsys.readouterr()


def test_verify_pass_and_fail(capsys):
    code, out = run(capsys, "verify", "pipeline-vs-oracle", "--format", "json")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["passed"] and len(rep["cases"]) == 8
    assert EXIT_VERIFY == 1
