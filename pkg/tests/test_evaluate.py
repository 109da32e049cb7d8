"""Evaluation harness: truth loading, verdicts, report arithmetic, table."""

import json

import pytest

from declfix.errors import MissingTruth, SchemaError
from declfix.evaluate import (
    EvalRow,
    TruthEntry,
    load_truth,
    run_eval,
)
from declfix.fixtures import load_fixtures
from declfix.pipeline import FixOptions

GOLDEN_IDS = [c.id for c in load_fixtures(golden_only=True)]


# ------------------------------------------------------------- truth files

def test_load_truth_reads_names_and_types(tmp_path):
    path = tmp_path / "a.truth.json"
    path.write_text(json.dumps({
        "file": "a.c",
        "expected": [
            {"name": "i", "expected_type": "int"},
            {"name": "buf", "expected_type": "int", "expected_array_size": 50},
        ],
    }))
    truth = load_truth(path)
    assert truth.file == "a.c"
    assert truth.names == {"i", "buf"}
    assert truth.has_array
    assert TruthEntry("i", "int") in truth.expected


def test_load_truth_missing_file(tmp_path):
    with pytest.raises(MissingTruth):
        load_truth(tmp_path / "nope.truth.json")


def test_load_truth_rejects_bad_json(tmp_path):
    path = tmp_path / "bad.truth.json"
    path.write_text("{not json")
    with pytest.raises(SchemaError):
        load_truth(path)


def test_load_truth_requires_expected_list(tmp_path):
    path = tmp_path / "noexp.truth.json"
    path.write_text(json.dumps({"file": "x.c"}))
    with pytest.raises(SchemaError):
        load_truth(path)


def test_load_truth_rejects_nameless_entries(tmp_path):
    path = tmp_path / "anon.truth.json"
    path.write_text(json.dumps({"expected": [{"expected_type": "int"}]}))
    with pytest.raises(SchemaError):
        load_truth(path)


def test_load_truth_rejects_duplicate_names(tmp_path):
    path = tmp_path / "dup.truth.json"
    path.write_text(json.dumps({
        "expected": [{"name": "i"}, {"name": "i"}],
    }))
    with pytest.raises(SchemaError):
        load_truth(path)


def test_truth_type_defaults_to_int(tmp_path):
    path = tmp_path / "d.truth.json"
    path.write_text(json.dumps({"expected": [{"name": "k"}]}))
    truth = load_truth(path)
    assert truth.expected[0].expected_type == "int"
    assert not truth.has_array


# ------------------------------------------------------------- row algebra

def test_row_complements_always_balance():
    row = EvalRow("k", "label", total=9, identified=9, correctly=8, fixed=7)
    assert row.not_identified == 0
    assert row.wrongly == 1
    assert row.not_fixed == 2


def test_category_row_renders_identified_as_na():
    row = EvalRow("k", "label", total=3, identified=None, correctly=2, fixed=2)
    assert row.not_identified is None
    doc = row.to_json_dict()
    assert doc["identified"] is None
    assert doc["not_identified"] is None
    assert doc["wrongly_identified"] == 1


# ------------------------------------------------------------- full runs

def test_golden_corpus_scores_perfectly(golden_corpus):
    report = run_eval(golden_corpus, golden_corpus)
    allrow = report.row("all")
    assert allrow.total == 9
    assert allrow.identified == 9
    assert allrow.correctly == 9
    assert allrow.fixed == 9
    assert report.total == 9
    assert len(report.files) == 9
    assert all(v.fixed for v in report.files)


def test_category_rows_partition_the_corpus(golden_corpus):
    report = run_eval(golden_corpus, golden_corpus)
    cats = [r for r in report.rows if r.key != "all"]
    assert sum(r.total for r in cats) == report.row("all").total
    for r in cats:
        assert r.identified is None
        assert 0 <= r.fixed <= r.correctly <= r.total


def test_full_corpus_counts_truth_mismatch_case(full_corpus):
    # one bundled case is annotated with the type the tool cannot see;
    # it lands in correctly-identified but not in fixed
    report = run_eval(full_corpus, full_corpus)
    allrow = report.row("all")
    assert allrow.total == 13
    assert allrow.identified == 13
    assert allrow.correctly == 13
    assert allrow.fixed == 12
    assert allrow.wrongly == 0
    assert allrow.not_fixed == 1
    bad = [v for v in report.files if not v.fixed]
    assert [v.file for v in bad] == ["fig-16b.c"]


def test_eval_forces_detect_only_mode(golden_corpus):
    options = FixOptions(repair=True)
    run_eval(golden_corpus, golden_corpus, options)
    assert options.repair is False


def test_missing_truth_aborts_the_run(tmp_path):
    (tmp_path / "a.c").write_text("int main()\n{\n    return 0;\n}\n")
    with pytest.raises(MissingTruth):
        run_eval(tmp_path, tmp_path)


def test_report_json_round_trip(golden_corpus, tmp_path):
    report = run_eval(golden_corpus, golden_corpus)
    out = tmp_path / "report.json"
    report.write_json(out)
    doc = json.loads(out.read_text())
    assert doc["total"] == 9
    assert len(doc["rows"]) == 5
    assert len(doc["files"]) == 9
    assert doc["rows"][0]["key"] == "all"
    assert doc["rows"][0]["identified"] == 9


def test_table_text_layout(golden_corpus):
    text = run_eval(golden_corpus, golden_corpus).table_text()
    lines = text.splitlines()
    assert lines[0].startswith("Programs")
    assert "Identified" in lines[0]
    assert set(lines[1]) <= {"-", " "}
    assert len(lines) == 2 + 5
    assert "all programs" in lines[2]
    assert "9(100.0%)" in lines[2]
    assert "N/A" in lines[3]


def test_table_percentages_against_row_totals(full_corpus):
    text = run_eval(full_corpus, full_corpus).table_text()
    allrow = next(l for l in text.splitlines() if l.startswith("all programs"))
    assert "13(100.0%)" in allrow
    assert "12(92.3%)" in allrow
    assert "1(7.7%)" in allrow


def test_zero_total_rows_render_zero_percent(tmp_path):
    (tmp_path / "only.c").write_text(
        "int main()\n{\n    x = 1;\n    return 0;\n}\n"
    )
    (tmp_path / "only.truth.json").write_text(json.dumps({
        "expected": [{"name": "x", "expected_type": "int"}],
    }))
    report = run_eval(tmp_path, tmp_path)
    empty = [r for r in report.rows if r.total == 0]
    assert empty
    text = report.table_text()
    assert "0(0.0%)" in text


def test_wrong_flag_counts_as_wrongly_identified(tmp_path):
    # truth names a variable the tool will not flag, so the flag set and
    # the truth set differ: identified but not correct
    (tmp_path / "w.c").write_text(
        "int main()\n{\n    x = 1;\n    return 0;\n}\n"
    )
    (tmp_path / "w.truth.json").write_text(json.dumps({
        "expected": [{"name": "y", "expected_type": "int"}],
    }))
    report = run_eval(tmp_path, tmp_path)
    allrow = report.row("all")
    assert allrow.identified == 1
    assert allrow.correctly == 0
    assert allrow.wrongly == 1
    assert allrow.fixed == 0


def test_type_mismatch_blocks_fixed_not_correct(tmp_path):
    (tmp_path / "t.c").write_text(
        "int main()\n{\n    x = 1;\n    return 0;\n}\n"
    )
    (tmp_path / "t.truth.json").write_text(json.dumps({
        "expected": [{"name": "x", "expected_type": "double"}],
    }))
    report = run_eval(tmp_path, tmp_path)
    allrow = report.row("all")
    assert allrow.correctly == 1
    assert allrow.fixed == 0


def test_array_size_mismatch_blocks_fixed(tmp_path):
    (tmp_path / "a.c").write_text(
        "int main()\n{\n    int i;\n    i = 0;\n    b[i] = 1;\n    return 0;\n}\n"
    )
    (tmp_path / "a.truth.json").write_text(json.dumps({
        "expected": [
            {"name": "b", "expected_type": "int", "expected_array_size": 50}
        ],
    }))
    report = run_eval(tmp_path, tmp_path)
    assert report.row("all").correctly == 1
    assert report.row("all").fixed == 0
    # the evaluator's options thread through to the binder
    sized = run_eval(tmp_path, tmp_path, FixOptions(default_array_size=50))
    assert sized.row("all").fixed == 1
