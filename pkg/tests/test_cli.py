import json

import pytest

from species_cohomology.cli import main
from species_cohomology.species import MarkedSubsets, export_document, get_species


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def dims(report):
    return [row["dimension"] for row in report["table"]]


def test_cohomology_of_E(capsys):
    code, report = run(capsys, "cohomology", "--species", "E", "--max-degree", "4")
    assert code == 0
    assert dims(report) == [1, 1, 0, 0, 0]
    assert set(report) >= {"species", "method", "table", "witnesses", "timing"}


def test_cohomology_of_graphs(capsys):
    code, report = run(capsys, "cohomology", "--species", "Gr", "--max-degree", "6")
    assert code == 0 and dims(report) == [1, 1, 0, 0, 1, 6, 28]


def test_graph_cap(capsys):
    code, report = run(capsys, "cohomology", "--species", "Gr", "--max-degree", "7")
    assert code == 2 and "allow-heavy" in report["message"]


def test_oracle_method(capsys):
    code, report = run(capsys, "cohomology", "--species", "marked", "--max-degree", "3", "--method", "oracle")
    assert code == 0 and dims(report) == [1, 1, 0, 0]
    code, report = run(capsys, "cohomology", "--species", "L", "--max-degree", "1", "--method", "oracle", "--arity-bound", "3")
    assert dims(report) == [1, 1] and report["table"][1]["arity_bound"] == 3


def test_reports_are_deterministic(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("SPECIES_COHOMOLOGY_THREADS", "2")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["cohomology", "--species", "C", "--max-degree", "4", "--out", str(path)]) == 0
    strip = lambda p: {k: v for k, v in json.loads(p.read_text()).items() if k != "timing"}
    assert strip(a) == strip(b)
    assert capsys.readouterr().out == ""


def test_bad_thread_count(capsys, monkeypatch):
    monkeypatch.setenv("SPECIES_COHOMOLOGY_THREADS", "many")
    code, report = run(capsys, "cohomology", "--species", "E", "--max-degree", "1")
    assert code == 2


def test_unknown_species(capsys):
    code, report = run(capsys, "cohomology", "--species", "Nope", "--max-degree", "2")
    assert code == 2 and report["error"] == "InputError"


def test_verify_suites(capsys):
    code, report = run(capsys, "verify", "--suite", "coxeter", "--max-arity", "5")
    assert code == 0 and report["passed"]
    code, report = run(capsys, "verify", "--suite", "cobar", "--max-arity", "3")
    assert code == 0 and len(report["table"]) == 6
    code, report = run(capsys, "verify", "--suite", "cup-relations", "--max-arity", "3")
    assert code == 0


def test_cup_command(capsys):
    code, report = run(capsys, "cup", "--species", "L", "--p", "2", "--q", "2")
    assert code == 0
    (row,) = report["table"]
    assert list(row["product"].values()) == [2]


def test_cobar_command(capsys):
    code, report = run(capsys, "cobar", "--species", "L", "--arity", "4")
    assert code == 0
    assert [r["dimension"] for r in report["table"]] == [6, 11, 6, 1]
    assert [r["degree"] for r in report["table"]] == [-3, -2, -1, 0]
    code, _ = run(capsys, "cobar", "--species", "L", "--arity", "0")
    assert code == 2


def test_deform_command(capsys):
    code, report = run(capsys, "deform", "--species", "L", "--cocycle", "schubert", "--order", "3", "--max-arity", "3")
    assert code == 0
    assert [r["holds"] for r in report["table"]] == [True] * 4
    assert "1|2 12 : q" in report["q_form"]
    code, report = run(capsys, "deform", "--species", "E", "--cocycle", "cardinality-product", "--order", "2")
    assert code == 0
    code, _ = run(capsys, "deform", "--species", "E", "--cocycle", "schubert")
    assert code == 2
    code, _ = run(capsys, "deform", "--species", "E", "--cocycle", "no-such-thing")
    assert code == 2


def test_deform_from_file(capsys, tmp_path):
    # the first element of the order lies in S: not a cocycle
    entries = []
    for z in get_species("L").structures(2):
        entries.append({"S": [1], "T": [2], "z": list(z), "value": 1 if z[0] == 1 else 0})
    path = tmp_path / "first.json"
    path.write_text(json.dumps({"entries": entries}))
    code, report = run(capsys, "deform", "--species", "L", "--cocycle", str(path), "--max-arity", "3")
    assert code == 1 and report["witnesses"]
    # the Schubert values on [2] written out by hand, extended by zero, also fail at arity 3
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"entries": [{"S": [1], "T": [2], "z": [9], "value": 1}]}))
    code, _ = run(capsys, "deform", "--species", "L", "--cocycle", str(bad))
    assert code == 2


def test_species_add(capsys, tmp_path, monkeypatch):
    home = tmp_path / "home"
    monkeypatch.setenv("SPECIES_COHOMOLOGY_HOME", str(home))
    doc = export_document(MarkedSubsets(), 3, name="cli_marked")
    src = tmp_path / "cli_marked.json"
    src.write_text(json.dumps(doc))
    code, report = run(capsys, "species", "add", str(src))
    assert code == 0
    assert (home / "cli_marked.json").exists()
    for method in ("koszul", "oracle"):
        code, report = run(capsys, "cohomology", "--species", "cli_marked", "--max-degree", "2", "--method", method)
        assert code == 0 and dims(report) == [1, 1, 0]
        code, report = run(capsys, "cohomology", "--species", "cli_marked", "--max-degree", "3", "--method", method)
        assert code == 2 and "arity 3" in report["message"]


def test_species_add_rejects_invalid(capsys, tmp_path):
    doc = export_document(MarkedSubsets(), 2, name="cli_broken")
    doc["delete_left"][2][0][3] = 0
    src = tmp_path / "broken.json"
    src.write_text(json.dumps(doc))
    code, report = run(capsys, "species", "add", str(src))
    assert code == 2
    assert report["error"] == "SpeciesValidationError" and report["witnesses"]
    missing = tmp_path / "missing.json"
    code, _ = run(capsys, "species", "add", str(missing))
    assert code == 2


def test_argparse_errors():
    with pytest.raises(SystemExit) as info:
        main(["verify", "--suite", "nonsense"])
    assert info.value.code == 2
