import json
import subprocess
import sys

import pytest

from helpers import empty_language, exa_a1, exa_a2
from sepcov.automata import serialize_nfa
from sepcov.cli import main


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, a in (("L1", exa_a1()), ("L2", exa_a2()), ("empty", empty_language("ab"))):
        p = tmp_path / f"{name}.nfa"
        p.write_text(serialize_nfa(a))
        paths[name] = str(p)
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out else None), err


def test_gr_sep_example(capsys, files):
    code, doc, err = run(capsys, "gr-sep", files["L1"], files["L2"], "--witness")
    assert code == 1
    assert doc["witness"] == "a^-1"
    assert doc["witness_accepted"] == [True, True]
    assert "not separable" in err


def test_gr_sep_empty(capsys, files):
    code, doc, _ = run(capsys, "gr-sep", files["empty"], files["L1"])
    assert code == 0 and doc["verdict"] == "separable"


def test_gr_cover_explain(capsys, files):
    code, doc, _ = run(capsys, "gr-cover", files["L1"], files["L2"], files["L1"], "--explain")
    assert code == 1
    assert [x["eps_pairs"] for x in doc["notes"]["inputs"]] == [1, 1, 1]


def test_check_agreement(capsys, files):
    code, doc, _ = run(capsys, "check", "--oracle", "ash", files["L1"], files["L2"])
    assert code == 0 and doc["agreement"] is True


def test_inspect_example(capsys, files):
    code, doc, _ = run(capsys, "inspect", files["L1"])
    assert code == 0
    inverse = {tuple(e[:3]) for e in doc["inverse_completion"]["signed_transitions"]
               if e[3] == "inverse"}
    assert inverse == {(2, "a^-1", 1), (1, "b^-1", 2)}
    eps = {tuple(p) for p in doc["extended"]["eps"] if p[0] != p[1]}
    assert eps == {(0, 2)}


def test_amt_and_mod(capsys, files):
    code, doc, _ = run(capsys, "amt-cover", files["L1"], files["L2"], "--witness")
    assert code == 1 and len(doc["realizations"]) == 2
    code, doc, _ = run(capsys, "mod-cover", files["L1"], files["L2"])
    assert code == 1 and "realizations" not in doc
    code, doc, _ = run(capsys, "mod-sep", files["L1"], files["L2"], "--explain")
    assert code == 1 and "notes" in doc


def test_synth(capsys, tmp_path):
    even = tmp_path / "even.nfa"
    odd = tmp_path / "odd.nfa"
    even.write_text('{"alphabet": ["a"], "states": 2, "initial": [0], "final": [0], '
                    '"transitions": [[0, "a", 1], [1, "a", 0]]}')
    odd.write_text('{"alphabet": ["a"], "states": 2, "initial": [0], "final": [1], '
                   '"transitions": [[0, "a", 1], [1, "a", 0]]}')
    code, doc, _ = run(capsys, "synth-mod", str(even), str(odd), "--qmax", "4")
    assert code == 0 and doc["separator"] == {"q": 2, "residues": [0],
                                              "description": "|w| = 0 (mod 2)"}
    code, doc, _ = run(capsys, "synth-amt", str(even), str(odd), "--dmax", "3")
    assert code == 0 and doc["cover"]["d"] == 2


def test_gen_manifests(capsys, tmp_path):
    code, doc, _ = run(capsys, "gen", "amt3sat", "1: 1 1 1, -1 -1 -1", "--out", str(tmp_path / "a"))
    assert code == 0 and doc["satisfiable"] is False
    assert doc["expected"] == {"command": "amt-cover", "verdict": "coverable"}
    manifest = json.loads((tmp_path / "a" / "manifest.json").read_text())
    assert manifest == {k: v for k, v in doc.items() if k != "command"}
    files = [str(tmp_path / "a" / f) for f in manifest["files"]]
    code, doc, _ = run(capsys, "amt-cover", *files)
    assert code == 0
    code, doc, _ = run(capsys, "gen", "mod3sat", "random:3", "--out", str(tmp_path / "m"))
    assert code == 0 and len(doc["files"]) == len(doc["formula"]["clauses"])
    code, doc, _ = run(capsys, "gen", "circuit", "sample", "--unfold", "--out", str(tmp_path / "c"))
    assert code == 0 and doc["value"] is False
    files = [str(tmp_path / "c" / f) for f in doc["files"]]
    code, doc, _ = run(capsys, "gr-sep", *files)
    assert code == 0


def test_determinism(capsys, files):
    main(["gr-sep", files["L1"], files["L2"], "--witness", "--explain"])
    first = capsys.readouterr().out
    main(["gr-sep", files["L1"], files["L2"], "--witness", "--explain"])
    assert capsys.readouterr().out == first


@pytest.mark.parametrize("argv", [
    ["gr-sep", "missing.nfa", "missing.nfa"],
    ["gr-sep", "{L1}"],
    ["gen", "circuit", "{{\"vertices\": []}}"],
    ["gen", "amt3sat", "random:x"],
])
def test_input_errors(capsys, files, argv):
    argv = [a.format(**files) for a in argv]
    code, doc, err = run(capsys, *argv)
    assert code == 2 and doc is None and "error" in err


def test_bad_document(capsys, tmp_path):
    p = tmp_path / "bad.nfa"
    p.write_text('{"alphabet": ["a"], "states": 1, "initial": [3], "final": [], "transitions": []}')
    code, _, err = run(capsys, "inspect", str(p))
    assert code == 2 and "initial[0]" in err


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        main(["bogus"])
    assert info.value.code == 2


def test_capacity_guard(capsys, files, monkeypatch):
    code, _, err = run(capsys, "amt-cover", files["L1"], files["L2"], "--budget", "1")
    assert code == 3 and "capacity" in err
    monkeypatch.setenv("SEPCOV_BUDGET", "1")
    code, _, _ = run(capsys, "amt-cover", files["L1"], files["L2"])
    assert code == 3


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "sepcov", "gr-sep", files["L1"], files["L2"]],
                          capture_output=True, text=True)
    assert proc.returncode == 1
    assert json.loads(proc.stdout)["witness"] == "a^-1"
