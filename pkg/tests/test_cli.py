import json
import subprocess
import sys

import pytest

from narydec.cli import main
from narydec.io import dumps_tensor, load_tensor, tensor_from_json
from narydec.errors import FormatError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_decompose_corpus(capsys):
    code, out, _ = run(capsys, "decompose", "--input", "paper-r4-n2")
    assert code == 0 and "blocks: [[0,1],[2],[3]]" in out
    code, out, _ = run(capsys, "decompose", "--input", "PAPER-R4-N2-BASISBPRIME")
    assert code == 0 and "blocks: [[0,1,2],[3]]" in out
    code, out, _ = run(capsys, "decompose", "--input", "zero-d3")
    assert "blocks: [[0],[1],[2]]" in out


def test_decompose_emits_json_and_dot(capsys, tmp_path):
    j, d = tmp_path / "d.json", tmp_path / "d.dot"
    code, _, _ = run(capsys, "decompose", "--input", "paper-r4-n2", "--emit-json", str(j), "--emit-dot", str(d))
    assert code == 0
    data = json.loads(j.read_text())
    assert data["blocks"] == [[0, 1], [2], [3]] and data["verification"]["violations"] == []
    assert d.read_text().startswith('graph "paper-r4-n2"')


def test_exact_mode_needs_prime_field(capsys):
    code, _, err = run(capsys, "decompose", "--input", "paper-r4-n2", "--mode", "exact-bfs")
    assert code == 2 and "mode" in err
    code, out, _ = run(capsys, "decompose", "--input", "paper-r4-gf5", "--mode", "exact-bfs")
    assert code == 0 and "blocks: [[0,1],[2],[3]]" in out


def test_simplicity(capsys, tmp_path):
    code, out, _ = run(capsys, "simplicity", "--input", "a4-gf5")
    assert code == 0 and "characterization: yes" in out and "direct: yes" in out
    j = tmp_path / "s.json"
    code, out, _ = run(capsys, "simplicity", "--input", "paper-r4-n2", "--block", "0", "--emit-json", str(j))
    assert code == 0 and "nonzero annihilator; annihilator span{(0, 1)}" in out
    data = json.loads(j.read_text())
    assert data["blocks"][0]["characterization"]["witness"]["annihilator"] == [["0", "1"]]
    code, out, _ = run(capsys, "simplicity", "--input", "zero-d3", "--route", "characterization")
    assert out.count("no (zero product") == 3
    code, _, err = run(capsys, "simplicity", "--input", "paper-r4-n2", "--block", "1")
    assert code == 2 and "block" in err


def test_compare_bases(capsys, tmp_path):
    code, out, _ = run(capsys, "compare-bases", "--input", "paper-r4-n2", "--g", "swap23")
    assert code == 0 and "sigma: 0 -> 0, 2 -> 3, 3 -> 2" in out and "isomorphism: pass" in out
    code, out, _ = run(capsys, "compare-bases", "--input", "paper-r4-n2", "--g", "swap01")
    assert code == 1 and "witness tuple (0,0)" in out
    ident = tmp_path / "id.json"
    ident.write_text(json.dumps([["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]))
    code, out, _ = run(capsys, "compare-bases", "--input", "zero-d3", "--g", str(ident))
    assert code == 0 and "sigma: 0 -> 0, 1 -> 1, 2 -> 2" in out
    sing = tmp_path / "sing.json"
    sing.write_text(json.dumps([["1", "1"], ["1", "1"]]))
    code, _, err = run(capsys, "compare-bases", "--input", "t1", "--g", str(sing))
    assert code == 2


def test_connect(capsys):
    code, out, _ = run(capsys, "connect", "--input", "t1", "--from", "0", "--to", "1")
    assert code == 0 and "[(e0)]  (verified)" in out and "[(ē0)]  (verified)" in out
    code, out, _ = run(capsys, "connect", "--input", "paper-r4-gf5", "--from", "0", "--to", "1")
    assert code == 1 and "not connected" in out
    code, out, _ = run(capsys, "connect", "--input", "paper-r4-n2", "--from", "0", "--to", "1")
    assert code == 1 and "not found within limits" in out
    code, out, _ = run(capsys, "connect", "--input", "a4", "--from", "3", "--to", "3")
    assert code == 0 and "e3 -> e3: []" in out
    code, _, err = run(capsys, "connect", "--input", "t1", "--from", "0", "--to", "5")
    assert code == 2 and "to" in err


def test_report(capsys):
    code, out, _ = run(capsys, "report", "--input", "a4-gf5")
    assert code == 0 and "direct sum of 1 ideals" in out and "simple: yes" in out
    code, out, _ = run(capsys, "report", "--input", "a4-plus-a4-gf5")
    assert "direct sum of 2 ideals" in out and out.count("simple: yes") == 2
    code, out, _ = run(capsys, "report", "--input", "zero-d3")
    assert "direct sum of 3 ideals" in out and out.count("simple: no") == 3


def test_gen_random(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["gen-random", "--field", "GF(2)", "--dim", "3", "--arity", "2", "--density", "0.2", "--seed", "1"]
    assert run(capsys, *args, "--output", str(a))[0] == 0
    assert run(capsys, *args, "--output", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    doc = load_tensor(a)
    assert dumps_tensor(doc.tensor, doc.name, doc.source) == a.read_text()
    code, out, _ = run(capsys, "gen-random", "--field", "Q", "--dim", "2", "--arity", "3", "--density", "1")
    assert code == 0 and len(json.loads(out)["entries"]) == 8
    for bad in (["--density", "0"], ["--density", "1.5"], ["--field", "GF(4)"], ["--dim", "0"], ["--arity", "1"]):
        assert run(capsys, "gen-random", *bad)[0] == 2


@pytest.mark.parametrize(
    "doc,field",
    [
        ({"field": "R", "dim": 2, "arity": 2, "entries": []}, "field"),
        ({"field": "Q", "dim": 0, "arity": 2, "entries": []}, "dim"),
        ({"field": "Q", "dim": 2, "arity": 1, "entries": []}, "arity"),
        ({"field": "Q", "dim": 2, "arity": 2}, "entries"),
        ({"field": "Q", "dim": 2, "arity": 2, "entries": [{"args": [0, 2], "out": {"0": "1"}}]}, "entries[0].args"),
        ({"field": "Q", "dim": 2, "arity": 2, "entries": [{"args": [0], "out": {"0": "1"}}]}, "entries[0].args"),
        ({"field": "Q", "dim": 2, "arity": 2, "entries": [{"args": [0, 0], "out": {"0": "0"}}]}, "entries[0].out[0]"),
        ({"field": {"GF": 3}, "dim": 2, "arity": 2, "entries": [{"args": [0, 0], "out": {"0": "3"}}]}, "entries[0].out[0]"),
        ({"field": "Q", "dim": 2, "arity": 2, "entries": [{"args": [0, 0], "out": {"2": "1"}}]}, "entries[0].out"),
        ({"field": "Q", "dim": 2, "arity": 2, "entries": [{"args": [0, 0], "out": {"0": 1}}]}, "entries[0].out[0]"),
        (
            {"field": "Q", "dim": 2, "arity": 2, "entries": [{"args": [0, 1], "out": {"0": "1"}}, {"args": [0, 1], "out": {"1": "1"}}]},
            "entries[1].args",
        ),
    ],
)
def test_malformed_documents(doc, field):
    with pytest.raises(FormatError) as info:
        tensor_from_json(doc)
    assert info.value.field == field


def test_malformed_file_exit_code(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"field": "Q", "dim": 2, "arity": 2, "entries": [{"args": [0, 0], "out": {"0": "0"}}]}))
    code, _, err = run(capsys, "decompose", "--input", str(p))
    assert code == 2 and "entries[0].out[0]" in err
    p.write_text("{not json")
    assert run(capsys, "decompose", "--input", str(p))[0] == 2
    assert run(capsys, "decompose", "--input", "no-such-tensor")[0] == 2


COMMANDS = [
    ["decompose", "--input", "paper-r4-n2-basisBprime"],
    ["simplicity", "--input", "a4-gf5"],
    ["compare-bases", "--input", "paper-r4-n2", "--g", "swap23"],
    ["connect", "--input", "t1", "--from", "0", "--to", "1"],
    ["report", "--input", "a4"],
    ["gen-random", "--field", "GF(3)", "--dim", "3", "--arity", "3", "--density", "0.3", "--seed", "7"],
]


@pytest.mark.parametrize("argv", COMMANDS, ids=[c[0] for c in COMMANDS])
def test_module_entry_point_is_deterministic(argv):
    runs = [subprocess.run([sys.executable, "-m", "narydec", *argv], capture_output=True) for _ in range(2)]
    assert runs[0].returncode == 0
    assert runs[0].stdout == runs[1].stdout and runs[0].stdout
