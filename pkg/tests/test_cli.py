import json
import subprocess
import sys

import pytest

from causlogic.cli import run
from causlogic.proofnet import ProofStructure
from exemplars import FO_CYCLE, SEQ_CYCLE, TWO_CHANNELS


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_net(capsys):
    code, out, _ = call(capsys, "check", "A % A~")
    assert code == 0 and json.loads(out) == {"verdict": "net"}


def test_check_notnet_prints_witness(capsys):
    code, out, _ = call(capsys, "check", TWO_CHANNELS)
    data = json.loads(out)
    assert code == 1 and data["verdict"] == "notnet"
    assert data["cycle"] and data["switching"]


def test_check_enumerate_and_guard(capsys):
    assert call(capsys, "check", "A * A~", "--method", "enumerate")[0] == 1
    code, _, err = call(capsys, "check", SEQ_CYCLE, "--method", "enumerate", "--max-switchings", "1000")
    assert code == 2 and "exceed" in err


def test_check_reads_files_and_stdin(capsys, tmp_path, monkeypatch):
    f = tmp_path / "f.txt"
    f.write_text(FO_CYCLE)
    assert call(capsys, "check", str(f))[0] == 0
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO("A * A~"))
    assert call(capsys, "check", "-")[0] == 1


def test_check_random_batch(capsys):
    code, out, _ = call(capsys, "--seed", "4", "check", "--random", "5")
    rows = json.loads(out)
    assert code == 0 and len(rows) == 5
    assert all(r["verdict"] in ("net", "notnet") for r in rows)


def test_bad_input_exit_code(capsys):
    code, _, err = call(capsys, "check", "A * ")
    assert code == 2 and err.startswith("causlogic:")
    assert call(capsys, "check", "A * B")[0] == 2
    assert call(capsys, "frobnicate")[0] == 2


def test_switchings(capsys):
    code, out, _ = call(capsys, "switchings", "A * A~", "--list", "--limit", "3")
    data = json.loads(out)
    assert code == 0 and data["count"] == 8 and len(data["switchings"]) == 3
    assert data["links"] == ["axiom", "tensor"]


def test_rewrite_round_trip(capsys, tmp_path):
    target = tmp_path / "pom.json"
    assert call(capsys, "rewrite", "pom", FO_CYCLE, "-o", str(target))[0] == 0
    P = ProofStructure.from_json(json.loads(target.read_text()))
    assert P.counts()["fo_axiom"] == 0
    # a structure file is accepted wherever a structure is
    assert call(capsys, "check", str(target))[0] == 0
    code, out, _ = call(capsys, "rewrite", "fo", str(target))
    assert code == 0 and ProofStructure.from_json(json.loads(out)).counts()["axiom"] == 0


def test_graph_commands(capsys):
    code, out, _ = call(capsys, "graph", "normalize", "a>b,b>c")
    assert code == 0 and sorted(map(tuple, json.loads(out)["edges"])) == [("a", "b"), ("a", "c"), ("b", "c")]
    assert call(capsys, "graph", "includes", "a>b", "a>b,b>c", "--vertices", "a,b,c")[0] == 0
    assert call(capsys, "graph", "includes", "a>b,b>c", "a>b", "--vertices", "a,b,c")[0] == 1
    code, out, _ = call(capsys, "graph", "compatible", "a>b", "b>a")
    assert code == 1 and sorted(json.loads(out)["cycle"]) == ["a", "b"]
    assert call(capsys, "graph", "compatible", "a>b", "b>a", "--kinds", "a=fo")[0] == 0
    code, out, _ = call(capsys, "graph", "sorts", "a>c,b>c,b>d")
    assert len(json.loads(out)["sorts"]) == 5


def test_graph_subst(capsys):
    code, out, _ = call(capsys, "graph", "subst", "x>v,v>y", "p>q", "--vertex", "v")
    data = json.loads(out)
    assert code == 0 and [v["name"] for v in data["vertices"]] == ["x", "p", "q", "y"]
    assert call(capsys, "graph", "subst", "x>v", "p>q")[0] == 2
    assert call(capsys, "graph", "includes", "a>b")[0] == 2


def test_graph_errors(capsys):
    assert call(capsys, "graph", "normalize", "a>b,b>a")[0] == 2
    assert call(capsys, "graph", "normalize", "a>b", "--kinds", "a=weird")[0] == 2


def test_sem_check(capsys):
    assert call(capsys, "sem", "check", "--formula", FO_CYCLE)[0] == 0
    code, out, _ = call(capsys, "sem", "check", "--formula", TWO_CHANNELS)
    assert code == 1 and json.loads(out) == {"consistent": False}
    assert call(capsys, "sem", "check", "--formula", "A % A~", "--route", "direct")[0] == 0


def test_sem_check_with_interpretation_file(capsys, tmp_path):
    f = tmp_path / "phi.json"
    f.write_text(json.dumps({"A": {"kind": "fo", "dim": 3}}))
    assert call(capsys, "sem", "check", "--formula", "!A~ < !A", "--interp", str(f))[0] == 0
    f.write_text(json.dumps({"A": {"kind": "chan22"}}))
    assert call(capsys, "sem", "check", "--formula", "!A~ < !A", "--interp", str(f))[0] == 2


def test_sem_object_and_graphtype(capsys):
    code, out, _ = call(capsys, "sem", "object", "--formula", "!A~ % !A")
    data = json.loads(out)
    assert code == 0 and data["dim"] == 4
    code, out, _ = call(capsys, "sem", "graphtype", "a>b", "--kinds", "a=fo,b=fod")
    assert code == 0 and json.loads(out)["dim"] == 4
    assert call(capsys, "sem", "object", "--formula", FO_CYCLE, "--max-dim", "16")[0] == 2


def test_export_dot(capsys, tmp_path):
    code, out, _ = call(capsys, "export-dot", "A % A~")
    assert code == 0 and out.startswith("digraph structure")
    code, out, _ = call(capsys, "export-dot", "A % A~", "--switching", "0")
    assert "0:la" in out
    code, out, _ = call(capsys, "export-dot", "A % A~", "--switching", "ra,dp")
    assert "1:dp" in out
    assert call(capsys, "export-dot", "A % A~", "--switching", "ra,ds")[0] == 2
    target = tmp_path / "g.dot"
    assert call(capsys, "export-dot", "a>b", "--graph", "-o", str(target))[0] == 0
    assert target.read_text().startswith("digraph G")


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "causlogic", "check", "A < A~"], capture_output=True, text=True
    )
    assert proc.returncode == 1
    assert json.loads(proc.stdout)["verdict"] == "notnet"


@pytest.mark.parametrize("flag", ["--help"])
def test_help_exits_cleanly(capsys, flag):
    assert run([flag]) == 0
