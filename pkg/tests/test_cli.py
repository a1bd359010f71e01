import json
import subprocess
import sys

import pytest

from star_synth.cli import run
from star_synth.constraints import ConstraintSet, datum, serialize


@pytest.fixture
def sample_file(tmp_path, sample):
    p = tmp_path / "sample.json"
    p.write_text(serialize(sample))
    return p


def test_check_sample(sample_file, tmp_path, capsys):
    report = tmp_path / "report.txt"
    assert run(["check", "--constraints", str(sample_file), "--report", str(report)]) == 0
    assert "total cells=3" in report.read_text()
    assert "PASS" in capsys.readouterr().err


def test_check_prints_report_to_stdout(sample_file, capsys):
    assert run(["check", "--constraints", str(sample_file)]) == 0
    assert "FIFO=1, LIFO=0, Reg=1, Total=2 structures, total cells=3" in capsys.readouterr().out


def test_build_invalid(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(serialize(ConstraintSet.simple([datum("x", 4, 2)])))
    assert run(["build", "--constraints", str(bad)]) == 2
    assert "[order] x" in capsys.readouterr().err


def test_build_syntax_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    assert run(["build", "--constraints", str(bad)]) == 2
    assert "line 1" in capsys.readouterr().err


def test_multi_read_is_invalid(tmp_path):
    f = tmp_path / "m.json"
    f.write_text(serialize(ConstraintSet.simple([datum("x", 0, [2, 3])])))
    assert run(["build", "--constraints", str(f)]) == 2


def test_usage_errors(tmp_path, capsys):
    assert run(["build", "--constraints", str(tmp_path / "missing.json")]) == 1
    with pytest.raises(SystemExit) as exc:
        run(["frobnicate"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        run(["build", "--constraints", "x", "--weights", "speed=2"])
    assert exc.value.code == 1


def test_gen_then_check(tmp_path):
    cons = tmp_path / "il.json"
    assert run(["gen-interleaver", "--n", "6", "--scheme", "block:2x3", "--latency", "6",
                "--out", str(cons)]) == 0
    doc = json.loads(cons.read_text())
    assert len(doc["data"]) == 6 and doc["word_width"] == 1
    assert run(["check", "--constraints", str(cons), "--report", str(tmp_path / "r.txt")]) == 0


def test_gen_infeasible(capsys):
    assert run(["gen-interleaver", "--n", "4", "--latency", "0"]) == 2
    assert "minimal feasible latency is 1" in capsys.readouterr().err


def test_gen_bad_scheme():
    assert run(["gen-interleaver", "--n", "5", "--scheme", "block:2x3"]) == 1


def test_build_then_simulate(sample_file, tmp_path):
    net, dot, trace = tmp_path / "n.json", tmp_path / "g.dot", tmp_path / "t.jsonl"
    assert run(["build", "--constraints", str(sample_file), "--out", str(net), "--dot", str(dot),
                "--report", str(tmp_path / "r.txt")]) == 0
    assert dot.read_text().count("->") == 15
    assert run(["simulate", "--netlist", str(net), "--constraints", str(sample_file), "--trace", str(trace)]) == 0
    assert len(trace.read_text().splitlines()) == 9

    doc = json.loads(net.read_text())
    doc["elements"][0]["depth"] -= 1
    net.write_text(json.dumps(doc))
    assert run(["simulate", "--netlist", str(net), "--constraints", str(sample_file)]) == 3


def test_graph_command(sample_file, tmp_path, capsys):
    assert run(["graph", "--constraints", str(sample_file), "--json", str(tmp_path / "g.json")]) == 0
    assert capsys.readouterr().out.count("->") == 15
    assert len(json.loads((tmp_path / "g.json").read_text())["edges"]) == 15


def test_weights_flag(sample_file, tmp_path):
    assert run(["build", "--constraints", str(sample_file), "--weights", "depth=0,demux=0,util=0",
                "--report", str(tmp_path / "r.txt")]) == 0


def test_deterministic_outputs(sample_file, tmp_path):
    outs = []
    for k in range(2):
        d = tmp_path / f"run{k}"
        d.mkdir()
        assert run(["build", "--constraints", str(sample_file), "--out", str(d / "n.json"),
                    "--report", str(d / "r.txt"), "--dot", str(d / "g.dot")]) == 0
        outs.append([(d / f).read_bytes() for f in ("n.json", "r.txt", "g.dot")])
    assert outs[0] == outs[1]
    assert not list(tmp_path.glob("run*/.star-*"))


def test_version_and_module_entry():
    out = subprocess.run([sys.executable, "-m", "star_synth", "--version"], capture_output=True, text=True)
    assert out.returncode == 0
    assert "star-netlist/1" in out.stdout and "star-constraints/1" in out.stdout
