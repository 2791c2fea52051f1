import json
import math
import subprocess
import sys

import pytest

from wavegate import cli, compiler
from wavegate.gates import Switch


@pytest.fixture
def circ(tmp_path):
    def make(text, name="c.circ"):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return str(p)

    return make


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_hadamard(circ, capsys):
    code, out, _ = run_cli(capsys, "verify", circ("qubits 2\nH 2\n"))
    assert code == 0
    dev = float(out.split("max deviation:")[1].split()[0])
    assert dev < 1e-12


def test_compile_cnot(circ, capsys):
    code, out, _ = run_cli(capsys, "compile", circ("qubits 3\nCNOT 1 2\n"))
    assert code == 0
    assert out.splitlines()[:2] == ["SWITCH 5 7", "SWITCH 6 8"]
    code, out, _ = run_cli(capsys, "compile", circ("qubits 3\nCNOT 1 2\nH 3\n"), "--json")
    data = json.loads(out)
    assert data["gate_count"] == 6 and data["counts"] == {"Switch": 2, "BeamSplit": 4}


def test_simulate_sharp_channel(circ, capsys):
    code, out, _ = run_cli(capsys, "simulate", circ("qubits 3\n"), "--input", "3", "--json",
                           "--observables", "s1,s2,s3,s1s2,s1s3,s2s3,s1s2s3")
    assert code == 0
    data = json.loads(out)
    assert set(data) == {"amplitudes", "probabilities", "expectations", "gate_count", "seed"}
    assert data["probabilities"][2] == 1
    assert data["expectations"] == {"s1": 1, "s2": -1, "s3": 1, "s1s2": -1, "s1s3": 1, "s2s3": -1, "s1s2s3": -1}


def test_simulate_defaults(circ, capsys):
    code, out, _ = run_cli(capsys, "simulate", circ("qubits 2\nH 1\nCNOT 1 2\n"), "--json")
    data = json.loads(out)
    assert set(data["expectations"]) == {"s1", "s2", "s1s2"}
    assert abs(sum(data["probabilities"]) - 1) < 1e-9
    r = 1 / math.sqrt(2)
    assert [a[0] for a in data["amplitudes"]] == pytest.approx([r, 0, 0, r], abs=1e-15)
    assert data["seed"] is None
    code, out, _ = run_cli(capsys, "simulate", circ("qubits 2\nH 1\n"))
    assert code == 0 and "<s1s2>" in out


def test_simulate_amplitude_file(circ, tmp_path, capsys):
    amps = tmp_path / "in.json"
    amps.write_text(json.dumps([[1, 0], [0, 1], [0, 0], [0, 0]]))
    code, out, _ = run_cli(capsys, "simulate", circ("qubits 2\n"), "--input", str(amps), "--json")
    data = json.loads(out)
    assert data["probabilities"] == pytest.approx([0.5, 0.5, 0, 0])


def test_density(circ, capsys):
    code, out, _ = run_cli(capsys, "density", circ("qubits 2\n"), "--pbar", "0.25,0.25,0.25,0.25",
                           "--samples", "10000", "--seed", "4", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["diagonal"] == pytest.approx([0.25] * 4, abs=1e-14)
    assert data["max_offdiag"] < 0.05
    assert data["seed"] == 4 and data["rng"] == "PCG64"
    _, again, _ = run_cli(capsys, "density", circ("qubits 2\n"), "--pbar", "0.25,0.25,0.25,0.25",
                          "--samples", "10000", "--seed", "4", "--json")
    assert again == out


def test_density_pbar_file(circ, tmp_path, capsys):
    pb = tmp_path / "pbar.txt"
    pb.write_text("[0.5, 0.5]")
    code, out, _ = run_cli(capsys, "density", circ("qubits 1\nH 1\n"), "--pbar", str(pb),
                           "--samples", "10", "--seed", "1", "--mode", "fixed")
    assert code == 0 and "max |off-diagonal|" in out


def test_wdyn(circ, capsys):
    code, out, _ = run_cli(capsys, "wdyn", circ("qubits 2\nH 1\nCNOT 1 2\nROT 2\n"), "--seed", "5", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["norm_drift"] < 1e-12
    assert all(g["compatible"] for g in data["gates"])
    code, out, _ = run_cli(capsys, "wdyn", circ("qubits 2\nH 1\n"), "--seed", "5", "--incompatible", "--json")
    assert not any(g["compatible"] for g in json.loads(out)["gates"])


def test_parse_error_exit_code(circ, capsys):
    code, _, err = run_cli(capsys, "simulate", circ("qubits 2\nH 1\nSWITCH 1 5\n"))
    assert code == 1
    assert ":3:10:" in err


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["density", "x.circ"])
    assert exc.value.code == 1


def test_missing_file_exit_code(capsys, tmp_path):
    code, _, _ = run_cli(capsys, "verify", str(tmp_path / "nope.circ"))
    assert code == 1


def test_verify_detects_corrupted_compiler(circ, capsys, monkeypatch):
    path = circ("qubits 3\nH 1\nCNOT 2 3\n")
    assert run_cli(capsys, "verify", path)[0] == 0

    def control_on_one(control, target, mq):
        good = compiler.__dict__["_orig_cnot"](control, target, mq)
        # flip the convention: pair channels where the control bit is 1
        return [Switch(a - 2 ** (mq - control), b - 2 ** (mq - control)) for a, b in ((s.a, s.b) for s in good)]

    monkeypatch.setitem(compiler.__dict__, "_orig_cnot", compiler.compile_cnot)
    monkeypatch.setattr(compiler, "compile_cnot", control_on_one)
    code, out, _ = run_cli(capsys, "verify", path)
    assert code == 2 and "FAIL" in out


def test_verify_detects_dropped_gate(circ, capsys, monkeypatch):
    path = circ("qubits 3\nH 2\n")
    orig = compiler.compile_hadamard
    monkeypatch.setattr(compiler, "compile_hadamard", lambda j, mq, split_phases=None: orig(j, mq)[:-1])
    assert run_cli(capsys, "verify", path)[0] == 2


def test_module_entry_point(circ):
    proc = subprocess.run([sys.executable, "-m", "wavegate", "compile", circ("qubits 2\nH 2\n")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[:2] == ["BSPLIT 1 2", "BSPLIT 3 4"]
