"""End-to-end CLI runs over temp files; exit codes are part of the contract."""

import json

import pytest

from distillery.cli import main
from distillery.icm import parse_circuit

ONE_A = json.dumps({
    "name": "one-a", "width": 1,
    "ops": [
        {"kind": "inject_a", "wires": [0]},
        {"kind": "measure", "wires": [0]},
    ],
})

PLAIN = json.dumps({
    "name": "plain", "width": 2,
    "ops": [
        {"kind": "basis_init", "wires": [0]},
        {"kind": "basis_init", "wires": [1]},
        {"kind": "cnot", "wires": [0, 1]},
        {"kind": "measure", "wires": [0]},
        {"kind": "measure", "wires": [1]},
    ],
})


def test_solve_extra(capsys):
    assert main(["solve-extra", "--ni", "14", "--pf", "0.2", "--pc", "0.001"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc == {"mode": "offline", "n_i": 14, "s": 12, "n_t": 26}


def test_solve_extra_online(capsys):
    assert main(["solve-extra", "--online", "--pf", "0.2", "--pc", "0.001"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert (doc["s"], doc["n_t"]) == (4, 5)


def test_schedule_alaps_report(tmp_path):
    circuit = tmp_path / "c.json"
    circuit.write_text(ONE_A)
    out = tmp_path / "sched.json"
    report_path = tmp_path / "report.json"
    code = main([
        "schedule", "--circuit", str(circuit), "--algo", "alaps",
        "--oracle", "worst", "--out", str(out), "--report", str(report_path),
    ])
    assert code == 0
    report = json.loads(report_path.read_text())
    assert report["trace"]["trials"] == 5
    assert report["trace"]["failures"] == 4
    assert report["valid"] is True
    assert report["metrics"]["BB"] == report["metrics"]["T"] * report["metrics"]["S"]


def test_schedule_plain_has_no_batches(tmp_path):
    circuit = tmp_path / "c.json"
    circuit.write_text(PLAIN)
    report_path = tmp_path / "report.json"
    code = main([
        "schedule", "--circuit", str(circuit), "--algo", "asap",
        "--out", str(tmp_path / "s.json"), "--report", str(report_path),
    ])
    assert code == 0
    assert json.loads(report_path.read_text())["trace"]["batches"] == 0


def test_schedule_deterministic_minus_timing(tmp_path):
    circuit = tmp_path / "c.json"
    circuit.write_text(ONE_A)
    reports = []
    exports = []
    svgs = []
    for i in range(2):
        out = tmp_path / f"s{i}.json"
        svg = tmp_path / f"s{i}.svg"
        rep = tmp_path / f"r{i}.json"
        assert main([
            "schedule", "--circuit", str(circuit), "--algo", "alapt",
            "--oracle", "stochastic:99", "--out", str(out),
            "--svg", str(svg), "--report", str(rep),
        ]) == 0
        doc = json.loads(rep.read_text())
        doc.pop("timing")
        reports.append(doc)
        exports.append(out.read_bytes())
        svgs.append(svg.read_bytes())
    assert reports[0] == reports[1]
    assert exports[0] == exports[1]
    assert svgs[0] == svgs[1]


def test_schedule_invalid_circuit_exits_2(tmp_path):
    circuit = tmp_path / "bad.json"
    circuit.write_text('{"name": "x", "width": 1, "ops": []}')
    code = main(["schedule", "--circuit", str(circuit),
                 "--out", str(tmp_path / "s.json")])
    assert code == 2


def test_schedule_capacity_exits_3(tmp_path):
    circuit = tmp_path / "c.json"
    circuit.write_text(ONE_A)
    code = main([
        "schedule", "--circuit", str(circuit), "--algo", "alaps",
        "--m", "5", "--out", str(tmp_path / "s.json"),
    ])
    assert code == 3


def test_gen_then_schedule_then_render(tmp_path):
    circuit = tmp_path / "gen.json"
    assert main(["gen", "--toffoli", "1", "--width", "3", "--out", str(circuit)]) == 0
    parsed = parse_circuit(circuit.read_bytes())
    assert sum(1 for op in parsed.ops if op.kind.value == "inject_a") == 7
    out = tmp_path / "s.json"
    assert main(["schedule", "--circuit", str(circuit), "--algo", "asap",
                 "--out", str(out)]) == 0
    art = tmp_path / "s.txt"
    assert main(["render", "--schedule", str(out), "--format", "ascii",
                 "--out", str(art)]) == 0
    assert art.read_bytes()


def test_gen_from_real_file(tmp_path):
    real = tmp_path / "c.real"
    real.write_text(".numvars 4\n.variables a b c d\n.begin\nt4 a b c d\n.end\n")
    out = tmp_path / "icm.json"
    assert main(["gen", "--real", str(real), "--out", str(out)]) == 0
    parsed = parse_circuit(out.read_bytes())
    # t4 carries 3 controls and decomposes into 3 Toffolis
    assert sum(1 for op in parsed.ops if op.kind.value == "inject_a") == 21


def test_bench_fixture(tmp_path, capsys):
    code = main(["bench", "--out-dir", str(tmp_path / "out"), "--no-figures"])
    assert code == 0
    assert "36/36 rows pass" in capsys.readouterr().out
    checks = (tmp_path / "out" / "fixture_checks.csv").read_text().splitlines()
    assert len(checks) == 37  # header + rows


def test_bench_with_corpus(tmp_path):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    (corpus / "a.real").write_text(".numvars 3\n.begin\nt3 0 1 2\n.end\n")
    out_dir = tmp_path / "out"
    code = main(["bench", "--out-dir", str(out_dir), "--corpus", str(corpus),
                 "--no-figures"])
    assert code == 0
    rows = (out_dir / "corpus_schedule.csv").read_text().splitlines()
    assert len(rows) == 2
    header, row = rows
    record = dict(zip(header.split(","), row.split(",")))
    assert record["circuit"] == "a"
    assert int(record["asap_BB"]) == int(record["asap_T"]) * int(record["asap_S"])


def test_mc_outputs(tmp_path):
    circuit = tmp_path / "c.json"
    circuit.write_text(ONE_A)
    out_dir = tmp_path / "mc"
    code = main([
        "mc", "--circuit", str(circuit), "--runs", "200", "--seed", "5",
        "--out-dir", str(out_dir), "--no-figures",
    ])
    assert code == 0
    stats = json.loads((out_dir / "mc_stats.json").read_text())
    assert stats["runs"] == 200
    assert stats["mean_bb_le_worst"] is True
    assert (out_dir / "mc_stats.csv").exists()


def test_mc_seed_determinism(tmp_path):
    circuit = tmp_path / "c.json"
    circuit.write_text(ONE_A)
    outputs = []
    for name in ("x", "y"):
        out_dir = tmp_path / name
        assert main(["mc", "--circuit", str(circuit), "--runs", "150",
                     "--seed", "31", "--out-dir", str(out_dir),
                     "--no-figures"]) == 0
        outputs.append((out_dir / "mc_stats.json").read_text())
    assert outputs[0] == outputs[1]


def test_missing_file_exits_2(tmp_path):
    assert main(["schedule", "--circuit", str(tmp_path / "nope.json"),
                 "--out", str(tmp_path / "s.json")]) == 2


def test_cost_override_via_env(tmp_path, monkeypatch):
    costs = tmp_path / "costs.json"
    costs.write_text(json.dumps({
        "base": {"inject_a": {"time": 3, "space": 5}},
        "movement_pad": 0,
        "padded_kinds": [],
    }))
    monkeypatch.setenv("DISTILLERY_COSTS", str(costs))
    circuit = tmp_path / "c.json"
    circuit.write_text(ONE_A)
    rep = tmp_path / "r.json"
    assert main(["schedule", "--circuit", str(circuit), "--algo", "alaps",
                 "--out", str(tmp_path / "s.json"), "--report", str(rep)]) == 0
    report = json.loads(rep.read_text())
    assert report["config"]["costs"]["base"]["inject_a"] == {"time": 3, "space": 5}
    # ALAPS strip is one 5-wide footprint above the single circuit wire
    assert report["metrics"]["S"] == 1 + 5
