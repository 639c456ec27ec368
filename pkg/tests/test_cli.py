import json
import subprocess
import sys

import numpy as np
import pytest

from riplab.cli import main
from riplab.fileio import read_matrix_file, read_report, results_bytes
from riplab.randgen import Seed, gen_bernoulli_sensing, gen_model_a, gen_model_b


def run_cli(args, capsys):
    rc = main(args)
    out = capsys.readouterr()
    return rc, out.out, out.err


def make_matrix(tmp_path, capsys):
    p = str(tmp_path / "m.txt")
    rc, out, _ = run_cli(["generate", "bernoulli", "--dims", "6", "12",
                          "--seed", "9", "--out", p], capsys)
    assert rc == 0 and out == f"wrote={p}\n"
    return p


def test_exact_stdout_and_report(tmp_path, capsys):
    m = make_matrix(tmp_path, capsys)
    rep = str(tmp_path / "r.json")
    rc, out, _ = run_cli(["exact", "--matrix", m, "--order", "3", "--out", rep], capsys)
    assert rc == 0
    assert out == "delta=1.1240937744230055\n"
    doc = read_report(rep)
    assert doc["command"][0] == "exact"  # full argv, for reproducibility
    assert doc["params"]["order"] == 3
    assert doc["results"]["report"]["value"] == 1.1240937744230055
    assert doc["results"]["report"]["direction"] == "ExactMax"
    assert "elapsed_ns" not in doc["results"]["report"]
    assert doc["results"]["witness"]["subset"] == [1, 3, 10]


def test_coherence_agrees_with_exact_order_two(tmp_path, capsys):
    m = make_matrix(tmp_path, capsys)
    rc, out_mu, _ = run_cli(["coherence", "--matrix", m], capsys)
    assert rc == 0 and out_mu.startswith("mu=")
    mu = float(out_mu.strip().split("=")[1])
    rc, out_d, _ = run_cli(["exact", "--matrix", m, "--order", "2"], capsys)
    assert rc == 0
    delta2 = float(out_d.strip().split("=")[1])
    assert abs(mu - delta2) <= 1e-10


def test_lazy_stdout_and_report(tmp_path, capsys):
    m = make_matrix(tmp_path, capsys)
    rep = str(tmp_path / "r.json")
    rc, out, _ = run_cli(["lazy", "--matrix", m, "--probe-order", "2",
                          "--delta", "0.9", "--out", rep], capsys)
    assert rc == 0
    assert out == "epsilon=0.666666666666667 k_max=2\n"
    doc = read_report(rep)
    res = doc["results"]
    assert res["certificate"]["max_certified_order"] == 2
    assert res["naive_plan_subsets"] == 66  # C(12, 2)
    assert res["lazy_vs_naive_ratio"] == 1.0


def test_generate_matches_library(tmp_path, capsys):
    pa = str(tmp_path / "a.txt")
    run_cli(["generate", "model-a", "--n", "5", "--seed", "7", "--out", pa], capsys)
    assert np.array_equal(read_matrix_file(pa), gen_model_a(5, Seed(7)))
    pb = str(tmp_path / "b.txt")
    run_cli(["generate", "model-b", "--n", "4", "--seed", "3", "--out", pb], capsys)
    assert np.array_equal(read_matrix_file(pb), gen_model_b(4, 0.3, Seed(3)))
    ps = str(tmp_path / "s.txt")
    run_cli(["generate", "bernoulli", "--dims", "4", "8", "--seed", "42",
             "--stream", "5", "--out", ps], capsys)
    assert np.array_equal(read_matrix_file(ps), gen_bernoulli_sensing(4, 8, Seed(42, 5)))


def test_generate_planted_prints_clique(tmp_path, capsys):
    p = str(tmp_path / "g.txt")
    rc, out, _ = run_cli(["generate", "planted", "--n", "10", "--t", "4",
                          "--seed", "4", "--out", p], capsys)
    assert rc == 0
    lines = out.splitlines()
    assert lines[0] == "clique: 0 5 8 9"
    assert lines[1] == f"wrote={p}"


def test_reduce_and_refute(tmp_path, capsys):
    g = str(tmp_path / "g.txt")
    run_cli(["generate", "planted", "--n", "10", "--t", "4", "--seed", "4",
             "--out", g], capsys)
    c = str(tmp_path / "c.txt")
    rep = str(tmp_path / "r.json")
    rc, out, _ = run_cli(["reduce", "--graph", g, "--out", c, "--report", rep], capsys)
    assert rc == 0
    assert out == f"status=ok\nwrote={c}\n"
    assert read_report(rep)["results"]["not_psd"] is False
    mat = read_matrix_file(c)
    assert mat.shape == (10, 10)
    rc, out, _ = run_cli(["refute", "--graph", g, "--k", "4"], capsys)
    assert rc == 0 and out == "yes\n"


def test_reduce_not_psd(tmp_path, capsys):
    from riplab.fileio import write_graph_file
    from riplab.randgen import Graph

    g = str(tmp_path / "e.txt")
    write_graph_file(g, Graph(100))
    c = str(tmp_path / "c.txt")
    rc, out, _ = run_cli(["reduce", "--graph", g, "--out", c], capsys)
    assert rc == 0
    assert out.splitlines()[0] == "status=not-psd"
    assert not read_matrix_file(c).any()


def test_experiment_preset(tmp_path, capsys):
    rep = str(tmp_path / "e.json")
    rc, out, _ = run_cli(["experiment", "--preset", "desk-200-k35", "--trials", "2",
                          "--seed", "7", "--out", rep], capsys)
    assert rc == 0
    assert out == "tp=2 fp=0 trials=2\n"
    doc = read_report(rep)
    assert doc["params"]["order"] == 35
    assert doc["results"]["separation"] == {"true_positives": 2, "false_positives": 0}
    assert len(doc["results"]["trials"]) == 4


def test_exit_code_two_on_bad_input(tmp_path, capsys):
    m = make_matrix(tmp_path, capsys)
    rc, _, err = run_cli(["exact", "--matrix", m, "--order", "99"], capsys)
    assert rc == 2
    assert "error: order must satisfy 1 <= k <= 12, got 99" in err
    rc, _, err = run_cli(["exact", "--matrix", str(tmp_path / "nope.txt"),
                          "--order", "2"], capsys)
    assert rc == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("not a matrix\n")
    rc, _, err = run_cli(["exact", "--matrix", str(bad), "--order", "2"], capsys)
    assert rc == 2 and "expected header" in err


def test_exit_code_three_on_budget(tmp_path, capsys):
    m = make_matrix(tmp_path, capsys)
    rc, _, err = run_cli(["exact", "--matrix", m, "--order", "3", "--budget", "10"], capsys)
    assert rc == 3
    assert "C(12,3) = 220" in err


def test_exit_code_four_on_unit_columns(tmp_path, capsys):
    pa = str(tmp_path / "a.txt")
    run_cli(["generate", "model-a", "--n", "5", "--seed", "7", "--out", pa], capsys)
    rc, _, err = run_cli(["lazy", "--matrix", pa, "--probe-order", "2",
                          "--delta", "0.5"], capsys)
    assert rc == 4
    assert "requires unit columns" in err


def test_argparse_rejects_unknown(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["exact", "--matrix"])  # missing value
    assert exc.value.code == 2
    with pytest.raises(SystemExit):
        main(["no-such-command"])


def test_experiment_asym_needs_n_and_eps(capsys):
    rc, _, err = run_cli(["experiment", "--preset", "asym", "--seed", "1"], capsys)
    assert rc == 2
    assert "requires --n and --eps" in err


def test_report_results_deterministic(tmp_path, capsys):
    m = make_matrix(tmp_path, capsys)
    r1 = str(tmp_path / "r1.json")
    r2 = str(tmp_path / "r2.json")
    run_cli(["exact", "--matrix", m, "--order", "3", "--out", r1], capsys)
    run_cli(["exact", "--matrix", m, "--order", "3", "--out", r2], capsys)
    assert results_bytes(read_report(r1)) == results_bytes(read_report(r2))


def test_installed_entry_point(tmp_path):
    """One end-to-end run through the real console script."""
    m = str(tmp_path / "m.txt")
    r = subprocess.run(
        [sys.executable, "-m", "riplab.cli", "generate", "bernoulli",
         "--dims", "4", "6", "--seed", "0", "--out", m],
        capture_output=True, text=True,
    )
    assert r.returncode == 0, r.stderr
    assert r.stdout == f"wrote={m}\n"
    r2 = subprocess.run(
        [sys.executable, "-m", "riplab.cli", "exact", "--matrix", m, "--order", "2"],
        capture_output=True, text=True,
    )
    assert r2.returncode == 0, r2.stderr
    assert r2.stdout.startswith("delta=")
