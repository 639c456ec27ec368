import numpy as np
import pytest

from riplab.certify import LazyCertificate, RipReport, Witness, exact_rip
from riplab.fileio import (
    VERSION,
    FileFormatError,
    certificate_dict,
    experiment_dict,
    read_graph_file,
    read_matrix_file,
    read_report,
    results_bytes,
    rip_report_dict,
    seed_dict,
    witness_dict,
    write_graph_file,
    write_matrix_file,
    write_report,
)
from riplab.randgen import Graph, Seed, gen_bernoulli_sensing, gen_gnp_half
from riplab.reduction import run_distinguishing_experiment


def test_matrix_roundtrip_tricky_floats(tmp_path):
    m = np.array(
        [
            [0.1, -0.0, 1e-308, np.pi],
            [2.0 / 3.0, 1e308, -1.5e-17, 123456789.123456789],
        ]
    )
    p = tmp_path / "m.txt"
    write_matrix_file(p, m)
    back = read_matrix_file(p)
    assert back.dtype == np.float64
    assert np.array_equal(back, m)
    # -0.0 keeps its sign bit through the file
    assert np.signbit(back[0, 1])


def test_matrix_roundtrip_random(tmp_path):
    p = tmp_path / "m.txt"
    for s in range(200):
        rng = np.random.default_rng(s)
        m = rng.standard_normal((rng.integers(1, 6), rng.integers(1, 6)))
        write_matrix_file(p, m)
        assert np.array_equal(read_matrix_file(p), m)
    for s in range(200):
        phi = gen_bernoulli_sensing(5, 8, Seed(s))
        write_matrix_file(p, phi)
        assert np.array_equal(read_matrix_file(p), phi)


def test_matrix_file_layout(tmp_path):
    p = tmp_path / "m.txt"
    write_matrix_file(p, np.array([[1.0, 0.5]]))
    assert p.read_text() == "1 2\n1.0 0.5\n"


def test_matrix_read_errors(tmp_path):
    cases = [
        "",  # no header
        "2\n1.0\n2.0\n",  # one-token header
        "a b\n",  # non-integer header
        "0 3\n",  # nonpositive dims
        "2 2\n1.0 2.0\n",  # missing row
        "1 2\n1.0\n",  # short row
        "1 2\n1.0 2.0 3.0\n",  # long row
        "1 1\nfoo\n",  # unparseable value
        "1 1\n1.0\ntrailing\n",  # junk after data
        "1 1\nnan\n",  # non-finite
        "1 1\ninf\n",
    ]
    for i, text in enumerate(cases):
        p = tmp_path / f"bad{i}.txt"
        p.write_text(text)
        with pytest.raises(FileFormatError):
            read_matrix_file(p)


def test_matrix_error_names_position(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("2 2\n1.0 2.0\n3.0\n")
    with pytest.raises(FileFormatError, match=r"bad\.txt:3: expected 2 values"):
        read_matrix_file(p)


def test_graph_roundtrip(tmp_path):
    p = tmp_path / "g.txt"
    g = Graph.from_edges(5, [(0, 3), (1, 2), (0, 1)])
    write_graph_file(p, g)
    assert p.read_text() == "5 3\n0 1\n0 3\n1 2\n"
    assert read_graph_file(p) == g


def test_graph_roundtrip_random(tmp_path):
    p = tmp_path / "g.txt"
    for s in range(200):
        g = gen_gnp_half(12, Seed(s))
        write_graph_file(p, g)
        assert read_graph_file(p) == g


def test_graph_roundtrip_edgeless(tmp_path):
    p = tmp_path / "g.txt"
    write_graph_file(p, Graph(4))
    assert p.read_text() == "4 0\n"
    back = read_graph_file(p)
    assert back.n == 4 and len(back.edges()) == 0


def test_graph_read_errors(tmp_path):
    cases = [
        "",  # no header
        "3\n",
        "x y\n",
        "0 0\n",  # no vertices
        "3 -1\n",
        "3 2\n0 1\n",  # missing edge row
        "3 1\n0\n",  # malformed edge
        "3 1\na b\n",
        "3 1\n1 0\n",  # u >= v
        "3 1\n0 0\n",  # self-loop
        "3 1\n0 5\n",  # out of range
        "3 2\n0 2\n0 1\n",  # out of order
        "3 2\n0 1\n0 1\n",  # duplicate
        "3 1\n0 1\nextra\n",  # trailing junk
    ]
    for i, text in enumerate(cases):
        p = tmp_path / f"bad{i}.txt"
        p.write_text(text)
        with pytest.raises(FileFormatError):
            read_graph_file(p)


def test_graph_error_names_position(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("4 2\n0 2\n0 1\n")
    with pytest.raises(FileFormatError, match=r"bad\.txt:3: edges out of order"):
        read_graph_file(p)


def test_report_roundtrip(tmp_path):
    p = tmp_path / "r.json"
    write_report(
        p,
        command="exact",
        seed=Seed(5, 1),
        params={"order": 3},
        results={"value": 0.25},
        wall_time_ns=12345,
    )
    doc = read_report(p)
    assert doc["tool_version"] == VERSION
    assert doc["command"] == "exact"
    assert doc["seed"] == {"value": 5, "stream": 1}
    assert doc["params"] == {"order": 3}
    assert doc["results"] == {"value": 0.25}
    assert doc["wall_time_ns"] == 12345
    text = p.read_text()
    assert text.endswith("\n")
    # keys are sorted, so serialization is stable
    assert text.index('"command"') < text.index('"params"') < text.index('"results"')


def test_report_rejects_bad_json(tmp_path):
    p = tmp_path / "r.json"
    p.write_text("{not json")
    with pytest.raises(FileFormatError):
        read_report(p)


def test_results_bytes_ignores_timing(tmp_path):
    p = tmp_path / "r.json"
    results = {"b": 2, "a": [1, 2]}
    write_report(p, "x", None, {}, results, wall_time_ns=1)
    first = results_bytes(read_report(p))
    write_report(p, "x", None, {}, results, wall_time_ns=99999)
    second = results_bytes(read_report(p))
    assert first == second
    assert first == b'{"a": [1, 2], "b": 2}'


def test_dict_builders():
    assert seed_dict(None) is None
    assert seed_dict(Seed(3, 2)) == {"value": 3, "stream": 2}
    rep = RipReport(order=2, value=0.5, direction="ExactMax", method="Exhaustive",
                    subsets_examined=10, elapsed_ns=7)
    d = rip_report_dict(rep)
    assert d["order"] == 2 and d["value"] == 0.5 and d["elapsed_ns"] == 7
    w = Witness(subset=(0, 2), vector=np.array([0.6, 0.0, 0.8]), deviation=0.1)
    wd = witness_dict(w)
    assert wd == {"subset": [0, 2], "vector": [0.6, 0.0, 0.8], "deviation": 0.1}
    cert = LazyCertificate(probe_order=2, probe_parameter=0.1,
                           target_parameter=0.5, max_certified_order=6)
    cd = certificate_dict(cert)
    assert cd["max_certified_order"] == 6


def test_experiment_dict_is_json_ready(tmp_path):
    rep = run_distinguishing_experiment(20, 8, 8, 0.2, trials=2, base_seed=Seed(3))
    d = experiment_dict(rep)
    assert d["n"] == 20 and d["base_seed"] == {"value": 3, "stream": 0}
    assert len(d["trials"]) == 4
    assert d["separation"]["true_positives"] == rep.separation.true_positives
    p = tmp_path / "e.json"
    write_report(p, "experiment", Seed(3), {}, d, wall_time_ns=0)
    assert read_report(p)["results"]["n"] == 20


def test_exact_report_is_serializable(tmp_path):
    phi = gen_bernoulli_sensing(5, 8, Seed(1))
    rep, wit = exact_rip(phi, 2)
    doc_results = {"report": rip_report_dict(rep), "witness": witness_dict(wit)}
    p = tmp_path / "r.json"
    write_report(p, "exact", Seed(1), {"order": 2}, doc_results, wall_time_ns=rep.elapsed_ns)
    back = read_report(p)
    assert back["results"]["report"]["value"] == rep.value
