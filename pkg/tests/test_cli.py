import csv
import json

import numpy as np

from hypergeo_heat import even_case
from hypergeo_heat.cli import main
from hypergeo_heat.quadrature import TestFunction, load_grid_function
from hypergeo_heat.rootsys import build_root_system, multiplicity


def _rows(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_eval_c_at_rho(tmp_path):
    # rho = alpha for A1 with m = 2
    assert main(["eval", "c", "--lam", "1.0", "--out", str(tmp_path)]) == 0
    (row,) = _rows(tmp_path / "c.csv")
    assert abs(float(row["re"]) - 1) < 1e-13 and abs(float(row["im"])) < 1e-13
    meta = json.loads((tmp_path / "c.json").read_text())
    assert meta["target"] == "c" and meta["config"]["root_system"] == "A1"


def test_eval_gamma(tmp_path):
    assert main(["eval", "gamma", "--m", "0", "--cap", "3", "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "gamma.csv")
    vals = {int(r["n1"]): complex(float(r["re"]), float(r["im"])) for r in rows}
    assert vals[0] == 1 and all(v == 0 for k, v in vals.items() if k)
    # lambda = rho is singular for m = 2: reported, not hidden
    assert main(["eval", "gamma", "--cap", "3", "--out", str(tmp_path / "s")]) == 1
    assert main(["eval", "gamma", "--cap", "3", "--lam", "0.3+0.2j",
                 "--out", str(tmp_path / "g")]) == 0


def test_eval_phi_matches_closed_form(tmp_path):
    assert main(["eval", "phi", "--lam", "0.5", "--grid-n", "16", "--grid-radius", "2",
                 "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "phi.csv")
    x = np.array([float(r["x1"]) for r in rows])
    val = np.array([complex(float(r["re"]), float(r["im"])) for r in rows])
    # phi_lam = sinh(lam x) / (lam sinh x) for A1, m = 2
    assert np.allclose(val, np.sinh(0.5 * x) / (0.5 * np.sinh(x)), atol=1e-12)


def test_eval_delta_and_density(tmp_path):
    assert main(["eval", "delta", "--grid-n", "16", "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "delta.csv")
    x = np.array([float(r["x1"]) for r in rows])
    assert np.allclose([float(r["value"]) for r in rows], (2 * np.sinh(x)) ** 2, rtol=1e-12)
    assert main(["eval", "plancherel_density", "--m", "0", "--lam", "0.7",
                 "--out", str(tmp_path / "p")]) == 0


def test_transform_roundtrip_and_lambda(tmp_path):
    out = tmp_path / "fwd"
    assert main(["transform", "forward", "--out", str(out)]) == 0
    rep = json.loads((out / "forward_report.json").read_text())["report"]
    assert rep["plancherel_defect"] < 1e-10 and rep["roundtrip_sup_error"] < 1e-10
    inv = tmp_path / "inv"
    assert main(["transform", "inverse", "--input", str(out / "forward.csv"), "--out", str(inv)]) == 0
    back = load_grid_function(inv / "inverse.csv")
    rs = build_root_system("A1")
    f = TestFunction().sample(back.grid, rs)
    assert np.abs(back.values - f.values).max() < 1e-10
    lam = tmp_path / "lam"
    assert main(["transform", "lambda", "--out", str(lam)]) == 0
    L = load_grid_function(lam / "lambda.csv")
    assert np.abs(L.values - even_case.delta_half(rs, L.grid.nodes) * f.values).max() < 1e-10
    assert main(["transform", "inverse", "--out", str(tmp_path / "x")]) == 2


def test_transform_zero_input(tmp_path):
    assert main(["transform", "forward", "--function", '{"kind": "gaussian", "amplitude": 0}',
                 "--out", str(tmp_path)]) == 0
    F = load_grid_function(tmp_path / "forward.csv")
    assert np.all(F.values == 0)


def test_transform_abel_flat(tmp_path):
    assert main(["transform", "abel", "--m", "0", "--out", str(tmp_path)]) == 0
    A = load_grid_function(tmp_path / "abel.csv")
    f = TestFunction().sample(A.grid, build_root_system("A1"))
    assert np.abs(A.values - 2 * f.values).max() < 1e-10


def test_heat_contraction(tmp_path):
    assert main(["heat", "--t", "0.1", "0.5", "--out", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "heat_report.json").read_text())
    assert [r["t"] for r in rep["contraction"]] == [0.1, 0.5]
    assert all(r["contraction"] for r in rep["contraction"])
    assert rep["contraction"][1]["norm_u"] < rep["contraction"][0]["norm_u"]
    assert (tmp_path / "heat_t0p1.csv").exists()
    assert main(["heat", "--t", "-1", "--out", str(tmp_path)]) == 2


def test_verify(tmp_path):
    assert main(["verify", "--suite", "gamma", "--out", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "verify_report.json").read_text())
    assert rep["passed"] is True and rep["failed"] == []
    assert all(c["pass"] for c in rep["checks"])
    assert main(["verify", "--suite", "nope", "--out", str(tmp_path)]) == 2


def test_verify_tolerance_override_can_fail(tmp_path):
    # an unattainable tolerance turns the report into failures
    assert main(["verify", "--suite", "c_function", "--tolerance", "1e-300", "--out", str(tmp_path)]) == 1
    rep = json.loads((tmp_path / "verify_report.json").read_text())
    assert rep["passed"] is False and rep["failed"]
    assert main(["verify", "--tolerance", "0", "--out", str(tmp_path)]) == 2


def test_describe_operator(tmp_path, capsys):
    assert main(["describe-operator", "--which", "psi_a", "--root-system", "B2",
                 "--m", '{"long": 2, "short": 4}', "--out", str(tmp_path)]) == 0
    d = json.loads(capsys.readouterr().out)
    m = multiplicity(build_root_system("B2"), {"long": 2, "short": 4})
    assert len(d["factors"]) == sum(int(m.of(i)) // 2 for i in build_root_system("B2").positive)
    assert main(["describe-operator", "--m", "1", "--out", str(tmp_path)]) == 2


def test_config_file_is_deterministic(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"root_system": "A2", "multiplicity": 2, "seed": 3}))
    for k in (1, 2):
        assert main(["transform", "forward", "--config", str(cfg), "--out", str(tmp_path / f"r{k}")]) == 0
    a, b = (json.loads((tmp_path / f"r{k}" / "forward_report.json").read_text()) for k in (1, 2))
    # identical apart from the output directory
    a["config"].pop("out"), b["config"].pop("out")
    assert a == b
    assert (tmp_path / "r1" / "forward.csv").read_text() == (tmp_path / "r2" / "forward.csv").read_text()


def test_bad_arguments(tmp_path):
    assert main(["eval", "c", "--root-system", "G2"]) == 2
    assert main(["eval", "c", "--lam", "1,2", "--out", str(tmp_path)]) == 2
    assert main(["eval", "c", "--m", "-1", "--out", str(tmp_path)]) == 2
    assert main([]) == 2
    # an under-resolved grid is refused rather than returning noise
    assert main(["transform", "forward", "--root-system", "A2", "--grid-n", "16",
                 "--out", str(tmp_path)]) == 1
