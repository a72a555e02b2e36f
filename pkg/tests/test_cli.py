import hashlib

import numpy as np
import pytest

from rbmtfi import TfiParams, free_fermion_energy, load_params
from rbmtfi.cli import main, parse_config_file, parse_grid
from rbmtfi.csvio import read_csv


def run_cli(*argv):
    return main(list(argv))


def test_exact_fermion_value(capsys):
    assert run_cli("exact", "--L", "8", "--gamma", "0", "--method", "fermion") == 0
    assert float(capsys.readouterr().out) == -8.0


def test_exact_methods_agree(capsys):
    assert run_cli("exact", "--L", "12", "--gamma", "0.7", "--method", "ed") == 0
    ed = float(capsys.readouterr().out)
    assert run_cli("exact", "--L", "12", "--gamma", "0.7", "--method", "fermion") == 0
    ff = float(capsys.readouterr().out)
    assert abs(ed - ff) <= 1e-9 * abs(ff)


def test_exact_odd_L_fermion_rejected(capsys):
    assert run_cli("exact", "--L", "9", "--gamma", "1", "--method", "fermion") == 2
    assert "even L" in capsys.readouterr().err


def tiny_config(tmp_path, **overrides):
    values = dict(L=8, gamma=1.0, seed=7, n_iters=30, n_sweeps=80, n_burnin=50, n_chains=2)
    values.update(overrides)
    path = tmp_path / "cfg.txt"
    path.write_text("".join(f"{k} = {v}\n" for k, v in values.items()))
    return path


def test_optimize_writes_artifacts_and_manifest(tmp_path):
    cfg = tiny_config(tmp_path)
    out = tmp_path / "run"
    assert run_cli("optimize", "--config", str(cfg), "--out", str(out)) == 0
    params = load_params(out / "params.txt")
    assert params.L == 8
    header, rows = read_csv(out / "trace.csv")
    assert header == ["iter", "energy", "energy_err", "eloc_var", "delta_w_norm"]
    assert len(rows) == 30

    manifest = (out / "manifest.txt").read_text()
    assert "master_seed = 7" in manifest
    assert "config.eta = 0.05" in manifest  # defaults materialized
    for name in ("params.txt", "trace.csv"):
        digest = hashlib.sha256((out / name).read_bytes()).hexdigest()
        assert f"digest.{name} = {digest}" in manifest


def test_optimize_rerun_requires_force(tmp_path, capsys):
    cfg = tiny_config(tmp_path)
    out = tmp_path / "run"
    assert run_cli("optimize", "--config", str(cfg), "--out", str(out)) == 0
    assert run_cli("optimize", "--config", str(cfg), "--out", str(out)) == 2
    assert "--force" in capsys.readouterr().err
    assert run_cli("optimize", "--config", str(cfg), "--out", str(out), "--force") == 0


def test_optimize_deterministic_bytes(tmp_path):
    cfg = tiny_config(tmp_path)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert run_cli("optimize", "--config", str(cfg), "--out", str(out1)) == 0
    assert run_cli("optimize", "--config", str(cfg), "--out", str(out2)) == 0
    assert (out1 / "trace.csv").read_bytes() == (out2 / "trace.csv").read_bytes()
    assert (out1 / "params.txt").read_bytes() == (out2 / "params.txt").read_bytes()


def test_optimize_missing_gamma_names_key(tmp_path, capsys):
    path = tmp_path / "cfg.txt"
    path.write_text("L = 8\nseed = 7\n")
    assert run_cli("optimize", "--config", str(path), "--out", str(tmp_path / "x")) == 2
    assert "gamma" in capsys.readouterr().err


def test_optimize_flag_overrides_config(tmp_path):
    cfg = tiny_config(tmp_path, n_iters=30)
    out = tmp_path / "run"
    assert run_cli("optimize", "--config", str(cfg), "--out", str(out),
                   "--n-iters", "12") == 0
    _, rows = read_csv(out / "trace.csv")
    assert len(rows) == 12
    assert "config.n_iters = 12" in (out / "manifest.txt").read_text()


def test_optimize_small_chain_reaches_accuracy(tmp_path):
    # the cli contract example at modest budget: L=8, default-style run
    cfg = tiny_config(tmp_path, n_iters=250, n_sweeps=400, n_burnin=300, n_chains=4)
    out = tmp_path / "run"
    assert run_cli("optimize", "--config", str(cfg), "--out", str(out)) == 0
    _, rows = read_csv(out / "trace.csv")
    final_energy = float(rows[-1][1])
    exact = free_fermion_energy(8, TfiParams(1.0))
    assert abs((final_energy - exact) / exact) < 5e-3


def test_thermo_zero_coupling_snapshot(tmp_path):
    snap = tmp_path / "zero.txt"
    snap.write_text("L 6\n" + "".join(f"{d} 0\n" for d in range(6)))
    out = tmp_path / "thermo"
    assert run_cli("thermo", "--snapshot", str(snap), "--seed", "3", "--gamma", "0.5",
                   "--out", str(out), "--t-grid", "0.5,1.0,2.0",
                   "--n-sweeps", "500", "--n-burnin", "50") == 0
    header, rows = read_csv(out / "thermo.csv")
    assert header == ["gamma", "L", "T", "e_per_site", "e_err", "var_per_site",
                      "var_err", "c_per_site", "c_err", "n_sweeps", "seed"]
    assert [float(r[2]) for r in rows] == [0.5, 1.0, 2.0]
    for row in rows:
        assert float(row[7]) == 0.0  # C exactly zero at W = 0


def test_thermo_pair_snapshot_matches_formula(tmp_path):
    L, w0 = 6, 0.8
    snap = tmp_path / "pair.txt"
    snap.write_text(f"L {L}\n0 {w0}\n" + "".join(f"{d} 0\n" for d in range(1, L)))
    out = tmp_path / "thermo"
    assert run_cli("thermo", "--snapshot", str(snap), "--seed", "5", "--gamma", "0.0",
                   "--out", str(out), "--t-grid", "1.0,2.0",
                   "--n-sweeps", "8000", "--n-burnin", "500") == 0
    _, rows = read_csv(out / "thermo.csv")
    for row in rows:
        t, e, e_err = float(row[2]), float(row[3]), float(row[4])
        expected = -L * w0 * np.tanh(w0 / t) / (2 * L)
        assert abs(e - expected) <= 3 * max(e_err, 1e-9)


def test_scan_emits_tables(tmp_path):
    out = tmp_path / "scan"
    assert run_cli("scan", "--gammas", "0.8,1.2", "--L-list", "8", "--seed", "11",
                   "--out", str(out), "--n-iters", "40", "--n-sweeps", "80",
                   "--n-burnin", "60", "--n-chains", "2", "--no-polish") == 0
    header, rows = read_csv(out / "tail_L8.csv")
    assert header == ["gamma", "L", "w_tail", "w_tail_L", "origin_index", "energy",
                      "energy_err", "exact_energy", "rel_error", "seed"]
    assert len(rows) == 2
    header, rows = read_csv(out / "energy.csv")
    assert header == ["gamma", "L", "energy", "energy_err", "exact_energy",
                      "rel_error", "seed"]
    assert (out / "profile_L8_gamma0.8.csv").exists()
    assert (out / "profile_L8_gamma1.2.csv").exists()
    manifest = (out / "manifest.txt").read_text()
    # tail + energy + two profiles
    assert manifest.count("digest.") == 4


def test_reproduce_fig4_layout(tmp_path):
    out = tmp_path / "fig4"
    assert run_cli("reproduce", "fig4", "--scale", "desk", "--seed", "13",
                   "--out", str(out), "--L-list", "4,6", "--gammas", "0.8,1.2",
                   "--n-iters", "25", "--n-sweeps", "60", "--n-burnin", "40",
                   "--n-chains", "2", "--no-polish") == 0
    # one tail CSV per size in the list
    assert (out / "tail_L4.csv").exists()
    assert (out / "tail_L6.csv").exists()
    assert not (out / "energy.csv").exists()


def test_reproduce_fig2_layout(tmp_path):
    out = tmp_path / "fig2"
    assert run_cli("reproduce", "fig2", "--scale", "desk", "--seed", "13",
                   "--out", str(out), "--L-list", "6", "--gammas", "0.9,1.1",
                   "--n-iters", "25", "--n-sweeps", "60", "--n-burnin", "40",
                   "--n-chains", "2", "--no-polish") == 0
    header, rows = read_csv(out / "energy.csv")
    assert len(rows) == 2
    assert float(rows[0][5]) < 0.2  # rel_error column sane at toy budget


def test_reproduce_fig5_paper_scale_needs_confirm(tmp_path, capsys):
    out = tmp_path / "fig5"
    code = run_cli("reproduce", "fig5", "--scale", "paper", "--seed", "13",
                   "--out", str(out))
    assert code == 2
    err = capsys.readouterr().err
    assert "hours" in err and "--confirm" in err


def test_reproduce_fig5_and_fig6_layout(tmp_path):
    out = tmp_path / "fig5"
    assert run_cli("reproduce", "fig5", "--scale", "desk", "--seed", "17",
                   "--out", str(out), "--L-list", "4", "--gammas", "1.0",
                   "--n-iters", "20", "--n-sweeps", "50", "--n-burnin", "30",
                   "--n-chains", "2", "--no-polish", "--thermo-sweeps", "400",
                   "--t-grid", "0.5,1.0,2.0") == 0
    header, rows = read_csv(out / "thermo_gamma1_L4.csv")
    assert len(rows) == 3

    out6 = tmp_path / "fig6"
    assert run_cli("reproduce", "fig6", "--scale", "desk", "--seed", "19",
                   "--out", str(out6), "--L-list", "4", "--gammas", "0.8,1.2",
                   "--n-iters", "20", "--n-sweeps", "50", "--n-burnin", "30",
                   "--n-chains", "2", "--no-polish", "--thermo-sweeps", "400") == 0
    header, rows = read_csv(out6 / "variance_L4.csv")
    assert [float(r[0]) for r in rows] == [0.8, 1.2]
    assert all(float(r[2]) == 1.0 for r in rows)


def test_reproduce_fig3_layout(tmp_path):
    out = tmp_path / "fig3"
    assert run_cli("reproduce", "fig3", "--scale", "desk", "--seed", "23",
                   "--out", str(out), "--L-list", "6", "--gammas", "0.9,1.1",
                   "--n-iters", "20", "--n-sweeps", "50", "--n-burnin", "30",
                   "--n-chains", "2", "--no-polish") == 0
    header, rows = read_csv(out / "profile_L6_gamma0.9.csv")
    assert header == ["d", "W_d"]
    assert len(rows) == 6


def test_parse_grid_forms():
    assert parse_grid("0.5:0.8:0.1", "x") == [0.5, 0.6, 0.7, 0.8]
    assert parse_grid("1.0,2.5", "x") == [1.0, 2.5]


def test_parse_config_file_formats(tmp_path):
    path = tmp_path / "c.txt"
    path.write_text("# comment\nL = 8\ngamma 1.0\n\nseed=5 # trailing\n")
    assert parse_config_file(str(path)) == {"L": "8", "gamma": "1.0", "seed": "5"}
