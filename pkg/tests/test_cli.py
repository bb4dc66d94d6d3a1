"""End-to-end command-line coverage, run in process."""

import json
from fractions import Fraction

import numpy as np
import pytest

from netcov import checks, cli
from netcov.nets import PointSet, load_point_set, save_point_set


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def gen_net_file(tmp_path, capsys, b=2, m=2, s=2, name="net.txt"):
    path = tmp_path / name
    code, _, _ = run(capsys, "net", "gen", "--base", str(b), "--m", str(m),
                     "--s", str(s), "--out", str(path))
    assert code == 0
    return path


def test_net_gen_writes_a_loadable_file(tmp_path, capsys):
    path = gen_net_file(tmp_path, capsys)
    text = path.read_text(encoding="utf-8")
    assert text.splitlines()[0] == "2 2 2 0 2"
    with open(path, encoding="utf-8") as fh:
        ps = load_point_set(fh)
    assert ps.n == 4 and ps.s == 2


def test_net_gen_rejects_composite_base(tmp_path, capsys):
    code, _, err = run(capsys, "net", "gen", "--base", "4", "--m", "1",
                       "--s", "1", "--out", str(tmp_path / "x.txt"))
    assert code == 2
    assert err.startswith("error:")


def test_net_verify_passes_a_real_net(tmp_path, capsys):
    path = gen_net_file(tmp_path, capsys)
    code, out, _ = run(capsys, "net", "verify", str(path))
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] is True
    assert doc["t"] == 0
    assert "failure" not in doc


def test_net_verify_flags_a_broken_set(tmp_path, capsys):
    path = gen_net_file(tmp_path, capsys)
    with open(path, encoding="utf-8") as fh:
        ps = load_point_set(fh)
    digits = np.array(ps.digits)
    digits[1] = digits[0]  # duplicate a point; counts stay loadable
    broken = PointSet(b=ps.b, m=ps.m, s=ps.s, t=ps.t, digits=digits)
    with open(path, "w", encoding="utf-8") as fh:
        save_point_set(broken, fh)
    code, out, _ = run(capsys, "net", "verify", str(path))
    assert code == 1
    doc = json.loads(out)
    assert doc["passed"] is False
    assert "failure" in doc


def test_net_verify_relaxed_quality(tmp_path, capsys):
    path = gen_net_file(tmp_path, capsys)
    code, out, _ = run(capsys, "net", "verify", "--t", "1", str(path))
    assert code == 0
    assert json.loads(out)["t"] == 1


def test_net_verify_reports_corrupt_files(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("bogus header\n", encoding="utf-8")
    code, _, err = run(capsys, "net", "verify", str(path))
    assert code == 2
    assert err.startswith("error:")


def test_scramble_replications_and_determinism(tmp_path, capsys):
    net = gen_net_file(tmp_path, capsys)
    prefix_a = str(tmp_path / "a_rep")
    prefix_b = str(tmp_path / "b_rep")
    code, _, _ = run(capsys, "scramble", "--seed", "5", "--reps", "2",
                     "--out-prefix", prefix_a, str(net))
    assert code == 0
    # global --seed spells the same scramble as the subcommand flag
    code, _, _ = run(capsys, "--seed", "5", "scramble", "--reps", "2",
                     "--out-prefix", prefix_b, str(net))
    assert code == 0
    rep0 = (tmp_path / "a_rep000.txt").read_text(encoding="utf-8")
    rep1 = (tmp_path / "a_rep001.txt").read_text(encoding="utf-8")
    assert rep0 != rep1
    assert rep0 == (tmp_path / "b_rep000.txt").read_text(encoding="utf-8")
    assert rep1 == (tmp_path / "b_rep001.txt").read_text(encoding="utf-8")


def test_scramble_stdout_and_seed_sensitivity(tmp_path, capsys):
    net = gen_net_file(tmp_path, capsys)
    _, out_a, _ = run(capsys, "scramble", "--seed", "1", str(net))
    _, out_b, _ = run(capsys, "scramble", "--seed", "2", str(net))
    assert out_a != out_b
    assert out_a.splitlines()[0].startswith("2 2 2 0 ")


def test_psi_profile_counts(tmp_path, capsys):
    net = gen_net_file(tmp_path, capsys)
    code, out, _ = run(capsys, "psi", "profile", str(net))
    assert code == 0
    doc = json.loads(out)
    assert doc["counts"] == {"0,0": 4, "0,1": 4, "1,0": 4}
    assert doc["total_pairs"] == 12


def test_psi_eval_density_at_a_pair(tmp_path, capsys):
    net = gen_net_file(tmp_path, capsys, b=2, m=3, s=2, name="net32.txt")
    code, out, _ = run(capsys, "psi", "eval", "--x", "0,0",
                       "--y", "1/2,1/2", str(net))
    assert code == 0
    doc = json.loads(out)
    assert doc["gamma"] == [0, 0]
    assert doc["gamma_total"] == 0
    assert doc["pdf"] == "8/7"
    assert doc["pdf_float"] == pytest.approx(8 / 7)


def test_psi_eval_coincident_points(tmp_path, capsys):
    net = gen_net_file(tmp_path, capsys)
    code, out, _ = run(capsys, "psi", "eval", "--x", "0,0", "--y", "0,0",
                       str(net))
    assert code == 0
    doc = json.loads(out)
    assert doc["gamma"] == ["AT_LEAST_P", "AT_LEAST_P"]
    assert doc["gamma_total"] == "AT_LEAST_P"
    assert doc["pdf"] == "0"


def test_covpoly_json_document(capsys):
    code, out, _ = run(capsys, "covpoly", "--base", "2", "--m", "1",
                       "--s", "2", "--a", "1/2")
    assert code == 0
    doc = json.loads(out)
    assert doc["coefficients"] == {"1": "-1", "2": "1/4"}
    assert doc["a"] == "1/2"
    assert doc["basis"] == "bx"


def test_covpoly_scan_matches_witness_scan_bytewise(capsys):
    # at the critical weight the unscaled polynomial scan and the beta-form
    # scan must print identical bytes; m=2 keeps the check non-degenerate
    _, cov_out, _ = run(capsys, "covpoly", "--base", "2", "--m", "2",
                        "--s", "2", "--a", "1/2", "--x-grid", "0:1:1/8")
    _, q_out, _ = run(capsys, "qscan", "--base", "2", "--m", "2", "--s", "2",
                      "--x-grid", "0:1:1/8")
    assert cov_out == q_out


def test_covpoly_scale_divides_by_pair_count(capsys):
    _, raw, _ = run(capsys, "covpoly", "--base", "2", "--m", "2", "--s", "2",
                    "--a", "1/2", "--x-grid", "0:1:1/8")
    _, scaled, _ = run(capsys, "covpoly", "--base", "2", "--m", "2", "--s", "2",
                       "--a", "1/2", "--x-grid", "0:1:1/8",
                       "--scale", "inv-nm1")
    for line_r, line_s in zip(raw.splitlines()[1:], scaled.splitlines()[1:]):
        v_r = float(line_r.split(",")[1])
        v_s = float(line_s.split(",")[1])
        assert v_s == pytest.approx(v_r / 3, rel=1e-12, abs=1e-300)


def test_qscan_pinned_values(capsys):
    code, out, _ = run(capsys, "qscan", "--base", "2", "--m", "1", "--s", "2",
                       "--x-grid", "0:1:1/4")
    assert code == 0
    assert out.splitlines() == [
        "x,value",
        "0.0,0.0",
        "0.25,-0.4375",
        "0.5,-0.75",
        "0.75,-0.9375",
        "1.0,-1.0",
    ]


def test_figure_scan_single_preset(tmp_path, capsys):
    out_dir = tmp_path / "figs"
    code, _, _ = run(capsys, "figure-scan", "--preset", "3a",
                     "--out-dir", str(out_dir))
    assert code == 0
    text = (out_dir / "fig3a.csv").read_text(encoding="utf-8")
    lines = text.splitlines()
    assert len(lines) == 2 + 16 * 101
    assert lines[1] == "base,x,value"
    for line in lines[2:]:
        assert float(line.split(",")[2]) <= 0
    # byte stability
    code, _, _ = run(capsys, "figure-scan", "--preset", "3a",
                     "--out-dir", str(out_dir))
    assert code == 0
    assert (out_dir / "fig3a.csv").read_text(encoding="utf-8") == text


def test_figure_scan_emits_all_presets(tmp_path, capsys):
    out_dir = tmp_path / "figs"
    code, _, _ = run(capsys, "figure-scan", "--x-grid", "0:1:1/4",
                     "--out-dir", str(out_dir))
    assert code == 0
    names = sorted(p.name for p in out_dir.iterdir())
    assert names == ["fig3a.csv", "fig3b.csv", "fig3c.csv", "fig4.csv",
                     "fig5a.csv", "fig5b.csv", "fig5c.csv"]


def test_simulate_report_and_trace(tmp_path, capsys):
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({
        "b": 2, "m": 2, "s": 2, "R": 20,
        "function": {"kind": "wal", "l": [1, 1]},
    }), encoding="utf-8")
    trace = tmp_path / "trace.csv"
    code, out, _ = run(capsys, "simulate", "--config", str(config),
                       "--trace", str(trace))
    assert code == 0
    doc = json.loads(out)
    assert doc["cov_analytic"] == "-1/3"
    assert doc["cov_emp"] == pytest.approx(-1 / 3, abs=1e-15)
    assert doc["R"] == 20
    rows = trace.read_text(encoding="utf-8").splitlines()
    assert rows[0] == "r,est_re,est_im,pair_term"
    assert len(rows) == 21


def test_simulate_seed_flag_changes_the_run(tmp_path, capsys):
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({
        "b": 2, "m": 2, "s": 1, "R": 4,
        "function": {"kind": "decay", "decay": "per-index", "x": "1/4",
                     "alpha": "1", "k_max": 3, "seed": 0},
    }), encoding="utf-8")
    _, out_a, _ = run(capsys, "simulate", "--seed", "1", "--config", str(config))
    _, out_b, _ = run(capsys, "simulate", "--seed", "2", "--config", str(config))
    assert json.loads(out_a)["seed"] == 1
    assert json.loads(out_a)["est_var"] != json.loads(out_b)["est_var"]


def test_verify_suite_passes(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    lines = out.splitlines()
    assert lines[-1] == "all checks passed"
    assert all(line.startswith("PASS ") for line in lines[:-1])
    assert len(lines) - 1 == len(checks.CHECKS)


def test_verify_suite_json_format(capsys):
    code, out, _ = run(capsys, "--format", "json", "verify")
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] is True
    assert len(doc["checks"]) == len(checks.CHECKS)


def test_verify_suite_catches_a_kernel_mutation(capsys, monkeypatch):
    # flip the sign of the shell coefficient; the dual-route identities must
    # name the lie instead of agreeing with it
    import netcov.covkernel as covkernel
    original = covkernel.Psi.__wrapped__ if hasattr(covkernel.Psi, "__wrapped__") \
        else covkernel.Psi
    monkeypatch.setattr("netcov.covkernel.Psi",
                        lambda b, r, c: -original(b, r, c))
    code, out, _ = run(capsys, "verify")
    assert code == 1
    assert "FAIL psi-hat-two-routes" in out
    assert out.splitlines()[-1].startswith("FAILED: ")


def test_bad_grid_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["qscan", "--base", "2", "--m", "1", "--s", "1",
                  "--x-grid", "nonsense"])
    assert exc.value.code == 2


def test_unknown_command_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2


def test_analysis_errors_exit_cleanly(capsys):
    code, _, err = run(capsys, "covpoly", "--base", "4", "--m", "1",
                       "--s", "1", "--a", "1/2")
    assert code == 2
    assert err.startswith("error:")
