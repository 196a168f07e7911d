import json

import numpy as np
import pytest

from keldrot import serialization as ser
from keldrot.cli import main
from keldrot.grids import OrderingParam, Signal, TimeGrid, project_pm
from keldrot.oscillator import GaussianState, OscillatorSpec, ctl_cumulants
from keldrot.rotation import rotate, unrotate


@pytest.fixture
def outdir(tmp_path):
    return tmp_path


def run(args):
    return main([str(a) for a in args])


class TestProject:
    def test_round_trip_against_library(self, outdir):
        grid = TimeGrid(32, 0.2)
        rng = np.random.default_rng(0)
        sig = Signal(grid, rng.normal(size=grid.n) + 1j * rng.normal(size=grid.n))
        inp = outdir / "sig.csv"
        inp.write_text(ser.signal_to_csv(sig))
        out = outdir / "proj"
        assert run(["project", "--in", inp, "--sign", "+", "--out", out]) == 0
        got = ser.signal_from_csv((outdir / "proj.csv").read_text())
        expect = project_pm(sig, "+")
        assert np.abs(got.values - expect.values).max() < 1e-15

    def test_manifest_written_with_hash(self, outdir):
        grid = TimeGrid(8, 0.5)
        inp = outdir / "sig.csv"
        inp.write_text(ser.signal_to_csv(Signal.zero(grid)))
        out = outdir / "p"
        run(["project", "--in", inp, "--sign", "-", "--out", out])
        manifest = json.loads((outdir / "p.manifest.json").read_text())
        assert manifest["verb"] == "project"
        assert len(manifest["config_hash"]) == 64
        assert str(outdir / "p.csv") in manifest["outputs"]
        assert "numpy" in manifest["versions"]


class TestRotationFlow:
    def test_rotate_then_unrotate_files(self, outdir):
        grid = TimeGrid(24, 0.2)
        spec = OscillatorSpec(omega0=grid.resonant_frequency(3))
        ctl = ctl_cumulants(spec, GaussianState(nbar=0.4), grid)
        bundle = outdir / "ctl.json"
        bundle.write_text(ser.cumulants_to_json(ctl))
        rot_out = outdir / "rot"
        assert run(["rotate", "--in", bundle, "--s", 0.5, "--out", rot_out,
                    "--check-consistency"]) == 0
        back_out = outdir / "back"
        assert run(["unrotate", "--in", str(rot_out) + ".json",
                    "--out", back_out]) == 0
        back = ser.cumulants_from_json((outdir / "back.json").read_text())
        assert np.abs(back.K_F.values - ctl.K_F.values).max() < 1e-10

    def test_reorder_verb(self, outdir):
        grid = TimeGrid(24, 0.2)
        spec = OscillatorSpec(omega0=grid.resonant_frequency(3))
        ctl = ctl_cumulants(spec, GaussianState(), grid, periodic=True)
        rot = rotate(ctl, OrderingParam(1.0))
        inp = outdir / "rot.json"
        inp.write_text(ser.rotated_to_json(rot))
        out = outdir / "re"
        assert run(["reorder", "--in", inp, "--s", 0.0, "--out", out]) == 0
        got = ser.rotated_from_json((outdir / "re.json").read_text())
        t = grid.times
        expect = 0.5 * np.cos(spec.omega0 * (t[:, None] - t[None, :]))
        assert np.abs(got.N_s.values - expect).max() < 1e-8


class TestVacuumPol:
    def test_low_k_row(self, outdir):
        out = outdir / "vp"
        code = run(["vacuum-pol", "--mu0", 1, "--alpha", 0.0072973525693,
                    "--kind", "R", "--renormalized", "--k2", 1e-4, "--out", out])
        assert code == 0
        lines = (outdir / "vp.csv").read_text().splitlines()
        k2, re, im = (float(x) for x in lines[2].split(","))
        assert re / k2 == pytest.approx(0.0072973525693 / (15 * np.pi), rel=1e-3)
        assert im == 0.0

    def test_unrenormalized_needs_scheme(self, outdir):
        code = run(["vacuum-pol", "--kind", "R", "--unrenormalized",
                    "--k2", 1.0, "--out", outdir / "x"])
        assert code == 2


class TestPvSolve:
    def test_geometric_scheme_report(self, outdir):
        out = outdir / "pv"
        assert run(["pv-solve", "--M", 0, "--mu0", 1, "--geometric", 1e3,
                    "--impose-b0", "--out", out]) == 0
        report = json.loads((outdir / "pv.json").read_text())
        assert report["d"][2] == pytest.approx(1.0, rel=0.1)
        assert report["d"][1] == pytest.approx(2.0, rel=0.1)
        assert max(report["residuals"]) < 1e-10
        assert abs(report["R0"]) < 1e-10

    def test_byte_stable_output(self, outdir):
        args = ["pv-solve", "--M", 0, "--mu0", 1, "--geometric", 100.0]
        run(args + ["--out", outdir / "a"])
        run(args + ["--out", outdir / "b"])
        assert (outdir / "a.json").read_bytes() == (outdir / "b.json").read_bytes()


class TestSpectrumVerbs:
    def test_zero_point_scales_delta_ledger(self, outdir):
        out = outdir / "zp"
        assert run(["zero-point", "--s", 0.0, "--k2-min", 5.0, "--k2-max", 9.0,
                    "--n-k2", 3, "--out", out]) == 0
        ledger = json.loads((outdir / "zp.delta.json").read_text())
        assert ledger[0]["location_k2"] == 0.0
        assert ledger[0]["weight"] == pytest.approx(np.pi)  # 2 s_minus = 1 at s=0

    def test_noise_spectrum_with_gauge_diagnosis(self, outdir):
        out = outdir / "ns"
        assert run(["noise-spectrum", "--k2", 8.0, "--diagnose-gauge",
                    "--out", out]) == 0
        gauge = json.loads((outdir / "ns.gauge.json").read_text())
        assert gauge["consistent"] is False


class TestStochasticVerbs:
    def test_seed_mandatory(self, outdir, capsys):
        code = run(["mc", "--samples", 100, "--n", 8, "--dt", 0.5,
                    "--out", outdir / "m"])
        assert code == 2
        err = json.loads(capsys.readouterr().err)
        assert "seed" in err["detail"]

    def test_mc_outputs(self, outdir):
        out = outdir / "mc"
        assert run(["mc", "--samples", 500, "--seed", 7, "--n", 8, "--dt", 0.5,
                    "--omega0", 1.0, "--white-noise-std", 0.2, "--out", out]) == 0
        cov = ser.kernel_from_csv((outdir / "mc.cov.csv").read_text())
        assert cov.grid.n == 8

    def test_mc_deterministic_bytes(self, outdir):
        args = ["mc", "--samples", 200, "--seed", 3, "--n", 8, "--dt", 0.5,
                "--white-noise-std", 0.1]
        run(args + ["--out", outdir / "m1"])
        run(args + ["--out", outdir / "m2"])
        assert (outdir / "m1.cov.csv").read_bytes() == (outdir / "m2.cov.csv").read_bytes()

    def test_oscillator_lambda_check_verb(self, outdir):
        out = outdir / "lc"
        # omega0 resonant on the grid: 2 cycles over n*dt = 4 pi
        code = run(["oscillator", "lambda-check", "--omega0", 1.0, "--nbar", 0.5,
                    "--s", 0.7, "--n", 16, "--dt", np.pi / 4, "--draws", 5,
                    "--seed", 3, "--out", out])
        assert code == 0
        report = json.loads((outdir / "lc.json").read_text())
        assert report["max_relative_residual"] < 1e-8

    def test_oscillator_mc_verb(self, outdir):
        out = outdir / "omc"
        code = run(["oscillator", "mc", "--omega0", 1.0, "--nbar", 1.0,
                    "--s", 0.0, "--n", 8, "--dt", 0.5, "--samples", 20000,
                    "--seed", 11, "--out", out])
        assert code == 0
        summary = json.loads((outdir / "omc.json").read_text())
        assert summary["worst_pull_vs_closed_form"] < 6.0


class TestConfigHandling:
    def test_unknown_keys_rejected(self, outdir, capsys):
        cfg = outdir / "cfg.json"
        cfg.write_text(json.dumps({"omega0": 1.0, "bogus": 2}))
        code = run(["oscillator", "kernel", "--config", cfg, "--n", 8,
                    "--dt", 0.5, "--out", outdir / "k"])
        assert code == 2
        err = json.loads(capsys.readouterr().err)
        assert "bogus" in err["detail"]

    def test_config_file_merges_with_flags(self, outdir):
        cfg = outdir / "cfg.json"
        cfg.write_text(json.dumps({"omega0": 2.0, "nbar": 1.0, "s": 0.3}))
        out = outdir / "k"
        assert run(["oscillator", "kernel", "--config", cfg, "--n", 8,
                    "--dt", 0.5, "--out", out]) == 0
        manifest = json.loads((outdir / "k.manifest.json").read_text())
        assert manifest["config"]["omega0"] == 2.0
        assert manifest["config"]["n"] == 8

    def test_computation_error_exit_code(self, outdir, capsys):
        # masses not strictly increasing -> computation-level failure
        code = run(["pv-solve", "--M", 0, "--masses", "1,3,2,4,5",
                    "--out", outdir / "x"])
        assert code == 1
        err = json.loads(capsys.readouterr().err)
        assert err["error"] == "computation"

    def test_double_precision_backend_fails_honestly(self, outdir, capsys,
                                                     monkeypatch):
        monkeypatch.setenv("KELDROT_PRECISION", "double")
        code = run(["pv-solve", "--M", 0, "--mu0", 1, "--geometric", 1e3,
                    "--impose-b0", "--out", outdir / "x"])
        assert code == 1
        err = json.loads(capsys.readouterr().err)
        assert "residuals" in err["detail"] or "singular" in err["detail"]

    def test_nested_grid_config(self, outdir):
        cfg = outdir / "cfg.json"
        cfg.write_text(json.dumps({"omega0": 1.0, "s": 0.0,
                                   "grid": {"n": 8, "dt": 0.5}}))
        out = outdir / "k"
        assert run(["oscillator", "kernel", "--config", cfg, "--out", out]) == 0
        got = ser.kernel_from_csv((outdir / "k.csv").read_text())
        assert got.grid.n == 8


class TestAcceptVerb:
    def test_single_criterion_and_byte_stability(self, outdir, capsys):
        code = run(["accept", "--only", "01-projection"])
        out1 = capsys.readouterr().out
        assert code == 0
        assert out1.startswith("PASS  01-projection-algebra")
        run(["accept", "--only", "01-projection"])
        out2 = capsys.readouterr().out
        assert out1 == out2

    def test_report_file(self, outdir):
        out = outdir / "rep"
        assert run(["accept", "--only", "02-oscillator", "--out", out]) == 0
        report = json.loads((outdir / "rep.json").read_text())
        assert report["all_passed"] is True
