import json

import pytest

from orfkit import specfun
from orfkit.cli import main
from orfkit.report import ExperimentReport


def run_cli(args):
    with pytest.raises(SystemExit) as exc:
        main(list(args))
    return exc.value.code


def run_ok(args, capsys=None):
    code = main(list(args))
    assert code is None
    if capsys is not None:
        return capsys.readouterr().out
    return None


class TestSubcommands:
    def test_bias_stdout_csv(self, capsys):
        out = run_ok(["bias", "--d", "5", "--z-max", "1", "--z-step", "0.5"], capsys)
        lines = out.splitlines()
        assert lines[0] == "z,orf_bias,rff_bias,lower_bound,upper_bound,in_validity_interval"
        assert len(lines) == 4
        assert lines[1].startswith("0.0,1.0,1.0,1.0,1.0,true")

    def test_variance_file_output(self, tmp_path, capsys):
        out_file = tmp_path / "var.csv"
        run_ok(["variance", "--d", "8", "--p", "4", "--z-max", "2", "--z-step", "1",
                "--out", str(out_file)], capsys)
        header = out_file.read_text().splitlines()[0]
        assert header == "z,orf_variance,rff_variance,envelope_lower,envelope_upper,in_validity_interval"

    def test_bounds_json(self, tmp_path):
        out_file = tmp_path / "bounds.json"
        run_ok(["bounds", "--d", "16", "--format", "json", "--out", str(out_file)])
        doc = json.loads(out_file.read_text())
        assert doc["records"][0]["alpha_d"] == pytest.approx(8.0**0.75)
        assert doc["rng"] == "numpy-pcg64:seedseq-spawnkey"

    def test_bounds_small_d_empty_cd_cell(self, capsys):
        out = run_ok(["bounds", "--d", "3"], capsys)
        row = out.splitlines()[1].split(",")
        assert row[2] == ""  # c_d undefined below d=5

    def test_zeros_table(self, capsys):
        out = run_ok(["zeros", "--d", "3", "--m", "2"], capsys)
        lines = out.splitlines()
        assert lines[0] == "index,zero,rayleigh_partial"
        assert float(lines[1].split(",")[1]) == pytest.approx(3.141592653589793, abs=1e-10)

    def test_mc_moments(self, capsys):
        out = run_ok(["mc", "--d", "6", "--p", "2", "--s", "400", "--seed", "3",
                      "--z-min", "1", "--z-max", "1", "--z-step", "1"], capsys)
        lines = out.splitlines()
        assert lines[0] == "z,quantity,theory,empirical,abs_error,stderr"
        assert [ln.split(",")[1] for ln in lines[1:]] == ["bias", "variance"]

    def test_mc_covariance(self, capsys):
        out = run_ok(["mc", "--d", "6", "--s", "300", "--seed", "3", "--covariance",
                      "--z-min", "0.5", "--z-max", "0.5", "--z-step", "1"], capsys)
        assert out.splitlines()[1].split(",")[1] == "covariance"

    def test_mse_with_dataset_file(self, tmp_path, capsys):
        data = tmp_path / "pts.csv"
        rows = ["%.3f,%.3f,%.3f" % (i * 0.17, (i * i) % 5 * 0.3, -i * 0.05) for i in range(9)]
        data.write_text("\n".join(rows) + "\n")
        out_file = tmp_path / "mse.json"
        run_ok(["mse", "--dataset", str(data), "--p", "3", "--trials", "2",
                "--seed", "4", "--format", "json", "--out", str(out_file)], capsys)
        doc = json.loads(out_file.read_text())
        assert doc["config"]["d"] == 3 and doc["config"]["n"] == 9
        assert "fraction_pairs_in_dominance_interval" in doc["aggregates"]

    def test_mse_p_grid_sweep(self, tmp_path):
        out_file = tmp_path / "sweep.json"
        run_ok(["mse", "--d", "6", "--n", "12", "--p-grid", "2,4", "--trials", "2",
                "--seed", "1", "--format", "json", "--out", str(out_file)])
        doc = json.loads(out_file.read_text())
        assert doc["config"]["p_grid"] == [2, 4]
        assert {rec["p"] for rec in doc["records"]} == {2, 4}
        assert len(doc["aggregates"]["per_p"]) == 2

    def test_plot_rendered_next_to_output(self, tmp_path, capsys):
        out_file = tmp_path / "bias.csv"
        run_ok(["bias", "--d", "4", "--z-max", "2", "--z-step", "0.25",
                "--out", str(out_file), "--plot"], capsys)
        png = tmp_path / "bias.png"
        assert png.exists() and png.stat().st_size > 2000

    def test_plot_requires_out(self):
        assert run_cli(["bias", "--d", "4", "--z-max", "1", "--z-step", "0.5", "--plot"]) == 2


class TestExitCodes:
    def test_invalid_dimension(self):
        assert run_cli(["bias", "--d", "1"]) == 2

    def test_unknown_option_value(self):
        assert run_cli(["mc", "--d", "4", "--estimator", "bogus"]) == 2

    def test_bad_grid(self):
        assert run_cli(["bias", "--d", "4", "--z-max", "-3"]) == 2

    def test_numerical_failure(self, monkeypatch):
        monkeypatch.setattr(specfun, "_SCAN_LIMIT", 0.5)
        monkeypatch.setitem(specfun._zero_cache, 89, [])
        assert run_cli(["zeros", "--d", "89", "--m", "3"]) == 3

    def test_missing_dataset_file(self, tmp_path):
        assert run_cli(["mse", "--dataset", str(tmp_path / "none.csv")]) == 4

    def test_unwritable_output(self, tmp_path):
        target = tmp_path / "no_dir" / "x.csv"
        assert run_cli(["bounds", "--d", "5", "--out", str(target)]) == 4

    def test_degenerate_dataset(self, tmp_path):
        data = tmp_path / "flat.csv"
        data.write_text("1,2\n1,2\n")
        assert run_cli(["mse", "--dataset", str(data), "--trials", "1"]) == 2


class TestDeterminism:
    def bias_bytes(self, tmp_path, name):
        out_file = tmp_path / name
        run_ok(["bias", "--d", "7", "--z-max", "3", "--z-step", "0.1", "--out", str(out_file)])
        return out_file.read_bytes()

    def test_bias_reruns_identical(self, tmp_path, capsys):
        assert self.bias_bytes(tmp_path, "a.csv") == self.bias_bytes(tmp_path, "b.csv")

    def test_mc_identical_across_workers(self, tmp_path, capsys):
        outputs = []
        for name, workers in (("a.csv", "1"), ("b.csv", "3"), ("c.csv", "1")):
            out_file = tmp_path / name
            run_ok(["mc", "--d", "5", "--p", "2", "--s", "200", "--seed", "11",
                    "--z-min", "0.5", "--z-max", "1.5", "--z-step", "0.5",
                    "--workers", workers, "--out", str(out_file)], capsys)
            outputs.append(out_file.read_bytes())
        assert outputs[0] == outputs[1] == outputs[2]

    def test_mse_identical_across_workers(self, tmp_path, capsys):
        outputs = []
        for name, workers in (("a.csv", "1"), ("b.csv", "2")):
            out_file = tmp_path / name
            run_ok(["mse", "--d", "6", "--n", "10", "--p", "2", "--trials", "4",
                    "--seed", "2", "--workers", workers, "--out", str(out_file)], capsys)
            outputs.append(out_file.read_bytes())
        assert outputs[0] == outputs[1]

    def test_json_csv_consistency(self, tmp_path, capsys):
        jpath, cpath = tmp_path / "r.json", tmp_path / "r.csv"
        args = ["zeros", "--d", "4", "--m", "3"]
        run_ok(args + ["--format", "json", "--out", str(jpath)], capsys)
        run_ok(args + ["--out", str(cpath)], capsys)
        rep = ExperimentReport.from_json(jpath.read_text())
        assert rep.to_csv() == cpath.read_text()
