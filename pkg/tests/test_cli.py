import csv
import json

from maslovstab.cli import main

SECH_CONFIG = {
    "n": 1,
    "kind": "pulse",
    "decay_rate": 1.0,
    "potential": {"kind": "expression", "entries": [["-1 + 3/cosh(x/2)**2"]]},
    "q_minus": [[-1.0]],
    "q_plus": [[-1.0]],
}


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out.strip(), captured.err.strip()


class TestBasics:
    def test_models_lists_builtins(self, capsys):
        code, out, _ = run(capsys, "models")
        assert code == 0
        assert out == "models=scalar_sech_pulse,allen_cahn_front,coupled_gradient_demo"

    def test_conjugate_summary(self, capsys):
        code, out, _ = run(
            capsys, "conjugate", "--model", "scalar_sech_pulse",
            "--lambda-star", "1e-3",
        )
        assert code == 0
        assert out == "conjugate_points=1"

    def test_compare_agree_exit_zero(self, capsys):
        code, out, _ = run(capsys, "compare", "--model", "allen_cahn_front")
        assert code == 0
        assert out == "conjugate=0 winding=0 oracle=0 AGREE"

    def test_unknown_model_exit_one(self, capsys):
        code, _, err = run(capsys, "conjugate", "--model", "nope",
                           "--lambda-star", "1e-3")
        assert code == 1
        assert "nope" in err

    def test_unknown_flag_exit_one(self, capsys):
        code, _, _ = run(capsys, "models", "--bogus")
        assert code == 1

    def test_out_of_range_override_exit_one(self, capsys):
        code, _, err = run(capsys, "conjugate", "--model", "scalar_sech_pulse",
                           "--lambda-star", "1e-3", "--rtol", "1.0")
        assert code == 1
        assert "rtol" in err and "range" in err

    def test_json_errors(self, capsys, tmp_path):
        cfg = tmp_path / "bad.json"
        cfg.write_text(json.dumps({k: v for k, v in SECH_CONFIG.items()
                                   if k != "decay_rate"}))
        code, _, err = run(capsys, "--json-errors", "conjugate",
                           "--config", str(cfg), "--lambda-star", "1e-3")
        assert code == 1
        payload = json.loads(err)
        assert payload["error"] == "ConfigError"
        assert payload["field"] == "decay_rate"

    def test_config_model_runs(self, capsys, tmp_path):
        cfg = tmp_path / "model.json"
        cfg.write_text(json.dumps(SECH_CONFIG))
        code, out, _ = run(capsys, "conjugate", "--config", str(cfg),
                           "--lambda-star", "1e-3")
        assert code == 0
        assert out == "conjugate_points=1"

    def test_compare_disagreement_exit_two(self, capsys, monkeypatch):
        from maslovstab import cli as cli_mod
        from maslovstab.flow import SpectralReport

        def fake_compare(model, opts, epsilon_shift, oracle_h):
            return SpectralReport(conjugate_count=1, winding_count=0,
                                  oracle_count=1)

        monkeypatch.setattr(cli_mod.evans_mod, "compare_counts", fake_compare)
        code, out, _ = run(capsys, "compare", "--model", "scalar_sech_pulse")
        assert code == 2
        assert out.endswith("DISAGREE")


class TestArtifacts:
    def test_csv_round_trips_17_digits(self, capsys, tmp_path):
        out_file = tmp_path / "curve.csv"
        run(capsys, "prufer", "--model", "scalar_sech_pulse",
            "--lambda-star", "-0.5", "--output", str(out_file))
        with open(out_file) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["x", "theta"]
        for x_text, theta_text in rows[1:]:
            assert format(float(x_text), ".17g") == x_text
            assert format(float(theta_text), ".17g") == theta_text

    def test_determinism_byte_identical(self, capsys, tmp_path):
        files = []
        for name in ("a.csv", "b.csv"):
            out_file = tmp_path / name
            run(capsys, "conjugate", "--model", "scalar_sech_pulse",
                "--lambda-star", "1e-3", "--output", str(out_file))
            files.append(out_file.read_bytes())
        assert files[0] == files[1]

    def test_square_csv_columns(self, capsys, tmp_path):
        out_file = tmp_path / "square.csv"
        code, out, _ = run(capsys, "square", "--model", "scalar_sech_pulse",
                           "--lambda-star", "1e-3", "--output", str(out_file))
        assert code == 0
        assert out.startswith("net_index=0 left=1 top=1")
        with open(out_file) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["edge", "param", "crossing", "direction"]
        edges = [r[0] for r in rows[1:]]
        assert edges == ["left", "top"]
        directions = [int(r[3]) for r in rows[1:]]
        assert directions == [1, -1]

    def test_compare_json_payload(self, capsys, tmp_path):
        out_file = tmp_path / "compare.json"
        code, _, _ = run(capsys, "compare", "--model", "scalar_sech_pulse",
                         "--output", str(out_file))
        assert code == 0
        payload = json.loads(out_file.read_text())
        assert payload["conjugate"] == payload["winding"] == payload["oracle"] == 1
        assert payload["agree"] is True

    def test_radial_json(self, capsys, tmp_path):
        out_file = tmp_path / "radial.json"
        code, out, _ = run(capsys, "radial", "--d", "3", "--l", "2",
                           "--k-max", "5", "--output", str(out_file))
        assert code == 0
        assert out == "exponents=2,-3"
        payload = json.loads(out_file.read_text())
        assert payload["exponents"] == [2.0, -3.0]
        assert payload["cylinder_spectrum"] == list(range(-5, 6))
        assert abs(payload["fitted_rates"]["unstable"] - 2.0) < 1e-3
        assert abs(payload["fitted_rates"]["stable"] + 3.0) < 1e-3


class TestGolden:
    def test_models_golden(self, capsys, tmp_path, golden):
        out_file = tmp_path / "models.json"
        run(capsys, "models", "--output", str(out_file), "--format", "json")
        golden(out_file, "models.json")

    def test_conjugate_golden(self, capsys, tmp_path, golden):
        out_file = tmp_path / "conjugate.csv"
        run(capsys, "conjugate", "--model", "scalar_sech_pulse",
            "--lambda-star", "1e-3", "--output", str(out_file))
        golden(out_file, "conjugate_sech.csv")

    def test_square_golden(self, capsys, tmp_path, golden):
        out_file = tmp_path / "square.csv"
        run(capsys, "square", "--model", "scalar_sech_pulse",
            "--lambda-star", "1e-3", "--output", str(out_file))
        golden(out_file, "square_sech.csv")

    def test_compare_golden(self, capsys, tmp_path, golden):
        out_file = tmp_path / "compare.json"
        run(capsys, "compare", "--model", "allen_cahn_front",
            "--output", str(out_file))
        golden(out_file, "compare_front.json")

    def test_spectrum_golden(self, capsys, tmp_path, golden):
        out_file = tmp_path / "spectrum.csv"
        run(capsys, "spectrum", "--model", "scalar_sech_pulse", "--count", "3",
            "--output", str(out_file))
        golden(out_file, "spectrum_sech.csv")

    def test_oracle_golden(self, capsys, tmp_path, golden):
        out_file = tmp_path / "oracle.csv"
        run(capsys, "oracle", "--model", "scalar_sech_pulse",
            "--lambda-star", "1e-3", "--output", str(out_file))
        golden(out_file, "oracle_sech.csv")

    def test_radial_golden(self, capsys, tmp_path, golden):
        out_file = tmp_path / "radial.json"
        run(capsys, "radial", "--d", "3", "--l", "2", "--output", str(out_file))
        golden(out_file, "radial_d3_l2.json")

    def test_evans_golden(self, capsys, tmp_path, golden):
        out_file = tmp_path / "evans.csv"
        run(capsys, "evans", "--model", "scalar_sech_pulse",
            "--contour-center", "1.25", "0", "--contour-radius", "0.5",
            "--contour-samples", "64", "--output", str(out_file))
        golden(out_file, "evans_sech.csv")

    def test_prufer_golden(self, capsys, tmp_path, golden):
        out_file = tmp_path / "prufer.csv"
        run(capsys, "prufer", "--model", "allen_cahn_front",
            "--lambda-star", "1e-3", "--output", str(out_file))
        golden(out_file, "prufer_front.csv")
