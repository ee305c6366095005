from pathlib import Path

import pytest

from ptrslink.cli import main
from ptrslink.phase_noise import SET_A, psd_at, with_carrier

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"


def small_scenario(tmp_path, extra="", experiment="single-run", name="mini"):
    text = (
        "schema_version = 1\n"
        f'name = "{name}"\n'
        f'experiment = "{experiment}"\n'
        "n_rb = 8\n"
        "n_drops = 2\n"
        "snr_db = [20.0]\n"
        "[ptrs]\n"
        "freq_density_rb = 2\n"
    ) + extra
    path = tmp_path / f"{name}.toml"
    path.write_text(text)
    return path


class TestPsdCommand:
    def test_exports_model_curve(self, tmp_path):
        out = tmp_path / "psd.csv"
        assert main(["psd", "set-a", "--out", str(out), "--points", "50"]) == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "frequency_hz,psd_dbc_hz"
        assert len(lines) == 51
        f, p = map(float, lines[1].split(","))
        assert p == pytest.approx(psd_at(SET_A, f))

    def test_carrier_override(self, tmp_path):
        out = tmp_path / "psd60.csv"
        assert main(["psd", "set-a", "--out", str(out), "--carrier-hz", "60e9",
                     "--points", "10"]) == 0
        f, p = map(float, out.read_text().strip().splitlines()[1].split(","))
        assert p == pytest.approx(psd_at(with_carrier(SET_A, 60e9), f))

    def test_bad_grid(self, tmp_path, capsys):
        rc = main(["psd", "set-a", "--out", str(tmp_path / "x.csv"), "--f-min", "-5"])
        assert rc == 2
        assert "error" in capsys.readouterr().err


class TestRunCommand:
    def test_single_run_writes_csv(self, tmp_path, capsys):
        scenario = small_scenario(tmp_path)
        out_dir = tmp_path / "out"
        assert main(["run", str(scenario), "--out", str(out_dir)]) == 0
        csv_path = out_dir / "mini_single_run.csv"
        assert csv_path.exists()
        text = csv_path.read_text()
        assert text.startswith("# scenario = mini\n")
        assert "snr_db,drop,seed," in text
        assert str(csv_path) in capsys.readouterr().out

    def test_rerun_is_byte_identical(self, tmp_path):
        scenario = small_scenario(tmp_path)
        d1, d2 = tmp_path / "o1", tmp_path / "o2"
        assert main(["run", str(scenario), "--out", str(d1)]) == 0
        assert main(["run", str(scenario), "--out", str(d2)]) == 0
        assert (d1 / "mini_single_run.csv").read_bytes() == (d2 / "mini_single_run.csv").read_bytes()

    def test_seed_override_changes_output(self, tmp_path):
        scenario = small_scenario(tmp_path)
        d1, d2 = tmp_path / "o1", tmp_path / "o2"
        main(["run", str(scenario), "--out", str(d1)])
        main(["run", str(scenario), "--out", str(d2), "--seed", "9"])
        assert (d1 / "mini_single_run.csv").read_bytes() != (d2 / "mini_single_run.csv").read_bytes()

    def test_drops_override(self, tmp_path):
        scenario = small_scenario(tmp_path)
        out_dir = tmp_path / "out"
        main(["run", str(scenario), "--out", str(out_dir), "--drops", "1"])
        lines = [l for l in (out_dir / "mini_single_run.csv").read_text().splitlines()
                 if not l.startswith("#")]
        assert len(lines) == 2  # header + one drop

    def test_papr_writes_two_files(self, tmp_path):
        text = (
            "schema_version = 1\nname = \"pp\"\nexperiment = \"papr\"\n"
            "n_rb = 8\nmodulation_order = 4\nsnr_db = [inf]\nn_drops = 1\n"
            "[phase_noise]\nmodel = \"none\"\n"
            "[papr]\nvariants = [\"cp-ofdm\"]\nn_symbols = 500\n"
        )
        path = tmp_path / "pp.toml"
        path.write_text(text)
        out_dir = tmp_path / "out"
        assert main(["run", str(path), "--out", str(out_dir)]) == 0
        assert (out_dir / "pp_papr_ccdf.csv").exists()
        assert (out_dir / "pp_papr_summary.csv").exists()

    def test_unknown_key_fails_with_code_2(self, tmp_path, capsys):
        path = tmp_path / "bad.toml"
        path.write_text("schema_version = 1\nnrb = 8\n")
        assert main(["run", str(path)]) == 2
        assert "unknown scenario key" in capsys.readouterr().err

    def test_missing_file(self, tmp_path, capsys):
        assert main(["run", str(tmp_path / "nope.toml")]) == 2
        assert "error" in capsys.readouterr().err

    def test_shipped_multi_trp_scenario_smoke(self, tmp_path):
        out_dir = tmp_path / "out"
        rc = main(["run", str(SCENARIO_DIR / "multi_trp.toml"), "--out", str(out_dir),
                   "--drops", "2"])
        assert rc == 0
        text = (out_dir / "multi_trp_multi_trp.csv").read_text()
        assert "cpe_rmse_mean" in text
