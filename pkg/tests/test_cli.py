import numpy as np
import pytest

from slhc_estimate import cli
from slhc_estimate.edges import EdgeVector, write_edge_vector
from slhc_estimate.harness import SweepConfig, read_csv, run_sweep


class TestGridSpec:
    def test_comma_lists(self):
        assert cli.parse_grid("1.0,0.5", "sigma") == (1.0, 0.5)
        assert cli.parse_grid("1,4,16", "nsamples") == (1, 4, 16)

    def test_exponent_grid(self):
        grid = cli.parse_grid("exp:0:-8:-2", "sigma")
        assert len(grid) == 5
        assert grid[0] == pytest.approx(1.0)
        assert grid[-1] == pytest.approx(np.exp(-8))

    def test_power_grid(self):
        assert cli.parse_grid("pow2:0:4", "nsamples") == (1, 2, 4, 8, 16)
        assert cli.parse_grid("pow2:0:16:4", "nsamples") == (1, 16, 256, 4096, 65536)

    def test_bad_exponent_range(self):
        with pytest.raises(ValueError):
            cli.parse_grid("exp:0:-8:0.2", "sigma")


class TestConfigFile:
    def test_parse_and_override(self, tmp_path):
        cfgfile = tmp_path / "sweep.cfg"
        cfgfile.write_text(
            "# experiment defaults\n"
            "kind=sigma\n"
            "model=lognormal\n"
            "sigma=0.25\n"
            "trials=17\n"
            "grid=1.0,0.5\n"
            "seed=5\n")
        args = cli_args(["sweep", "--config", str(cfgfile), "--trials", "9"])
        cfg = cli.build_sweep_config(args)
        assert cfg.trials == 9          # flag wins
        assert cfg.sigma == 0.25        # file survives
        assert cfg.grid == (1.0, 0.5)
        assert cfg.seed == 5

    def test_unknown_key_rejected(self, tmp_path):
        cfgfile = tmp_path / "bad.cfg"
        cfgfile.write_text("bogus=1\n")
        with pytest.raises(ValueError):
            cli.build_sweep_config(cli_args(["sweep", "--config", str(cfgfile)]))

    def test_malformed_line_rejected(self, tmp_path):
        cfgfile = tmp_path / "bad.cfg"
        cfgfile.write_text("just a line\n")
        with pytest.raises(ValueError):
            cli.build_sweep_config(cli_args(["sweep", "--config", str(cfgfile)]))


def cli_args(argv):
    return cli.build_parser().parse_args(argv)


class TestCommands:
    def test_sweep_writes_expected_csv(self, tmp_path):
        out = tmp_path / "sweep.csv"
        rc = cli.main(["sweep", "--kind", "sigma", "--n", "5", "--box", "100",
                       "--model", "lognormal", "--grid", "0.5,0.05",
                       "--trials", "30", "--seed", "21", "--out", str(out)])
        assert rc == 0
        rows = read_csv(out)
        direct = run_sweep(SweepConfig(kind="sigma", grid=(0.5, 0.05),
                                       trials=30, seed=21))
        assert [r.grid_value for r in rows] == [0.5, 0.05]
        assert rows == direct

    def test_nsamples_sweep(self, tmp_path):
        out = tmp_path / "n.csv"
        rc = cli.main(["sweep", "--kind", "nsamples", "--grid", "1,16",
                       "--sigma", "0.3", "--trials", "20", "--seed", "2",
                       "--out", str(out)])
        assert rc == 0
        rows = read_csv(out)
        assert rows[0].sweep == "nsamples"
        assert rows[1].mean_l1 < rows[0].mean_l1

    def test_plot_renders_vector_file(self, tmp_path):
        out = tmp_path / "sweep.csv"
        cli.main(["sweep", "--kind", "sigma", "--grid", "1.0,0.1,0.01",
                  "--trials", "10", "--seed", "3", "--out", str(out)])
        fig = tmp_path / "fig.svg"
        rc = cli.main(["plot", "--in", str(out), "--out", str(fig)])
        assert rc == 0
        content = fig.read_text()
        assert content.lstrip().startswith("<?xml")
        assert len(content) > 1000

    def test_check_battery_passes(self, capsys):
        rc = cli.main(["check"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "[PASS]" in out
        assert "[FAIL]" not in out

    def test_estimate_from_fixture(self, tmp_path, capsys):
        fixture = tmp_path / "vec.txt"
        write_edge_vector(EdgeVector(3, [1.0, 2.0, 3.0]), fixture)
        rc = cli.main(["estimate", "--in", str(fixture), "--model", "lognormal",
                       "--sigma", "0.3"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "single linkage: 1.0 2.0 2.0" in out
        assert "tree profile:   1.0 2.0 2.0" in out
        assert "dendrogram: ((0,1):1.0,2):2.0;" in out
