import csv

import pytest

from quickfv.cli import main, spec_from_args, build_parser
from quickfv.errors import ConfigurationError
from quickfv.grid import ReconMode, TimeTreatment


def parse(*argv):
    return spec_from_args(build_parser().parse_args(["run", *argv]))


def test_presets_listing(capsys):
    assert main(["presets"]) == 0
    out = capsys.readouterr().out
    for name in ("fig4", "fig9lin", "fig10"):
        assert name in out


def test_run_writes_csv(tmp_path, capsys):
    code = main(["run", "--experiment", "steady_burgers", "--kappa", "0,1/2", "--grids", "15,31",
                 "--out", str(tmp_path)])
    assert code == 0
    with open(tmp_path / "steady_burgers.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 5
    assert {r[2] for r in rows[1:]} == {"0.0", "0.5"}
    assert "wrote" in capsys.readouterr().out


def test_flags_override_preset(tmp_path):
    spec = parse("--experiment", "fig8", "--grids", "32,64", "--recon", "flux", "--dt", "0.001",
                 "--steps", "105", "--out", str(tmp_path))
    assert spec.grids == [32, 64]
    assert all(s.recon_mode is ReconMode.FLUX for s in spec.schemes)
    assert spec.time.n_steps == 105 and spec.time.dt == 0.001
    assert len(spec.schemes) == 4


def test_identical_overrides_collapse_schemes(tmp_path):
    spec = parse("--experiment", "fig8", "--time", "lumped", "--kappa", "1/2", "--out", str(tmp_path))
    assert len(spec.schemes) == 1
    assert spec.schemes[0].time_treatment is TimeTreatment.LUMPED_MASS


def test_alpha_and_switches(tmp_path):
    spec = parse("--experiment", "fig5", "--alpha", "4/3", "--dissipation", "off", "--forcing",
                 "point", "--out", str(tmp_path))
    s = spec.schemes[0]
    assert s.alpha == pytest.approx(4 / 3)
    assert not s.dissipation and s.forcing_mode.value == "point"
    assert parse("--experiment", "fig6", "--alpha", "auto", "--out", "x").schemes[0].alpha == "auto"


def test_bad_number_is_configuration_error():
    with pytest.raises(ConfigurationError):
        parse("--experiment", "fig4", "--kappa", "one/half", "--out", "x")
    with pytest.raises(ConfigurationError):
        parse("--experiment", "fig4", "--grids", "15,x", "--out", "x")


@pytest.mark.parametrize("argv", [
    ["--experiment", "nope"],
    ["--experiment", "fig9", "--kappa", "1/2", "--grids", "32"],
    ["--experiment", "fig4", "--dt", "0.1"],
    ["--experiment", "fig4", "--grids", "4"],
    ["--experiment", "fig5", "--kappa", "1", "--grids", "15"],
])
def test_configuration_errors_exit_2(argv, tmp_path, capsys):
    assert main(["run", *argv, "--out", str(tmp_path)]) == 2
    assert "quickfv: error:" in capsys.readouterr().err


def test_numerical_failure_exits_1(tmp_path, capsys):
    code = main(["run", "--experiment", "steady_burgers", "--grids", "31", "--init", "zero",
                 "--max-iter", "1", "--out", str(tmp_path)])
    assert code == 1
    assert "31 cells" in capsys.readouterr().err


def test_io_error_exits_1(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("")
    code = main(["run", "--experiment", "steady_burgers", "--grids", "15",
                 "--out", str(blocker / "sub")])
    assert code == 1


def test_missing_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
