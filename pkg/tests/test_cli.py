import json
import subprocess
import sys

import pytest

from hybridom import cli, scenarios

FLAT = """\
name = flat
omega_m_hz = 10e6
gamma_m_hz = 140
kappa_hz = 1e6
delta_c_hz = 10e6
g0_hz = 1.2e6
g_ac_hz = 0
gamma_a_hz = 200e3
delta_a_hz = 10e6
E_l_hz = 2e6
axis = delta
axis_min = 9e6
axis_max = 11e6
axis_count = 21
outputs = T_sq, phi
"""


@pytest.fixture
def config(tmp_path):
    path = tmp_path / "flat.cfg"
    path.write_text(FLAT)
    return path


def test_run_writes_files(config, tmp_path, capsys):
    out = tmp_path / "out"
    assert cli.main(["run", str(config), "--out-dir", str(out), "--workers", "1"]) == 0
    assert sorted(p.name for p in out.iterdir()) == ["flat.csv", "flat.meta", "flat.plot"]
    assert "flat.csv" in capsys.readouterr().out


def test_out_dir_from_environment(config, tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUT_DIR_ENV, str(tmp_path / "env"))
    assert cli.main(["run", str(config), "--workers", "1"]) == 0
    assert (tmp_path / "env" / "flat.csv").exists()


def test_variant_and_profile_flags(config, tmp_path):
    out = tmp_path / "o"
    rc = cli.main(["run", str(config), "--out-dir", str(out), "--workers", "1",
                   "--variant", "paper-literal", "--tolerance-profile", "strict"])
    assert rc == 0
    meta = json.loads((out / "flat.meta").read_text())
    assert meta["provenance"]["variant"] == "paper-literal"
    assert meta["provenance"]["tolerance_profile"] == "strict"


def test_failed_points_give_nonzero_exit(config, tmp_path, monkeypatch):
    real = scenarios.evaluate_point

    def flaky(scenario, x, s=None, tol=None):
        if x == scenario.axis.min:
            raise scenarios.ConfigError("injected")
        return real(scenario, x, s, tol)

    monkeypatch.setattr(scenarios, "evaluate_point", flaky)
    assert cli.main(["run", str(config), "--out-dir", str(tmp_path), "--workers", "1"]) == 1


def test_bad_config_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text(FLAT.replace("kappa_hz", "kapa_hz"))
    assert cli.main(["validate", str(bad)]) == 2
    assert "kapa_hz" in capsys.readouterr().err


def test_validate_preset(capsys):
    assert cli.main(["validate", "fig5"]) == 0
    assert "fig5: ok" in capsys.readouterr().out


def test_list_presets(capsys):
    assert cli.main(["list-presets"]) == 0
    out = capsys.readouterr().out
    for name in ("fig2a", "fig2d", "fig4a", "fig5", "fig7", "val1"):
        assert name in out


def test_oracle_check(capsys):
    assert cli.main(["oracle-check", "val6", "--points", "2"]) == 0
    assert "val6" in capsys.readouterr().out
    assert cli.main(["oracle-check", "nope"]) == 2


def test_module_entry_point(config, tmp_path):
    proc = subprocess.run([sys.executable, "-m", "hybridom", "run", str(config),
                           "--out-dir", str(tmp_path), "--workers", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
