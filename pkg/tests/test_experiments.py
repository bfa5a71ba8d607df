import json
import os

import numpy as np
import pytest

from mellinsums import cli, experiments as ex


def test_make_config_defaults_and_types():
    cfg = ex.make_config("variance", {"p": "5, 7", "band": "0.3", "seed": "4"})
    assert cfg["p"] == [5, 7] and cfg["band"] == 0.3 and cfg.seed == 4
    assert cfg["m_max"] == 8 and cfg.average == "none"
    assert ex.make_config("lhat")["N"] == 12


@pytest.mark.parametrize("name,values", [
    ("field", {"bogus": "1"}),
    ("field", {"p": "seven"}),
    ("field", {"average": "median"}),
    ("nosuch", {}),
])
def test_config_errors(name, values):
    with pytest.raises(ex.ConfigError):
        ex.make_config(name, values)


def test_load_config(tmp_path):
    plain = tmp_path / "a.cfg"
    plain.write_text("experiment = field\np = 5  # base prime\nn = 2\n")
    cfg = ex.load_config(plain, "field")
    assert cfg["p"] == 5 and cfg["n"] == 2
    headed = tmp_path / "b.cfg"
    headed.write_text("[run]\np = 3\n")
    assert ex.load_config(headed, "field")["p"] == 3
    with pytest.raises(ex.ConfigError):
        ex.load_config(plain, "mellin")
    two = tmp_path / "c.cfg"
    two.write_text("[run]\np = 3\n[other]\nx = 1\n")
    with pytest.raises(ex.ConfigError):
        ex.load_config(two, "field")


def test_report_validation_and_serialization(tmp_path):
    rep = ex.Report("demo", {"p": 5})
    rep.ref("value", 1 + 2j, "closed form")
    rep.check("ok", True, np.float64(0.5), 1.0, "oracle: brute force")
    rep.tables["t"] = (["a", "b"], [[1, 0.25], [2, 1 - 1j]])
    assert rep.passed
    data = json.loads(rep.to_json())
    assert data["references"][0]["value"] == [1.0, 2.0]
    assert list(data) == sorted(data)
    assert rep.table_csv("t") == "a,b\n1,0.25\n2,1.0-1.0j\n"
    paths = rep.write(tmp_path)
    assert sorted(os.path.basename(p) for p in paths) == ["demo.json", "demo_t.csv"]
    assert rep.summary_lines() == ["PASS  ok: measured=0.5 threshold=1.0"]
    rep.check("no provenance", False, 0, 0, "")
    assert not rep.passed
    with pytest.raises(ex.SchemaError):
        rep.validate()


def test_reports_are_deterministic():
    a = ex.run("field", ex.make_config("field", {"p": "5", "n": "3", "seed": "2"}))
    b = ex.run("field", ex.make_config("field", {"p": "5", "n": "3", "seed": "2"}))
    assert a.passed
    assert a.to_json(include_time=False) == b.to_json(include_time=False)


@pytest.mark.parametrize("descriptor", ["kloosterman", "kloosterman_salie", "legendre_torus", "pointmass_gm"])
def test_mellin_runner_checks(descriptor):
    cfg = ex.make_config("mellin", {"descriptor": descriptor, "p": "7", "roots": "2 3"})
    rep = ex.run("mellin", cfg)
    assert rep.passed, rep.summary_lines()
    assert "fft equals naive" in {c.name for c in rep.criteria}


def test_lhat_runner():
    rep = ex.run("lhat", ex.make_config("lhat", {"N": "10"}))
    assert rep.passed, rep.summary_lines()


def test_sidon_test_on_known_sets():
    # a perfect difference set modulo 13 is Sidon
    ok, _ = ex.sidon_test([[0], [1], [3], [9]], (13,))
    assert ok
    # an interval is not: 0 + 3 = 1 + 2
    ok, witness = ex.sidon_test([[0], [1], [2], [3]], (13,))
    assert not ok and witness is not None
    # the identity map into G_m (every exponent) is not Sidon
    ok, _ = ex.sidon_test(np.arange(10)[:, None], (10,))
    assert not ok
    ok, reason = ex.sidon_test([[1], [1]], (5,))
    assert not ok and "injective" in reason
    # symmetric variant: {x, c - x} pairs share the sum c and nothing else
    ok, _ = ex.sidon_test([[0], [1], [5], [6]], (13,), symmetric_center=[6])
    assert ok
    ok, reason = ex.sidon_test([[0], [1], [3]], (13,), symmetric_center=[6])
    assert not ok and "symmetric" in reason


def test_sidon_runner_small():
    rep = ex.run("sidon", ex.make_config("sidon", {"q": "5 7 9"}))
    assert rep.passed, rep.summary_lines()
    header, rows = rep.tables["verdicts"]
    assert "case" in header and rows


def test_cli_exit_codes(tmp_path, capsys):
    assert cli.main(["field", "--set", "p=5", "--set", "n=2", "--format", "json"]) == 0
    out = capsys.readouterr().out
    assert json.loads(out)["passed"] is True
    assert cli.main(["field", "--set", "bogus=1"]) == 2
    assert "config error" in capsys.readouterr().err
    assert cli.main(["field", "--set", "p"]) == 2
    cfg = tmp_path / "run.cfg"
    cfg.write_text("experiment = lhat\nN = 8\n")
    out_dir = tmp_path / "out"
    assert cli.main(["lhat", "--config", str(cfg), "--out", str(out_dir), "--seed", "3"]) == 0
    written = json.loads((out_dir / "lhat.json").read_text())
    assert written["inputs"]["seed"] == 3 and written["inputs"]["N"] == 8
    with pytest.raises(SystemExit):
        cli.main(["nosuch"])
