import csv
import io
import math
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hartman import cli
from hartman.config import ScanConfig, parse_config, parse_key_values, parse_range
from hartman.errors import ConfigError
from hartman.ptcell import tau_unit
from hartman.model import BarrierCell


# -- ranges ------------------------------------------------------------------
def test_range_forms():
    assert parse_range("2").values().tolist() == [2.0]
    assert parse_range("0.5:40:200").steps == 200
    r = parse_range("1:100:3:log")
    assert r.log and np.allclose(r.values(), [1, 10, 100])


@pytest.mark.parametrize("text", ["1:2", "1:2:0", "2:1:3", "1:2:x", "1:2:3:lin", "0:1:3:log", "1:2:1", "nan:1:2"])
def test_bad_ranges(text):
    with pytest.raises(ValueError):
        parse_range(text)


def test_integer_ranges():
    assert parse_range("1:5:5", integer=True).values().tolist() == [1, 2, 3, 4, 5]
    with pytest.raises(ValueError):
        parse_range("1:2:3", integer=True)
    with pytest.raises(ValueError):
        parse_range("0", integer=True)


@given(st.floats(0.01, 100), st.floats(0, 100), st.integers(2, 50), st.booleans())
def test_range_endpoints_inclusive(lo, span, steps, log):
    hi = lo + span
    vals = parse_range(f"{lo!r}:{hi!r}:{steps}" + (":log" if log else "")).values()
    assert len(vals) == steps
    assert math.isclose(vals[0], lo) and math.isclose(vals[-1], hi)
    assert np.all(np.diff(vals) >= 0)


# -- config files ---------------------------------------------------------------
def test_comments_blank_lines_and_overrides():
    text = "# scan\nmode = unit   # trailing\n\nu=3\nv = 0.5\nk=0.5:1.5:3\n"
    cfg = parse_config(text, {"u": "4", "v": None})
    assert cfg.mode == "unit" and cfg.u == 4.0 and cfg.v == 0.5 and cfg.k.steps == 3


def test_all_errors_reported_together():
    with pytest.raises(ConfigError) as exc:
        parse_config("mode=bogus\nfoo=1\nprecision=40\nv=-1\nb=0:1:3\njunk line\n")
    msgs = "\n".join(exc.value.errors)
    for needle in ("mode", "unknown key 'foo'", "precision", "v=", "b:", "expected key=value"):
        assert needle in msgs


def test_regime_check_and_override():
    with pytest.raises(ConfigError):
        parse_config("u=1\nk=1")
    assert parse_config("u=1\nk=1\nallow_propagating=true").allow_propagating


def test_key_value_parser_normalises_keys():
    pairs, errors = parse_key_values("Allow-Propagating = yes\n")
    assert pairs == {"allow_propagating": "yes"} and not errors


# -- scans ---------------------------------------------------------------------------
def _rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_unit_scan_values_and_format():
    cfg = parse_config("mode=unit\nu=2\nv=1\nk=1\nb=0.5:2:4")
    text = cli.scan_csv(cfg)
    assert "\r" not in text and text.endswith("\n")
    rows = _rows(text)
    assert rows[0] == cli.COLUMNS["unit"]
    assert len(rows) == 5
    for r in rows[1:]:
        b, tau = float(r[2]), float(r[4])
        assert tau == tau_unit(BarrierCell(2, 1, b), 1.0).tau  # 17 digits round-trip exactly
        assert r[-1] == ""


def test_precision_controls_digits():
    cfg = parse_config("mode=unit\nb=1\nprecision=5")
    row = _rows(cli.scan_csv(cfg))[1]
    assert row[4] == format(tau_unit(BarrierCell(2, 1, 1), 1.0).tau, ".5g")


@pytest.mark.parametrize("mode", ["layered", "real-limit", "non-pt"])
def test_other_modes_produce_clean_grids(mode):
    extra = {"layered": "n=1:3:3\nb=0.5", "real-limit": "u=5\nn=1:3:3\nlength=1", "non-pt": "epsilon=1.05\nb=10:14:3"}
    cfg = parse_config(f"mode={mode}\n{extra[mode]}")
    res = cli.run_scan(cfg)
    assert res.header == cli.COLUMNS[mode]
    assert res.sentinel_rows == 0
    assert all(len(r) == len(res.header) for r in res.rows)


def test_sentinel_rows_for_propagating_points():
    cfg = parse_config("mode=unit\nu=2\nk=0.5:2:4\nallow_propagating=true")
    res = cli.run_scan(cfg)
    assert res.sentinel_rows == 2
    bad = [r for r in res.rows if r[-1]]
    assert all(math.isnan(x) for x in bad[0][4:8]) and "RegimeError" in bad[0][-1]


def test_format_value():
    assert cli.format_value(3) == "3"
    assert cli.format_value(0.1) == "0.10000000000000001"
    assert cli.format_value(math.nan) == "nan"


# -- command line ---------------------------------------------------------------------
def test_main_exit_codes(tmp_path, capsys):
    out = tmp_path / "u.csv"
    assert cli.main(["unit", "--b", "0.5:1:2", "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 3
    assert cli.main(["unit", "--u", "2", "--k", "1:2:2", "--allow-propagating", "--out", str(out)]) == 2
    assert cli.main(["unit", "--u", "1", "--k", "1"]) == 1
    assert cli.main(["unit", "--config", str(tmp_path / "missing.cfg")]) == 1
    with pytest.raises(SystemExit) as exc:
        cli.main(["unit", "--nope"])
    assert exc.value.code == 1


def test_flags_override_config_file(tmp_path):
    cfg = tmp_path / "scan.cfg"
    cfg.write_text("# comment\nu=3\nv=2\nb=1\n")
    out = tmp_path / "o.csv"
    assert cli.main(["unit", "--config", str(cfg), "--v", "0.5", "--out", str(out)]) == 0
    row = _rows(out.read_text())[1]
    assert float(row[0]) == 3.0 and float(row[1]) == 0.5


def test_audit_and_acceptance_subcommands(tmp_path, capsys):
    out = tmp_path / "audit.txt"
    assert cli.main(["audit", "--out", str(out)]) == 0
    assert "summary:" in out.read_text()
    assert cli.main(["acceptance", "--only", "1,3"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert [l[:9] for l in lines] == ["PASS [ 1]", "PASS [ 3]"]
    assert cli.main(["acceptance", "--only", "11"]) == 1


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "hartman", "unit", "--b", "1", "--precision", "6"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert out.stdout.splitlines()[0].startswith("u,v,b,k,tau_closed")
