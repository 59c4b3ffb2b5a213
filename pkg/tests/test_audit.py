import pytest

from hartman import audit


@pytest.fixture(scope="module")
def report():
    return audit.build_report()


def test_report_sections(report):
    text = report.render()
    for sec in ("eps=1 derivatives, wavevector angles", "eps=1 derivatives, decay angles", "slope law",
                "series coefficients", "limit coefficients", "conventions"):
        assert f"[{sec}]" in text
    assert text.rstrip().splitlines()[-1].startswith("summary:")


def test_every_entry_has_a_verdict(report):
    for e in report.entries:
        line = e.line()
        assert ("[MATCH]" in line) != ("[MISMATCH]" in line)


def _names(entries):
    return {e.name.split(" @")[0] for e in entries}


def test_known_findings_are_flagged(report):
    bad = _names(report.findings())
    assert {"A3", "K0", "coefficient of x^9", "t = exp(-2ikb)/Q", "dQ1_dk", "dalpha_deps", "dQ2_deps"} <= bad
    assert "Q from A,B with J=rho/k^2+-k^2/rho" in bad
    assert "arctan P, zeta=alpha22-alpha11, eps=1.2, b=30" in bad


def test_confirmed_forms_match(report):
    ok = {e.name for e in report.entries if e.ok}
    assert "t = 4 exp(-2ikb)/Q" in ok
    assert "Q from A,B with J=rho/k+-k/rho" in ok
    assert "arctan P, zeta=alpha11-alpha22, eps=1.2, b=30" in ok
    for e in report.section("slope law"):
        if e.name.startswith("K1"):
            assert e.ok
    for e in report.section("series coefficients"):
        if e.name.startswith(("A5", "A7", "A9")):
            assert e.ok, e.line()


def test_deviation_is_absolute_near_zero():
    e = audit.AuditEntry("s", "n", 1e-14, 0.0, 1e-12)
    assert e.deviation == 1e-14 and e.ok
    e = audit.AuditEntry("s", "n", 2.0, 1.0, 1e-12)
    assert e.deviation == 1.0 and not e.ok


def test_nan_is_a_mismatch():
    assert not audit.AuditEntry("s", "n", float("nan"), 1.0, 1.0).ok
