"""Command-line front end.

Subcommands ``unit``, ``layered``, ``real-limit`` and ``non-pt`` write a
CSV grid; ``audit`` writes the plain-text audit report; ``acceptance`` runs
the acceptance checks.  Exit codes: 0 clean, 2 rows with an error sentinel
(or failed acceptance checks), 1 usage/configuration/output errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np

from . import acceptance, audit, layered, nonpt, ptcell, reallimit, spm
from .config import MODES, ScanConfig, parse_config
from .errors import ConfigError, HartmanError
from .model import BarrierCell, LayeredSystem
from .xfer import SegmentStack

EXIT_OK, EXIT_USAGE, EXIT_SENTINEL = 0, 1, 2

COLUMNS = {
    "unit": ["u", "v", "b", "k", "tau_closed", "tau_numeric", "tau_infinity", "abs_gap", "error"],
    "layered": ["u", "v", "n", "b", "k", "tau_layered", "tau_numeric", "tau_infinity", "abs_gap", "error"],
    "real-limit": [
        "u", "v", "length", "n", "b", "k", "gchi", "gchi_real", "abs_dev_gchi",
        "tau_layered", "tau_square", "abs_dev_tau", "error",
    ],
    "non-pt": [
        "u", "v", "epsilon", "b", "k", "tau_numeric", "tau_expansion", "tau_infinity",
        "slope", "slope_predicted", "error",
    ],
}


@dataclass
class ScanResult:
    header: list
    rows: list

    @property
    def sentinel_rows(self) -> int:
        return sum(1 for r in self.rows if r[-1])


def _nan_row(fixed: list, n_values: int, exc: Exception) -> list:
    return fixed + [math.nan] * n_values + [f"{type(exc).__name__}: {exc}"]


def _tau_inf_or_raise(u, v, k):
    return ptcell.tau_infinity(u, v, k).tau


def _unit_rows(cfg: ScanConfig):
    for b in cfg.b.values():
        for k in cfg.k.values():
            fixed = [cfg.u, cfg.v, b, k]
            try:
                cell = BarrierCell(cfg.u, cfg.v, float(b))
                closed = ptcell.tau_unit(cell, float(k)).tau
                num = spm.tunneling_time_numeric(SegmentStack.from_cell(cell), float(k)).tau
                tinf = _tau_inf_or_raise(cfg.u, cfg.v, float(k))
                yield fixed + [closed, num, tinf, abs(closed - tinf), ""]
            except HartmanError as exc:
                yield _nan_row(fixed, 4, exc)


def _layered_rows(cfg: ScanConfig):
    for n in cfg.n_values():
        for b in cfg.b.values():
            for k in cfg.k.values():
                fixed = [cfg.u, cfg.v, n, b, k]
                try:
                    sys_ = LayeredSystem(BarrierCell(cfg.u, cfg.v, float(b)), n)
                    tl = layered.tau_layered(sys_, float(k)).tau
                    num = spm.phase_time(lambda kk: layered.layered_transmission(sys_, kk), float(k), sys_.length).tau
                    tinf = _tau_inf_or_raise(cfg.u, cfg.v, float(k))
                    yield fixed + [tl, num, tinf, abs(tl - tinf), ""]
                except HartmanError as exc:
                    yield _nan_row(fixed, 4, exc)


def _real_limit_rows(cfg: ScanConfig):
    L = cfg.length
    for n in cfg.n_values():
        for k in cfg.k.values():
            b = L / (2.0 * n)
            fixed = [cfg.u, cfg.v, L, n, b, k]
            try:
                g = layered.gchi_raw(cfg.u, cfg.v, float(k), n, b)
                gr = reallimit.gchi_real_limit(cfg.u, float(k), L)
                t = layered.tau_layered_raw(cfg.u, cfg.v, float(k), n, b)
                ts = spm.square_barrier_time(cfg.u, L, float(k)).tau
                yield fixed + [g, gr, abs(g - gr), t, ts, abs(t - ts), ""]
            except HartmanError as exc:
                yield _nan_row(fixed, 6, exc)


def _nonpt_rows(cfg: ScanConfig):
    bs = cfg.b.values()
    for eps in cfg.epsilon.values():
        for k in cfg.k.values():
            k = float(k)
            taus, rows = [], []
            for b in bs:
                fixed = [cfg.u, cfg.v, eps, b, k]
                try:
                    tn = nonpt.tau_epsilon_numeric(BarrierCell(cfg.u, cfg.v, float(b), float(eps)), k).tau
                    te = nonpt.tau_epsilon_expansion(cfg.u, cfg.v, k, float(eps), float(b)).tau
                    tinf = _tau_inf_or_raise(cfg.u, cfg.v, k)
                    rows.append(fixed + [tn, te, tinf])
                    taus.append(tn)
                except HartmanError as exc:
                    rows.append(_nan_row(fixed, 5, exc))
            ok = [i for i, r in enumerate(rows) if len(r) == 8]
            slope = math.nan
            if len(ok) >= 2:
                slope = float(np.polyfit(bs[ok], np.array(taus), 1)[0])
            try:
                pred = (eps - 1.0) * nonpt.quoted_k1(cfg.u, cfg.v, k) / (2.0 * k)
            except HartmanError:
                pred = math.nan
            for r in rows:
                yield r + [slope, pred, ""] if len(r) == 8 else r


_GENERATORS = {"unit": _unit_rows, "layered": _layered_rows, "real-limit": _real_limit_rows, "non-pt": _nonpt_rows}


def run_scan(cfg: ScanConfig) -> ScanResult:
    """Evaluate the grid of ``cfg`` in deterministic order."""
    if cfg.mode not in _GENERATORS:
        raise ValueError(f"mode {cfg.mode!r} does not produce a CSV grid")
    return ScanResult(list(COLUMNS[cfg.mode]), list(_GENERATORS[cfg.mode](cfg)))


def format_value(x, precision: int = 17) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return format(float(x), f".{precision}g")


def write_csv(result: ScanResult, stream: TextIO, precision: int = 17) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(result.header)
    for row in result.rows:
        w.writerow([format_value(x, precision) for x in row])


def scan_csv(cfg: ScanConfig) -> str:
    buf = io.StringIO()
    write_csv(run_scan(cfg), buf, cfg.precision)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------
class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value file ('#' comments); flags override it")
    p.add_argument("--u", help="barrier height")
    p.add_argument("--v", help="imaginary part of the potential")
    p.add_argument("--k", help="wavenumber or range min:max:steps[:log]")
    p.add_argument("--b", help="barrier half-width or range")
    p.add_argument("--n", help="number of cells or integer range")
    p.add_argument("--epsilon", help="symmetry-breaking factor or range")
    p.add_argument("--length", help="total barrier length (real-limit mode)")
    p.add_argument("--out", help="output file ('-' for stdout)")
    p.add_argument("--precision", help="significant digits in the CSV (1-17, default 17)")
    p.add_argument("--allow-propagating", action="store_true", default=None, help="permit k**2 >= u")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hartman", description="Tunneling-time scans for layered complex barriers.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for mode in MODES:
        _common(sub.add_parser(mode, help=f"{mode} scan" if mode != "audit" else "plain-text audit report"))
    acc = sub.add_parser("acceptance", help="run the acceptance checks")
    acc.add_argument("--only", help="comma-separated criterion numbers")
    acc.add_argument("--out", help="also write the report to this file")
    return parser


def _overrides(ns: argparse.Namespace) -> dict:
    keys = ("u", "v", "k", "b", "n", "epsilon", "length", "out", "precision")
    d = {k: getattr(ns, k) for k in keys if getattr(ns, k) is not None}
    if ns.allow_propagating:
        d["allow_propagating"] = "true"
    return d


def _open_out(path: str):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", newline="", encoding="utf-8"), True


def _emit(text: str, path: str) -> None:
    stream, close = _open_out(path)
    try:
        stream.write(text)
    finally:
        if close:
            stream.close()


def _run_acceptance(ns) -> int:
    try:
        only = [int(x) for x in ns.only.split(",")] if ns.only else None
        if only and not all(1 <= i <= len(acceptance.CRITERIA) for i in only):
            raise ValueError("criterion numbers must be between 1 and 10")
    except ValueError as exc:
        print(f"hartman: error: --only: {exc}", file=sys.stderr)
        return EXIT_USAGE
    results = acceptance.run_all(only)
    text = "".join(r.line() + "\n" for r in results)
    sys.stdout.write(text)
    if ns.out:
        try:
            _emit(text, ns.out)
        except OSError as exc:
            print(f"hartman: cannot write {ns.out}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    return EXIT_OK if all(r.passed for r in results) else EXIT_SENTINEL


def main(argv: Iterable[str] | None = None) -> int:
    ns = build_parser().parse_args(None if argv is None else list(argv))
    if ns.command == "acceptance":
        return _run_acceptance(ns)
    text = ""
    if ns.config:
        try:
            with open(ns.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            print(f"hartman: cannot read config {ns.config}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    overrides = _overrides(ns)
    overrides["mode"] = ns.command
    try:
        cfg = parse_config(text, overrides)
    except ConfigError as exc:
        for e in exc.errors:
            print(f"hartman: config error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if cfg.mode == "audit":
            _emit(audit.audit_text(), cfg.out)
            return EXIT_OK
        result = run_scan(cfg)
        buf = io.StringIO()
        write_csv(result, buf, cfg.precision)
        _emit(buf.getvalue(), cfg.out)
    except OSError as exc:
        print(f"hartman: cannot write {cfg.out}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    n_bad = result.sentinel_rows
    if n_bad:
        print(f"hartman: {n_bad} row(s) carry an error sentinel", file=sys.stderr)
        return EXIT_SENTINEL
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
