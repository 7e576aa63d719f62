"""Command-line surface: level tables, state-equation reports, verification.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 numeric failure.
"""
from __future__ import annotations

import argparse
import json
import sys

from .config import RunConfig, load_config
from .errors import ConfigError, NumericsError
from .observables import level_energy_ff, level_force
from .spectra import energy
from .statmech import build_ensemble, eos_report
from .statmech import EosRecord
from . import verify as verify_mod


def _fmt(value):
    """Shortest round-trip decimal, locale-independent."""
    return repr(float(value))


def _emit_table(header, rows, fmt, out_path):
    if fmt == "csv":
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(str(v) if isinstance(v, int) else _fmt(v)
                                  for v in row))
        text = "\n".join(lines) + "\n"
    else:
        records = [dict(zip(header, (v if isinstance(v, int) else float(v)
                                     for v in row))) for row in rows]
        text = json.dumps(records, indent=2) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_levels(cfg: RunConfig, fmt, out_path) -> int:
    conf = cfg.confinement()
    traj = cfg.trajectory()
    header = ("t", "n", "E_n", "F_n", "E_ff")
    rows = []
    for t in cfg.sweep_times():
        k = traj.kinematics(t)
        for n in range(conf.n_min, cfg.n_max + 1):
            rows.append((t, n, energy(conf, n, k.L),
                         level_force(conf, n, k),
                         level_energy_ff(conf, n, k)))
    _emit_table(header, rows, fmt, out_path)
    return 0


def cmd_eos(cfg: RunConfig, fmt, out_path) -> int:
    conf = cfg.confinement()
    traj = cfg.trajectory()
    ens = build_ensemble(conf, cfg.N, cfg.T0, cfg.L0)
    records = eos_report(conf, ens, traj, cfg.sweep_times(), cfg.regime)
    rows = []
    for r in records:
        rows.append(tuple(getattr(r, c) for c in EosRecord.COLUMNS))
        for note in r.notes:
            print(f"note (t={r.t}): {note}", file=sys.stderr)
    _emit_table(EosRecord.COLUMNS, rows, fmt, out_path)
    return 0


def cmd_verify(cfg: RunConfig, fmt, out_path, only=None) -> int:
    results = verify_mod.run_all(tdse_dt=cfg.tdse_dt,
                                 tdse_points=cfg.tdse_points, only=only)
    for r in results:
        print(r.line(), file=sys.stderr)
    report = {
        "all_passed": bool(all(r.passed for r in results)),
        "checks": [
            {"id": r.cid, "name": r.name, "passed": bool(r.passed),
             "measured": {k: (v if isinstance(v, str) else float(v))
                          for k, v in r.measured.items()},
             "detail": r.detail}
            for r in results
        ],
    }
    text = json.dumps(report, indent=2) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report["all_passed"] else 1


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="ffgas",
        description="Fast-forward expansion of an ideal 1D Fermi gas: "
                    "level tables, state-equation reports, verification.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
            ("levels", "per-level energies and forces over the time sweep"),
            ("eos", "nonequilibrium state-equation report"),
            ("verify", "run the acceptance checks")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON config path (defaults apply)")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"),
                       help="output format (default from config)")
        if name == "verify":
            p.add_argument("--only", nargs="+", metavar="ID",
                           help="run a subset of checks, e.g. --only c1 c6")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        fmt = args.format or cfg.out_format
        out_path = args.out or cfg.out_path
        if args.command == "levels":
            return cmd_levels(cfg, fmt, out_path)
        if args.command == "eos":
            return cmd_eos(cfg, fmt, out_path)
        return cmd_verify(cfg, fmt, out_path, only=args.only)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericsError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
