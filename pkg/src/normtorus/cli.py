"""Command line: ``normtorus {table,verify,asymptotics}``.

Configuration comes from flags, optionally seeded by ``--config FILE`` holding
``key=value`` lines; flags win. Exit codes: 0 success, 1 verification failure
(or flagged exponent, or overflow), 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from normtorus import __version__, charcount, lseries
from normtorus.field import field_from_label
from normtorus.verify import DEFAULT_FIELDS, SUITES, VerifyConfig, run_suites

EXPONENT_THRESHOLD = 0.75

DEFAULTS = {
    "d": list(DEFAULT_FIELDS),
    "oracle_cap": 4096,
    "format": "text",
    "out": None,
    "suite": [],
    "grid_points": 5,
    "series_n": 100_000,
    "trivial_infinity": False,
}
COMMAND_DEFAULTS = {
    "table": {"n_max": 100},
    "verify": {"n_max": 2000},
    "asymptotics": {"x_max": 10**6},
}

COLUMNS = {
    "table": ["d", "disc", "h", "n", "C", "Phi", "Phi1", "closed_form"],
    "verify": ["suite", "status", "checked", "counterexample"],
    "asymptotics": [
        "d", "disc", "h", "w", "Y", "X", "partial_sum", "main_term", "abs_error",
        "rel_error", "fitted_exponent", "sup_error", "envelope_exponent", "flagged",
    ],
}


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()]


CONFIG_KEYS = {
    "d": _int_list,
    "n_max": int,
    "x_max": int,
    "oracle_cap": int,
    "format": str,
    "out": str,
    "suite": lambda s: [x for x in s.replace(",", " ").split()],
    "grid_points": int,
    "series_n": int,
    "trivial_infinity": lambda s: s.strip().lower() in ("1", "true", "yes", "on"),
}


def read_config_file(path: str) -> dict:
    out = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc.strerror}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: expected key=value with a known key, got {raw!r}")
        try:
            out[key] = CONFIG_KEYS[key](value.strip())
        except ValueError:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {value.strip()!r}") from None
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="FILE", help="key=value defaults; flags override")
    common.add_argument("--d", type=int, action="append", metavar="D",
                        help="squarefree d < 0 or fundamental discriminant (repeatable)")
    common.add_argument("--oracle-cap", type=int)
    common.add_argument("--format", choices=["csv", "json", "text"])
    common.add_argument("--out", metavar="PATH")

    p = argparse.ArgumentParser(prog="normtorus", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("table", parents=[common], help="Phi, Phi1 and the closed form for n <= n_max")
    t.add_argument("--n-max", type=int)

    v = sub.add_parser("verify", parents=[common], help="closed forms against the oracle and series checks")
    v.add_argument("--n-max", type=int, help="largest ideal norm / conductor multiple checked")
    v.add_argument("--suite", action="append", choices=sorted(SUITES), metavar="NAME",
                   help=f"one of {', '.join(SUITES)} (repeatable; default all)")
    v.add_argument("--series-n", type=int, help="truncation length for the series identities")

    a = sub.add_parser("asymptotics", parents=[common], help="partial sums against the main term")
    a.add_argument("--x-max", type=int, help="largest analytic conductor (<= 10^7)")
    a.add_argument("--grid-points", type=int, help="geometric grid size (>= 5)")
    a.add_argument("--trivial-infinity", action="store_true", default=None,
                   help="count only forms of trivial infinity type")
    return p


def resolve(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    cfg.update(COMMAND_DEFAULTS[args.command])
    if args.config:
        cfg.update(read_config_file(args.config))
    for key in CONFIG_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    for key in ("n_max", "x_max", "oracle_cap", "series_n", "grid_points"):
        if key in cfg and cfg[key] is not None and cfg[key] < 1:
            raise UsageError(f"{key.replace('_', '-')} must be positive")
    if cfg["format"] not in ("csv", "json", "text"):
        raise UsageError(f"unknown format {cfg['format']!r}")
    unknown = [s for s in cfg["suite"] if s not in SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s): {', '.join(unknown)}")
    try:
        fields = [field_from_label(d) for d in cfg["d"]]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cfg["fields"] = list(dict.fromkeys(fields))
    cfg["d"] = [fc.d for fc in cfg["fields"]]
    return cfg


def _public_config(command: str, cfg: dict) -> dict:
    keys = {
        "table": ["d", "n_max"],
        "verify": ["d", "n_max", "oracle_cap", "suite", "series_n"],
        "asymptotics": ["d", "x_max", "grid_points", "trivial_infinity"],
    }[command]
    out = {"command": command}
    out.update({k: cfg[k] for k in keys})
    if command == "verify":
        out["suite"] = cfg["suite"] or list(SUITES)
    return out


# ---------------------------------------------------------------- commands


def cmd_table(cfg: dict) -> tuple[list[dict], int]:
    n_max = cfg["n_max"]
    if n_max > lseries.MAX_CUTOFF:
        raise UsageError(f"n-max must be <= {lseries.MAX_CUTOFF}")
    rows = []
    for fc in cfg["fields"]:
        t = charcount.tables(fc, n_max)
        for n in range(1, n_max + 1):
            rows.append({
                "d": fc.d, "disc": fc.disc, "h": fc.h, "n": n, "C": n * fc.abs_disc,
                "Phi": int(t.Phi[n]), "Phi1": int(t.Phi1[n]),
                "closed_form": charcount.closed_form_count(fc, n),
            })
    return rows, 0


def cmd_verify(cfg: dict) -> tuple[list[dict], int]:
    if cfg["oracle_cap"] > 4096:
        print("warning: oracle cap above 4096; brute force may be slow", file=sys.stderr)
    vc = VerifyConfig(fields=cfg["fields"], n_max=cfg["n_max"], oracle_cap=cfg["oracle_cap"],
                      series_n=cfg["series_n"])
    results = run_suites(vc, cfg["suite"] or None)
    rows = [{
        "suite": r.suite, "status": "PASS" if r.passed else "FAIL",
        "checked": r.checked, "counterexample": r.counterexample,
    } for r in results]
    return rows, 0 if all(r.passed for r in results) else 1


def geometric_grid(y_max: int, points: int) -> list[int]:
    """points values from y_max/100 to y_max, evenly spaced in log Y."""
    grid = [round(y_max * 10 ** (-2 + 2 * i / (points - 1))) for i in range(points)]
    if grid[0] < 1 or len(set(grid)) != points:
        raise UsageError(f"cutoff {y_max} too small for {points} distinct grid points")
    return grid


def cmd_asymptotics(cfg: dict) -> tuple[list[dict], int]:
    if cfg["x_max"] > lseries.MAX_CUTOFF:
        raise UsageError(f"x-max must be <= {lseries.MAX_CUTOFF}")
    if cfg["grid_points"] < 5:
        raise UsageError("the exponent fit needs at least 5 grid points")
    rows, code = [], 0
    for fc in cfg["fields"]:
        grid = geometric_grid(cfg["x_max"] // fc.abs_disc, cfg["grid_points"])
        reports = lseries.asymptotic_report(fc, grid, cfg["trivial_infinity"])
        flagged = reports[0].fitted_exponent > EXPONENT_THRESHOLD
        if flagged:
            code = 1
            print(f"flag: d={fc.d} fitted exponent {reports[0].fitted_exponent:.4f} > "
                  f"{EXPONENT_THRESHOLD}", file=sys.stderr)
        for r in reports:
            rows.append({
                "d": fc.d, "disc": fc.disc, "h": fc.h, "w": fc.w, "Y": r.Y,
                "X": r.Y * fc.abs_disc, "partial_sum": r.partial_sum,
                "main_term": _num(r.main_term), "abs_error": _num(r.abs_error),
                "rel_error": _num(r.rel_error), "fitted_exponent": _num(r.fitted_exponent),
                "sup_error": _num(r.sup_error), "envelope_exponent": _num(r.envelope_exponent),
                "flagged": flagged,
            })
    return rows, code


def _num(x: float) -> float:
    # 12 significant digits keeps output stable across BLAS/libm builds
    return float(f"{x:.12g}") if math.isfinite(x) else x


COMMANDS = {"table": cmd_table, "verify": cmd_verify, "asymptotics": cmd_asymptotics}


# ---------------------------------------------------------------- rendering


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def render(command: str, cfg: dict, rows: list[dict]) -> str:
    cols = COLUMNS[command]
    fmt = cfg["format"]
    if fmt == "json":
        doc = {"meta": {"config": _public_config(command, cfg), "version": __version__}, "rows": rows}
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([_cell(r[c]) for c in cols])
        return buf.getvalue()
    cells = [cols] + [[_cell(r[c]) for c in cols] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(cols))]
    return "".join(
        "  ".join(v.ljust(wd) for v, wd in zip(row, widths)).rstrip() + "\n" for row in cells
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        rows, code = COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(f"normtorus: error: {exc}", file=sys.stderr)
        return 2
    except ArithmeticError as exc:  # includes OverflowError
        print(f"normtorus: error: {exc}", file=sys.stderr)
        return 1
    text = render(args.command, cfg, rows)
    if cfg["out"]:
        with open(cfg["out"], "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        out = getattr(sys.stdout, "buffer", None)
        if out is None:
            sys.stdout.write(text)
        else:
            out.write(text.encode("utf-8"))
        sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
