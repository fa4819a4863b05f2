"""Command-line interface: ``sweep``, ``figure`` and ``verify``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .figures import FIGURE_IDS, reproduce_figure
from .sweep import ConfigError, config_to_dict, load_config, rows_to_csv, run_scenario_sweep
from .verify import SUITES, exit_code, verify_consistency


def _cmd_sweep(args) -> int:
    try:
        config = load_config(args.config)
        changes = {}
        if args.verify:
            changes["verify"] = True
        if args.variant:
            changes["variant"] = args.variant
        if changes:
            config = replace(config, **changes)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rows = run_scenario_sweep(config)
    text = rows_to_csv(rows)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        stem = Path(args.config).stem
        (out / f"{stem}.csv").write_text(text)
        manifest = {"config": config_to_dict(config), "code_version": __version__, "rows": len(rows)}
        (out / f"{stem}_manifest.json").write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(text)
    failed = [r for r in rows if not r.ok]
    unverified = [r for r in rows if r.ok and not r.verified]
    for r in failed:
        print(f"row {r.axis_value!r}: {r.error}", file=sys.stderr)
    for r in unverified:
        print(
            f"row {r.axis_value!r}: oracle residuals parity={r.parity_residual!r} qfi={r.qfi_residual!r}",
            file=sys.stderr,
        )
    return 1 if failed or unverified else 0


def _cmd_figure(args) -> int:
    ids = FIGURE_IDS if args.id == "all" else (args.id,)
    status = 0
    for fig_id in ids:
        result = reproduce_figure(fig_id, args.out, gnuplot=args.gnuplot)
        # axis values below a curve's own squeezed-port photon number are expected gaps
        hard = [
            row for rows in result.rows.values() for row in rows
            if row.error and not row.error.startswith("UnattainableTargetError")
        ]
        gaps = result.error_rows - len(hard)
        print(f"{fig_id}: {len(result.files)} file(s) in {args.out}" + (f", {gaps} unattainable point(s)" if gaps else ""))
        for row in hard:
            print(f"  {row.kind} ops={row.ops} at {row.axis_value!r}: {row.error}", file=sys.stderr)
        if hard:
            status = 1
    return status


def _cmd_verify(args) -> int:
    report = verify_consistency(args.suite)
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.json:
        Path(args.json).write_text(text)
        for name, check in sorted(report["checks"].items()):
            print(f"{'PASS' if check['passed'] else 'FAIL'} {name}: max residual {check['max_residual']}")
        for finding in report["findings"]:
            print(f"NOTE {finding['id']}: {'discrepancy' if finding['discrepancy'] else 'consistent'}")
    else:
        sys.stdout.write(text)
    return exit_code(report)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="paritymzi", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run a parameter sweep from a key = value config file")
    p.add_argument("config")
    p.add_argument("--out", help="directory for the CSV and manifest (default: CSV to stdout)")
    p.add_argument("--verify", action="store_true", help="evaluate the Fock oracle alongside")
    p.add_argument("--variant", choices=("literal", "series"))
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("figure", help="write the data files for one figure")
    p.add_argument("id", choices=FIGURE_IDS + ("all",))
    p.add_argument("--out", default="figures")
    p.add_argument("--gnuplot", action="store_true", help="also write a gnuplot script")
    p.set_defaults(func=_cmd_figure)

    p = sub.add_parser("verify", help="run the consistency suite")
    p.add_argument("--suite", choices=SUITES, default="quick")
    p.add_argument("--json", help="write the report here instead of stdout")
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
