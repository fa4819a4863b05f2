"""Data files for the seven published figures.

Each figure is a set of curve families. A family is written as one CSV whose
``ops`` column tells its curves apart; a JSON manifest records every sweep
parameter so any number in a CSV can be regenerated from it alone.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .states import Kind, minimum_nbar, mean_photon_number, StateSpec
from .sweep import (
    Axis,
    Constraint,
    ResultRow,
    Spacing,
    SweepConfig,
    config_to_dict,
    format_value,
    rows_to_csv,
    run_many,
)

FIGURE_IDS = (
    "fig1a", "fig1b", "fig2a", "fig2b", "fig3a", "fig3b",
    "fig4a", "fig4b", "fig5", "fig6", "fig7",
)
POINTS = 401

# not fixed by the figure captions; chosen here and written to the manifest
FIG1A_R = 0.5
FIG1A_OPS = (0, 10)
FIG1B_R = (0.0, 2.0)
FIG1B_OPS = (0, 1, 2, 3)
FIG2B_NBAR = 4.0
FIG3_PHI = (0.0, 0.1)
FIG4_PHI = (0.0, 0.1)
FIG567_NBAR = (4.0, 200.0)


@dataclass
class Family:
    name: str
    configs: list[SweepConfig]
    note: str = ""


@dataclass
class FigureSpec:
    id: str
    description: str
    families: list[Family] = field(default_factory=list)
    notes: dict = field(default_factory=dict)


def _curves(base: dict, ops_list, kinds=(Kind.ADDED, Kind.SUBTRACTED)) -> list[Family]:
    fams = [Family("plain", [SweepConfig(kind=Kind.PLAIN, ops=0, **base)])]
    for kind in kinds:
        cfgs = [SweepConfig(kind=kind, ops=m, **base) for m in ops_list if m > 0]
        fams.append(Family(kind.value, cfgs))
    return fams


def figure_spec(fig_id: str) -> FigureSpec:
    if fig_id not in FIGURE_IDS:
        raise KeyError(f"unknown figure {fig_id!r}; choose from {', '.join(FIGURE_IDS)}")
    phi_full = dict(axis=Axis.PHI, start=-np.pi, stop=np.pi, count=POINTS)
    if fig_id == "fig2a":
        base = dict(r=0.3, nz=4.0, **phi_full)
        return FigureSpec(fig_id, "parity vs phi at r = 0.3, z = 2", _curves(base, (1, 2, 3)))
    if fig_id == "fig2b":
        base = dict(target_nbar=FIG2B_NBAR, nz=4.0, **phi_full)
        return FigureSpec(
            fig_id,
            "parity vs phi at equal squeezed-port photon number, z = 2",
            _curves(base, (1, 2, 3)),
            {"target_nbar": "chosen: caption gives no value"},
        )
    if fig_id in ("fig3a", "fig3b"):
        n = 4.0 if fig_id == "fig3a" else 16.0
        base = dict(target_nbar=n, nz=n, axis=Axis.PHI, start=FIG3_PHI[0], stop=FIG3_PHI[1], count=POINTS)
        return FigureSpec(
            fig_id,
            f"delta phi vs phi, n_a = n_s = n_z = {n:g}",
            _curves(base, (1, 2, 3)),
            {"phi_range": "chosen", "ops": "chosen: legend not given"},
        )
    if fig_id == "fig4a":
        base = dict(r=0.9, nz=100.0, axis=Axis.PHI, start=FIG4_PHI[0], stop=FIG4_PHI[1], count=POINTS)
        return FigureSpec(fig_id, "delta phi vs phi, r = 0.9, n_z = 100", _curves(base, (1, 2, 3)),
                          {"phi_range": "chosen"})
    if fig_id == "fig4b":
        base = dict(target_nbar=16.0, nz=100.0, axis=Axis.PHI, start=FIG4_PHI[0], stop=FIG4_PHI[1], count=POINTS)
        return FigureSpec(fig_id, "delta phi vs phi, n_a = n_s = 16, n_z = 100", _curves(base, (1, 2, 3)),
                          {"phi_range": "chosen"})
    if fig_id in ("fig5", "fig6"):
        phi = 1e-4 if fig_id == "fig5" else 0.015
        base = dict(
            phi=phi, axis=Axis.TOTAL_NBAR, start=FIG567_NBAR[0], stop=FIG567_NBAR[1], count=POINTS,
            spacing=Spacing.LOG, constraint=Constraint.FIX_NBAR_SPLIT,
        )
        return FigureSpec(
            fig_id,
            f"delta phi vs total photon number at phi = {phi:g}, n_squeezed = n_z = N / 2",
            _curves(base, (1, 2, 3, 6)),
            {"constraint": "fix_nbar_split", "nbar_range": "chosen"},
        )
    if fig_id == "fig7":
        base = dict(
            r=0.9, phi=1e-4, axis=Axis.TOTAL_NBAR, start=FIG567_NBAR[0], stop=FIG567_NBAR[1],
            count=POINTS, spacing=Spacing.LOG, constraint=Constraint.FIX_R,
        )
        return FigureSpec(
            fig_id,
            "delta phi vs total photon number at r = 0.9, phi = 1e-4; only n_z varies",
            _curves(base, (1, 2, 3, 6)),
            {"nbar_range": "chosen", "ops": "chosen: legend not given"},
        )
    if fig_id == "fig1a":
        return FigureSpec(fig_id, f"mean photon number vs ops at r = {FIG1A_R}",
                          notes={"r": "chosen", "ops_range": list(FIG1A_OPS)})
    return FigureSpec(fig_id, "mean photon number vs r",
                      notes={"r_range": list(FIG1B_R), "ops": list(FIG1B_OPS)})


# ---------------------------------------------------------------------------
# photon-number tables (fig1)
# ---------------------------------------------------------------------------


def _nbar(kind: Kind, ops: int, r: float) -> float:
    if ops == 0:
        kind = Kind.PLAIN
    if r == 0.0:
        return minimum_nbar(kind, ops)
    return mean_photon_number(StateSpec(kind, r, ops))


def _table_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_value(v) for v in row])
    return buf.getvalue()


def photon_number_tables(fig_id: str) -> dict[str, str]:
    if fig_id == "fig1a":
        ops = range(FIG1A_OPS[0], FIG1A_OPS[1] + 1)
        rows = [
            [m, FIG1A_R, _nbar(Kind.ADDED, m, FIG1A_R), _nbar(Kind.SUBTRACTED, m, FIG1A_R),
             _nbar(Kind.PLAIN, 0, FIG1A_R)]
            for m in ops
        ]
        return {"fig1a.csv": _table_csv(["ops", "r", "nbar_added", "nbar_subtracted", "nbar_plain"], rows)}
    rs = [float(x) for x in np.linspace(FIG1B_R[0], FIG1B_R[1], POINTS)]
    header = ["r", "nbar_plain"]
    for m in FIG1B_OPS[1:]:
        header += [f"nbar_added_{m}", f"nbar_subtracted_{m}"]
    rows = []
    for r in rs:
        row = [r, _nbar(Kind.PLAIN, 0, r)]
        for m in FIG1B_OPS[1:]:
            row += [_nbar(Kind.ADDED, m, r), _nbar(Kind.SUBTRACTED, m, r)]
        rows.append(row)
    return {"fig1b.csv": _table_csv(header, rows)}


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------


@dataclass
class FigureResult:
    id: str
    files: dict[str, str]
    manifest: dict
    rows: dict[str, list[ResultRow]] = field(default_factory=dict)

    @property
    def error_rows(self) -> int:
        return sum(1 for rows in self.rows.values() for r in rows if r.error)


def compute_figure(fig_id: str, workers: int | None = None) -> FigureResult:
    spec = figure_spec(fig_id)
    manifest = {
        "figure": fig_id,
        "description": spec.description,
        "code_version": __version__,
        "points_per_curve": POINTS,
        "notes": spec.notes,
        "files": {},
    }
    if fig_id in ("fig1a", "fig1b"):
        files = photon_number_tables(fig_id)
        manifest["files"] = {name: {"kind": "photon_number_table"} for name in files}
        return FigureResult(fig_id, files, manifest)
    configs = [c for fam in spec.families for c in fam.configs]
    results = iter(run_many(configs, workers))
    files, rows = {}, {}
    for fam in spec.families:
        fam_rows = [row for _ in fam.configs for row in next(results)]
        name = f"{fig_id}_{fam.name}.csv"
        files[name] = rows_to_csv(fam_rows)
        rows[fam.name] = fam_rows
        manifest["files"][name] = {
            "family": fam.name,
            "curves": [config_to_dict(c) for c in fam.configs],
            "error_rows": sum(1 for r in fam_rows if r.error),
        }
    return FigureResult(fig_id, files, manifest, rows)


def gnuplot_script(result: FigureResult) -> str:
    fig_id = result.id
    lines = [f"# {result.manifest['description']}", "set datafile separator ','", "set key autotitle columnhead"]
    if fig_id == "fig1a":
        return "\n".join(lines + [
            "set xlabel 'ops'", "set ylabel 'mean photon number'",
            "plot for [c=3:5] 'fig1a.csv' using 1:c with linespoints", "",
        ])
    if fig_id == "fig1b":
        return "\n".join(lines + [
            "set xlabel 'r'", "set ylabel 'mean photon number'", "set logscale y",
            "plot for [c=2:8] 'fig1b.csv' using 1:c with lines", "",
        ])
    parity = fig_id.startswith("fig2")
    xcol = "axis_value"
    ycol = "parity" if parity else "delta_phi"
    lines += [f"set xlabel '{'phi' if fig_id < 'fig5' else 'total photon number'}'", f"set ylabel '{ycol}'"]
    if fig_id in ("fig5", "fig6", "fig7"):
        lines.append("set logscale xy")
    elif not parity:
        lines.append("set logscale y")
    plots = []
    for name, info in sorted(result.manifest["files"].items()):
        for c in info["curves"]:
            title = f"{info['family']} {c['ops']}"
            plots.append(
                f"'{name}' using (strcol('ops') eq '{c['ops']}' ? column('{xcol}') : NaN):'{ycol}' "
                f"with lines title '{title}'"
            )
    if not parity:
        first = sorted(result.manifest["files"])[0]
        plots.append(f"'{first}' using '{xcol}':'hl' with lines dt 2 title 'HL'")
        if fig_id in ("fig5", "fig6", "fig7"):
            plots.append(f"'{first}' using '{xcol}':'snl' with lines dt 3 title 'SNL'")
    lines.append("plot " + ", \\\n     ".join(plots))
    return "\n".join(lines) + "\n"


def reproduce_figure(fig_id: str, out_dir: str | Path, gnuplot: bool = False,
                     workers: int | None = None) -> FigureResult:
    """Compute a figure and write its CSVs, manifest and optional gnuplot script."""
    result = compute_figure(fig_id, workers)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, text in result.files.items():
        (out / name).write_text(text)
    if gnuplot:
        name = f"{fig_id}.gp"
        (out / name).write_text(gnuplot_script(result))
        result.manifest["gnuplot"] = name
    (out / f"{fig_id}_manifest.json").write_text(json.dumps(result.manifest, sort_keys=True, indent=2) + "\n")
    return result
