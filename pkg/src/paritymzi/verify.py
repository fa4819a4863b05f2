"""Cross-checks of the closed forms against the Fock oracle and each other.

:func:`verify_consistency` returns a JSON-ready report. Checks carry a
tolerance and decide the exit code; findings are informational and record
places where a printed closed form and the exact series disagree.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import TruncationError
from .fock import apply_interferometer, build_input_state, coherent_cutoff, j2_variance_oracle, parity_oracle
from .interferometry import (
    Variant,
    k2_item_cosh,
    k2_radical_item,
    l2_item_sinh,
    l2_radical_item,
    parity_expectation,
    parity_sign,
    small_phi_parity_coeff,
)
from .sensitivity import (
    phase_uncertainty,
    phase_uncertainty_zero_limit,
    quantum_fisher_information,
)
from .states import Kind, Scenario, StateSpec, mean_photon_number, required_cutoff, second_moment_b2

SUITES = ("quick", "full")

ORACLE_TOL = 1e-8
QFI_TOL = 1e-7
CRB_BAND = (0.999, 1.001)
CRB_PHI = 1e-5
IDENTITY_TOL = 1e-10
TAYLOR_BAND = (5e3, 2e4)
RADICAL_SAMPLES = 300


@dataclass
class Check:
    name: str
    tolerance: object
    max_residual: float = 0.0
    points: int = 0
    failures: list = field(default_factory=list)
    worst_point: dict | None = None

    def record(self, residual: float, point: dict, ok: bool) -> None:
        self.points += 1
        if self.worst_point is None or not residual <= self.max_residual:
            self.max_residual = residual
            self.worst_point = point
        if not ok:
            self.failures.append({**point, "residual": residual})

    @property
    def passed(self) -> bool:
        return self.points > 0 and not self.failures

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "tolerance": self.tolerance,
            "max_residual": _finite_or_str(self.max_residual),
            "points": self.points,
            "worst_point": self.worst_point,
            # keep the report readable when a check breaks everywhere
            "failures": self.failures[:20],
            "failure_count": len(self.failures),
        }


def _finite_or_str(x: float):
    return x if math.isfinite(x) else str(x)


def _point(scenario: Scenario, **extra) -> dict:
    s = scenario.squeezed
    return {"kind": s.kind.value, "ops": s.ops, "r": s.r, "nz": scenario.nz, "theta": scenario.theta, **extra}


def _scenarios(ops_max: int, rs, nzs, theta: float = 0.0):
    for r, nz in itertools.product(rs, nzs):
        yield Scenario(StateSpec(Kind.PLAIN, r, 0), nz, theta)
        for kind, ops in itertools.product((Kind.ADDED, Kind.SUBTRACTED), range(1, ops_max + 1)):
            yield Scenario(StateSpec(kind, r, ops), nz, theta)


@dataclass(frozen=True)
class Grid:
    ops_max: int
    rs: tuple
    nzs: tuple
    phis: tuple
    crb_nzs: tuple
    cutoff_runs: tuple = ()
    identity_rs: tuple = ()


def suite_grid(suite: str) -> Grid:
    if suite == "quick":
        return Grid(
            ops_max=2,
            rs=(0.1, 0.3, 0.9),
            nzs=(0.0, 1.0, 4.0),
            phis=(0.0, 0.05, -0.3, 1.0, -2.5),
            crb_nzs=(1.0, 4.0),
            identity_rs=tuple(np.linspace(0.05, 2.0, 8)),
        )
    if suite == "full":
        return Grid(
            ops_max=3,
            rs=(0.1, 0.3, 0.9),
            nzs=(0.0, 1.0, 4.0),
            phis=(0.0, 0.05, -0.05, 0.3, -0.3, 1.0, -1.0, 2.5, -2.5),
            crb_nzs=(1.0, 4.0, 16.0),
            # extra oracle runs with cutoffs of at least 80 photons per mode
            cutoff_runs=(80,),
            identity_rs=tuple(np.linspace(0.01, 2.0, 40)),
        )
    raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------


def check_oracle_equivalence(grid: Grid) -> Check:
    check = Check("oracle_equivalence", ORACLE_TOL)
    for sc in _scenarios(grid.ops_max, grid.rs, grid.nzs):
        try:
            states = [(None, build_input_state(sc))]
            for floor in grid.cutoff_runs:
                # at least `floor` photons per mode, more where the tail rule demands it
                ca = max(floor, coherent_cutoff(sc.nz))
                cb = max(floor, required_cutoff(sc.squeezed))
                states.append((cb, build_input_state(sc, cutoff_a=ca, cutoff_b=cb)))
        except (TruncationError, ValueError) as exc:
            check.record(math.inf, _point(sc, error=str(exc)), False)
            continue
        for phi in grid.phis:
            analytic = parity_expectation(sc, phi)
            for cb, state in states:
                res = abs(analytic - parity_oracle(apply_interferometer(state, phi)))
                check.record(res, _point(sc, phi=phi, cutoff_b=cb), res <= ORACLE_TOL)
    return check


def check_crb_saturation(grid: Grid) -> tuple[Check, Check]:
    sat = Check("crb_saturation", list(CRB_BAND))
    qfi = Check("qfi_oracle", QFI_TOL)
    for sc in _scenarios(grid.ops_max, grid.rs, grid.crb_nzs):
        f = quantum_fisher_information(sc)
        ratio = phase_uncertainty(sc, CRB_PHI) * math.sqrt(f)
        sat.record(abs(ratio - 1.0), _point(sc, ratio=ratio), CRB_BAND[0] <= ratio <= CRB_BAND[1])
        res = abs(f - 4.0 * j2_variance_oracle(build_input_state(sc)))
        qfi.record(res, _point(sc), res <= QFI_TOL)
    return sat, qfi


def _observables(sc: Scenario) -> dict[str, float]:
    out = {
        "nbar": mean_photon_number(sc.squeezed),
        "b2": second_moment_b2(sc.squeezed),
        "qfi": quantum_fisher_information(sc),
        "lambda": small_phi_parity_coeff(sc),
    }
    for phi in (0.01, 0.3, 1.2, -2.0):
        out[f"parity@{phi}"] = parity_expectation(sc, phi)
        out[f"delta_phi@{phi}"] = phase_uncertainty(sc, phi)
    return out


def check_one_photon_identity(grid: Grid) -> Check:
    check = Check("one_photon_identity", IDENTITY_TOL)
    for r, nz in itertools.product(grid.identity_rs, (0.0, 4.0)):
        r = float(r)
        a = _observables(Scenario(StateSpec(Kind.ADDED, r, 1), nz))
        s = _observables(Scenario(StateSpec(Kind.SUBTRACTED, r, 1), nz))
        for key in a:
            res = abs(a[key] - s[key]) / max(1.0, abs(a[key]))
            check.record(res, {"r": r, "nz": nz, "observable": key}, res <= IDENTITY_TOL)
    return check


def check_addition_dominance(grid: Grid) -> Check:
    """Photon-number ordering, and the fixed-r phase-uncertainty ordering at equal nz."""
    check = Check("addition_dominance", "strict ordering")
    for r in np.linspace(0.02, 2.0, 25):
        r = float(r)
        plain = math.sinh(r) ** 2
        for m in range(1, 7):
            na = mean_photon_number(StateSpec(Kind.ADDED, r, m))
            ns = mean_photon_number(StateSpec(Kind.SUBTRACTED, r, m))
            # one added and one subtracted photon give the same state
            gap = na - ns if m > 1 else IDENTITY_TOL * max(1.0, na) - abs(na - ns)
            margin = min(gap, ns - plain)
            check.record(-margin, {"r": r, "ops": m, "quantity": "nbar"}, margin > 0)
    for m, nz in itertools.product((2, 3), (1.0, 10.0, 50.0, 100.0, 150.0)):
        da = phase_uncertainty(Scenario(StateSpec(Kind.ADDED, 0.9, m), nz), 1e-4)
        ds = phase_uncertainty(Scenario(StateSpec(Kind.SUBTRACTED, 0.9, m), nz), 1e-4)
        check.record(da - ds, {"r": 0.9, "ops": m, "nz": nz, "quantity": "delta_phi"}, da < ds)
    return check


def taylor_ratio(sc: Scenario) -> float:
    sigma = parity_sign(sc)
    lam = small_phi_parity_coeff(sc)

    def residual(phi):
        return abs(parity_expectation(sc, phi) - sigma * (1.0 - lam * phi * phi))

    return residual(1e-2) / residual(1e-3)


def check_taylor_residual(grid: Grid) -> Check:
    check = Check("taylor_residual", list(TAYLOR_BAND))
    for sc in _scenarios(2, grid.rs, grid.nzs):
        ratio = taylor_ratio(sc)
        ok = TAYLOR_BAND[0] <= ratio <= TAYLOR_BAND[1]
        dist = 0.0 if ok else min(abs(ratio - TAYLOR_BAND[0]), abs(ratio - TAYLOR_BAND[1]))
        check.record(dist, _point(sc, ratio=ratio), ok)
    return check


def check_radical_bounds(grid: Grid) -> Check:
    check = Check("radical_bounds", "[8/3, 6] and [0, 8/3]")
    for r in np.linspace(0.01, 3.0, RADICAL_SAMPLES):
        r = float(r)
        n = mean_photon_number(StateSpec(Kind.ADDED, r, 2))
        k_item = k2_radical_item(n)
        l_item = l2_item_sinh(r)
        over = max(8 / 3 - k_item, k_item - 6.0, -l_item, l_item - 8 / 3, 0.0)
        check.record(over, {"r": r, "k2_item": k_item, "l2_item": l_item}, over == 0.0)
    return check


# ---------------------------------------------------------------------------
# informational findings
# ---------------------------------------------------------------------------


def finding_zero_order_radicand() -> dict:
    """Which k = 0 small-phi closed form reaches the Cramer-Rao bound."""
    rows = []
    for r, nz in ((0.3, 4.0), (0.9, 4.0), (0.9, 16.0)):
        sc = Scenario(StateSpec(Kind.PLAIN, r), nz)
        crb = 1.0 / math.sqrt(quantum_fisher_information(sc))
        ratios = {v.value: phase_uncertainty_zero_limit(sc, v) / crb for v in Variant}
        rows.append({"r": r, "nz": nz, "ratio_to_crb": ratios})
    saturating = [
        v.value for v in Variant
        if all(abs(row["ratio_to_crb"][v.value] - 1.0) < 1e-6 for row in rows)
    ]
    return {
        "id": "zero_order_radicand",
        "summary": "k = 0 small-phi limit: radicand n^2 + n + 1 versus the exact series",
        "saturates_crb": saturating,
        "detail": rows,
        "discrepancy": saturating == [Variant.SERIES_CONSISTENT.value],
    }


def finding_two_photon_item() -> dict:
    """The printed sqrt(1 + 12 n) item against the exact n^2 + n - <b^2>^2."""
    rows = []
    for r in (0.1, 0.3, 0.9, 1.5):
        na = mean_photon_number(StateSpec(Kind.ADDED, r, 2))
        ns = mean_photon_number(StateSpec(Kind.SUBTRACTED, r, 2))
        rows.append({
            "r": r,
            "added_printed": k2_radical_item(na),
            "added_exact": k2_item_cosh(r),
            "subtracted_printed": l2_radical_item(ns),
            "subtracted_exact": l2_item_sinh(r),
        })
    worst = max(max(abs(x["added_printed"] - x["added_exact"]), abs(x["subtracted_printed"] - x["subtracted_exact"]))
                for x in rows)
    return {
        "id": "two_photon_item",
        "summary": "ops = 2 radical item in terms of the mean photon number versus cosh/sinh closed form",
        "max_abs_difference": worst,
        "detail": rows,
        "discrepancy": worst > 1e-10,
    }


def finding_subtracted_narrowing() -> dict:
    """Lambda versus ops at r = 0.3, nz = 4 for both families."""
    out = {}
    for kind in (Kind.ADDED, Kind.SUBTRACTED):
        lam = [small_phi_parity_coeff(Scenario(StateSpec(Kind.PLAIN if m == 0 else kind, 0.3, m), 4.0))
               for m in range(4)]
        out[kind.value] = {"lambda": lam, "strictly_increasing": all(b > a for a, b in zip(lam, lam[1:]))}
    return {
        "id": "peak_narrowing",
        "summary": "central-peak curvature versus ops at r = 0.3, nz = 4",
        "detail": out,
        "discrepancy": not all(v["strictly_increasing"] for v in out.values()),
    }


def finding_below_heisenberg() -> dict:
    """Equal split n_squeezed = n_z = N/2 at phi = 1e-4 against the 1/N line."""
    from .states import solve_r_for_nbar

    rows = []
    for total in (4.0, 16.0, 64.0, 200.0):
        sc = Scenario(StateSpec(Kind.PLAIN, solve_r_for_nbar(Kind.PLAIN, 0, total / 2)), total / 2)
        rows.append({"total_nbar": total, "delta_phi_times_n": phase_uncertainty(sc, 1e-4) * total})
    return {
        "id": "below_heisenberg",
        "summary": "delta phi * N under an equal photon split (values below 1 beat 1/N)",
        "detail": rows,
        "discrepancy": any(row["delta_phi_times_n"] < 1.0 for row in rows),
    }


def finding_fixed_r_equal_total() -> dict:
    """Fixed-r comparison at equal total photon number instead of equal nz."""
    from .sweep import Axis, Constraint, Spacing, SweepConfig, run_scenario_sweep

    out = {}
    for m in (2, 3):
        def curve(kind):
            cfg = SweepConfig(kind=kind, ops=m, r=0.9, phi=1e-4, axis=Axis.TOTAL_NBAR, start=4.0,
                              stop=200.0, count=81, spacing=Spacing.LOG, constraint=Constraint.FIX_R)
            return {row.axis_value: row.delta_phi for row in run_scenario_sweep(cfg, workers=1) if row.ok}

        a, s = curve(Kind.ADDED), curve(Kind.SUBTRACTED)
        common = sorted(set(a) & set(s))
        losses = [n for n in common if not a[n] < s[n]]
        out[str(m)] = {"points": len(common), "added_not_better": len(losses),
                       "max_total_where_not_better": max(losses) if losses else None}
    return {
        "id": "fixed_r_equal_total",
        "summary": "r = 0.9, phi = 1e-4: addition versus subtraction at equal total photon number",
        "detail": out,
        "discrepancy": any(v["added_not_better"] for v in out.values()),
    }


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------


def verify_consistency(suite: str = "quick") -> dict:
    grid = suite_grid(suite)
    t0 = time.perf_counter()
    checks: list[Check] = []
    timings = {}
    for fn in (check_oracle_equivalence, check_crb_saturation, check_one_photon_identity,
               check_addition_dominance, check_taylor_residual, check_radical_bounds):
        t = time.perf_counter()
        out = fn(grid)
        checks.extend(out if isinstance(out, tuple) else (out,))
        timings[fn.__name__] = round(time.perf_counter() - t, 3)
    findings = [finding_zero_order_radicand(), finding_two_photon_item(), finding_subtracted_narrowing(),
                finding_below_heisenberg(), finding_fixed_r_equal_total()]
    return {
        "suite": suite,
        "code_version": __version__,
        "passed": all(c.passed for c in checks),
        "checks": {c.name: c.to_dict() for c in checks},
        "findings": findings,
        "seconds": round(time.perf_counter() - t0, 3),
        "check_seconds": timings,
    }


def exit_code(report: dict) -> int:
    return 0 if report["passed"] else 1
