"""Parameter sweeps, config parsing and deterministic CSV output."""

from __future__ import annotations

import csv
import enum
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .errors import DegenerateStateError, TruncationError, UnattainableTargetError
from .interferometry import Variant, parity_phase_slope, small_phi_parity_coeff
from .sensitivity import (
    classical_limits,
    cramer_rao_bound,
    phase_uncertainty,
    phase_uncertainty_zero_limit,
    quantum_fisher_information,
)
from .states import Kind, Scenario, StateSpec, mean_photon_number, solve_r_for_nbar

WORKERS_ENV = "PARITYMZI_WORKERS"
PARITY_TOL = 1e-8
QFI_TOL = 1e-7
# below this many rows a process pool costs more than it saves
_PARALLEL_MIN_ROWS = 64


class Axis(str, enum.Enum):
    PHI = "phi"
    TOTAL_NBAR = "total_nbar"
    R = "r"
    OPS = "ops"


class Constraint(str, enum.Enum):
    NONE = "none"
    FIX_NBAR_SPLIT = "fix_nbar_split"
    FIX_R = "fix_r"
    FIX_NBAR_SQUEEZED = "fix_nbar_squeezed"


class Spacing(str, enum.Enum):
    LINEAR = "linear"
    LOG = "log"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    kind: Kind = Kind.PLAIN
    ops: int = 0
    r: float | None = None
    target_nbar: float | None = None
    nz: float = 0.0
    theta: float = 0.0
    phi: float = 1e-4
    axis: Axis = Axis.PHI
    start: float = -math.pi
    stop: float = math.pi
    count: int = 401
    spacing: Spacing = Spacing.LINEAR
    constraint: Constraint = Constraint.NONE
    variant: Variant = Variant.SERIES_CONSISTENT
    verify: bool = False

    def __post_init__(self):
        for name, typ in (
            ("kind", Kind),
            ("axis", Axis),
            ("spacing", Spacing),
            ("constraint", Constraint),
            ("variant", Variant),
        ):
            try:
                object.__setattr__(self, name, typ(getattr(self, name)))
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
        self.validate()

    def validate(self) -> None:
        if self.count < 2:
            raise ConfigError("count must be >= 2")
        if not self.start < self.stop:
            raise ConfigError("start must be below stop")
        if self.spacing is Spacing.LOG and self.start <= 0:
            raise ConfigError("log spacing needs a positive start")
        has_r, has_n = self.r is not None, self.target_nbar is not None
        if has_r and has_n:
            raise ConfigError("give r or target_nbar, not both")
        if self.constraint is not Constraint.NONE and self.axis is not Axis.TOTAL_NBAR:
            raise ConfigError(f"constraint {self.constraint.value} needs axis = total_nbar")
        if self.axis is Axis.TOTAL_NBAR and self.constraint is Constraint.NONE:
            raise ConfigError("axis = total_nbar needs a constraint")
        if self.axis is Axis.R or self.constraint is Constraint.FIX_NBAR_SPLIT:
            if has_r or has_n:
                raise ConfigError(f"r and target_nbar are set by the {self.axis.value} axis here")
        elif self.constraint is Constraint.FIX_R:
            if not has_r:
                raise ConfigError("fix_r needs r")
        elif self.constraint is Constraint.FIX_NBAR_SQUEEZED:
            if not has_n:
                raise ConfigError("fix_nbar_squeezed needs target_nbar")
        elif not (has_r or has_n):
            raise ConfigError("exactly one of r / target_nbar must be given")
        if self.kind is Kind.PLAIN and self.ops != 0 and self.axis is not Axis.OPS:
            raise ConfigError("plain squeezed vacuum takes ops = 0")

    def axis_values(self) -> np.ndarray:
        if self.axis is Axis.OPS:
            return np.arange(int(math.ceil(self.start)), int(math.floor(self.stop)) + 1)
        if self.spacing is Spacing.LOG:
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


_FLOAT_KEYS = {"r", "target_nbar", "nz", "theta", "phi", "start", "stop"}
_INT_KEYS = {"ops", "count"}
_BOOL_KEYS = {"verify"}
_ALIASES = {"variant": {"paper_literal": "literal", "series_consistent": "series"}}


def parse_config(text: str) -> SweepConfig:
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    known = {f.name for f in fields(SweepConfig)}
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            if key in _FLOAT_KEYS:
                values[key] = float(val)
            elif key in _INT_KEYS:
                values[key] = int(val)
            elif key in _BOOL_KEYS:
                values[key] = val.lower() in ("1", "true", "yes", "on")
            else:
                values[key] = _ALIASES.get(key, {}).get(val.lower(), val.lower())
        except ValueError:
            raise ConfigError(f"line {lineno}: bad value for {key}: {val!r}") from None
    return SweepConfig(**values)


def load_config(path: str | os.PathLike) -> SweepConfig:
    return parse_config(Path(path).read_text())


def config_to_dict(config: SweepConfig) -> dict:
    d = asdict(config)
    return {k: (v.value if isinstance(v, enum.Enum) else v) for k, v in d.items()}


# ---------------------------------------------------------------------------
# rows
# ---------------------------------------------------------------------------


@dataclass
class ResultRow:
    axis_value: float
    phi: float
    kind: str
    ops: int
    r: float | None = None
    nz: float | None = None
    nbar_squeezed: float | None = None
    total_nbar: float | None = None
    parity: float | None = None
    slope: float | None = None
    delta_phi: float | None = None
    snl: float | None = None
    hl: float | None = None
    qfi: float | None = None
    crb: float | None = None
    small_phi_coeff: float | None = None
    delta_phi_zero_limit: float | None = None
    oracle_parity: float | None = None
    oracle_qfi: float | None = None
    parity_residual: float | None = None
    qfi_residual: float | None = None
    error: str = ""
    extra: dict = field(default_factory=dict, repr=False)

    @property
    def ok(self) -> bool:
        return not self.error

    @property
    def verified(self) -> bool:
        if self.parity_residual is not None and not self.parity_residual <= PARITY_TOL:
            return False
        if self.qfi_residual is not None and not self.qfi_residual <= QFI_TOL:
            return False
        return True


CSV_COLUMNS = [f.name for f in fields(ResultRow) if f.name != "extra"]


def resolve(config: SweepConfig, value: float) -> tuple[Scenario, float]:
    """Scenario and phase for one axis value."""
    kind, ops, phi = config.kind, config.ops, config.phi
    r, nz = config.r, config.nz
    if config.axis is Axis.PHI:
        phi = float(value)
    elif config.axis is Axis.R:
        r = float(value)
    elif config.axis is Axis.OPS:
        ops = int(value)
        if ops == 0:
            kind = Kind.PLAIN
    if config.axis is Axis.TOTAL_NBAR:
        total = float(value)
        if config.constraint is Constraint.FIX_NBAR_SPLIT:
            nz = total / 2
            r = solve_r_for_nbar(kind, ops, total / 2)
        elif config.constraint is Constraint.FIX_NBAR_SQUEEZED:
            r = solve_r_for_nbar(kind, ops, config.target_nbar)
            nz = total - config.target_nbar
        else:
            nz = total - mean_photon_number(StateSpec(kind, r, ops))
        if nz < 0:
            raise UnattainableTargetError(
                f"total {total} below the squeezed-port photon number", total - nz
            )
    elif r is None:
        r = solve_r_for_nbar(kind, ops, config.target_nbar)
    return Scenario(StateSpec(kind, r, ops), nz, config.theta), phi


def evaluate_row(config: SweepConfig, value: float) -> ResultRow:
    kind = Kind.PLAIN if (config.axis is Axis.OPS and int(value) == 0) else config.kind
    row = ResultRow(axis_value=float(value), phi=config.phi, kind=kind.value, ops=config.ops)
    try:
        scenario, phi = resolve(config, value)
    except (UnattainableTargetError, DegenerateStateError, ValueError) as exc:
        row.error = f"{type(exc).__name__}: {exc}"
        return row
    spec = scenario.squeezed
    row.phi, row.ops, row.r, row.nz = phi, spec.ops, spec.r, scenario.nz
    try:
        row.nbar_squeezed = mean_photon_number(spec)
        row.total_nbar = scenario.nz + row.nbar_squeezed
        point = parity_phase_slope(scenario, phi)
        row.parity, row.slope = point.value, point.slope
        row.delta_phi = phase_uncertainty(scenario, phi)
        if row.total_nbar > 0:
            row.snl, row.hl = classical_limits(row.total_nbar)
        row.qfi = quantum_fisher_information(scenario)
        row.crb = cramer_rao_bound(row.qfi) if row.qfi > 0 else math.inf
        if scenario.theta == 0.0 and (config.variant is Variant.SERIES_CONSISTENT or spec.ops <= 2):
            row.small_phi_coeff = small_phi_parity_coeff(scenario, config.variant)
            if row.small_phi_coeff > 0:
                row.delta_phi_zero_limit = phase_uncertainty_zero_limit(scenario, config.variant)
        if config.verify:
            from .fock import apply_interferometer, build_input_state, j2_variance_oracle, parity_oracle

            state = build_input_state(scenario)
            row.oracle_parity = parity_oracle(apply_interferometer(state, phi))
            row.oracle_qfi = 4.0 * j2_variance_oracle(state)
            row.parity_residual = abs(row.parity - row.oracle_parity)
            row.qfi_residual = abs(row.qfi - row.oracle_qfi)
    except (ArithmeticError, DegenerateStateError, TruncationError, ValueError) as exc:
        row.error = f"{type(exc).__name__}: {exc}"
    return row


def _worker_count() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _evaluate_chunk(args):
    config, values = args
    return [evaluate_row(config, v) for v in values]


def run_scenario_sweep(config: SweepConfig, workers: int | None = None) -> list[ResultRow]:
    """One row per axis value, in axis order."""
    values = list(config.axis_values())
    workers = _worker_count() if workers is None else workers
    if workers <= 1 or len(values) < _PARALLEL_MIN_ROWS:
        return [evaluate_row(config, v) for v in values]
    size = max(1, math.ceil(len(values) / (4 * workers)))
    chunks = [(config, values[i : i + size]) for i in range(0, len(values), size)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_evaluate_chunk, chunks))
    return [row for part in parts for row in part]


def run_many(configs: list[SweepConfig], workers: int | None = None) -> list[list[ResultRow]]:
    """Several sweeps through one pool; results keep the input order."""
    workers = _worker_count() if workers is None else workers
    total = sum(len(c.axis_values()) for c in configs)
    if workers <= 1 or total < _PARALLEL_MIN_ROWS:
        return [[evaluate_row(c, v) for v in c.axis_values()] for c in configs]
    jobs, owners = [], []
    for idx, c in enumerate(configs):
        values = list(c.axis_values())
        size = max(1, math.ceil(total / (8 * workers)))
        for i in range(0, len(values), size):
            jobs.append((c, values[i : i + size]))
            owners.append(idx)
    out: list[list[ResultRow]] = [[] for _ in configs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for idx, part in zip(owners, pool.map(_evaluate_chunk, jobs)):
            out[idx].extend(part)
    return out


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if math.isnan(v):
            return "nan"
        return repr(v)
    if isinstance(v, (np.floating,)):
        return format_value(float(v))
    return str(v)


def rows_to_csv(rows: list[ResultRow], columns: list[str] = CSV_COLUMNS) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([format_value(getattr(row, c)) for c in columns])
    return buf.getvalue()


def write_csv(rows: list[ResultRow], path: str | os.PathLike, columns: list[str] = CSV_COLUMNS) -> None:
    Path(path).write_text(rows_to_csv(rows, columns))


def with_overrides(config: SweepConfig, **changes) -> SweepConfig:
    return replace(config, **changes)
