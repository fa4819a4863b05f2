"""Phase uncertainty, quantum Fisher information and reference limits."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .interferometry import (
    Variant,
    literal_radicand,
    parity_phase_slope,
    small_phi_parity_coeff,
)
from .states import Scenario, mean_photon_number, second_moment_b2

SLOPE_FLOOR = 1e-14


@dataclass(frozen=True)
class SensitivityPoint:
    phi: float
    delta_phi: float  # math.inf where the signal slope vanishes
    snl: float
    hl: float
    qfi: float
    crb: float


def phase_uncertainty(scenario: Scenario, phi: float) -> float:
    """Error-propagation uncertainty sqrt(1 - <Pi>^2) / |d<Pi>/dphi|.

    Returns ``math.inf`` at a signal extremum with |<Pi>| < 1. Where both
    numerator and slope vanish (phi = 0), the series-consistent zero-phase
    limit is returned instead.
    """
    point = parity_phase_slope(scenario, phi)
    v = min(abs(point.value), 1.0)
    numerator = math.sqrt((1.0 - v) * (1.0 + v))
    slope = abs(point.slope)
    if slope < SLOPE_FLOOR:
        if numerator > SLOPE_FLOOR:
            return math.inf
        return phase_uncertainty_zero_limit(scenario, Variant.SERIES_CONSISTENT)
    return numerator / slope


def phase_uncertainty_zero_limit(scenario: Scenario, variant: Variant | str = Variant.SERIES_CONSISTENT) -> float:
    """lim_{phi->0} delta phi = 1 / sqrt(2 Lambda) for theta = 0."""
    if scenario.theta != 0.0:
        raise ValueError("zero-phase closed forms assume a real coherent amplitude (theta = 0)")
    variant = Variant(variant)
    if variant is Variant.PAPER_LITERAL:
        n = mean_photon_number(scenario.squeezed)
        nz = scenario.nz
        radical = math.sqrt(literal_radicand(scenario))
        return 1.0 / math.sqrt(2 * nz * radical + 2 * nz * n + nz + n)
    lam = small_phi_parity_coeff(scenario, variant)
    # a flat signal (vacuum in both ports) carries no phase information
    return 1.0 / math.sqrt(2.0 * lam) if lam > 0 else math.inf


def quantum_fisher_information(scenario: Scenario) -> float:
    """F_Q = 2 n_z n + n_z + n - 2 Re(z*^2 <b^2>), i.e. four times Var(J2).

    For theta = 0 this is 2 n_z n + n_z + n - 2 n_z <b^2>.
    """
    spec = scenario.squeezed
    n = mean_photon_number(spec)
    b2 = second_moment_b2(spec)
    nz = scenario.nz
    cross = nz * math.cos(2 * scenario.theta) * b2
    return max(0.0, 2 * nz * n + nz + n - 2 * cross)


def cramer_rao_bound(qfi: float) -> float:
    if not qfi > 0:
        raise ValueError(f"Fisher information must be positive, got {qfi}")
    return 1.0 / math.sqrt(qfi)


def classical_limits(total_nbar: float) -> tuple[float, float]:
    """(shot-noise limit 1/sqrt(N), Heisenberg limit 1/N)."""
    if not total_nbar > 0:
        raise ValueError(f"total photon number must be positive, got {total_nbar}")
    return 1.0 / math.sqrt(total_nbar), 1.0 / total_nbar


def total_photon_number(scenario: Scenario) -> float:
    return scenario.nz + mean_photon_number(scenario.squeezed)


def sensitivity_point(scenario: Scenario, phi: float) -> SensitivityPoint:
    snl, hl = classical_limits(total_photon_number(scenario))
    qfi = quantum_fisher_information(scenario)
    return SensitivityPoint(
        phi=float(phi),
        delta_phi=phase_uncertainty(scenario, phi),
        snl=snl,
        hl=hl,
        qfi=qfi,
        crb=cramer_rao_bound(qfi) if qfi > 0 else math.inf,
    )
