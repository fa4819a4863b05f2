"""Closed-form parity signal <Pi_b(phi)> of the MZI output.

For the plain squeezed vacuum the signal is the Gaussian expression

    <Pi>_0 = exp{[2(cos phi - 1 - sinh^2 r sin^2 phi)|z|^2
                  - sinh 2r sin^2 phi Re z^2] / 2D} / sqrt(D),
    D = 1 + sinh^2 r sin^2 phi.

Adding k photons (or subtracting l) multiplies it by a (k, k) mixed
derivative of exp(q(h, g)) for a phi-dependent quadratic form q, divided by
the state normalization. Every evaluator here is written once over a generic
scalar type, so feeding a :class:`DualScalar` phase yields the exact slope
and a nested dual yields the exact curvature.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .series import (
    DualScalar,
    QuadraticForm,
    conj,
    cos,
    exp,
    jet_exp_quadratic,
    jet_mixed_derivative,
    real,
    sin,
    sqrt,
)
from .states import Kind, Scenario, mean_photon_number, normalization

PARITY_SLACK = 1e-9


class Variant(str, enum.Enum):
    PAPER_LITERAL = "literal"
    SERIES_CONSISTENT = "series"


@dataclass(frozen=True)
class ParityPoint:
    phi: float
    value: float
    slope: float


def _coherent_amplitude(scenario: Scenario):
    # stay on real arithmetic for the common theta = 0 case
    if scenario.theta == 0.0:
        return math.sqrt(scenario.nz)
    return scenario.z


def gaussian_parity(scenario: Scenario, phi):
    """<Pi>_0: parity for the plain squeezed vacuum with the same r and z."""
    r = scenario.squeezed.r
    z = _coherent_amplitude(scenario)
    sh2 = math.sinh(r) ** 2
    sp2 = sin(phi) ** 2
    d = 1.0 + sh2 * sp2
    re_z2 = (z * z).real
    num = 2.0 * (cos(phi) - 1.0 - sh2 * sp2) * scenario.nz - math.sinh(2 * r) * sp2 * re_z2
    return exp(num / (2.0 * d)) / sqrt(d)


def parity_exponent(scenario: Scenario, phi) -> QuadraticForm:
    """Quadratic form in (h, g) whose exponential generates the parity signal."""
    spec = scenario.squeezed
    r = spec.r
    z = _coherent_amplitude(scenario)
    zc = conj(z)
    sp, cp = sin(phi), cos(phi)
    s2p = 2.0 * sp * cp
    sh, ch = math.sinh(r), math.cosh(r)
    d = 1.0 + sh * sh * sp * sp
    sinh2r = math.sinh(2 * r)
    if spec.kind is Kind.ADDED:
        ch2 = ch * ch
        return QuadraticForm(
            lin_h=(4.0 * z * ch2 * sp + zc * sinh2r * s2p) / (4.0 * d),
            lin_g=(4.0 * zc * ch2 * sp + z * sinh2r * s2p) / (4.0 * d),
            cross=-ch2 * cp / d,
            sq_h=-sinh2r * cp * cp / (4.0 * d),
            sq_g=-sinh2r * cp * cp / (4.0 * d),
        )
    if spec.kind is Kind.SUBTRACTED:
        sh2 = sh * sh
        return QuadraticForm(
            lin_h=-(zc * sh2 * s2p + z * sinh2r * sp) / (2.0 * d),
            lin_g=-(z * sh2 * s2p + zc * sinh2r * sp) / (2.0 * d),
            cross=-sh2 * cp / d,
            sq_h=-sh * ch / (2.0 * d),
            sq_g=-sh * ch / (2.0 * d),
        )
    raise ValueError("plain squeezed vacuum has no generating exponent")


def parity_generic(scenario: Scenario, phi):
    """Parity signal for a float, complex or dual-valued phase."""
    spec = scenario.squeezed.check()
    base = gaussian_parity(scenario, phi)
    k = spec.ops
    if spec.kind is Kind.PLAIN or k == 0:
        return real(base)
    jet = jet_exp_quadratic(parity_exponent(scenario, phi), k, k)
    factor = jet_mixed_derivative(jet, k, k)
    return real(base * factor) / normalization(spec)


def _check_bound(value: float, scenario: Scenario, phi: float) -> float:
    if not abs(value) <= 1.0 + PARITY_SLACK:
        raise ArithmeticError(
            f"parity {value!r} outside [-1, 1] for {scenario} at phi={phi}; "
            "closed-form evaluation lost precision"
        )
    return value


def parity_expectation(scenario: Scenario, phi: float) -> float:
    value = float(parity_generic(scenario, float(phi)))
    return _check_bound(value, scenario, phi)


def parity_phase_slope(scenario: Scenario, phi: float) -> ParityPoint:
    """Value and exact d<Pi>/dphi from one dual-number pass."""
    out = parity_generic(scenario, DualScalar.variable(float(phi)))
    value = _check_bound(float(out.value), scenario, phi)
    return ParityPoint(float(phi), value, float(out.deriv))


def parity_curvature(scenario: Scenario, phi: float) -> float:
    """Exact d^2<Pi>/dphi^2 via a dual number nested in a dual number."""
    x = DualScalar(DualScalar(float(phi), 1.0), DualScalar(1.0, 0.0))
    out = parity_generic(scenario, x)
    return float(out.deriv.deriv)


def parity_sign(scenario: Scenario) -> int:
    return -1 if scenario.squeezed.ops % 2 else 1


# ---------------------------------------------------------------------------
# small-phi quadratic coefficient
# ---------------------------------------------------------------------------


def k2_radical_item(nbar: float) -> float:
    """8 (sqrt(1+12n) + 1)^2 / (3 (sqrt(1+12n) - 1)^2), the printed k = 2 item."""
    s = math.sqrt(1.0 + 12.0 * nbar)
    return 8.0 * (s + 1.0) ** 2 / (3.0 * (s - 1.0) ** 2)


def l2_radical_item(nbar: float) -> float:
    """8 (sqrt(1+12n) - 1)^2 / (3 (sqrt(1+12n) + 1)^2), the printed l = 2 item."""
    s = math.sqrt(1.0 + 12.0 * nbar)
    return 8.0 * (s - 1.0) ** 2 / (3.0 * (s + 1.0) ** 2)


def k2_item_cosh(r: float) -> float:
    c2 = math.cosh(r) ** 2
    return 24.0 * c2 * c2 / (3.0 * c2 - 1.0) ** 2


def l2_item_sinh(r: float) -> float:
    s2 = math.sinh(r) ** 2
    return 24.0 * s2 * s2 / (3.0 * s2 + 1.0) ** 2


def literal_radicand(scenario: Scenario) -> float:
    """Radicand R of the printed small-phi expansions (ops <= 2)."""
    spec = scenario.squeezed.check()
    n = mean_photon_number(spec)
    k = spec.ops
    if k > 2:
        raise ValueError(f"literal expansions exist only for ops <= 2, got {k}")
    if k == 0:
        return n * n + n + 1.0
    if k == 1:
        return n * n + n - 2.0
    if spec.kind is Kind.ADDED:
        return n * n + n - k2_radical_item(n)
    return n * n + n - l2_radical_item(n)


def small_phi_parity_coeff(scenario: Scenario, variant: Variant | str = Variant.SERIES_CONSISTENT) -> float:
    """Lambda in <Pi(phi)> = sigma (1 - Lambda phi^2) + O(phi^4), sigma = (-1)^ops."""
    variant = Variant(variant)
    spec = scenario.squeezed.check()
    if variant is Variant.PAPER_LITERAL:
        n = mean_photon_number(spec)
        nz = scenario.nz
        radicand = literal_radicand(scenario)
        return nz * math.cos(scenario.theta) * math.sqrt(radicand) + (2 * nz * n + nz + n) / 2
    return -parity_sign(scenario) * 0.5 * parity_curvature(scenario, 0.0)
