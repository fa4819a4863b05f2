"""Photon statistics of the squeezed-port input state.

The squeezed port carries one of three pure states built on the squeezed
vacuum S(r)|0>:

* ``PLAIN``       S(r)|0>
* ``ADDED``       b^{dag k} S(r)|0>, normalized by N_k
* ``SUBTRACTED``  b^l S(r)|0>,       normalized by C_l

Normalizations and moments come from generating functions of the form
exp[-sinh(2r)/4 (t^2 + tau^2) + w t tau] with w = cosh^2 r (added) or
sinh^2 r (subtracted), whose mixed derivatives are extracted with jets.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateStateError, TruncationError, UnattainableTargetError
from .series import (
    QuadraticForm,
    jet_exp_quadratic,
    jet_mixed_derivative,
    legendre_imag_realified,
    legendre_p,
)

FOCK_TAIL_TOL = 1e-12


class Kind(str, enum.Enum):
    PLAIN = "plain"
    ADDED = "added"
    SUBTRACTED = "subtracted"


@dataclass(frozen=True)
class StateSpec:
    kind: Kind
    r: float
    ops: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if not math.isfinite(self.r) or self.r < 0:
            raise ValueError(f"squeezing parameter must be finite and >= 0, got {self.r}")
        if int(self.ops) != self.ops or self.ops < 0:
            raise ValueError(f"operation count must be a non-negative integer, got {self.ops}")
        object.__setattr__(self, "ops", int(self.ops))
        if self.kind is Kind.PLAIN and self.ops != 0:
            raise ValueError("plain squeezed vacuum takes ops = 0")

    @property
    def degenerate(self) -> bool:
        return self.kind is Kind.SUBTRACTED and self.ops >= 1 and self.r == 0.0

    def check(self) -> "StateSpec":
        if self.degenerate:
            raise DegenerateStateError(
                f"b^{self.ops} annihilates the vacuum: subtracted state at r = 0 is undefined"
            )
        return self


@dataclass(frozen=True)
class Scenario:
    """Coherent state |z> in port a, squeezed-port state in port b."""

    squeezed: StateSpec
    nz: float
    theta: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.nz) or self.nz < 0:
            raise ValueError(f"coherent mean photon number must be >= 0, got {self.nz}")
        if not math.isfinite(self.theta):
            raise ValueError("coherent phase must be finite")

    @property
    def z(self) -> complex:
        return math.sqrt(self.nz) * complex(math.cos(self.theta), math.sin(self.theta))


def _generating_form(kind: Kind, r: float) -> QuadraticForm:
    # exponent of the N_k / C_l generating function in (t, tau)
    w = math.cosh(r) ** 2 if kind is Kind.ADDED else math.sinh(r) ** 2
    sq = -math.sinh(2 * r) / 4
    return QuadraticForm(cross=w, sq_h=sq, sq_g=sq)


def _closed_norm(kind: Kind, ops: int, r: float) -> float:
    if kind is Kind.PLAIN or ops == 0:
        return 1.0
    if kind is Kind.ADDED:
        c = math.cosh(r)
        return math.factorial(ops) * c**ops * legendre_p(ops, c)
    s = math.sinh(r)
    return math.factorial(ops) * s**ops * legendre_imag_realified(ops, s)


def _generating_moment(kind: Kind, ops: int, r: float, extra: int = 0) -> float:
    """d^{2 ops + extra} / dt^{ops+extra} dtau^{ops} of the generating function."""
    kind = Kind.ADDED if kind is Kind.PLAIN else kind
    jet = jet_exp_quadratic(_generating_form(kind, r), ops + extra, ops)
    return jet_mixed_derivative(jet, ops + extra, ops)


def normalization(spec: StateSpec) -> float:
    """N_k for added, C_l for subtracted, 1 for plain (Legendre closed form)."""
    spec.check()
    return _closed_norm(spec.kind, spec.ops, spec.r)


def normalization_generating(spec: StateSpec) -> float:
    """Same quantity as :func:`normalization`, from the generating function."""
    spec.check()
    if spec.kind is Kind.PLAIN:
        return 1.0
    return _generating_moment(spec.kind, spec.ops, spec.r)


def mean_photon_number(spec: StateSpec) -> float:
    spec.check()
    r, m = spec.r, spec.ops
    if spec.kind is Kind.PLAIN:
        return math.sinh(r) ** 2
    if spec.kind is Kind.ADDED:
        return _closed_norm(Kind.ADDED, m + 1, r) / _closed_norm(Kind.ADDED, m, r) - 1.0
    return _closed_norm(Kind.SUBTRACTED, m + 1, r) / _closed_norm(Kind.SUBTRACTED, m, r)


def second_moment_b2(spec: StateSpec) -> float:
    """<b^2> for real squeezing (theta handled by the caller)."""
    spec.check()
    if spec.kind is Kind.PLAIN:
        return _generating_moment(Kind.ADDED, 0, spec.r, extra=2)
    return _generating_moment(spec.kind, spec.ops, spec.r, extra=2) / normalization(spec)


# ---------------------------------------------------------------------------
# Fock basis
# ---------------------------------------------------------------------------


def default_cutoff(nbar: float, ops: int = 0) -> int:
    return max(40, math.ceil(4 * nbar + 10 * math.sqrt(nbar) + 20 + 2 * ops))


def _tail_mass(p: np.ndarray, cutoff: int) -> float:
    return float(p[cutoff + 1 :].sum() / p.sum())


def required_cutoff(spec: StateSpec, tail_tol: float = FOCK_TAIL_TOL) -> int:
    """Rule-of-thumb cutoff, raised until the measured tail mass is below tail_tol."""
    spec.check()
    cutoff = default_cutoff(mean_photon_number(spec), spec.ops)
    p = _ladder_amplitudes(spec, 3 * cutoff + 60) ** 2
    while _tail_mass(p, cutoff) > tail_tol:
        cutoff += max(1, cutoff // 10)
        if 3 * cutoff + 60 > len(p):
            p = _ladder_amplitudes(spec, 3 * cutoff + 60) ** 2
    return cutoff


def _squeezed_vacuum_unnormalized(r: float, length: int) -> np.ndarray:
    # c_{2n} proportional to (-tanh r / 2)^n sqrt((2n)!) / n!
    c = np.zeros(length)
    c[0] = 1.0
    t = -math.tanh(r) / 2
    for n in range(0, (length - 1) // 2):
        c[2 * n + 2] = c[2 * n] * t * math.sqrt((2 * n + 1) * (2 * n + 2)) / (n + 1)
    return c


def _ladder_amplitudes(spec: StateSpec, length: int) -> np.ndarray:
    c = _squeezed_vacuum_unnormalized(spec.r, length + spec.ops)
    root = np.sqrt(np.arange(1, len(c)))
    for _ in range(spec.ops):
        out = np.zeros_like(c)
        if spec.kind is Kind.ADDED:
            out[1:] = c[:-1] * root
        else:
            out[:-1] = c[1:] * root
        c = out
    return c[:length]


def fock_amplitudes(spec: StateSpec, cutoff: int | None = None, tail_tol: float = FOCK_TAIL_TOL) -> np.ndarray:
    """Normalized amplitudes <n|psi> for n = 0..cutoff, lowest nonzero one positive.

    The tail mass beyond ``cutoff`` is measured on a much longer expansion;
    exceeding ``tail_tol`` raises :class:`TruncationError`. Without an
    explicit cutoff, :func:`required_cutoff` picks one.
    """
    spec.check()
    if cutoff is None:
        cutoff = required_cutoff(spec, tail_tol)
    if cutoff < spec.ops:
        raise TruncationError(f"cutoff {cutoff} below operation count {spec.ops}", spec.ops + 40)
    long = _ladder_amplitudes(spec, 3 * cutoff + 60)
    p = long**2
    tail = _tail_mass(p, cutoff)
    if tail > tail_tol:
        cum = np.cumsum(p[::-1])[::-1] / p.sum()
        need = int(np.argmax(cum <= tail_tol)) if np.any(cum <= tail_tol) else 2 * cutoff
        raise TruncationError(
            f"tail mass {tail:.3e} beyond cutoff {cutoff} exceeds {tail_tol:.0e}",
            suggested_cutoff=max(need, cutoff + 1),
        )
    c = long[: cutoff + 1]
    # global phase: lowest occupied amplitude positive
    lead = c[np.flatnonzero(c)[0]]
    return c / (np.linalg.norm(c) * np.sign(lead))


# ---------------------------------------------------------------------------
# Inversion n -> r
# ---------------------------------------------------------------------------


def _nbar_at(kind: Kind, ops: int, r: float) -> float:
    if kind is Kind.SUBTRACTED and ops >= 1 and r == 0.0:
        # limit r -> 0+: b^l S(r)|0> tends to |0> (l even) or |1> (l odd)
        return float(ops % 2)
    return mean_photon_number(StateSpec(kind, r, ops))


def minimum_nbar(kind: Kind | str, ops: int) -> float:
    return _nbar_at(Kind(kind), ops, 0.0)


def solve_r_for_nbar(kind: Kind | str, ops: int, target_nbar: float) -> float:
    """Unique r >= 0 with mean_photon_number(kind, ops, r) = target_nbar."""
    kind = Kind(kind)
    lo_n = minimum_nbar(kind, ops)
    if not math.isfinite(target_nbar) or target_nbar < lo_n:
        raise UnattainableTargetError(
            f"target {target_nbar} below the minimum {lo_n} for {kind.value} ops={ops}", lo_n
        )
    if target_nbar == lo_n:
        if kind is Kind.SUBTRACTED and ops >= 1:
            raise UnattainableTargetError(
                f"target {target_nbar} is only reached in the degenerate limit r -> 0", lo_n
            )
        return 0.0
    lo, hi = 0.0, 1.0 + 2.0 * math.asinh(math.sqrt(target_nbar))
    while _nbar_at(kind, ops, hi) < target_nbar:
        hi *= 2.0
    # run the bracket down to a few ulps; the photon-number residual then
    # sits far below 1e-10 for any attainable target
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _nbar_at(kind, ops, mid) < target_nbar:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 4e-16 * hi:
            break
    return 0.5 * (lo + hi)
