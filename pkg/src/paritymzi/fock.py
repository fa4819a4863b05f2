"""Brute-force two-mode Fock-space simulator used as an independent oracle.

Only the Fock expansion of the input state, ladder operators and the
generator J2 = (a^dag b - a b^dag) / 2i are used here; nothing from the
closed-form parity or Fisher-information modules is imported.

The MZI acts as exp(-i phi J2). J2 conserves the total photon number, so
the unitary is applied sector by sector: within the sector n + m = N it is
an (N+1) x (N+1) rotation, obtained from a cached eigendecomposition of the
J2 block. Output grids are enlarged to hold every sector completely, which
keeps the evolution exactly unitary on the retained space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import TruncationError
from .states import FOCK_TAIL_TOL, Scenario, default_cutoff, fock_amplitudes, required_cutoff

UNRELIABLE_TAIL = 1e-9


@dataclass(frozen=True)
class TwoModeFockState:
    """Amplitudes amps[n, m] on |n>_a |m>_b."""

    amps: np.ndarray

    @property
    def dim_a(self) -> int:
        return self.amps.shape[0]

    @property
    def dim_b(self) -> int:
        return self.amps.shape[1]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def tail_mass(self) -> float:
        """Largest probability held in the top 10% of either index range."""
        p = np.abs(self.amps) ** 2
        ta = p[int(math.ceil(0.9 * self.dim_a)) :, :].sum() if self.dim_a > 1 else 0.0
        tb = p[:, int(math.ceil(0.9 * self.dim_b)) :].sum() if self.dim_b > 1 else 0.0
        return float(max(ta, tb))

    @property
    def reliable(self) -> bool:
        return self.tail_mass() < UNRELIABLE_TAIL

    def sector_populations(self) -> np.ndarray:
        p = np.abs(self.amps) ** 2
        n, m = np.indices(p.shape)
        return np.bincount((n + m).ravel(), weights=p.ravel())

    def mean_photons(self) -> tuple[float, float]:
        p = np.abs(self.amps) ** 2
        na = float(np.arange(self.dim_a) @ p.sum(axis=1))
        nb = float(np.arange(self.dim_b) @ p.sum(axis=0))
        return na, nb


def coherent_amplitudes(z: complex, cutoff: int) -> np.ndarray:
    n = np.arange(cutoff + 1)
    log_fact = np.array([math.lgamma(k + 1) for k in n])
    if z == 0:
        out = np.zeros(cutoff + 1, dtype=complex)
        out[0] = 1.0
        return out
    mag = np.exp(-abs(z) ** 2 / 2 + n * math.log(abs(z)) - log_fact / 2)
    return mag * np.exp(1j * n * np.angle(z))


def coherent_cutoff(nz: float, tail_tol: float = FOCK_TAIL_TOL) -> int:
    cutoff = default_cutoff(nz)
    while True:
        p = np.abs(coherent_amplitudes(math.sqrt(nz), cutoff)) ** 2
        if 1.0 - p.sum() <= tail_tol:
            return cutoff
        cutoff += max(1, cutoff // 10)


def build_input_state(
    scenario: Scenario, cutoff_a: int | None = None, cutoff_b: int | None = None
) -> TwoModeFockState:
    """|z>_a (x) |psi>_b on a (cutoff_a+1) x (cutoff_b+1) grid."""
    spec = scenario.squeezed
    if cutoff_a is None:
        cutoff_a = coherent_cutoff(scenario.nz)
    if cutoff_b is None:
        cutoff_b = required_cutoff(spec)
    a = coherent_amplitudes(scenario.z, cutoff_a)
    missing = 1.0 - float(np.sum(np.abs(a) ** 2))
    if missing > FOCK_TAIL_TOL:
        raise TruncationError(
            f"coherent tail mass {missing:.3e} beyond cutoff {cutoff_a}",
            suggested_cutoff=coherent_cutoff(scenario.nz),
        )
    b = fock_amplitudes(spec, cutoff_b)
    amps = np.outer(a, b)
    return TwoModeFockState(amps / np.linalg.norm(amps))


@lru_cache(maxsize=None)
def _j2_sector_eigensystem(total: int) -> tuple[np.ndarray, np.ndarray]:
    # basis |n, total - n>, n = 0..total
    n = np.arange(total)
    # <n+1, m-1| a^dag b |n, m> = sqrt((n+1) m) with m = total - n
    up = np.sqrt((n + 1) * (total - n))
    j2 = np.zeros((total + 1, total + 1), dtype=complex)
    j2[n + 1, n] = up / 2j
    j2[n, n + 1] = -up / 2j
    w, v = np.linalg.eigh(j2)
    w.setflags(write=False)
    v.setflags(write=False)
    return w, v


def sector_unitary(total: int, phi: float) -> np.ndarray:
    """exp(-i phi J2) restricted to the sector n + m = total."""
    w, v = _j2_sector_eigensystem(total)
    return (v * np.exp(-1j * phi * w)) @ v.conj().T


def apply_interferometer(state: TwoModeFockState, phi: float) -> TwoModeFockState:
    """exp(-i phi J2) |state>, with the grid widened to contain every sector."""
    da, db = state.amps.shape
    top = da + db - 2
    out = np.zeros((top + 1, top + 1), dtype=complex)
    for total in range(top + 1):
        lo, hi = max(0, total - (db - 1)), min(total, da - 1)
        n_in = np.arange(lo, hi + 1)
        vec = state.amps[n_in, total - n_in]
        if not np.any(vec):
            continue
        w, v = _j2_sector_eigensystem(total)
        coef = v[n_in, :].conj().T @ vec
        rotated = v @ (np.exp(-1j * phi * w) * coef)
        n_out = np.arange(total + 1)
        out[n_out, total - n_out] = rotated
    return TwoModeFockState(out)


def parity_oracle(state: TwoModeFockState) -> float:
    """<(-1)^{b^dag b}> on mode b."""
    sign = (-1.0) ** np.arange(state.dim_b)
    return float(np.sum(np.abs(state.amps) ** 2 * sign[None, :]))


def _apply_j2(amps: np.ndarray) -> np.ndarray:
    da, db = amps.shape
    padded = np.zeros((da + 1, db + 1), dtype=complex)
    padded[:da, :db] = amps
    n = np.arange(da + 1)[:, None]
    m = np.arange(db + 1)[None, :]
    # (a^dag b psi)[n, m] = sqrt(n (m+1)) psi[n-1, m+1]
    adag_b = np.zeros_like(padded)
    adag_b[1:, :-1] = np.sqrt(n[1:] * m[:, 1:]) * padded[:-1, 1:]
    # (a b^dag psi)[n, m] = sqrt((n+1) m) psi[n+1, m-1]
    a_bdag = np.zeros_like(padded)
    a_bdag[:-1, 1:] = np.sqrt(n[1:] * m[:, 1:]) * padded[1:, :-1]
    return (adag_b - a_bdag) / 2j


def j2_variance_oracle(state: TwoModeFockState) -> float:
    """<J2^2> - <J2>^2; four times this is the pure-state QFI."""
    psi = np.zeros((state.dim_a + 1, state.dim_b + 1), dtype=complex)
    psi[: state.dim_a, : state.dim_b] = state.amps
    j2psi = _apply_j2(state.amps)
    mean = np.vdot(psi, j2psi)
    return float(np.vdot(j2psi, j2psi).real - abs(mean) ** 2)


def oracle_parity(scenario: Scenario, phi: float) -> float:
    """Convenience: parity of the MZI output for a scenario."""
    return parity_oracle(apply_interferometer(build_input_state(scenario), phi))


def oracle_qfi(scenario: Scenario) -> float:
    return 4.0 * j2_variance_oracle(build_input_state(scenario))
