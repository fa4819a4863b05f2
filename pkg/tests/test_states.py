import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paritymzi.errors import DegenerateStateError, TruncationError, UnattainableTargetError
from paritymzi.states import (
    Kind,
    Scenario,
    StateSpec,
    default_cutoff,
    fock_amplitudes,
    mean_photon_number,
    minimum_nbar,
    normalization,
    normalization_generating,
    required_cutoff,
    second_moment_b2,
    solve_r_for_nbar,
)


def _moments(amps):
    n = np.arange(len(amps))
    nbar = float(np.sum(n * amps**2))
    b2 = float(np.sum(np.sqrt(n[2:] * (n[2:] - 1)) * amps[:-2] * amps[2:]))
    return nbar, b2


def test_spec_validation():
    with pytest.raises(ValueError):
        StateSpec(Kind.PLAIN, 0.3, 1)
    with pytest.raises(ValueError):
        StateSpec(Kind.ADDED, -0.1, 1)
    with pytest.raises(ValueError):
        StateSpec(Kind.ADDED, 0.1, 1.5)
    with pytest.raises(ValueError):
        Scenario(StateSpec(Kind.PLAIN, 0.1), -1.0)
    assert StateSpec("added", 0.2, 2).kind is Kind.ADDED


def test_coherent_amplitude():
    sc = Scenario(StateSpec(Kind.PLAIN, 0.1), 4.0, math.pi / 2)
    assert sc.z == pytest.approx(2j)


def test_normalization_examples():
    assert normalization(StateSpec(Kind.ADDED, 0.7, 0)) == 1.0
    for k in range(6):
        assert normalization(StateSpec(Kind.ADDED, 0.0, k)) == pytest.approx(math.factorial(k))
    assert normalization(StateSpec(Kind.ADDED, 0.3, 1)) == pytest.approx(math.cosh(0.3) ** 2, rel=1e-15)
    assert normalization(StateSpec(Kind.PLAIN, 0.3)) == 1.0


def test_normalization_against_fock_norm():
    # squared norm of b^dag S(0.3)|0> built directly in the Fock basis at cutoff 60
    r = 0.3
    c = np.zeros(61)
    c[0] = 1.0 / math.sqrt(math.cosh(r))
    for n in range(0, 58, 2):
        c[n + 2] = c[n] * (-math.tanh(r) / 2) * math.sqrt((n + 1) * (n + 2)) / (n // 2 + 1)
    added = np.zeros_like(c)
    added[1:] = c[:-1] * np.sqrt(np.arange(1, 61))
    assert normalization(StateSpec(Kind.ADDED, r, 1)) == pytest.approx(float(added @ added), rel=1e-12)


def test_degenerate_subtraction():
    spec = StateSpec(Kind.SUBTRACTED, 0.0, 2)
    assert spec.degenerate
    for fn in (normalization, mean_photon_number, second_moment_b2, fock_amplitudes):
        with pytest.raises(DegenerateStateError):
            fn(spec)
    assert not StateSpec(Kind.SUBTRACTED, 0.0, 0).degenerate


@pytest.mark.parametrize("kind", [Kind.ADDED, Kind.SUBTRACTED])
@pytest.mark.parametrize("ops", range(9))
@pytest.mark.parametrize("r", [0.1, 0.3, 0.9, 1.5])
def test_closed_form_norm_matches_generating_function(kind, ops, r):
    spec = StateSpec(kind, r, ops)
    assert normalization(spec) == pytest.approx(normalization_generating(spec), rel=1e-10)


def test_mean_photon_examples():
    for r in (0.0, 0.4, 1.3):
        assert mean_photon_number(StateSpec(Kind.PLAIN, r)) == pytest.approx(math.sinh(r) ** 2, abs=1e-15)
    assert mean_photon_number(StateSpec(Kind.ADDED, 0.0, 1)) == pytest.approx(1.0)
    n = mean_photon_number(StateSpec(Kind.ADDED, 0.3, 1))
    assert n == pytest.approx(3 * math.sinh(0.3) ** 2 + 1, rel=1e-14)
    assert n == pytest.approx(1.27820, abs=1e-5)


def test_second_moment_examples():
    for r in (0.1, 0.3, 0.9):
        sh, ch = math.sinh(r), math.cosh(r)
        assert second_moment_b2(StateSpec(Kind.PLAIN, r)) == pytest.approx(-sh * ch, rel=1e-13)
        assert second_moment_b2(StateSpec(Kind.ADDED, r, 1)) == pytest.approx(-3 * sh * ch, rel=1e-13)
    assert second_moment_b2(StateSpec(Kind.PLAIN, 0.0)) == 0.0


def test_fock_amplitude_examples():
    vac = fock_amplitudes(StateSpec(Kind.PLAIN, 0.0), 40)
    assert vac[0] == 1.0 and not np.any(vac[1:])
    two = fock_amplitudes(StateSpec(Kind.ADDED, 0.0, 2), 40)
    assert two[2] == pytest.approx(1.0) and np.count_nonzero(two) == 1
    sv = fock_amplitudes(StateSpec(Kind.PLAIN, 0.9), required_cutoff(StateSpec(Kind.PLAIN, 0.9)))
    assert float(sv @ sv) == pytest.approx(1.0, abs=1e-12)
    assert _moments(sv)[0] == pytest.approx(math.sinh(0.9) ** 2, abs=1e-10)
    assert not np.any(sv[1::2])


def test_fock_amplitudes_truncation_error():
    # the cutoff-60 tail of a plain r = 0.9 state is about 1e-9, above the bound
    with pytest.raises(TruncationError) as info:
        fock_amplitudes(StateSpec(Kind.PLAIN, 0.9), 60)
    assert info.value.suggested_cutoff > 60
    fock_amplitudes(StateSpec(Kind.PLAIN, 0.9), info.value.suggested_cutoff)


def test_required_cutoff_never_below_rule():
    for spec in (StateSpec(Kind.PLAIN, 0.9), StateSpec(Kind.ADDED, 0.9, 3), StateSpec(Kind.SUBTRACTED, 0.3, 2)):
        assert required_cutoff(spec) >= default_cutoff(mean_photon_number(spec), spec.ops)


@pytest.mark.parametrize("kind", [Kind.ADDED, Kind.SUBTRACTED])
@pytest.mark.parametrize("ops", range(5))
@pytest.mark.parametrize("r", [0.2, 0.6, 1.2])
def test_fock_moments_reproduce_closed_forms(kind, ops, r):
    spec = StateSpec(kind, r, ops)
    nbar, b2 = _moments(fock_amplitudes(spec, max(80, required_cutoff(spec))))
    assert nbar == pytest.approx(mean_photon_number(spec), abs=1e-8)
    assert b2 == pytest.approx(second_moment_b2(spec), abs=1e-8)


@given(st.floats(0.01, 2.0))
@settings(max_examples=40, deadline=None)
def test_one_photon_identity(r):
    a, s = StateSpec(Kind.ADDED, r, 1), StateSpec(Kind.SUBTRACTED, r, 1)
    assert mean_photon_number(a) == pytest.approx(mean_photon_number(s), rel=1e-10)
    assert second_moment_b2(a) == pytest.approx(second_moment_b2(s), rel=1e-10)
    cut = required_cutoff(a)
    np.testing.assert_allclose(fock_amplitudes(a, cut), fock_amplitudes(s, cut), atol=1e-10)


@pytest.mark.parametrize("m", range(2, 7))
def test_addition_dominance(m):
    for r in np.linspace(0.01, 2.0, 60):
        na = mean_photon_number(StateSpec(Kind.ADDED, r, m))
        ns = mean_photon_number(StateSpec(Kind.SUBTRACTED, r, m))
        assert na > ns > math.sinh(r) ** 2


@pytest.mark.xfail(strict=True, reason="one added and one subtracted photon give the same state")
def test_addition_dominance_single_photon():
    r = 0.5
    assert mean_photon_number(StateSpec(Kind.ADDED, r, 1)) > mean_photon_number(StateSpec(Kind.SUBTRACTED, r, 1))


@pytest.mark.parametrize("kind,ops", [(Kind.PLAIN, 0)] + [(k, m) for k in (Kind.ADDED, Kind.SUBTRACTED) for m in range(1, 7)])
def test_mean_photon_number_monotone_in_r(kind, ops):
    rs = np.linspace(0.001, 3.0, 300)
    ns = [mean_photon_number(StateSpec(kind, r, ops)) for r in rs]
    assert all(b > a for a, b in zip(ns, ns[1:]))


def test_solve_examples():
    assert solve_r_for_nbar(Kind.PLAIN, 0, 4.0) == pytest.approx(math.asinh(2.0), abs=1e-12)
    assert solve_r_for_nbar(Kind.PLAIN, 0, 4.0) == pytest.approx(1.44363, abs=1e-5)
    assert solve_r_for_nbar(Kind.ADDED, 1, 1.0) == 0.0
    r = solve_r_for_nbar(Kind.SUBTRACTED, 2, 16.0)
    assert mean_photon_number(StateSpec(Kind.SUBTRACTED, r, 2)) == pytest.approx(16.0, abs=1e-10)
    assert r == pytest.approx(1.3111973626921867, abs=1e-12)


def test_solve_unattainable():
    with pytest.raises(UnattainableTargetError) as info:
        solve_r_for_nbar(Kind.ADDED, 3, 2.0)
    assert info.value.minimum == pytest.approx(3.0)
    with pytest.raises(UnattainableTargetError):
        solve_r_for_nbar(Kind.SUBTRACTED, 1, 1.0)
    assert minimum_nbar(Kind.SUBTRACTED, 2) == 0.0
    assert minimum_nbar(Kind.SUBTRACTED, 3) == 1.0


@given(
    st.sampled_from([(Kind.PLAIN, 0), (Kind.ADDED, 1), (Kind.ADDED, 3), (Kind.SUBTRACTED, 2), (Kind.SUBTRACTED, 3)]),
    st.floats(0.0, 200.0),
)
@settings(max_examples=60, deadline=None)
def test_solve_roundtrip(kind_ops, extra):
    kind, ops = kind_ops
    target = minimum_nbar(kind, ops) + 1e-6 + extra
    r = solve_r_for_nbar(kind, ops, target)
    assert r >= 0
    assert mean_photon_number(StateSpec(kind, r, ops)) == pytest.approx(target, abs=1e-10 * max(1.0, target))
