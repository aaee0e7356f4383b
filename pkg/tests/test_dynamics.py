import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import printed_populations, random_states, xstates
from esdlab.dynamics import (
    _rhs_vec,
    analytic_coefficients,
    evolve_analytic,
    evolve_numeric,
    integrate_full,
    lindblad_rhs_full,
    ode_rhs_x,
    steady_state,
)
from esdlab.families import BELL, ye_state
from esdlab.state import BathParams, XState, xstate_to_matrix


def test_rhs_ground_state_is_fixed_at_zero_temperature():
    ground = XState(0, 0, 0, 1)
    d = ode_rhs_x(ground, BathParams(1.0, 0.0))
    assert d.as_vector().tolist() == [0j] * 6


def test_rhs_doubly_excited_decays():
    d = ode_rhs_x(XState(1, 0, 0, 0), BathParams(2.0, 0.0))
    # a' = -2 gamma a, b' = c' = gamma a
    assert d.a == pytest.approx(-4.0)
    assert d.b == pytest.approx(2.0) and d.c == pytest.approx(2.0)
    assert d.d == 0.0


def test_rhs_coherence_damping_rate():
    bath = BathParams(1.0, 0.5)
    d = ode_rhs_x(BELL["bell_psi_plus"], bath)
    # coherences decay at gamma (2 nbar + 1)
    assert d.z == pytest.approx(-bath.rate * 0.5)


def test_full_generator_matches_x_equations(rng):
    for n in (0.0, 0.3, 4.0):
        bath = BathParams(1.3, n)
        for s in random_states(rng, 30):
            full = lindblad_rhs_full(xstate_to_matrix(s), bath)
            dv = ode_rhs_x(s, bath)
            expect = np.diag(np.array(dv.populations, dtype=complex))
            expect[1, 2], expect[2, 1] = dv.z, np.conj(dv.z)
            expect[0, 3], expect[3, 0] = dv.w, np.conj(dv.w)
            np.testing.assert_allclose(full, expect, atol=1e-14)


@settings(max_examples=100, deadline=None)
@given(xstates(), st.floats(0.0, 20.0))
def test_generator_traceless_and_hermitian(s, nbar):
    out = lindblad_rhs_full(xstate_to_matrix(s), BathParams(1.0, nbar))
    assert abs(np.trace(out)) < 1e-13
    assert np.array_equal(out, out.conj().T)


def test_printed_forms_agree_with_derived(rng):
    for _ in range(50):
        s = random_states(rng, 1)[0]
        n = float(rng.uniform(0.0, 10.0))
        x = float(rng.uniform(0.0, 1.0))
        a, _, _, d = printed_populations(s.a, s.b, s.c, s.d, n, x)
        got = analytic_coefficients(s, n)(x)
        assert got.a == pytest.approx(a, abs=1e-12)
        assert got.d == pytest.approx(d, abs=1e-12)
        assert got.z == pytest.approx(s.z * x, abs=1e-12)
        assert got.w == pytest.approx(s.w * x, abs=1e-12)


def test_printed_b_agrees_and_printed_c_breaks_trace():
    s = XState(0.1, 0.2, 0.3, 0.4)
    n, x = 0.7, 0.4
    a, b, c, d = printed_populations(s.a, s.b, s.c, s.d, n, x)
    got = analytic_coefficients(s, n)(x)
    assert got.b == pytest.approx(b, abs=1e-12)
    # printed c is short of the derived one by a linear-in-X term
    missing = -(s.b + s.d - 1) / (2 * n + 1) ** 2 * x
    assert got.c - c == pytest.approx(missing, abs=1e-12)
    assert abs(a + b + c + d - 1) > 1e-3
    assert got.a + got.b + got.c + got.d == pytest.approx(1.0, abs=1e-15)


@settings(max_examples=200, deadline=None)
@given(xstates(), st.floats(0.0, 50.0))
def test_trace_coefficients(s, nbar):
    pops = analytic_coefficients(s, nbar).pops
    sums = pops.sum(axis=0)
    assert abs(sums[0] - 1) < 1e-14
    assert abs(sums[1]) < 1e-14
    assert abs(sums[2]) < 1e-14


@settings(max_examples=200, deadline=None)
@given(xstates(), st.floats(0.0, 50.0))
def test_exchange_symmetry(s, nbar):
    p = analytic_coefficients(s, nbar).pops
    q = analytic_coefficients(s.swap_bc(), nbar).pops
    np.testing.assert_allclose(q[[0, 2, 1, 3]], p, atol=1e-15)


@settings(max_examples=200, deadline=None)
@given(xstates(), st.floats(0.0, 50.0))
def test_population_difference_is_linear(s, nbar):
    p = analytic_coefficients(s, nbar).pops
    diff = p[1] - p[2]
    assert abs(diff[0]) < 1e-14
    assert diff[1] == pytest.approx(s.b - s.c, abs=1e-14)
    assert abs(diff[2]) < 1e-14


@pytest.mark.parametrize("nbar, expected", [
    (0.0, (0, 0, 0, 1)),
    (1.0, (1 / 9, 2 / 9, 2 / 9, 4 / 9)),
    (1e6, (0.25, 0.25, 0.25, 0.25)),
])
def test_steady_state(nbar, expected):
    ss = steady_state(nbar)
    np.testing.assert_allclose(ss.populations, expected, atol=1e-6 if nbar > 1e3 else 1e-15)
    # the generator scales with 2 nbar + 1, so compare relative to that rate
    assert np.max(np.abs(_rhs_vec(ss.as_vector(), nbar))) < 1e-14 * (2 * nbar + 1)


def test_x_equals_one_returns_initial_state():
    s = ye_state(0.3)
    assert analytic_coefficients(s, 2.5)(1.0) == s


def test_long_time_limit_is_steady_state():
    s = BELL["bell_phi_plus"]
    late = evolve_analytic(s, BathParams(1.0, 1.0), 40.0)
    np.testing.assert_allclose(late.populations, steady_state(1.0).populations, atol=1e-15)


def test_analytic_vs_numeric(rng):
    for n in (0.0, 0.5, 2.0):
        bath = BathParams(0.7, n)
        for s in random_states(rng, 5):
            for t in (0.2, 1.5):
                exact = evolve_analytic(s, bath, t).as_vector()
                num = evolve_numeric(s, bath, t).as_vector()
                np.testing.assert_allclose(num, exact, atol=1e-8)


def test_full_evolution_tracks_x_evolution():
    s = ye_state(0.6)
    bath = BathParams(1.0, 0.4)
    traj = integrate_full(xstate_to_matrix(s), bath, [0.0, 0.5, 1.0], dt=1e-3)
    for t, m in zip((0.0, 0.5, 1.0), traj):
        np.testing.assert_allclose(m, xstate_to_matrix(evolve_analytic(s, bath, t)), atol=1e-9)


def test_zero_time_is_identity():
    s = BELL["bell_psi_minus"]
    assert evolve_numeric(s, BathParams(1.0, 1.0), 0.0) == s
    assert math.isclose(evolve_analytic(s, BathParams(1.0, 1.0), 0.0).z.real, -0.5)


def test_corrected_c_symbolic():
    """Symbolic two-qubit transfer versus the corrected c(X) written out in
    the README, and versus b(X) under b0 <-> c0."""
    sp = pytest.importorskip("sympy")
    a0, b0, c0, n, x = sp.symbols("a0 b0 c0 n X")
    d0 = 1 - a0 - b0 - c0
    q = n / (2 * n + 1)
    # single-qubit transfer T[out][in], index 0 excited, 1 ground
    t1 = [[1 - (1 - q) * (1 - x), q * (1 - x)], [(1 - q) * (1 - x), 1 - q * (1 - x)]]
    p0 = [a0, b0, c0, d0]
    pops = [sum(p0[i] * t1[o // 2][i // 2] * t1[o % 2][i % 2] for i in range(4)) for o in range(4)]
    k2 = (2 * a0 + 2 * d0 - 1) * n ** 2 + (3 * a0 + d0 - 1) * n + a0
    c_fixed = (n * (n + 1)
               + (2 * (a0 + 2 * c0 + d0 - 1) * n ** 2 + (3 * a0 + 4 * c0 + d0 - 2) * n + (a0 + c0)) * x
               - k2 * x ** 2) / (2 * n + 1) ** 2
    assert sp.simplify(pops[2] - c_fixed) == 0
    assert sp.simplify(pops[1].subs({b0: c0, c0: b0}, simultaneous=True) - pops[2]) == 0
    assert sp.simplify(sum(pops) - 1) == 0
