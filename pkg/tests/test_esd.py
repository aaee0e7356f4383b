import logging
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import bisect, printed_populations, random_states
from esdlab.entanglement import concurrence_x
from esdlab.errors import DegenerateDenominator, NotEntangled, ZeroTemperature
from esdlab.esd import (
    certify_finite_death,
    closed_form_roots_wzero,
    death_quartics,
    quartic_value_at_zero,
    esd_report,
)
from esdlab.experiments import fig2_state
from esdlab.families import BELL, ye_state
from esdlab.numerics import solve_quartic_real
from esdlab.state import BathParams, XState

log = logging.getLogger(__name__)

# Oracle: the printed a(X), d(X) with plain bisection on |z0|^2 X^2 - a d.
BELL_ROOT = 0.39401664065177244
BELL_TIME = 0.3104540451397665
BELL_ALL_ROOTS = [-3.1104875019902196, -0.3214930133492446, 0.3940166406517722, 2.537963874687692]
FIG2_ROOT = 0.600567654064553


def printed_qz(s, nbar):
    def q(x):
        a, _, _, d = printed_populations(s.a, s.b, s.c, s.d, nbar, x)
        return abs(s.z) ** 2 * x * x - a * d
    return q


@pytest.mark.parametrize("nbar, expected", [(0.8, -0.04537656244529253), (1.0, -4 / 81), (0.0, 0.0)])
def test_quartic_constant_term(nbar, expected):
    assert quartic_value_at_zero(nbar) == pytest.approx(expected, abs=1e-15)
    q = death_quartics(ye_state(0.5), nbar)
    assert q.q_z(0.0) == pytest.approx(expected, abs=1e-12)
    assert q.q_w(0.0) == pytest.approx(expected, abs=1e-12)


def test_quartic_constant_term_random(rng):
    for s in random_states(rng, 100):
        n = float(rng.uniform(0, 10))
        q = death_quartics(s, n)
        assert abs(q.q_z(0.0) - quartic_value_at_zero(n)) < 1e-12
        assert abs(q.q_w(0.0) - quartic_value_at_zero(n)) < 1e-12


def test_quartic_matches_printed_populations(rng):
    for s in random_states(rng, 20, wzero=True):
        n = float(rng.uniform(0, 5))
        q = death_quartics(s, n).q_z
        ref = printed_qz(s, n)
        for x in np.linspace(0, 1, 11):
            assert q(x) == pytest.approx(ref(x), abs=1e-13)


def test_fig2_quartic():
    s = fig2_state()
    q = death_quartics(s, 0.8).q_z
    assert q(0.0) == pytest.approx(-0.04537656244529253, abs=1e-15)
    assert q(1.0) == pytest.approx(0.085, abs=1e-15)
    root = bisect(printed_qz(s, 0.8), 0.0, 1.0)
    assert root == pytest.approx(FIG2_ROOT, abs=1e-12)
    rep = esd_report(s, BathParams(1.0, 0.8))
    assert rep.death_x == pytest.approx(FIG2_ROOT, abs=1e-12)


def test_bell_example():
    s = BELL["bell_psi_plus"]
    assert bisect(printed_qz(s, 1.0), 0.0, 1.0) == pytest.approx(BELL_ROOT, abs=1e-12)
    rep = esd_report(s, BathParams(1.0, 1.0))
    assert not rep.asymptotic
    assert rep.roots_z == [pytest.approx(BELL_ROOT, abs=1e-12)]
    assert rep.death_x == pytest.approx(BELL_ROOT, abs=1e-12)
    assert rep.death_time == pytest.approx(BELL_TIME, abs=1e-12)
    assert rep.intervals == [(pytest.approx(BELL_ROOT), 1.0)]
    cert = certify_finite_death(s, 1.0)
    assert cert.quartic == "z" and cert.root == pytest.approx(BELL_ROOT, abs=1e-12)


def test_bell_closed_form():
    roots = closed_form_roots_wzero(0.0, 0.0, 0.5, 1.0)
    assert roots == pytest.approx(BELL_ALL_ROOTS, abs=1e-12)
    inside = [r for r in roots if 0 < r < 1]
    assert inside == [pytest.approx(BELL_ROOT, abs=1e-12)]
    general = solve_quartic_real(death_quartics(BELL["bell_psi_plus"], 1.0).q_z).expanded()
    assert general == pytest.approx(roots, abs=1e-9)


def test_closed_form_matches_general(rng):
    used = 0
    while used < 300:
        s = random_states(rng, 1, wzero=True)[0]
        n = float(rng.uniform(0, 5))
        try:
            cf = closed_form_roots_wzero(s.a, s.d, abs(s.z), n, tol=1e-6)
        except DegenerateDenominator:
            continue
        general = solve_quartic_real(death_quartics(s, n).q_z).expanded()
        assert len(cf) == len(general)
        for u, v in zip(cf, general):
            assert abs(u - v) <= 1e-9 * max(1.0, abs(v))
        used += 1


def test_closed_form_degenerate_denominator():
    with pytest.raises(DegenerateDenominator):
        closed_form_roots_wzero(0.0, 0.5, 0.3, 0.0)


def test_certify_errors():
    with pytest.raises(NotEntangled):
        certify_finite_death(XState(0.25, 0.25, 0.25, 0.25), 1.0)
    with pytest.raises(ZeroTemperature):
        certify_finite_death(BELL["bell_psi_plus"], 0.0)


def test_zero_temperature_bell_is_asymptotic():
    rep = esd_report(BELL["bell_psi_plus"], BathParams(1.0, 0.0))
    assert rep.asymptotic and rep.death_x is None and math.isinf(rep.death_time)
    assert rep.to_dict()["death_time"] is None


def test_unentangled_state_reports_death_at_start():
    rep = esd_report(XState(0.25, 0.25, 0.25, 0.25), BathParams(1.0, 0.5))
    assert rep.death_x == 1.0 and rep.death_time == 0.0 and rep.intervals == []


@pytest.mark.parametrize("alpha, asymptotic", [(0.0, True), (0.2, True), (1 / 3, True), (0.5, False), (1.0, False)])
def test_ye_zero_temperature(alpha, asymptotic):
    assert esd_report(ye_state(alpha), BathParams(1.0, 0.0)).asymptotic is asymptotic


def test_finite_temperature_always_dies(rng):
    for n in (0.01, 0.5, 10.0):
        for s in random_states(rng, 50, entangled=True):
            cert = certify_finite_death(s, n)
            assert 0 < cert.root < 1
            rep = esd_report(s, BathParams(1.0, n))
            assert not rep.asymptotic and 0 < rep.death_x < 1 and math.isfinite(rep.death_time)


def test_concurrence_vanishes_past_death(rng):
    from esdlab.dynamics import analytic_coefficients

    for s in random_states(rng, 30, entangled=True):
        rep = esd_report(s, BathParams(1.0, 0.7))
        prop = analytic_coefficients(s, 0.7)
        x = rep.death_x
        assert concurrence_x(prop(x * 0.999)) <= 1e-12
        assert concurrence_x(prop(min(1.0, x * 1.001 + 1e-9))) > 0


@settings(max_examples=100, deadline=None)
@given(st.floats(0.0, 1.0), st.floats(0.001, 20.0))
def test_ye_death_consistent_with_sign(alpha, nbar):
    s = ye_state(alpha)
    rep = esd_report(s, BathParams(1.0, nbar))
    q = death_quartics(s, nbar)
    for lo, hi in rep.intervals:
        mid = 0.5 * (lo + hi)
        assert q.q_z(mid) > 0 or q.q_w(mid) > 0


def test_revival_scan(rng):
    """Look for entanglement that dies and later revives (two separate
    positive intervals). None has been seen; any instance is logged."""
    revivals = 0
    for s in random_states(rng, 300, entangled=True):
        for n in (0.0, 0.1, 1.0):
            rep = esd_report(s, BathParams(1.0, n))
            if len(rep.intervals) > 1:
                revivals += 1
                log.warning("revival: state=%s nbar=%s intervals=%s", s, n, rep.intervals)
    assert revivals == 0
