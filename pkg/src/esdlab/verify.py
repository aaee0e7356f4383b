"""Cross-checks between independent routes through the library."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import (
    _rhs_vec,
    analytic_coefficients,
    integrate_packed,
    lindblad_rhs_full,
    steady_state,
)
from .entanglement import concurrence_general, concurrence_x
from .esd import certify_finite_death, closed_form_roots_wzero, death_quartics, quartic_value_at_zero, esd_report
from .errors import DegenerateDenominator
from .families import random_xstate
from .numerics import solve_quartic_real
from .state import BathParams, xstate_to_matrix

PASS, FAIL, NA = "pass", "fail", "not applicable"


@dataclass
class CheckResult:
    name: str
    status: str
    max_error: float = 0.0
    tolerance: float = 0.0
    detail: str = ""

    def line(self) -> str:
        err = "" if self.status == NA else f"  max_err={self.max_error:.3e} tol={self.tolerance:.0e}"
        extra = f"  ({self.detail})" if self.detail else ""
        return f"[{self.status.upper():>14}] {self.name}{err}{extra}"


@dataclass
class VerifyReport:
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    def summary(self) -> str:
        lines = [c.line() for c in self.checks]
        lines.append("ALL CHECKS PASSED" if self.ok else "SOME CHECKS FAILED")
        return "\n".join(lines)


def _result(name, err, tol, detail=""):
    return CheckResult(name, PASS if err <= tol else FAIL, float(err), tol, detail)


def check_analytic_vs_numeric(rng, n_states=40, nbars=(0.0, 0.5, 2.0),
                              times=(0.1, 0.5, 1.0, 3.0, 5.0), gdt=1e-3, perturb=0.0):
    states = [random_xstate(rng) for _ in range(n_states)]
    v0 = np.array([s.as_vector() for s in states])
    worst = 0.0
    for n in nbars:
        props = [analytic_coefficients(s, n) for s in states]
        if perturb:
            for p in props:
                p.pops[0, 1] += perturb
        numeric = integrate_packed(v0, n, times, gdt)
        for k, t in enumerate(times):
            x = math.exp(-(2 * n + 1) * t)
            exact = np.array([p.evaluate_monomial([x])[0] for p in props])
            worst = max(worst, float(np.max(np.abs(exact - numeric[k]))))
    return _result("analytic propagator vs RK4", worst, 1e-8)


def check_generator_encodings(rng, n_states=50, nbars=(0.0, 0.3, 2.0)):
    worst = 0.0
    for n in nbars:
        bath = BathParams(1.0, n)
        for _ in range(n_states):
            s = random_xstate(rng)
            full = lindblad_rhs_full(xstate_to_matrix(s), bath)
            dv = _rhs_vec(s.as_vector(), n)
            expect = np.zeros((4, 4), dtype=complex)
            expect[[0, 1, 2, 3], [0, 1, 2, 3]] = dv[:4]
            expect[0, 3], expect[3, 0] = dv[5], np.conj(dv[5])
            expect[1, 2], expect[2, 1] = dv[4], np.conj(dv[4])
            worst = max(worst, float(np.max(np.abs(full - expect))))
    return _result("full Lindblad generator vs X-state equations", worst, 1e-14)


def check_concurrence_paths(rng, n_states=200):
    worst = 0.0
    for _ in range(n_states):
        s = random_xstate(rng)
        worst = max(worst, abs(concurrence_x(s) - concurrence_general(xstate_to_matrix(s))))
    return _result("X-state concurrence vs Wootters spin flip", worst, 1e-10)


def _match_sets(xs, ys):
    if len(xs) != len(ys):
        return math.inf
    # relative beyond magnitude one: roots far outside (0, 1) keep ~12 digits
    return max((abs(u - v) / max(1.0, abs(v)) for u, v in zip(sorted(xs), sorted(ys))), default=0.0)


def check_closed_form_roots(rng, n_states=200):
    worst, used = 0.0, 0
    while used < n_states:
        s = random_xstate(rng, wzero=True)
        n = float(rng.uniform(0.0, 5.0))
        try:
            cf = closed_form_roots_wzero(s.a, s.d, abs(s.z), n, tol=1e-6)
        except DegenerateDenominator:
            continue
        general = solve_quartic_real(death_quartics(s, n).q_z).expanded()
        worst = max(worst, _match_sets(cf, general))
        used += 1
    return _result("closed-form w=0 roots vs quartic solver", worst, 1e-9)


def check_zero_anchor(rng, n_cases=100):
    worst = 0.0
    for _ in range(n_cases):
        s = random_xstate(rng)
        n = float(rng.uniform(0.0, 10.0))
        q = death_quartics(s, n)
        c = quartic_value_at_zero(n)
        worst = max(worst, abs(q.q_z(0.0) - c), abs(q.q_w(0.0) - c))
    return _result("quartic constant term equals -n^2(n+1)^2/(2n+1)^4", worst, 1e-12)


def check_finite_death(rng, nbar, n_states=100):
    name = f"finite-temperature sudden death, nbar={nbar:g}"
    if nbar <= 0:
        return CheckResult(name, NA, detail="theorem needs nbar > 0")
    failures = 0
    for _ in range(n_states):
        s = random_xstate(rng, entangled=True)
        try:
            certify_finite_death(s, nbar)
            rep = esd_report(s, BathParams(1.0, nbar))
            if rep.asymptotic or not (0.0 < rep.death_x < 1.0) or not math.isfinite(rep.death_time):
                failures += 1
        except Exception:
            failures += 1
    return _result(name, failures, 0, f"{failures}/{n_states} states without finite death")


def check_steady_state(nbars=(0.0, 0.5, 1.0, 2.0, 10.0)):
    worst = 0.0
    for n in nbars:
        worst = max(worst, float(np.max(np.abs(_rhs_vec(steady_state(n).as_vector(), n)))))
    return _result("steady state is a fixed point", worst, 1e-14)


def run_verify(seed: int = 0, perturb: float = 0.0,
               theorem_nbars=(0.0, 0.01, 0.1, 0.5, 1.0, 2.0, 10.0)) -> VerifyReport:
    """Run every cross-check. `perturb` is added to one propagator coefficient
    (mutation test: the analytic-vs-numeric check must then fail)."""
    rng = np.random.default_rng(seed)
    rep = VerifyReport()
    rep.checks.append(check_analytic_vs_numeric(rng, perturb=perturb))
    rep.checks.append(check_generator_encodings(rng))
    rep.checks.append(check_steady_state())
    rep.checks.append(check_concurrence_paths(rng))
    rep.checks.append(check_closed_form_roots(rng))
    rep.checks.append(check_zero_anchor(rng))
    for n in theorem_nbars:
        rep.checks.append(check_finite_death(rng, n))
    return rep
