"""Sudden-death analysis in the X coordinate.

Concurrence is positive exactly where one of the two quartics

    q_z(X) = |z0|^2 X^2 - a(X) d(X),    q_w(X) = |w0|^2 X^2 - b(X) c(X)

is positive, so the death point is located from their real roots in (0, 1)
and the sign of each quartic between consecutive roots.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import analytic_coefficients
from .entanglement import concurrence_x
from .errors import DegenerateDenominator, NotEntangled, ZeroTemperature
from .numerics import BOUNDARY_TOL, Poly4, refine_bracketed_root, solve_quartic_real
from .state import BathParams, XState, t_of_x, validate_xstate


@dataclass(frozen=True)
class DeathQuartics:
    q_z: Poly4
    q_w: Poly4

    def items(self):
        return (("z", self.q_z), ("w", self.q_w))


def quartic_value_at_zero(nbar: float) -> float:
    """Common value of both quartics at X = 0."""
    return -nbar ** 2 * (nbar + 1) ** 2 / (2 * nbar + 1) ** 4


def death_quartics(s0: XState, nbar: float) -> DeathQuartics:
    prop = analytic_coefficients(s0, nbar)
    a, b, c, d = prop.pops
    qz = -np.convolve(a, d)
    qz[2] += abs(prop.z0) ** 2
    qw = -np.convolve(b, c)
    qw[2] += abs(prop.w0) ** 2
    return DeathQuartics(Poly4(qz), Poly4(qw))


@dataclass(frozen=True)
class Certificate:
    """Sign-change bracket proving a root of `quartic` in (0, 1)."""

    quartic: str
    bracket: tuple
    values: tuple
    root: float


def certify_finite_death(s0: XState, nbar: float) -> Certificate:
    validate_xstate(s0)
    if concurrence_x(s0) <= 0.0:
        raise NotEntangled("initial state has zero concurrence")
    if nbar <= 0.0:
        raise ZeroTemperature("the finite-death argument needs nbar > 0")
    for name, q in death_quartics(s0, nbar).items():
        lo, hi = q(0.0), q(1.0)
        if lo < 0.0 < hi:
            root = refine_bracketed_root(q, 0.0, 1.0)
            return Certificate(name, (0.0, 1.0), (lo, hi), root)
    # unreachable for valid input: C > 0 makes one quartic positive at X = 1
    raise NotEntangled("no quartic is positive at X = 1")


@dataclass(frozen=True)
class EsdReport:
    roots_z: list
    roots_w: list
    death_x: float | None
    death_time: float
    intervals: list
    asymptotic: bool
    boundary_roots: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "roots_z": list(self.roots_z),
            "roots_w": list(self.roots_w),
            "boundary_roots": list(self.boundary_roots),
            "death_x": self.death_x,
            "death_time": None if math.isinf(self.death_time) else self.death_time,
            "intervals": [list(iv) for iv in self.intervals],
            "asymptotic": self.asymptotic,
        }


def _interior_roots(q: Poly4):
    if q.scale == 0.0:
        return [], []
    inner, edge = solve_quartic_real(q).in_unit_interval(BOUNDARY_TOL)
    return [r.value for r in inner], [r.value for r in edge]


def entangled_intervals(quartics: DeathQuartics, breakpoints) -> list:
    """Merge the subintervals of (0, 1] on which some quartic is positive."""
    pts = [0.0] + sorted(breakpoints) + [1.0]
    out = []
    for lo, hi in zip(pts[:-1], pts[1:]):
        if hi <= lo:
            continue
        mid = 0.5 * (lo + hi)
        if quartics.q_z(mid) > 0.0 or quartics.q_w(mid) > 0.0:
            if out and out[-1][1] == lo:
                out[-1] = (out[-1][0], hi)
            else:
                out.append((lo, hi))
    return out


def esd_report(s0: XState, bath: BathParams) -> EsdReport:
    validate_xstate(s0)
    quartics = death_quartics(s0, bath.nbar)
    roots_z, edge_z = _interior_roots(quartics.q_z)
    roots_w, edge_w = _interior_roots(quartics.q_w)
    intervals = entangled_intervals(quartics, set(roots_z) | set(roots_w))

    if intervals and intervals[0][0] == 0.0:
        death_x, death_time, asymptotic = None, math.inf, True
    else:
        death_x = intervals[0][0] if intervals else 1.0
        death_time, asymptotic = t_of_x(death_x, bath), False
    return EsdReport(roots_z, roots_w, death_x, death_time, intervals, asymptotic,
                     sorted(set(edge_z) | set(edge_w)))


def closed_form_roots_wzero(a0: float, d0: float, zmag: float, nbar: float,
                            tol: float = 1e-12) -> list[float]:
    """Real roots of q_z for a state with w0 = 0 in closed form.

    The quartic factors into X^2 - 2(r +- s) X - t^2, where t^2 is carried as a
    signed real: it is negative for legitimate inputs such as the Bell state
    Psi+ at nbar = 1.
    """
    k = 2 * nbar + 1
    half_den = k * (a0 * (nbar + 1) + d0 * nbar) - nbar * (nbar + 1)
    den = 4 * half_den
    if abs(den) <= tol:
        raise DegenerateDenominator(f"denominator {den!r} vanishes")
    r = (1 + (a0 - d0) * k) / den
    radicand = (1 - a0 - d0) ** 2 + 4 * (zmag ** 2 - a0 * d0)
    if radicand < 0:
        # complex s: the two quadratics have no common real root
        return []
    s = k ** 2 * math.sqrt(radicand) / den
    t2 = nbar * (nbar + 1) / half_den
    roots = []
    for u in (r + s, r - s):
        disc = u * u + t2
        if disc < 0:
            continue
        root = math.sqrt(disc)
        roots += [u + root, u - root]
    return sorted(roots)
