"""Small numerical kernels: real quartic roots, bracketed refinement, RK4,
and the spectrum of a 4x4 matrix through its characteristic polynomial."""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import brentq

from .errors import ComplexSpectrum, NoSignChange, NonFiniteState, ZeroPolynomial

_EPS = np.finfo(float).eps
LEADING_TOL = 1e-14
BOUNDARY_TOL = 1e-12
IMAG_TOL = 1e-9


@dataclass(frozen=True)
class Poly4:
    """Real polynomial c0 + c1 X + c2 X^2 + c3 X^3 + c4 X^4."""

    coeffs: tuple

    def __init__(self, coeffs: Sequence[float]):
        cs = [float(c) for c in coeffs]
        if len(cs) > 5:
            if any(c != 0.0 for c in cs[5:]):
                raise ValueError("degree exceeds 4")
            cs = cs[:5]
        cs += [0.0] * (5 - len(cs))
        if not all(math.isfinite(c) for c in cs):
            raise ValueError(f"non-finite coefficient in {cs}")
        object.__setattr__(self, "coeffs", tuple(cs))

    def __call__(self, x):
        c0, c1, c2, c3, c4 = self.coeffs
        return (((c4 * x + c3) * x + c2) * x + c1) * x + c0

    def __getitem__(self, k):
        return self.coeffs[k]

    @property
    def scale(self) -> float:
        return max(abs(c) for c in self.coeffs)

    def derivative(self, order: int = 1) -> "Poly4":
        cs = list(self.coeffs)
        for _ in range(order):
            cs = [k * cs[k] for k in range(1, len(cs))]
        return Poly4(cs)

    def residual_tol(self, x: float = 1.0) -> float:
        """Largest |p(x)| accepted at a root: 1e-9 of the term magnitudes
        sum |c_i| |x|^i, and never below 1e-9 * max(1, scale)."""
        terms = sum(abs(c) * abs(x) ** i for i, c in enumerate(self.coeffs))
        return 1e-9 * max(1.0, self.scale, terms)


@dataclass(frozen=True)
class Root:
    value: float
    multiplicity: int = 1
    residual: float = 0.0


@dataclass(frozen=True)
class RootSet:
    roots: tuple = field(default_factory=tuple)

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)

    @property
    def values(self) -> list[float]:
        return [r.value for r in self.roots]

    def expanded(self) -> list[float]:
        """Root values repeated according to multiplicity."""
        return [r.value for r in self.roots for _ in range(r.multiplicity)]

    def in_unit_interval(self, tol: float = BOUNDARY_TOL):
        """Split roots into those strictly inside (0, 1) and those within `tol`
        of an endpoint. Returns ``(interior, boundary)``."""
        interior, boundary = [], []
        for r in self.roots:
            if tol < r.value < 1.0 - tol:
                interior.append(r)
            elif -tol <= r.value <= tol or 1.0 - tol <= r.value <= 1.0 + tol:
                boundary.append(r)
        return interior, boundary


# -- closed-form complex roots (unpolished) ---------------------------------

def _quadratic(b, c):
    """Roots of x^2 + b x + c, avoiding cancellation in the larger root."""
    disc = cmath.sqrt(b * b - 4 * c)
    q = -0.5 * (b + disc) if abs(b + disc) >= abs(b - disc) else -0.5 * (b - disc)
    if q == 0:
        return [0j, 0j]
    return [q, c / q]


def _cubic(b, c, d):
    """Roots of x^3 + b x^2 + c x + d (Cardano, complex arithmetic)."""
    p = c - b * b / 3
    q = 2 * b ** 3 / 27 - b * c / 3 + d
    shift = -b / 3
    if p == 0 and q == 0:
        return [complex(shift)] * 3
    delta = cmath.sqrt((q / 2) ** 2 + (p / 3) ** 3)
    u3 = -q / 2 + delta
    if abs(u3) < abs(-q / 2 - delta):
        u3 = -q / 2 - delta
    u = u3 ** (1 / 3) if u3 != 0 else 0j
    omega = complex(-0.5, math.sqrt(3) / 2)
    out = []
    for k in range(3):
        uk = u * omega ** k
        vk = -p / (3 * uk) if uk != 0 else 0j
        out.append(uk + vk + shift)
    return out


def _quartic(b, c, d, e):
    """Roots of x^4 + b x^3 + c x^2 + d x + e (Ferrari via the resolvent cubic)."""
    shift = -b / 4
    p = c - 3 * b * b / 8
    q = d - b * c / 2 + b ** 3 / 8
    r = e - b * d / 4 + b * b * c / 16 - 3 * b ** 4 / 256
    if abs(q) <= 1e-15 * max(1.0, abs(p), abs(r)):
        ys = []
        for y2 in _quadratic(complex(p), complex(r)):
            s = cmath.sqrt(y2)
            ys += [s, -s]
    else:
        ms = _cubic(p, p * p / 4 - r, -q * q / 8)
        # y^4 + p y^2 + q y + r = (y^2 + p/2 + m)^2 - 2m (y - q/(4m))^2
        m = max(ms, key=lambda v: v.real)
        m = _polish_real_cubic(p, p * p / 4 - r, -q * q / 8, m.real)
        s = cmath.sqrt(2 * m)
        ys = _quadratic(-s, p / 2 + m + q / (2 * s)) + _quadratic(s, p / 2 + m - q / (2 * s))
    return [y + shift for y in ys]


def _polish_real_cubic(b, c, d, x):
    for _ in range(8):
        f = ((x + b) * x + c) * x + d
        df = (3 * x + 2 * b) * x + c
        if df == 0:
            break
        step = f / df
        x_new = x - step
        f_new = ((x_new + b) * x_new + c) * x_new + d
        if abs(f_new) >= abs(f):
            break
        x = x_new
    return x


def _complex_roots(p: Poly4, degree: int):
    cs = p.coeffs
    lead = cs[degree]
    norm = [cs[k] / lead for k in range(degree)]
    # Substitute X = R y with R a power of two near the root bound, so the
    # closed forms see roots of order one. Their errors are absolute, and
    # without this, roots much smaller than one come back as noise.
    bound = max((abs(norm[degree - k]) ** (1.0 / k) for k in range(1, degree + 1)), default=0.0)
    r = 1.0
    if bound > 0.0 and degree > 0:
        # clamp so that r ** degree stays a normal float
        limit = 1000 // degree
        r = 2.0 ** min(max(round(math.log2(bound)), -limit), limit)
    norm = [c / r ** (degree - k) for k, c in enumerate(norm)]
    if degree == 4:
        ys = _quartic(norm[3], norm[2], norm[1], norm[0])
    elif degree == 3:
        ys = _cubic(norm[2], norm[1], norm[0])
    elif degree == 2:
        ys = _quadratic(norm[1], norm[0])
    elif degree == 1:
        ys = [complex(-norm[0])]
    else:
        ys = []
    return [r * y for y in ys]


def _aberth(p: Poly4, zs: list[complex], iters: int = 400) -> list[complex]:
    """Polish all roots together (Aberth-Ehrlich). Unlike independent Newton
    runs, the mutual repulsion term keeps two starting points from settling
    on the same root, which matters when the closed form returned a spurious
    complex pair in place of two nearby real roots."""
    dp = p.derivative()
    n = len(zs)
    # distinct rotations break the conjugate symmetry of the starting points
    zs = [z * (1 + 1e-3 * cmath.exp(1j * (0.7 + 1.3 * k))) for k, z in enumerate(zs)]
    for _ in range(iters):
        moved = False
        for k in range(n):
            z = zs[k]
            pz = p(z)
            if pz == 0:
                continue
            dz = dp(z)
            rep = sum(1.0 / (z - zs[j]) for j in range(n) if j != k and zs[j] != z)
            denom = dz - pz * rep
            if denom == 0:
                continue
            step = pz / denom
            zs[k] = z - step
            if abs(step) > 4 * _EPS * abs(z):
                moved = True
        if not moved:
            break
    return zs


def _newton_real(f: Poly4, df: Poly4, x: float, iters: int = 20) -> float:
    fx = abs(f(x))
    for _ in range(iters):
        der = df(x)
        if der == 0 or fx == 0:
            break
        x_new = x - f(x) / der
        f_new = abs(f(x_new))
        if not f_new < fx:
            break
        x, fx = x_new, f_new
    return x


def _noise_radius(p: Poly4, pts: list[complex], others: list[complex]) -> float:
    """Distance by which rounding can split a root of multiplicity len(pts).

    Evaluating p near the group carries an error of about
    eps * sum |c_i| |x|^i. A k-fold root moves by the k-th root of that error
    over the cofactor lead * prod(x - other roots). The radius scales with
    the roots themselves, so clusters of tiny but distinct roots stay apart.
    """
    k = len(pts)
    cs = np.abs(np.asarray(p.coeffs, dtype=float))
    lead = abs(p.coeffs[np.flatnonzero(p.coeffs)[-1]])
    radius = math.inf
    for u in pts:
        noise = 64 * _EPS * float(P.polyval(abs(u), cs))
        cofactor = lead * math.prod(abs(u - v) for v in others)
        if cofactor > 0.0:
            radius = min(radius, (noise / cofactor) ** (1.0 / k))
    return radius


def _is_cluster(pts: list[complex], others: list[complex], p: Poly4) -> bool:
    diameter = max(abs(u - v) for u, v in itertools.combinations(pts, 2))
    return diameter <= 2 * _noise_radius(p, pts, others)


def _cluster(values: list[complex], p: Poly4) -> list[list[complex]]:
    """Group roots that rounding could have split off a single multiple root."""
    remaining = list(values)
    groups = []
    while remaining:
        found = None
        for k in range(len(remaining), 1, -1):
            for combo in itertools.combinations(range(len(remaining)), k):
                pts = [remaining[i] for i in combo]
                others = [v for v in values if all(v is not u for u in pts)]
                if _is_cluster(pts, others, p):
                    found = combo
                    break
            if found:
                break
        if found is None:
            found = (0,)
        groups.append([remaining[i] for i in found])
        remaining = [v for i, v in enumerate(remaining) if i not in found]
    return groups


def _polished_roots(p: Poly4):
    """Drop negligible leading coefficients, deflate exact zero roots and
    return (work, reduced, zeros, Aberth-polished roots of reduced)."""
    scale = p.scale
    if scale == 0.0:
        raise ZeroPolynomial("all coefficients are zero")
    cs = list(p.coeffs)
    degree = 4
    while degree > 0 and abs(cs[degree]) < LEADING_TOL * scale:
        cs[degree] = 0.0
        degree -= 1
    work = Poly4(cs)

    zeros = 0
    while zeros < degree and cs[zeros] == 0.0:
        zeros += 1
    reduced = Poly4(cs[zeros:])
    croots = _complex_roots(reduced, degree - zeros)
    return work, reduced, zeros, _aberth(reduced, [complex(z) for z in croots])


def _root_groups(p: Poly4):
    """Polished roots of p grouped by multiplicity.

    Returns the working polynomial (tiny leading coefficients dropped) and a
    list of (value, multiplicity, is_real, members). Real values are polished
    on the real line; the rest are left as Aberth returned them.
    """
    work, reduced, zeros, croots = _polished_roots(p)
    groups = []
    for group in _cluster(croots, reduced):
        centre = sum(group) / len(group)
        m = len(group)
        others = [v for v in croots if all(v is not u for u in group)]
        # a genuinely complex root sits further off the axis than rounding reaches
        if abs(centre.imag) > 2 * _noise_radius(reduced, group, others):
            groups.append((centre, m, False, group))
            continue
        # a multiple root is a simple root of the (m-1)-th derivative
        g = work.derivative(m - 1)
        groups.append((complex(_newton_real(g, g.derivative(), centre.real)), m, True, group))
    if zeros:
        groups.append((0j, zeros, True, [0j] * zeros))
    return work, groups


def solve_quartic_real(p) -> RootSet:
    """All real roots of a polynomial of degree <= 4, Newton-polished.

    Coefficients are ordered from the constant term upwards. A leading
    coefficient below 1e-14 of the largest one is treated as zero. Roots that
    agree to within rounding spread are merged and reported with multiplicity.
    """
    if not isinstance(p, Poly4):
        p = Poly4(p)
    work, groups = _root_groups(p)
    roots = []
    for x, m in sorted((z.real, m) for z, m, real, _ in groups if real):
        res = abs(work(x))
        if res <= work.residual_tol(x):
            roots.append(Root(float(x), m, float(res)))
    return RootSet(tuple(roots))


def refine_bracketed_root(f: Callable[[float], float], lo: float, hi: float,
                          tol: float = 1e-14) -> float:
    """Root of `f` inside a sign-changing bracket [lo, hi]."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if not flo * fhi < 0:
        raise NoSignChange(f"f({lo}) = {flo!r} and f({hi}) = {fhi!r} have the same sign")
    x = brentq(f, lo, hi, xtol=tol, rtol=4 * _EPS, maxiter=500)
    return min(max(x, lo), hi)


def rk4_step(rhs: Callable, state, dt: float):
    """One classical Runge-Kutta step for an autonomous system y' = rhs(y)."""
    k1 = rhs(state)
    k2 = rhs(state + 0.5 * dt * k1)
    k3 = rhs(state + 0.5 * dt * k2)
    k4 = rhs(state + dt * k3)
    out = state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(out)):
        raise NonFiniteState("RK4 step produced a non-finite state")
    return out


def _minor(m, idx):
    sub = m[np.ix_(idx, idx)]
    k = len(idx)
    if k == 1:
        return sub[0, 0]
    if k == 2:
        return sub[0, 0] * sub[1, 1] - sub[0, 1] * sub[1, 0]
    if k == 3:
        return (sub[0, 0] * (sub[1, 1] * sub[2, 2] - sub[1, 2] * sub[2, 1])
                - sub[0, 1] * (sub[1, 0] * sub[2, 2] - sub[1, 2] * sub[2, 0])
                + sub[0, 2] * (sub[1, 0] * sub[2, 1] - sub[1, 1] * sub[2, 0]))
    return sum((-1) ** j * sub[0, j] * _minor(np.delete(sub[1:], j, axis=1), [0, 1, 2])
               for j in range(4) if sub[0, j] != 0)


def det4(m) -> complex:
    return _minor(np.asarray(m, dtype=complex), [0, 1, 2, 3])


def charpoly4(m, det=None) -> np.ndarray:
    """Characteristic polynomial det(mu I - m) of a 4x4 matrix, constant term
    first. Coefficients are sums of principal minors, which keeps exact zeros
    of block-structured inputs exactly zero. `det`, when given, replaces the
    expanded determinant."""
    m = np.asarray(m, dtype=complex)
    e = [sum(_minor(m, list(idx)) for idx in itertools.combinations(range(4), k))
         for k in range(1, 4)]
    e.append(det4(m) if det is None else det)
    return np.array([e[3], -e[2], e[1], -e[0], 1.0], dtype=complex)


def eigvals_product4(m, det=None) -> np.ndarray:
    """Eigenvalues (ascending) of a 4x4 matrix whose spectrum is known to be real,
    such as rho times its spin flip. Negative values above -1e-12 become 0.

    For m = rho * rho_tilde pass ``det=abs(det4(rho))**2``: the expanded
    determinant of the product cancels badly when an eigenvalue is tiny.
    """
    coeffs = charpoly4(m, det)
    scale = max(1.0, float(np.max(np.abs(coeffs))))
    if np.max(np.abs(coeffs.imag)) > IMAG_TOL * scale:
        raise ComplexSpectrum(f"characteristic polynomial has complex coefficients {coeffs}")
    # A merged group only stands in for its members when they left the real
    # axis. Two distinct eigenvalues a few 1e-8 apart fall inside the rounding
    # radius of a double root, yet Aberth places each of them far more
    # precisely than the merged centre.
    _, groups = _root_groups(Poly4(coeffs.real))
    roots = []
    for value, m, _, members in groups:
        if all(abs(u.imag) <= IMAG_TOL * max(1.0, abs(u)) for u in members):
            roots += [complex(u.real) for u in members]
        else:
            roots += [value] * m
    worst = max(abs(z.imag) for z in roots)
    if worst > IMAG_TOL * scale:
        raise ComplexSpectrum(f"eigenvalue with imaginary part {worst!r}")
    # Underflow in the coefficients (eigenvalues near 1e-140) can leave a
    # pair slightly off the real axis; the imaginary part is noise there.
    vals = np.array(sorted(z.real for z in roots))
    # Only rounding-level negatives are zeroed. Tiny positive values are kept:
    # their square roots (1e-6 for 1e-12) matter to the concurrence.
    vals[(vals < 0.0) & (vals > -1e-12)] = 0.0
    return vals
