"""Thermal amplitude damping of two independent qubits.

Every evolved matrix element is a polynomial of degree <= 2 in
X = exp(-gamma (2 nbar + 1) t). The populations follow from the single-qubit
transfer probabilities, which are linear in X:

    P(e -> e) = q + (1 - q) X        P(g -> e) = q (1 - X)
    P(e -> g) = (1 - q)(1 - X)       P(g -> g) = 1 - q + q X

with q = nbar / (2 nbar + 1) the stationary excited-state probability.
Because the reservoirs are independent the two-qubit transfer matrix is the
Kronecker product of two such matrices, so each population is a sum of
products of two linear polynomials. The coherences simply decay as z0 X, w0 X.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from .numerics import rk4_step
from .state import BathParams, XState, validate_xstate, x_of_t

SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)  # |0><1| in (|1>, |0>) order
SIGMA_PLUS = SIGMA_MINUS.T.copy()
_I2 = np.eye(2, dtype=complex)
LOWERING = (np.kron(SIGMA_MINUS, _I2), np.kron(_I2, SIGMA_MINUS))
RAISING = (np.kron(SIGMA_PLUS, _I2), np.kron(_I2, SIGMA_PLUS))

DEFAULT_DT = 1e-3  # in units of 1/gamma


def _check_nbar(nbar):
    if not (math.isfinite(nbar) and nbar >= 0):
        raise ValueError(f"nbar must be finite and >= 0, got {nbar!r}")


def ode_rhs_x(s: XState, bath: BathParams) -> XState:
    """Time derivative of (a, b, c, d, z, w), returned as an XState-shaped tuple."""
    validate_xstate(s)
    return XState.from_vector(_rhs_vec(s.as_vector(), bath.nbar) * bath.gamma)


def _rhs_vec(v, nbar):
    """Derivative of packed (..., 6) vectors in units of gamma."""
    a, b, c, d, z, w = (v[..., k] for k in range(6))
    n1 = nbar + 1.0
    out = np.empty_like(v)
    out[..., 0] = -2 * n1 * a + nbar * b + nbar * c
    out[..., 1] = n1 * a - (2 * nbar + 1) * b + nbar * d
    out[..., 2] = n1 * a - (2 * nbar + 1) * c + nbar * d
    out[..., 3] = n1 * b + n1 * c - 2 * nbar * d
    out[..., 4] = -(2 * nbar + 1) * z
    out[..., 5] = -(2 * nbar + 1) * w
    return out


def _comm(x, y):
    return x @ y - y @ x


def lindblad_rhs_full(m, bath: BathParams):
    """L1[rho] + L2[rho] for a 4x4 (or stacked (..., 4, 4)) density matrix.

    Written in the commutator form
        (nbar+1) G/2 ([s-, rho s+] + [s- rho, s+]) + nbar G/2 ([s+, rho s-] + [s+ rho, s-])
    for each qubit. The Hamiltonian part is not included.
    """
    rho = np.asarray(m, dtype=complex)
    g, n = bath.gamma, bath.nbar
    out = np.zeros_like(rho)
    for lo, up in zip(LOWERING, RAISING):
        out += 0.5 * (n + 1) * g * (_comm(lo, rho @ up) + _comm(lo @ rho, up))
        out += 0.5 * n * g * (_comm(up, rho @ lo) + _comm(up @ rho, lo))
    return out


@dataclass(frozen=True)
class PropagatorPolynomials:
    """Populations as quadratics in X plus linear coherences.

    ``pops[k]`` holds (p0, p1, p2) for population k in (a, b, c, d).
    Evaluation goes through the factored transfer form, a sum of nonnegative
    terms, so populations keep full relative precision near zero and X = 1
    returns the initial state exactly. `evaluate_monomial` uses the
    coefficients directly.
    """

    pops: np.ndarray
    z0: complex
    w0: complex
    nbar: float
    initial: np.ndarray

    def __call__(self, x: float) -> XState:
        return XState.from_vector(self.evaluate_many(np.asarray([x], dtype=float))[0])

    def population(self, name: str) -> np.ndarray:
        return self.pops["abcd".index(name)]

    def evaluate_many(self, xs) -> np.ndarray:
        """Packed (..., 6) complex array of states at the given X values."""
        xs = np.asarray(xs, dtype=float)
        t1 = transfer_values(self.nbar, xs)
        out = np.zeros(xs.shape + (6,), dtype=complex)
        for o in range(4):
            o1, o2 = divmod(o, 2)
            for i in range(4):
                i1, i2 = divmod(i, 2)
                out[..., o] += self.initial[i] * t1[o1, i1] * t1[o2, i2]
        out[..., 4] = self.z0 * xs
        out[..., 5] = self.w0 * xs
        return out

    def evaluate_monomial(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        out = np.empty(xs.shape + (6,), dtype=complex)
        for k in range(4):
            out[..., k] = P.polyval(xs, self.pops[k])
        out[..., 4] = self.z0 * xs
        out[..., 5] = self.w0 * xs
        return out


def single_qubit_transfer(nbar: float) -> np.ndarray:
    """Transfer polynomials T[out, in] (index 0 = excited, 1 = ground), each
    stored as (const, X) coefficients."""
    q = nbar / (2 * nbar + 1)
    return np.array([
        [[q, 1 - q], [q, -q]],
        [[1 - q, -(1 - q)], [1 - q, q]],
    ])


def transfer_values(nbar: float, xs) -> np.ndarray:
    """T[out, in] evaluated at X, written so that each entry is a product of
    nonnegative factors (or one minus such a product)."""
    q = nbar / (2 * nbar + 1)
    gap = 1.0 - np.asarray(xs, dtype=float)
    up = q * gap
    down = (1 - q) * gap
    return np.array([[1.0 - down, up], [down, 1.0 - up]])


def analytic_coefficients(s0: XState, nbar: float) -> PropagatorPolynomials:
    validate_xstate(s0)
    _check_nbar(nbar)
    t1 = single_qubit_transfer(nbar)
    p0 = s0.populations
    pops = np.zeros((4, 3))
    for out in range(4):
        o1, o2 = divmod(out, 2)
        for inp in range(4):
            i1, i2 = divmod(inp, 2)
            pops[out] += p0[inp] * np.convolve(t1[o1, i1], t1[o2, i2])
    return PropagatorPolynomials(pops, complex(s0.z), complex(s0.w), float(nbar), p0)


def evolve_analytic(s0: XState, bath: BathParams, t: float) -> XState:
    return analytic_coefficients(s0, bath.nbar)(x_of_t(t, bath))


def _n_steps(t, dt):
    return max(1, math.ceil(t / dt - 1e-9))


def integrate_packed(v0, nbar: float, gt_grid, gdt: float = DEFAULT_DT) -> np.ndarray:
    """RK4 integration of packed (..., 6) states in dimensionless time gamma*t.

    Returns an array of shape (len(gt_grid),) + v0.shape holding the state at
    each requested time. Between consecutive grid points the step is the
    largest value <= gdt that lands exactly on the next point.
    """
    if not gdt > 0:
        raise ValueError(f"step must be positive, got {gdt!r}")
    grid = np.asarray(gt_grid, dtype=float)
    if grid.size and (grid[0] < 0 or np.any(np.diff(grid) < 0)):
        raise ValueError("time grid must be nonnegative and nondecreasing")
    rhs = lambda v: _rhs_vec(v, nbar)
    v = np.array(v0, dtype=complex)
    out = np.empty((grid.size,) + v.shape, dtype=complex)
    now = 0.0
    for i, target in enumerate(grid):
        span = target - now
        if span > 0:
            n = _n_steps(span, gdt)
            h = span / n
            for _ in range(n):
                v = rk4_step(rhs, v, h)
        out[i] = v
        now = target
    return out


def evolve_numeric(s0: XState, bath: BathParams, t: float, dt: float | None = None) -> XState:
    """RK4 endpoint of the X-state equations at time t (default gamma*dt = 1e-3)."""
    validate_xstate(s0)
    if not t >= 0:
        raise ValueError(f"time must be >= 0, got {t!r}")
    gdt = DEFAULT_DT if dt is None else dt * bath.gamma
    v = integrate_packed(s0.as_vector(), bath.nbar, [bath.gamma * t], gdt)[0]
    return XState.from_vector(v)


def integrate_full(rho0, bath: BathParams, t_grid, dt: float | None = None) -> np.ndarray:
    """RK4 integration of full 4x4 (or stacked) density matrices under
    `lindblad_rhs_full`. Returns the matrices at each time of `t_grid`."""
    gdt = DEFAULT_DT if dt is None else dt * bath.gamma
    unit = BathParams(1.0, bath.nbar)
    rhs = lambda r: lindblad_rhs_full(r, unit)
    grid = bath.gamma * np.asarray(t_grid, dtype=float)
    r = np.array(rho0, dtype=complex)
    out = np.empty((grid.size,) + r.shape, dtype=complex)
    now = 0.0
    for i, target in enumerate(grid):
        span = target - now
        if span > 0:
            n = _n_steps(span, gdt)
            for _ in range(n):
                r = rk4_step(rhs, r, span / n)
        out[i] = r
        now = target
    return out


def steady_state(nbar: float) -> XState:
    _check_nbar(nbar)
    k = (2 * nbar + 1) ** 2
    return XState(nbar ** 2 / k, nbar * (nbar + 1) / k, nbar * (nbar + 1) / k, (nbar + 1) ** 2 / k)
