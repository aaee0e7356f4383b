"""Two-qubit concurrence: the X-state closed form and Wootters' spin-flip route."""
from __future__ import annotations

import math

import numpy as np

from .errors import ComplexSpectrum
from .numerics import det4, eigvals_product4
from .state import XState, validate_density_matrix, validate_xstate

# sigma_y (x) sigma_y; anti-diagonal (-1, 1, 1, -1) in the |11>,|10>,|01>,|00> basis
SYSY = np.fliplr(np.diag([-1.0, 1.0, 1.0, -1.0])).astype(complex)


def concurrence_x(s: XState) -> float:
    validate_xstate(s)
    value = 2.0 * max(0.0, abs(s.z) - math.sqrt(max(s.a * s.d, 0.0)),
                      abs(s.w) - math.sqrt(max(s.b * s.c, 0.0)))
    return min(value, 1.0)


def concurrence_x_packed(v) -> np.ndarray:
    """Vectorised closed form on packed (..., 6) arrays (no validation)."""
    v = np.asarray(v)
    a, b, c, d = (np.clip(v[..., k].real, 0.0, None) for k in range(4))
    zt = np.abs(v[..., 4]) - np.sqrt(a * d)
    wt = np.abs(v[..., 5]) - np.sqrt(b * c)
    return np.clip(2.0 * np.maximum(np.maximum(zt, wt), 0.0), 0.0, 1.0)


def spin_flip(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    return SYSY @ m.conj() @ SYSY


def wootters_lambdas(m) -> np.ndarray:
    """Square roots of the eigenvalues of rho * spin_flip(rho), descending."""
    rho = validate_density_matrix(m)
    # det(rho_tilde) = conj(det(rho)), so det(rho rho_tilde) = |det rho|^2
    mu = eigvals_product4(rho @ spin_flip(rho), det=abs(det4(rho)) ** 2)
    if mu[0] < -1e-12:
        raise ComplexSpectrum(f"negative eigenvalue {mu[0]!r} of rho*rho_tilde")
    return np.sqrt(np.clip(mu, 0.0, None))[::-1]


def concurrence_general(m) -> float:
    lam = wootters_lambdas(m)
    return float(min(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]), 1.0))
