"""X-state types, physicality checks and the t <-> X reparametrization.

Basis ordering throughout the package is |11>, |10>, |01>, |00> (index 0..3),
so ``a`` is the doubly excited population and ``d`` the ground population.
The coherences ``w`` (between |11> and |00>) and ``z`` (between |10> and |01>)
are stored as the upper-triangular matrix entries; their conjugates sit below
the diagonal.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    BlockPositivityError,
    DomainError,
    NegativePopulation,
    NotXForm,
    TraceError,
    ValidationError,
)

EPS_PSD = 1e-12

# (row, col) positions that may be nonzero in an X-form matrix
X_MASK = np.array(
    [
        [1, 0, 0, 1],
        [0, 1, 1, 0],
        [0, 1, 1, 0],
        [1, 0, 0, 1],
    ],
    dtype=bool,
)


@dataclass(frozen=True)
class XState:
    a: float
    b: float
    c: float
    d: float
    z: complex = 0j
    w: complex = 0j

    @property
    def populations(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c, self.d])

    def as_vector(self) -> np.ndarray:
        """Pack as the complex 6-vector (a, b, c, d, z, w) used by the integrators."""
        return np.array([self.a, self.b, self.c, self.d, self.z, self.w], dtype=complex)

    @classmethod
    def from_vector(cls, v) -> "XState":
        v = np.asarray(v)
        return cls(
            float(v[0].real), float(v[1].real), float(v[2].real), float(v[3].real),
            complex(v[4]), complex(v[5]),
        )

    def swap_bc(self) -> "XState":
        return XState(self.a, self.c, self.b, self.d, self.z.conjugate(), self.w)


@dataclass(frozen=True)
class BathParams:
    """Rate and thermal occupation shared by both reservoirs."""

    gamma: float = 1.0
    nbar: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.gamma) and math.isfinite(self.nbar)):
            raise ValidationError(f"bath parameters must be finite, got {self}")
        if self.gamma <= 0:
            raise ValidationError(f"gamma must be > 0, got {self.gamma}")
        if self.nbar < 0:
            raise ValidationError(f"nbar must be >= 0, got {self.nbar}")

    @property
    def rate(self) -> float:
        """Decay rate of X, i.e. gamma * (2 nbar + 1)."""
        return self.gamma * (2.0 * self.nbar + 1.0)


def validate_xstate(s: XState, eps: float = EPS_PSD) -> XState:
    """Raise if `s` is not a physical X-state, otherwise return it unchanged."""
    values = (s.a, s.b, s.c, s.d, s.z.real, s.z.imag, s.w.real, s.w.imag)
    if not all(math.isfinite(v) for v in values):
        raise ValidationError(f"non-finite entry in {s}")
    for name in "abcd":
        if getattr(s, name) < -eps:
            raise NegativePopulation(f"population {name}={getattr(s, name)!r} is negative")
    trace = s.a + s.b + s.c + s.d
    if abs(trace - 1.0) > eps:
        raise TraceError(f"trace is {trace!r}, expected 1")
    if abs(s.w) ** 2 > s.a * s.d + eps:
        raise BlockPositivityError(f"|w|^2 = {abs(s.w) ** 2!r} exceeds a*d = {s.a * s.d!r}")
    if abs(s.z) ** 2 > s.b * s.c + eps:
        raise BlockPositivityError(f"|z|^2 = {abs(s.z) ** 2!r} exceeds b*c = {s.b * s.c!r}")
    return s


def xstate_to_matrix(s: XState) -> np.ndarray:
    validate_xstate(s)
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0], m[1, 1], m[2, 2], m[3, 3] = s.a, s.b, s.c, s.d
    m[0, 3], m[3, 0] = s.w, s.w.conjugate()
    m[1, 2], m[2, 1] = s.z, s.z.conjugate()
    return m


def validate_density_matrix(m, herm_tol=1e-12, trace_tol=1e-12, eig_tol=1e-9) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.shape != (4, 4):
        raise ValidationError(f"expected a 4x4 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError("matrix has non-finite entries")
    if np.max(np.abs(m - m.conj().T)) > herm_tol:
        raise ValidationError("matrix is not Hermitian")
    tr = np.trace(m)
    if abs(tr - 1.0) > trace_tol:
        raise TraceError(f"trace is {tr!r}, expected 1")
    lo = np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0]
    if lo < -eig_tol:
        raise ValidationError(f"minimum eigenvalue {lo!r} below -{eig_tol}")
    return m


def offx_magnitude(m) -> float:
    """Largest |entry| outside the X pattern."""
    m = np.asarray(m)
    return float(np.max(np.abs(m[..., ~X_MASK]), initial=0.0))


def matrix_to_xstate(m, tol: float = 1e-10) -> XState:
    m = validate_density_matrix(m)
    worst = offx_magnitude(m)
    if worst >= tol:
        raise NotXForm(f"off-X entry of magnitude {worst:.3g} exceeds {tol:.3g}", worst)
    return XState(
        float(m[0, 0].real), float(m[1, 1].real), float(m[2, 2].real), float(m[3, 3].real),
        complex(m[1, 2]), complex(m[0, 3]),
    )


def x_of_t(t: float, bath: BathParams) -> float:
    if not t >= 0:
        raise DomainError(f"time must be >= 0, got {t!r}")
    return math.exp(-bath.rate * t)


def t_of_x(x: float, bath: BathParams) -> float:
    """Inverse of `x_of_t`. X = 0 corresponds to infinite time and is rejected."""
    if not 0.0 < x <= 1.0:
        raise DomainError(f"X must lie in (0, 1], got {x!r}")
    return -math.log(x) / bath.rate


# -- JSON state files -------------------------------------------------------

_STATE_KEYS = {"a", "b", "c", "d", "z", "w"}


def _reject_constant(name):
    raise ValidationError(f"non-finite number {name} in state file")


def _finite(v, key):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValidationError(f"{key}: expected a number, got {v!r}")
    if not math.isfinite(v):
        raise ValidationError(f"{key}: non-finite value")
    return float(v)


def xstate_from_dict(obj: dict) -> XState:
    if not isinstance(obj, dict):
        raise ValidationError("state must be a JSON object")
    unknown = set(obj) - _STATE_KEYS
    if unknown:
        raise ValidationError(f"unknown keys in state: {sorted(unknown)}")
    for key in "abcd":
        if key not in obj:
            raise ValidationError(f"missing population {key!r}")
    coh = {}
    for key in "zw":
        pair = obj.get(key, [0.0, 0.0])
        if not isinstance(pair, list) or len(pair) != 2:
            raise ValidationError(f"{key}: expected [re, im]")
        coh[key] = complex(_finite(pair[0], key), _finite(pair[1], key))
    s = XState(*(_finite(obj[k], k) for k in "abcd"), z=coh["z"], w=coh["w"])
    return validate_xstate(s)


def xstate_to_dict(s: XState) -> dict:
    return {
        "a": s.a, "b": s.b, "c": s.c, "d": s.d,
        "z": [s.z.real, s.z.imag], "w": [s.w.real, s.w.imag],
    }


def loads_xstate(text: str) -> XState:
    return xstate_from_dict(json.loads(text, parse_constant=_reject_constant))


def load_xstate(path) -> XState:
    return loads_xstate(Path(path).read_text())
