"""Named two-qubit X-state families."""
from __future__ import annotations

import cmath
import math

from .errors import ParamOutOfRange, UnknownFamily, ValidationError
from .state import XState, validate_xstate

_H = 0.5


def ye_state(alpha: float) -> XState:
    """(1/3) [[alpha,0,0,0],[0,1,1,0],[0,1,1,0],[0,0,0,1-alpha]]."""
    if not (math.isfinite(alpha) and 0.0 <= alpha <= 1.0):
        raise ParamOutOfRange(f"alpha must lie in [0, 1], got {alpha!r}")
    return validate_xstate(XState(alpha / 3, 1 / 3, 1 / 3, (1 - alpha) / 3, z=1 / 3))


def werner(p: float) -> XState:
    """p |Psi-><Psi-| + (1 - p) I/4."""
    if not (math.isfinite(p) and 0.0 <= p <= 1.0):
        raise ParamOutOfRange(f"Werner weight must lie in [0, 1], got {p!r}")
    mixed = (1 - p) / 4
    return validate_xstate(XState(mixed, p / 2 + mixed, p / 2 + mixed, mixed, z=-p / 2))


def mems(c: float) -> XState:
    """Maximally entangled mixed state with concurrence `c`.

    Munro et al., Phys. Rev. A 64, 030302 (2001): in the
    |00>,|01>,|10>,|11> basis

        c >= 2/3:  [[c/2, 0, 0, c/2], [0, 1-c, 0, 0], [0, 0, 0, 0], [c/2, 0, 0, c/2]]
        c <  2/3:  [[1/3, 0, 0, c/2], [0, 1/3, 0, 0], [0, 0, 0, 0], [c/2, 0, 0, 1/3]]

    Here |01> is the population ``c`` of the |11>,|10>,|01>,|00> ordering.
    """
    if not (math.isfinite(c) and 0.0 <= c <= 1.0):
        raise ParamOutOfRange(f"MEMS concurrence must lie in [0, 1], got {c!r}")
    if c >= 2 / 3:
        corner, middle = c / 2, 1 - c
    else:
        corner, middle = 1 / 3, 1 / 3
    return validate_xstate(XState(corner, 0.0, middle, corner, w=c / 2))


BELL = {
    "bell_phi_plus": XState(_H, 0.0, 0.0, _H, w=_H),
    "bell_phi_minus": XState(_H, 0.0, 0.0, _H, w=-_H),
    "bell_psi_plus": XState(0.0, _H, _H, 0.0, z=_H),
    "bell_psi_minus": XState(0.0, _H, _H, 0.0, z=-_H),
}

FAMILIES = {"ye": ye_state, "werner": werner, "mems": mems}


def named_state(name: str, *params: float) -> XState:
    if name in BELL:
        if params:
            raise ParamOutOfRange(f"{name} takes no parameters")
        return BELL[name]
    if name in FAMILIES:
        if len(params) != 1:
            raise ParamOutOfRange(f"{name} takes exactly one parameter, got {len(params)}")
        return FAMILIES[name](float(params[0]))
    if name == "maximally_mixed":
        return XState(0.25, 0.25, 0.25, 0.25)
    raise UnknownFamily(f"unknown state family {name!r}")


def parse_state_spec(spec: str) -> XState:
    """Parse ``family`` or ``family:p1,p2`` (e.g. ``ye:0.2``, ``bell_psi_plus``)."""
    name, _, rest = spec.partition(":")
    params = []
    for tok in filter(None, rest.split(",")):
        try:
            v = float(tok)
        except ValueError:
            raise ValidationError(f"bad parameter {tok!r} in {spec!r}") from None
        if not math.isfinite(v):
            raise ValidationError(f"non-finite parameter in {spec!r}")
        params.append(v)
    return named_state(name.strip().lower(), *params)


def random_xstate(rng, entangled: bool = False, wzero: bool = False) -> XState:
    """Populations from a flat Dirichlet, coherence magnitudes uniform up to
    the positivity bound, uniform phases. With ``entangled`` the draw is
    repeated until the concurrence is positive."""
    while True:
        a, b, c, d = rng.dirichlet([1.0, 1.0, 1.0, 1.0])
        z = rng.uniform() * math.sqrt(b * c) * cmath.exp(2j * math.pi * rng.uniform())
        w = 0j
        if not wzero:
            w = rng.uniform() * math.sqrt(a * d) * cmath.exp(2j * math.pi * rng.uniform())
        s = XState(float(a), float(b), float(c), float(d), z, w)
        if not entangled or abs(z) > math.sqrt(a * d) or abs(w) > math.sqrt(b * c):
            return s
