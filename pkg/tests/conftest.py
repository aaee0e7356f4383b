import math

import numpy as np
import pytest
from hypothesis import strategies as st

from esdlab.families import random_xstate
from esdlab.state import XState


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def bisect(f, lo, hi, iters=200):
    """Plain bisection, kept separate from the library's root finders."""
    flo = f(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm <= 0) == (flo <= 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def printed_populations(a0, b0, c0, d0, nbar, x):
    """a, b, c, d exactly as typeset in the source article (c as printed)."""
    n = nbar
    norm = (2 * n + 1) ** 2
    k2 = (2 * a0 + 2 * d0 - 1) * n ** 2 + (3 * a0 + d0 - 1) * n + a0
    a = (n ** 2 + (2 * (a0 - d0) * n ** 2 + (a0 - d0 + 1) * n) * x + k2 * x * x) / norm
    b = (n * (n + 1)
         - (2 * (a0 + 2 * c0 + d0 - 1) * n ** 2 + (a0 + 4 * c0 + 3 * d0 - 2) * n + (c0 + d0 - 1)) * x
         - k2 * x * x) / norm
    c = (n * (n + 1)
         + (2 * (a0 + 2 * c0 + d0 - 1) * n ** 2 + (3 * a0 + 4 * c0 + d0 - 2) * n) * x
         - k2 * x * x) / norm
    d = ((n + 1) ** 2 - (n + 1) * (2 * n * (a0 - d0) + (a0 - d0 + 1)) * x + k2 * x * x) / norm
    return a, b, c, d


@st.composite
def xstates(draw, entangled=False, wzero=False):
    weights = [draw(st.floats(0.0, 1.0)) for _ in range(4)]
    total = sum(weights)
    if total < 1e-3:
        weights, total = [1.0, 1.0, 1.0, 1.0], 4.0
    a, b, c = (w / total for w in weights[:3])
    d = 1.0 - a - b - c
    d = max(d, 0.0)
    fz = draw(st.floats(0.0, 1.0))
    fw = 0.0 if wzero else draw(st.floats(0.0, 1.0))
    pz = draw(st.floats(0.0, 2 * math.pi))
    pw = draw(st.floats(0.0, 2 * math.pi))
    s = XState(a, b, c, d,
               fz * math.sqrt(b * c) * complex(math.cos(pz), math.sin(pz)),
               fw * math.sqrt(a * d) * complex(math.cos(pw), math.sin(pw)))
    return s


def random_states(rng, n, **kw):
    return [random_xstate(rng, **kw) for _ in range(n)]


# One line per acceptance criterion, echoed in the terminal summary so the
# verdicts show up without -s.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
