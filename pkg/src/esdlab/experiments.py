"""Data generation for the F(X) curve, the concurrence surface and sweeps."""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dynamics import analytic_coefficients
from .entanglement import concurrence_x_packed
from .esd import death_quartics, esd_report
from .errors import ValidationError
from .families import ye_state
from .state import BathParams, XState, validate_xstate

FIG2_PARAMS = dict(nbar=0.8, a0=0.1, d0=0.05, zmag=0.3)
FIG3_NBARS = (0.0, 0.2, 1.0, 10.0, 100.0)
SWEEP_COLUMNS = ("nbar", "alpha", "X", "C")


def parse_grid(text: str) -> np.ndarray:
    """``start:stop:step`` with stop included (to within step/1e6) or a comma list."""
    try:
        if ":" in text:
            start, stop, step = (float(t) for t in text.split(":"))
            if not all(math.isfinite(v) for v in (start, stop, step)) or step <= 0:
                raise ValidationError(f"bad grid {text!r}")
            n = int(math.floor((stop - start) / step + 1e-6)) + 1
            if n < 1:
                raise ValidationError(f"empty grid {text!r}")
            return start + step * np.arange(n)
        values = np.array([float(t) for t in text.split(",") if t.strip()])
    except ValueError:
        raise ValidationError(f"cannot parse grid {text!r}") from None
    if not values.size or not np.all(np.isfinite(values)):
        raise ValidationError(f"bad grid {text!r}")
    return values


def _check_grid(name, grid, lo=-math.inf, hi=math.inf, open_lo=False):
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValidationError(f"{name} grid must be a nonempty list")
    if not np.all(np.isfinite(grid)):
        raise ValidationError(f"{name} grid has non-finite values")
    if np.any(np.diff(grid) <= 0):
        raise ValidationError(f"{name} grid must be strictly increasing")
    low_bad = grid[0] <= lo if open_lo else grid[0] < lo
    if low_bad or grid[-1] > hi:
        raise ValidationError(f"{name} grid outside its allowed range")
    return grid


@dataclass
class SweepSpec:
    family: str = "ye"
    alphas: list = field(default_factory=lambda: list(np.linspace(0.0, 1.0, 21)))
    nbars: list = field(default_factory=lambda: list(FIG3_NBARS))
    x_grid: list = field(default_factory=lambda: list(np.linspace(0.01, 1.0, 100)))
    gamma: float = 1.0
    out: str | None = None
    fmt: str = "csv"

    def validate(self) -> "SweepSpec":
        if self.family != "ye":
            raise ValidationError(f"unsupported sweep family {self.family!r}")
        _check_grid("alpha", self.alphas, 0.0, 1.0)
        _check_grid("nbar", self.nbars, 0.0)
        _check_grid("X", self.x_grid, 0.0, 1.0, open_lo=True)
        if self.fmt not in ("csv", "json"):
            raise ValidationError(f"unknown format {self.fmt!r}")
        BathParams(self.gamma, 0.0)
        return self


def fig2_state(nbar=0.8, a0=0.1, d0=0.05, zmag=0.3) -> XState:
    """Partial-state parameters completed with b0 = c0 = (1 - a0 - d0)/2.
    q_z depends on b0 and c0 only through their sum, so the split is free."""
    half = (1.0 - a0 - d0) / 2
    return validate_xstate(XState(a0, half, half, d0, z=complex(zmag)))


def fig2_data(nbar=0.8, a0=0.1, d0=0.05, zmag=0.3, x_grid=None) -> list[tuple]:
    """Rows (X, q_z(X)) of the first death quartic."""
    if x_grid is None:
        x_grid = np.linspace(0.0, 1.0, 101)
    x_grid = _check_grid("X", x_grid, 0.0, 1.0)
    q = death_quartics(fig2_state(nbar, a0, d0, zmag), nbar).q_z
    return [(float(x), float(q(x))) for x in x_grid]


def _ye_block(args):
    nbar, alpha, x_grid = args
    prop = analytic_coefficients(ye_state(alpha), nbar)
    cs = concurrence_x_packed(prop.evaluate_many(x_grid))
    return [(nbar, alpha, float(x), float(c)) for x, c in zip(x_grid, cs)]


def fig3_data(alpha_grid, x_grid, nbar_list, jobs: int = 1) -> list[tuple]:
    """Rows (nbar, alpha, X, C) for the rho_YE family, in grid order."""
    alphas = _check_grid("alpha", alpha_grid, 0.0, 1.0)
    xs = _check_grid("X", x_grid, 0.0, 1.0, open_lo=True)
    nbars = _check_grid("nbar", nbar_list, 0.0)
    tasks = [(float(n), float(a), xs) for n in nbars for a in alphas]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            blocks = list(pool.map(_ye_block, tasks))
    else:
        blocks = [_ye_block(t) for t in tasks]
    return [row for block in blocks for row in block]


def ye_death_table(alpha_grid, nbar_list, gamma: float = 1.0) -> list[dict]:
    out = []
    for n in nbar_list:
        for a in alpha_grid:
            rep = esd_report(ye_state(float(a)), BathParams(gamma, float(n)))
            out.append({"nbar": float(n), "alpha": float(a), **rep.to_dict()})
    return out


def run_sweep(spec: SweepSpec, jobs: int = 1) -> list[tuple]:
    spec.validate()
    return fig3_data(spec.alphas, spec.x_grid, spec.nbars, jobs=jobs)


def _fmt(v) -> str:
    return format(float(v), ".17g")


def table_to_csv(rows, columns) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def table_to_json(rows, columns) -> str:
    recs = [dict(zip(columns, (float(v) for v in row))) for row in rows]
    return json.dumps({"columns": list(columns), "rows": recs}, indent=1, allow_nan=False) + "\n"


def write_table(rows, columns, path, fmt: str = "csv") -> None:
    text = table_to_csv(rows, columns) if fmt == "csv" else table_to_json(rows, columns)
    Path(path).write_text(text)
