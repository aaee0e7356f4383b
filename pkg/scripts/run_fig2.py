"""Tabulate F(X) = |z0|^2 X^2 - a(X) d(X) for the two-parameter example
(nbar 0.8, a0 0.1, d0 0.05, |z0| 0.3) and report where it crosses zero."""
import argparse
from pathlib import Path

import numpy as np

from esdlab.esd import death_quartics
from esdlab.experiments import FIG2_PARAMS, fig2_data, fig2_state, write_table
from esdlab.numerics import refine_bracketed_root


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results/fig2.csv")
    parser.add_argument("--points", type=int, default=201)
    args = parser.parse_args()

    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    rows = fig2_data(x_grid=np.linspace(0.0, 1.0, args.points), **FIG2_PARAMS)
    write_table(rows, ("X", "F"), args.out)

    q = death_quartics(fig2_state(**FIG2_PARAMS), FIG2_PARAMS["nbar"]).q_z
    root = refine_bracketed_root(q, 0.0, 1.0)
    print(f"F(0) = {q(0.0):.6f}   F(1) = {q(1.0):.6f}")
    print(f"F changes sign at X = {root:.12f}")
    print(f"wrote {len(rows)} rows to {args.out}")


if __name__ == "__main__":
    main()
