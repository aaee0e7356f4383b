"""Concurrence of the rho_YE family over (alpha, X) for several bath
occupations, plus a per-alpha table of death points."""
import argparse
import json
from pathlib import Path

from esdlab.experiments import FIG3_NBARS, SWEEP_COLUMNS, fig3_data, parse_grid, write_table, ye_death_table


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", default="results")
    parser.add_argument("--alpha", default="0:1:0.05")
    parser.add_argument("--x-grid", default="0.01:1:0.01")
    parser.add_argument("--nbar", default=",".join(f"{n:g}" for n in FIG3_NBARS))
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args()

    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    alphas, nbars = parse_grid(args.alpha), parse_grid(args.nbar)
    rows = fig3_data(alphas, parse_grid(args.x_grid), nbars, jobs=args.jobs)
    write_table(rows, SWEEP_COLUMNS, out / "fig3_surface.csv")

    table = ye_death_table(alphas, nbars)
    (out / "fig3_death.json").write_text(json.dumps(table, indent=1) + "\n")
    for n in nbars:
        sub = [r for r in table if r["nbar"] == n]
        lasting = [r["alpha"] for r in sub if r["asymptotic"]]
        xs = [r["death_x"] for r in sub if not r["asymptotic"]]
        span = f"death X in [{min(xs):.3f}, {max(xs):.3f}]" if xs else "no sudden death"
        print(f"nbar={n:<6g} asymptotic for {len(lasting)} of {len(sub)} alphas; {span}")


if __name__ == "__main__":
    main()
