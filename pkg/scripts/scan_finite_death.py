"""Monte Carlo scan: draw random entangled X-states and check that each one
loses its entanglement at a finite time for every positive bath occupation.
Also counts any state whose entanglement revives after dying."""
import argparse
import math

import numpy as np

from esdlab.esd import certify_finite_death, esd_report
from esdlab.families import random_xstate
from esdlab.state import BathParams


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--states", type=int, default=2000)
    parser.add_argument("--nbar", default="0.001,0.01,0.1,0.5,1,2,10,100")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    states = [random_xstate(rng, entangled=True) for _ in range(args.states)]
    for n in (float(v) for v in args.nbar.split(",")):
        bath = BathParams(1.0, n)
        failures = revivals = 0
        latest = 0.0
        for s in states:
            certify_finite_death(s, n)
            rep = esd_report(s, bath)
            if rep.asymptotic or not math.isfinite(rep.death_time):
                failures += 1
                continue
            latest = max(latest, rep.death_time)
            revivals += len(rep.intervals) > 1
        print(f"nbar={n:<7g} failures={failures}  revivals={revivals}  latest death Gamma*t={latest:.4f}")


if __name__ == "__main__":
    main()
