"""Time the super-commutant relation and gap LPs over a range of dimensions."""

import argparse
import time

import numpy as np

from pf_lattice.cli import parse_dims
from pf_lattice.commutant import Side, commutant_equality_gap, super_commutant_relation
from pf_lattice.verify import random_irreducible, random_reducible


def _timed(fn, *args):
    start = time.perf_counter()
    fn(*args)
    return time.perf_counter() - start


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", default="4,6,8,10,12", help="dimensions: '8', '4,8' or '4-12'")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"{'n':>3} {'relation(irr)':>14} {'relation(red)':>14} {'gap':>8}")
    for n in parse_dims(args.n):
        irr = np.asarray(random_irreducible(n, 0.3, int(rng.integers(2**63))))
        red = random_reducible(rng, n, 0.4)
        t_irr = _timed(super_commutant_relation, irr, Side.RIGHT)
        t_red = _timed(super_commutant_relation, red, Side.RIGHT)
        t_gap = _timed(commutant_equality_gap, irr)
        print(f"{n:>3} {t_irr:>13.2f}s {t_red:>13.2f}s {t_gap:>7.2f}s", flush=True)


if __name__ == "__main__":
    main()
