"""Write the named fixture matrices to data/ as JSON matrix files."""

import argparse
from pathlib import Path

from pf_lattice.fixtures import NAMED
from pf_lattice.matrix_io import save_matrix


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=Path(__file__).resolve().parent.parent / "data", type=Path)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name, m in sorted(NAMED.items()):
        save_matrix(args.out / f"{name}.json", m)
        print(args.out / f"{name}.json")


if __name__ == "__main__":
    main()
