#!/usr/bin/env python3
"""Emit the GF(2) polynomial system of a reduced-round encryption to a file."""

import argparse

from inru.algsys import count_system_size, emit_algebraic_system


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("rounds", type=int)
    ap.add_argument("out", help="output file, one polynomial per line")
    args = ap.parse_args()

    nonlinear, unknowns = count_system_size(args.rounds)
    with open(args.out, "w") as fh:
        fh.write(emit_algebraic_system(args.rounds).render())
    print(f"{args.rounds} round(s): {nonlinear} nonlinear equations,"
          f" {unknowns} unknowns after linear elimination -> {args.out}")


if __name__ == "__main__":
    main()
