"""Amplitude-constrained AWGN capacity against the peak-ratio sandwich bounds.

Usage: python scripts/smith_sweep.py [-P 1.0] [--theta 1:8:0.5] [--grid 501]
"""
import argparse
import math

from paprbounds.cli import parse_range
from paprbounds.smith_capacity import capacity_amplitude_constrained, gap_achievability, gap_converse


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-P", type=float, default=1.0)
    ap.add_argument("--theta", default="1:8:0.5", help="A/sqrt(P) values, a:b:step or a single value")
    ap.add_argument("--grid", type=int, default=501)
    ap.add_argument("--tol", type=float, default=1e-6)
    args = ap.parse_args()
    P = args.P
    print(f"P = {P}, Gaussian capacity {0.5 * math.log1p(P):.6f} nats")
    print(f"{'A/sqrt(P)':>9} {'C [nats]':>10} {'gap':>11} {'lower':>11} {'upper':>11} {'mass pts':>8}")
    for th in parse_range(args.theta):
        A = th * math.sqrt(P)
        res = capacity_amplitude_constrained(A, P, args.grid, args.tol)
        print(f"{th:>9.3g} {res.value_nats:>10.6f} {res.gap_to_gaussian:>11.3e} "
              f"{gap_converse(A, P):>11.3e} {gap_achievability(A, P):>11.3e} {len(res.support):>8d}")


if __name__ == "__main__":
    main()
