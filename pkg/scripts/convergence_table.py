"""Finite-N convergence of block ratios and discrepancy for Champernowne base 6 under Q = (2, 3).

    python scripts/convergence_table.py [--max-n 200000]
"""

import argparse
from fractions import Fraction

from qcantor import BasicSequence, DigitStream, convert_base_digits, q_normality_report, star_discrepancy
from qcantor.constructions import champernowne_digits
from qcantor.expansion import stream_orbit_points


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=200_000)
    args = ap.parse_args()

    Q = BasicSequence.periodic(2, 3)
    digits = list(convert_base_digits(champernowne_digits(6, args.max_n // 2 + 64), Q))
    points = stream_orbit_points(DigitStream.from_digits(digits, Q), min(args.max_n, 10**5))

    sizes = [n for n in (10**3, 10**4, 5 * 10**4, 10**5, 2 * 10**5) if n <= args.max_n]
    print(f"{'n':>8} {'worst len-1':>12} {'worst len-2':>12} {'D*_n':>10}")
    for n in sizes:
        worst = {1: Fraction(0), 2: Fraction(0)}
        for r in q_normality_report(digits, Q, 2, n):
            if r.observed is not None:
                k = len(r.name.split(","))
                worst[k] = max(worst[k], abs(r.observed - 1))
        disc = f"{float(star_discrepancy(points, n)):.5f}" if n <= len(points) else "-"
        print(f"{n:>8} {float(worst[1]):>12.4f} {float(worst[2]):>12.4f} {disc:>10}")


if __name__ == "__main__":
    main()
