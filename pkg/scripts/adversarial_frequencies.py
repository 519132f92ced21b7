"""Witness-interval frequencies for the g / g^2 construction.

Compares Champernowne base g^2 input and i.i.d. uniform digits (seeded)
with the limits predicted for a normal input.

    python scripts/adversarial_frequencies.py [--n 100000] [--seed 0]
"""

import argparse
import random

from qcantor import adversarial_frequency, build_adversarial, champernowne_digits, limiting_frequency
from qcantor.constructions import witness_interval


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)

    print(f"{'g':>2} {'E':>10} {'input':>13} {'per-P':>8} {'limit':>8} {'per-Q':>8} {'limit':>8} {'lambda':>8}")
    for g in (2, 3, 4):
        E = witness_interval(g)
        inputs = {
            "champernowne": champernowne_digits(g * g, args.n),
            "iid uniform": [rng.randrange(g * g) for _ in range(args.n)],
        }
        for label, digits in inputs.items():
            result = build_adversarial(g, digits, args.n)
            M = len(result.p_digits)
            per_p = adversarial_frequency(g, result, E, M, per="p")
            per_q = adversarial_frequency(g, result, E, M, per="q")
            print(f"{g:>2} {str(E):>10} {label:>13} {float(per_p):>8.4f} "
                  f"{float(limiting_frequency(g, E, 'p')):>8.4f} {float(per_q):>8.4f} "
                  f"{float(limiting_frequency(g, E, 'q')):>8.4f} {float(E.measure):>8.4f}")


if __name__ == "__main__":
    main()
