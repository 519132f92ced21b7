"""Acceptance criteria, one test per criterion (criteria 4 and 6 are split into parts).

Each test records a PASS/FAIL line shown in the pytest terminal summary.
"""

import itertools
import random
import time
from fractions import Fraction

import pytest

from qcantor.basic_sequence import BasicSequence, bases_equivalent
from qcantor.block_stats import (
    block_counts,
    blocks_of_length,
    count_block,
    occurrence_positions_via_orbit,
    orbit_occurrences_by_block,
)
from qcantor.constructions import adversarial_frequency, build_adversarial, champernowne_digits
from qcantor.block_stats import UnitInterval
from qcantor.expansion import (
    DigitStream,
    convert_base_digits,
    extract_digits,
    group_base_digits,
    orbit_point,
    orbit_residues,
    reconstruct,
    shift_to_periodic,
    stream_orbit_points,
)
from qcantor.ud_stats import q_normality_report, star_discrepancy

from .conftest import ACCEPTANCE_LINES, random_rationals
from .oracles import brute_discrepancy, brute_equivalent

CORPUS = random_rationals(100, 10**4, seed=0)
PERIODS = [BasicSequence.periodic(2, 3), BasicSequence.periodic(3, 4, 5)]


def record(label: str, ok: bool, detail: str) -> None:
    line = f"{label}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_c1_occurrence_orbit_identity():
    n = 10**4
    start = time.perf_counter()
    mismatched = checked = 0
    for Q in PERIODS:
        alphabet = max(Q.period)
        for x in CORPUS:
            digits = extract_digits(x, Q, n)
            for k in (1, 2, 3):
                counts = block_counts(digits, k, n)
                via_orbit = orbit_occurrences_by_block(x, Q, k, n)
                for B in blocks_of_length(k, alphabet):
                    checked += 1
                    if counts[B] != len(via_orbit.get(B, ())):
                        mismatched += 1
    # the single-block entry points on part of the corpus
    for Q in PERIODS:
        for x in CORPUS[:3]:
            digits = extract_digits(x, Q, n)
            for B in itertools.chain(blocks_of_length(1, max(Q.period)), blocks_of_length(2, max(Q.period))):
                checked += 1
                if count_block(digits, B, n) != len(occurrence_positions_via_orbit(x, Q, B, n)):
                    mismatched += 1
    elapsed = time.perf_counter() - start
    record("C1 occurrence<->orbit identity", mismatched == 0,
           f"{checked} (x, Q, B) cases, {mismatched} mismatches, {elapsed:.1f}s")


def test_c2_roundtrip():
    n = 10**4
    bad = 0
    for Q in PERIODS:
        bound = Fraction(1, Q.product(1, n))
        for x in CORPUS:
            residual = x - reconstruct(extract_digits(x, Q, n), Q)
            if not 0 <= residual < bound:
                bad += 1
    record("C2 extract/reconstruct roundtrip", bad == 0, f"{2 * len(CORPUS)} cases, {bad} residuals out of range")


def test_c3_conversion():
    Q = BasicSequence.periodic(2, 3)
    base6 = champernowne_digits(6, 10**4)
    qd = list(convert_base_digits(base6, Q, 6))
    back = list(group_base_digits(qd, Q))
    again = list(convert_base_digits(back, Q))
    same_value = reconstruct(base6, BasicSequence.periodic(6)) == reconstruct(qd, Q)
    ok = back == base6 and again == qd and same_value
    record("C3 base-6 <-> (2,3) conversion", ok,
           f"inverse={back == base6}, inverse'={again == qd}, value preserved={same_value}")


@pytest.fixture(scope="module")
def champernowne_6_q_digits():
    Q = BasicSequence.periodic(2, 3)
    n = 2 * 10**5
    digits = list(convert_base_digits(champernowne_digits(6, n // 2 + 100), Q))
    return Q, n, digits


def _ratio_check(Q, n, digits, k, tol):
    reports = [r for r in q_normality_report(digits[:n], Q, k, n) if len(r.name.split(",")) == k]
    judged = [r for r in reports if r.observed is not None]
    worst = max(judged, key=lambda r: abs(r.observed - 1))
    failing = [f"{r.name}={float(r.observed):.4f}" for r in judged if abs(r.observed - 1) > tol]
    return not failing, worst, failing


def test_c4a_length1_ratios(champernowne_6_q_digits):
    Q, n, digits = champernowne_6_q_digits
    ok, worst, failing = _ratio_check(Q, n, digits, 1, Fraction(5, 100))
    record("C4a length-1 ratios within 1+-0.05", ok,
           f"worst {worst.name}={float(worst.observed):.4f}; failing {failing}")


def test_c4b_length2_ratios(champernowne_6_q_digits):
    Q, n, digits = champernowne_6_q_digits
    ok, worst, failing = _ratio_check(Q, n, digits, 2, Fraction(10, 100))
    record("C4b length-2 ratios within 1+-0.10", ok,
           f"worst {worst.name}={float(worst.observed):.4f}; failing {failing}")


def test_c4c_discrepancy(champernowne_6_q_digits):
    Q, _, digits = champernowne_6_q_digits
    start = time.perf_counter()
    points = stream_orbit_points(DigitStream.from_digits(digits, Q), 10**5)
    d_big = star_discrepancy(points, 10**5)
    d_small = star_discrepancy(points, 10**3)
    elapsed = time.perf_counter() - start
    ok = d_big <= Fraction(5, 100) and d_big < d_small
    record("C4c star discrepancy", ok,
           f"D*(1e5)={float(d_big):.5f} <= 0.05, D*(1e3)={float(d_small):.5f}, {elapsed:.1f}s")


def test_c5_lemma_shift():
    Q = BasicSequence((5,), (2, 3))
    k = len(Q.prefix)
    n = 10**4
    worst_gap = violations = 0
    orbit_ok = True
    for x in CORPUS[:20]:
        P, y = shift_to_periodic(Q, x)
        xd = extract_digits(x, Q, n)
        yd = extract_digits(y, P, n)
        for length in (1, 2):
            for B in blocks_of_length(length, 5):
                bound = k + length
                # running counts of occurrences fully inside the first m digits, for every m <= n
                cx = cy = 0
                for m in range(1, n + 1):
                    j = m - length
                    if j >= 0:
                        cx += tuple(xd[j:m]) == B
                        cy += tuple(yd[j:m]) == B
                    worst_gap = max(worst_gap, abs(cx - cy))
                    if abs(cx - cy) > bound:
                        violations += 1
                        break
        ry = orbit_residues(y, P, n + 1)
        rx = orbit_residues(x, Q, n + 2)
        next(rx)
        orbit_ok &= all(Fraction(a, y.denominator) == Fraction(b, x.denominator) for a, b in zip(ry, rx))
        orbit_ok &= orbit_point(y, P, 777) == orbit_point(x, Q, 778)
    ok = violations == 0 and orbit_ok
    record("C5 shift to periodic", ok,
           f"max |N^P - N^Q| = {worst_gap}, {violations} blocks over k+len(B), orbit identity={orbit_ok}")


def test_c6a_footnote():
    result = build_adversarial(2, [1, 3, 2, 1, 1, 3], 6)
    text = " ".join(map(str, result.P.prefix))
    record("C6a footnote P prefix", text == "4 2 2 4 4 4 2 2", f"P = {text}")


def test_c6b_no_forbidden_digit():
    n = 10**5
    bad = 0
    for g in (2, 3):
        result = build_adversarial(g, champernowne_digits(g * g, n), n)
        bad += sum(1 for e in result.p_digits if e == g * g - 1)
    record("C6b no P-digit equals g^2-1", bad == 0, f"{bad} forbidden digits over g in (2, 3)")


def _adversarial_freq(g, E, n=10**5):
    result = build_adversarial(g, champernowne_digits(g * g, n), n)
    return adversarial_frequency(g, result, E, len(result.p_digits))


def test_c6c_g3_frequency():
    E = UnitInterval(0, Fraction(2, 3))
    f = _adversarial_freq(3, E)
    near_target = abs(f - Fraction(7, 10)) <= Fraction(2, 100)
    far_from_lambda = abs(f - E.measure) >= Fraction(3, 100)
    record("C6c g=3 per-P frequency of [0,2/3) within 0.02 of 7/10, >=0.03 from 2/3",
           near_target and far_from_lambda,
           f"observed {float(f):.5f}; |f-7/10|={float(abs(f - Fraction(7, 10))):.5f}, "
           f"|f-2/3|={float(abs(f - E.measure)):.5f}")


def test_c6d_g2_frequency():
    E = UnitInterval(0, Fraction(1, 2))
    f = _adversarial_freq(2, E)
    record("C6d g=2 per-P frequency of [0,1/2) within 0.02 of 2/5", abs(f - Fraction(2, 5)) <= Fraction(2, 100),
           f"observed {float(f):.5f}")


def test_c7_discrepancy_oracle():
    r = random.Random(7)
    bad = 0
    for _ in range(200):
        N = r.randint(1, 200)
        den = r.randint(1, 1000)
        points = [Fraction(r.randrange(den), den) for _ in range(N)]
        if star_discrepancy(points) != brute_discrepancy(points):
            bad += 1
    record("C7 star discrepancy == brute force", bad == 0, f"200 point sets, {bad} disagreements")


def test_c8_bases_equivalent():
    bad = [(a, b) for a in range(2, 101) for b in range(2, 101) if bases_equivalent(a, b) != brute_equivalent(a, b)]
    spots = [bases_equivalent(2, 8), bases_equivalent(4, 8), not bases_equivalent(2, 6), not bases_equivalent(6, 12)]
    record("C8 bases_equivalent vs brute force", not bad and all(spots), f"{len(bad)} disagreements, spot values ok={all(spots)}")
