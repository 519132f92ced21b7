"""Uniform-distribution diagnostics and finite-N normality verdicts."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .basic_sequence import BasicSequence
from .block_stats import UnitInterval, block_counts, blocks_of_length, count_in_interval, indicator, qn_of_block
from .expansion import DigitStream, OrbitApprox

__all__ = [
    "VerdictReport",
    "star_discrepancy",
    "empirical_frequency",
    "q_normality_report",
    "distribution_normality_report",
    "DEFAULT_TOL_DISCREPANCY",
    "DEFAULT_TOL_RATIO",
    "reports_to_json",
    "reports_to_csv",
]

DEFAULT_TOL_DISCREPANCY = Fraction(1, 20)
# block length -> tolerance on N_n(B)/Q_n(B)
DEFAULT_TOL_RATIO = {1: Fraction(1, 20), 2: Fraction(1, 10)}

CSV_COLUMNS = ["name", "N", "observed", "observed_exact", "reference", "tolerance", "pass", "note"]


def _exact(v: Fraction | None) -> str | None:
    if v is None:
        return None
    return f"{v.numerator}/{v.denominator}"


def _decimal(v: Fraction | None, digits: int = 12) -> str | None:
    if v is None:
        return None
    # fixed-point rendering computed from the exact value
    scaled = round(v * 10**digits)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


@dataclass
class VerdictReport:
    """One finite-N check: pass iff |observed - reference| <= tolerance.

    ``observed`` is None for skipped statistics (e.g. a block whose Q_n(B)
    stays bounded); such reports carry no verdict.
    """

    name: str
    N: int
    observed: Fraction | None
    reference: Fraction
    tolerance: Fraction
    note: str = ""
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool | None:
        if self.observed is None:
            return None
        return abs(self.observed - self.reference) <= self.tolerance

    def to_dict(self) -> dict[str, Any]:
        d = {
            "name": self.name,
            "N": self.N,
            "observed": _decimal(self.observed),
            "observed_exact": _exact(self.observed),
            "reference": _exact(self.reference),
            "tolerance": _exact(self.tolerance),
            "pass": self.passed,
            "note": self.note,
        }
        if self.extra:
            d["extra"] = self.extra
        return d


def reports_to_json(reports: Sequence[VerdictReport], **meta: Any) -> str:
    payload = {**meta, "reports": [r.to_dict() for r in reports]}
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def reports_to_csv(reports: Sequence[VerdictReport]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for r in reports:
        writer.writerow(r.to_dict())
    return buf.getvalue()


def _point_value(p: Fraction | OrbitApprox) -> Fraction:
    return p.lo if isinstance(p, OrbitApprox) else Fraction(p)


def star_discrepancy(points: Sequence[Fraction | OrbitApprox], N: int | None = None) -> Fraction:
    """D*_N = max_i max(i/N - x_(i), x_(i) - (i-1)/N) over the sorted points.

    Exact. Stream-approximated points contribute their lower bound, so the
    result is within the approximation width of the true discrepancy.
    """
    N = len(points) if N is None else N
    if N < 1:
        raise ValueError("star discrepancy needs at least one point")
    if len(points) < N:
        raise ValueError(f"only {len(points)} points, need {N}")
    values = [_point_value(p) for p in points[:N]]
    for v in values:
        if not 0 <= v < 1:
            raise ValueError(f"point {v} outside [0, 1)")
    # integer arithmetic over the common denominator
    D = math.lcm(*(v.denominator for v in values))
    nums = sorted(v.numerator * (D // v.denominator) for v in values)
    worst = 0
    for i, a in enumerate(nums, start=1):
        worst = max(worst, i * D - N * a, N * a - (i - 1) * D)
    return Fraction(worst, N * D)


def empirical_frequency(
    points: Sequence[Fraction | OrbitApprox], E: UnitInterval, N: int | None = None
) -> Fraction:
    """A_N(E) / N."""
    N = len(points) if N is None else N
    if N < 1:
        raise ValueError("N must be >= 1")
    return Fraction(count_in_interval(points, E, N), N)


def _qn_bounded(Q: BasicSequence, B: tuple[int, ...]) -> bool:
    """Q_n(B) stays bounded iff I_j(B) = 0 for every periodic position."""
    if not Q.is_periodic:
        return False
    k, m = len(Q.prefix), len(Q.period)
    return not any(indicator(Q, B, j) for j in range(k + 1, k + m + 1))


def q_normality_report(
    digits: DigitStream | Sequence[int],
    Q: BasicSequence,
    max_block_len: int,
    n: int,
    tolerances: dict[int, Fraction] | Fraction | None = None,
    blocks: Sequence[Sequence[int]] | None = None,
) -> list[VerdictReport]:
    """Ratio N_n(B)/Q_n(B) against 1 for every block of length <= K.

    The alphabet runs up to the largest base of Q. Blocks with bounded
    Q_n(B) are reported as skipped rather than judged.
    """
    if max_block_len < 1:
        raise ValueError("max_block_len must be >= 1")
    if isinstance(digits, DigitStream):
        seq = digits.prefix(n)
    else:
        seq = list(digits)[:n]
        if len(seq) < n:
            raise ValueError(f"need {n} digits, have {len(seq)}")
    alphabet = max(Q.prefix + Q.period)
    tol_for = _tolerance_lookup(tolerances)
    if blocks is None:
        todo = [B for k in range(1, max_block_len + 1) for B in blocks_of_length(k, alphabet)]
    else:
        todo = [tuple(B) for B in blocks]
    counts = {k: block_counts(seq, k, n) for k in sorted({len(B) for B in todo})}
    reports = []
    for B in todo:
        k = len(B)
        name = f"block_ratio[{','.join(map(str, B))}]"
        tol = tol_for(k)
        if _qn_bounded(Q, B):
            reports.append(VerdictReport(name, n, None, Fraction(1), tol, note="Q_n bounded; block skipped"))
            continue
        qn = qn_of_block(Q, B, n)
        if qn == 0:
            reports.append(VerdictReport(name, n, None, Fraction(1), tol, note="Q_n(B) = 0 at this n"))
            continue
        count = counts[k][B]
        reports.append(
            VerdictReport(name, n, Fraction(count) / qn, Fraction(1), tol,
                          extra={"count": count, "Q_n": _exact(qn)})
        )
    return reports


def _tolerance_lookup(tolerances: dict[int, Fraction] | Fraction | None):
    if tolerances is None:
        tolerances = DEFAULT_TOL_RATIO
    if isinstance(tolerances, dict):
        table = {k: Fraction(v) for k, v in tolerances.items()}
        fallback = table[max(table)]
        return lambda k: table.get(k, fallback)
    tol = Fraction(tolerances)
    return lambda k: tol


def distribution_normality_report(
    points: Sequence[Fraction | OrbitApprox],
    n: int | None = None,
    tolerance: Fraction = DEFAULT_TOL_DISCREPANCY,
) -> VerdictReport:
    """Star discrepancy of the first n points against 0.

    The value at n // 100 points is attached in ``extra`` to show the decay;
    it is descriptive only.
    """
    n = len(points) if n is None else n
    d = star_discrepancy(points, n)
    early_n = max(n // 100, 1)
    early = star_discrepancy(points, early_n)
    extra = {
        "early_N": early_n,
        "early_discrepancy": _decimal(early),
        "early_discrepancy_exact": _exact(early),
        "decreased": d < early,
    }
    if points and isinstance(points[0], OrbitApprox):
        width = max(p.width for p in points[:n])
        extra["approximation_width"] = _exact(width) if width.denominator < 10**6 else f"{float(width):.3e}"
    return VerdictReport("star_discrepancy", n, d, Fraction(0), Fraction(tolerance), extra=extra)
