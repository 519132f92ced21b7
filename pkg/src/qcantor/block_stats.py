"""Block occurrences, Q_n(B), and the intervals J_r(B) linking digits to orbits.

Positions are 1-based. A block occurs at position j when
E_j, ..., E_{j+k-1} equal b_1, ..., b_k; only occurrences lying entirely in
the first n digits are counted, and overlapping occurrences all count.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .basic_sequence import BasicSequence
from .errors import NotPeriodicError, StreamExhaustedError
from .expansion import DigitStream, OrbitApprox, orbit_residues, stream_orbit_points

__all__ = [
    "Block",
    "UnitInterval",
    "indicator",
    "qn_of_block",
    "count_block",
    "block_counts",
    "occurrence_positions",
    "count_in_interval",
    "block_interval",
    "occurrence_positions_via_orbit",
    "orbit_occurrences_by_block",
    "aligned_block",
    "blocks_of_length",
]


@dataclass(frozen=True)
class Block:
    """A finite tuple of digits (b_1, ..., b_k), k >= 1."""

    digits: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "digits", tuple(int(b) for b in self.digits))
        if not self.digits:
            raise ValueError("a block needs at least one digit")
        if any(b < 0 for b in self.digits):
            raise ValueError("block digits must be non-negative")

    @classmethod
    def parse(cls, text: str) -> Block:
        """Parse ``"1,2"``."""
        try:
            return cls(tuple(int(t) for t in text.split(",") if t.strip()))
        except ValueError as exc:
            raise ValueError(f"malformed block {text!r}") from exc

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def __str__(self) -> str:
        return ",".join(map(str, self.digits))


def _as_block(B: Block | Sequence[int]) -> Block:
    return B if isinstance(B, Block) else Block(tuple(B))


@dataclass(frozen=True)
class UnitInterval:
    """Half-open [lo, hi) inside [0, 1]; empty when lo == hi."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        if not 0 <= lo <= hi <= 1:
            raise ValueError(f"need 0 <= lo <= hi <= 1, got [{lo}, {hi})")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def empty(cls) -> UnitInterval:
        return cls(Fraction(0), Fraction(0))

    @classmethod
    def parse(cls, text: str) -> UnitInterval:
        """Parse ``"lo:hi"`` such as ``"0:2/3"``."""
        lo, sep, hi = text.partition(":")
        if not sep:
            raise ValueError(f"interval {text!r} must look like lo:hi")
        return cls(Fraction(lo.strip()), Fraction(hi.strip()))

    @property
    def measure(self) -> Fraction:
        return self.hi - self.lo

    @property
    def is_empty(self) -> bool:
        return self.lo == self.hi

    def contains(self, point: Fraction | OrbitApprox) -> bool:
        if isinstance(point, OrbitApprox):
            return point.in_interval(self.lo, self.hi)
        return self.lo <= point < self.hi

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi})"


def indicator(Q: BasicSequence, B: Block | Sequence[int], j: int) -> int:
    """I_j(B): 1 iff b_i < q_{j+i-1} for every i."""
    B = _as_block(B)
    bases = Q.take(len(B), j)
    return int(all(b < q for b, q in zip(B, bases)))


def _term(Q: BasicSequence, B: Block, j: int) -> Fraction:
    bases = Q.take(len(B), j)
    if all(b < q for b, q in zip(B, bases)):
        return Fraction(1, math.prod(bases))
    return Fraction(0)


def qn_of_block(Q: BasicSequence, B: Block | Sequence[int], n: int) -> Fraction:
    """Q_n(B) = sum_{j<=n} I_j(B) / (q_j ... q_{j+k-1}), exactly.

    Past the preperiod the terms repeat with the period, so only one period
    of terms is evaluated.
    """
    B = _as_block(B)
    if n <= 0:
        return Fraction(0)
    k = len(Q.prefix)
    if not Q.is_periodic or n <= k:
        return sum((_term(Q, B, j) for j in range(1, n + 1)), Fraction(0))
    head = sum((_term(Q, B, j) for j in range(1, k + 1)), Fraction(0))
    m = len(Q.period)
    cycle = [_term(Q, B, j) for j in range(k + 1, k + m + 1)]
    full, rem = divmod(n - k, m)
    return head + full * sum(cycle, Fraction(0)) + sum(cycle[:rem], Fraction(0))


def _digits_prefix(digits: DigitStream | Sequence[int], n: int) -> Sequence[int]:
    if isinstance(digits, DigitStream):
        return digits.prefix(n)
    if len(digits) < n:
        raise StreamExhaustedError(f"need {n} digits, have {len(digits)}")
    return digits


def occurrence_positions(digits: DigitStream | Sequence[int], B: Block | Sequence[int], n: int) -> set[int]:
    """Start positions j <= n - k + 1 where B occurs in E_1..E_n (digit scan)."""
    B = _as_block(B)
    seq = _digits_prefix(digits, n)
    k = len(B)
    target = B.digits
    return {j + 1 for j in range(n - k + 1) if tuple(seq[j:j + k]) == target}


def count_block(digits: DigitStream | Sequence[int], B: Block | Sequence[int], n: int) -> int:
    """N_n(B, x): occurrences of B fully inside the first n digits."""
    return len(occurrence_positions(digits, B, n))


def block_counts(digits: DigitStream | Sequence[int], k: int, n: int) -> Counter:
    """Counts of every length-k window in E_1..E_n, keyed by digit tuple."""
    seq = list(_digits_prefix(digits, n))[:n]
    return Counter(tuple(seq[j:j + k]) for j in range(n - k + 1))


def count_in_interval(points: Iterable[Fraction | OrbitApprox], E: UnitInterval, N: int | None = None) -> int:
    """A_N(E): how many of the first N points lie in E.

    Stream-approximated points follow the boundary protocol of
    :class:`OrbitApprox` and may raise UnresolvedBoundaryError.
    """
    pts = points if N is None else itertools.islice(points, N)
    if E.is_empty:
        # still enforce the length precondition
        consumed = sum(1 for _ in pts)
        if N is not None and consumed < N:
            raise StreamExhaustedError(f"only {consumed} points, need {N}")
        return 0
    count = consumed = 0
    for p in pts:
        consumed += 1
        if E.contains(p):
            count += 1
    if N is not None and consumed < N:
        raise StreamExhaustedError(f"only {consumed} points, need {N}")
    return count


def _require_pure(Q: BasicSequence) -> tuple[int, ...]:
    if not Q.is_purely_periodic:
        raise NotPeriodicError("J_r(B) is defined for purely periodic sequences; shift first")
    return Q.period


def _c(period: tuple[int, ...], i: int) -> int:
    # c-subscripts reduced into {1..m}: c_0 = c_m, c_{m+1} = c_1
    return period[(i - 1) % len(period)]


def block_interval(Q: BasicSequence, B: Block | Sequence[int], r: int) -> UnitInterval:
    """J_r(B): the orbit values T_{Q,j-1}(x) for which B occurs at j, j = r mod m."""
    period = _require_pure(Q)
    B = _as_block(B)
    k = len(B)
    bases = [_c(period, r + i) for i in range(k)]
    if any(b >= c for b, c in zip(B, bases)):
        return UnitInterval.empty()
    num = 0
    for b, c in zip(B, bases):
        num = num * c + b
    den = math.prod(bases)
    return UnitInterval(Fraction(num, den), Fraction(num + 1, den))


def _orbit_values(
    x: Fraction | DigitStream, Q: BasicSequence, count: int
) -> list[Fraction] | list[OrbitApprox]:
    if isinstance(x, DigitStream):
        return stream_orbit_points(x, count)
    x = Fraction(x)
    q = x.denominator
    return [Fraction(r, q) for r in orbit_residues(x, Q, count)]


def occurrence_positions_via_orbit(
    x: Fraction | DigitStream,
    Q: BasicSequence,
    B: Block | Sequence[int],
    n: int,
    points: Sequence[Fraction | OrbitApprox] | None = None,
) -> set[int]:
    """{ j <= n-k+1 : T_{Q,j-1}(x) in J_{j mod m}(B) }.

    Equal to the digit-scan set of :func:`occurrence_positions`. Orbit
    points already computed for x can be passed in ``points``.
    """
    period = _require_pure(Q)
    B = _as_block(B)
    k = len(B)
    if n < k:
        return set()
    m = len(period)
    intervals = [block_interval(Q, B, r) for r in range(m)]
    if all(J.is_empty for J in intervals):
        return set()
    if points is None or len(points) < n - k + 1:
        points = _orbit_values(x, Q, n - k + 1)
    return {j for j in range(1, n - k + 2) if intervals[j % m].contains(points[j - 1])}


def orbit_occurrences_by_block(x: Fraction, Q: BasicSequence, k: int, n: int) -> dict[tuple[int, ...], set[int]]:
    """Orbit-side occurrence sets for every admissible length-k block at once.

    For each residue r the nonempty J_r(B) tile [0, 1) with width
    1/(c_r ... c_{r+k-1}), so the interval holding T_{Q,j-1}(x) is found by
    scaling; the lookup table is built from :func:`block_interval`.
    """
    period = _require_pure(Q)
    m = len(period)
    x = Fraction(x)
    q = x.denominator
    scale = []
    table: list[dict[int, tuple[int, ...]]] = []
    for r in range(m):
        widths = math.prod(_c(period, r + i) for i in range(k))
        scale.append(widths)
        slots = {}
        for B in blocks_of_length(k, max(period)):
            J = block_interval(Q, B, r)
            if not J.is_empty:
                slots[int(J.lo * widths)] = B
        table.append(slots)
    out: dict[tuple[int, ...], set[int]] = {}
    for j, res in enumerate(orbit_residues(x, Q, max(n - k + 1, 0)), start=1):
        r = j % m
        B = table[r][res * scale[r] // q]
        out.setdefault(B, set()).add(j)
    return out


def blocks_of_length(k: int, alphabet: int) -> Iterable[tuple[int, ...]]:
    """All digit tuples of length k over {0, ..., alphabet-1}, lexicographic."""
    return itertools.product(range(alphabet), repeat=k)


def aligned_block(Q: BasicSequence, extension: Sequence[int] = ()) -> Block:
    """(c_m - 1, c_1 - 1, ..., c_{m-1} - 1) followed by ``extension``.

    Such a block can only start at positions j = 0 mod m.
    """
    period = _require_pure(Q)
    m = len(period)
    if m < 2:
        raise ValueError("aligned blocks need a period of length > 1")
    head = (period[-1] - 1,) + tuple(c - 1 for c in period[:-1])
    # extension digit i sits at block offset m + i, whose base is c_{(m + i) mod m}
    for i, b in enumerate(extension):
        c = _c(period, m + i)
        if not 0 <= b < c:
            raise ValueError(f"extension digit {b} not admissible under base {c}")
    return Block(head + tuple(extension))
