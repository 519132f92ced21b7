"""Test inputs (Champernowne digits) and the g / g^2 adversarial basic sequence."""

from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .basic_sequence import BasicSequence
from .block_stats import UnitInterval
from .errors import StreamExhaustedError
from .expansion import DigitStream, OrbitApprox

__all__ = [
    "champernowne_digits",
    "champernowne_stream",
    "AdversarialResult",
    "build_adversarial",
    "witness_interval",
    "adversarial_frequency",
    "limiting_frequency",
]


def _champernowne_iter(b: int) -> Iterator[int]:
    for i in itertools.count(1):
        rep = []
        while i:
            i, d = divmod(i, b)
            rep.append(d)
        yield from reversed(rep)


def champernowne_digits(b: int, n: int) -> list[int]:
    """First n base-b digits of 0.(1)(2)(3)... written in base b."""
    if b < 2:
        raise ValueError("base must be >= 2")
    return list(itertools.islice(_champernowne_iter(b), n))


def champernowne_stream(b: int, basis: BasicSequence | None = None) -> DigitStream:
    """Champernowne base b as an unbounded stream over ``period=(b)``."""
    if b < 2:
        raise ValueError("base must be >= 2")
    return DigitStream(basis or BasicSequence.periodic(b), lambda: _champernowne_iter(b))


@dataclass(frozen=True)
class AdversarialResult:
    """Output of :func:`build_adversarial`.

    ``position_map[n-1]`` is the 1-based P-index at which Q-digit n starts,
    i.e. n + N_{n-1}(g^2 - 1). After n Q-digits the P-length is
    n + N_n(g^2 - 1).
    """

    g: int
    P: BasicSequence
    p_digits: tuple[int, ...]
    position_map: tuple[int, ...]
    q_length: int

    @property
    def identity(self) -> bool:
        """True when no Q-digit equalled g^2 - 1, so P is constant g^2."""
        return len(self.p_digits) == self.q_length

    def p_stream(self) -> DigitStream:
        return DigitStream.from_digits(self.p_digits, self.P)

    def q_prefix_length(self, M: int) -> int:
        """Number of Q-digits whose contribution starts within the first M P-positions."""
        return bisect.bisect_right(self.position_map, M)


def build_adversarial(g: int, q_digits: DigitStream | Sequence[int], n: int) -> AdversarialResult:
    """Re-expand the first n digits of x w.r.t. Q = (g^2, g^2, ...) over P.

    A digit d = g^2 - 1 becomes two base-g positions carrying (g-1, g-1);
    any other digit keeps one base-g^2 position. The value of every aligned
    prefix is unchanged and no P-digit equals g^2 - 1.
    """
    if g < 2:
        raise ValueError("g must be >= 2")
    g2 = g * g
    if isinstance(q_digits, DigitStream):
        seq = q_digits.prefix(n)
    else:
        seq = list(q_digits)[:n]
        if len(seq) < n:
            raise StreamExhaustedError(f"need {n} digits, have {len(seq)}")
    bases: list[int] = []
    p_digits: list[int] = []
    position_map: list[int] = []
    for i, d in enumerate(seq, start=1):
        if not 0 <= d < g2:
            raise ValueError(f"digit d_{i} = {d} not in [0, {g2})")
        position_map.append(len(bases) + 1)
        if d == g2 - 1:
            bases += [g, g]
            p_digits += [g - 1, g - 1]
        else:
            bases.append(g2)
            p_digits.append(d)
    if not bases:
        raise ValueError("n must be >= 1")
    return AdversarialResult(g, BasicSequence.truncated(bases), tuple(p_digits), tuple(position_map), n)


def witness_interval(g: int) -> UnitInterval:
    """[0, 2/g), or [0, 1/2) for g = 2 where [0, 2/g) is the whole unit interval."""
    if g == 2:
        return UnitInterval(Fraction(0), Fraction(1, 2))
    return UnitInterval(Fraction(0), Fraction(2, g))


def adversarial_frequency(
    g: int,
    result: AdversarialResult,
    E: UnitInterval,
    M: int,
    per: str = "p",
    lookahead: int = 16,
) -> Fraction:
    """Frequency of T_{P,i}(x) in E over i = 0 .. M-1.

    Membership is read off the P-digits: the first digit decides it whenever
    the endpoints are multiples of 1/g^2 lying on that digit's grid, and
    further digits are read (up to ``4 * lookahead``) otherwise.
    ``per="p"`` divides by M; ``per="q"`` divides by the number of Q-digits
    those M positions came from.
    """
    if per not in ("p", "q"):
        raise ValueError("per must be 'p' or 'q'")
    digits, bases = result.p_digits, result.P.prefix
    if not 1 <= M <= len(digits):
        raise StreamExhaustedError(f"M = {M} outside [1, {len(digits)}]")
    count = 0
    for i in range(M):
        q = bases[i]
        point = OrbitApprox(Fraction(digits[i], q), Fraction(1, q), i, lookahead, digits, bases)
        if E.contains(point):
            count += 1
    if per == "p":
        return Fraction(count, M)
    return Fraction(count, result.q_prefix_length(M))


def _overlap(E: UnitInterval, lo: Fraction, hi: Fraction) -> Fraction:
    return max(Fraction(0), min(E.hi, hi) - max(E.lo, lo))


def limiting_frequency(g: int, E: UnitInterval, per: str = "p") -> Fraction:
    """Limit of :func:`adversarial_frequency` when x is normal w.r.t. (g^2, g^2, ...).

    Each Q-digit value has frequency 1/g^2 and the orbit tail after it is
    uniform, so a single base-g^2 position with digit d is uniform on
    [d/g^2, (d+1)/g^2); the two base-g positions from d = g^2 - 1 are
    uniform on [1 - 1/g^2, 1) and [1 - 1/g, 1).
    """
    g2 = g * g
    hits = sum(_overlap(E, Fraction(d, g2), Fraction(d + 1, g2)) * g2 for d in range(g2 - 1))
    hits += _overlap(E, 1 - Fraction(1, g2), Fraction(1)) * g2
    hits += _overlap(E, 1 - Fraction(1, g), Fraction(1)) * g
    per_q = hits / g2
    if per == "q":
        return per_q
    if per != "p":
        raise ValueError("per must be 'p' or 'q'")
    return per_q / (1 + Fraction(1, g2))
