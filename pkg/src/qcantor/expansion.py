"""Exact Cantor series digits, orbit points T_{Q,n}(x), and digit conversion.

Rationals are ``fractions.Fraction`` throughout. A real number can be
presented either as a rational in [0, 1) or by a :class:`DigitStream` of its
Q-digits; orbit points of a stream are returned as :class:`OrbitApprox`
values carrying an exact error bound.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

from .basic_sequence import BasicSequence, common_power, period_product
from .errors import NotPeriodicError, StreamExhaustedError, UnresolvedBoundaryError

ExactRational = Fraction

DEFAULT_LOOKAHEAD = 64

__all__ = [
    "ExactRational",
    "DEFAULT_LOOKAHEAD",
    "DigitStream",
    "OrbitApprox",
    "parse_rational",
    "extract_digits",
    "reconstruct",
    "orbit_point",
    "orbit_residues",
    "orbit_points",
    "orbit_point_from_stream",
    "stream_orbit_points",
    "convert_base_digits",
    "group_base_digits",
    "regroup_digits",
    "shift_to_periodic",
    "shift_stream_to_periodic",
    "read_digit_file",
    "write_digit_file",
    "format_digits",
    "parse_digits",
]


def parse_rational(text: str | Fraction | int) -> Fraction:
    """Parse ``"p/q"`` (or an int / Fraction) into a Fraction in [0, 1)."""
    if isinstance(text, str):
        try:
            x = Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed rational {text!r}") from exc
    else:
        x = Fraction(text)
    _check_unit(x)
    return x


def _check_unit(x: Fraction) -> None:
    if not 0 <= x < 1:
        raise ValueError(f"x = {x} is outside [0, 1); reduce it first")


class DigitStream:
    """A replayable stream of digits E_1, E_2, ... governed by a basic sequence.

    ``source`` is a zero-argument callable returning a fresh iterable each
    time, so every iteration starts again from E_1. Digits are checked
    against ``0 <= E_n < q_n`` as they are produced.
    """

    def __init__(
        self,
        basis: BasicSequence,
        source: Callable[[], Iterable[int]],
        length: int | None = None,
    ) -> None:
        self.basis = basis
        self._source = source
        if basis.length is not None:
            length = basis.length if length is None else min(length, basis.length)
        self.length = length

    @classmethod
    def from_digits(cls, digits: Sequence[int], basis: BasicSequence) -> DigitStream:
        digits = tuple(digits)
        return cls(basis, lambda: digits, len(digits))

    @classmethod
    def from_rational(cls, x: Fraction, basis: BasicSequence) -> DigitStream:
        x = Fraction(x)
        _check_unit(x)
        return cls(basis, lambda: _greedy_digits(x, basis))

    def __iter__(self) -> Iterator[int]:
        produced = itertools.islice(self._source(), self.length)
        for n, (digit, q) in enumerate(zip(produced, self.basis.bases()), start=1):
            if not 0 <= digit < q:
                raise ValueError(f"digit E_{n} = {digit} not in [0, {q})")
            yield digit

    def prefix(self, n: int) -> list[int]:
        """The first n digits; raises StreamExhaustedError if fewer exist."""
        out = list(itertools.islice(iter(self), n))
        if len(out) < n:
            raise StreamExhaustedError(f"stream supplied {len(out)} digits, needed {n}")
        return out

    def __repr__(self) -> str:
        return f"DigitStream({self.basis.to_spec()!r}, length={self.length})"


def _greedy_digits(x: Fraction, Q: BasicSequence) -> Iterator[int]:
    p, q = x.numerator, x.denominator
    for base in Q.bases():
        digit, p = divmod(base * p, q)
        yield digit


def extract_digits(x: Fraction, Q: BasicSequence, n: int) -> list[int]:
    """First n digits of x in [0, 1) by the greedy algorithm.

    For rationals the greedy digits never end in an all-(q_i - 1) tail, so
    this is the canonical expansion.
    """
    x = Fraction(x)
    _check_unit(x)
    bases = Q.take(n)
    p, q = x.numerator, x.denominator
    digits = []
    for base in bases:
        digit, p = divmod(base * p, q)
        digits.append(digit)
    return digits


def reconstruct(digits: Sequence[int], Q: BasicSequence) -> Fraction:
    """Exact value of sum E_i / (q_1 ... q_i) over the given digits."""
    bases = Q.take(len(digits))
    num, den = 0, 1
    for i, (digit, base) in enumerate(zip(digits, bases), start=1):
        if not 0 <= digit < base:
            raise ValueError(f"digit E_{i} = {digit} not in [0, {base})")
        num = num * base + digit
        den *= base
    return Fraction(num, den)


def orbit_residues(x: Fraction, Q: BasicSequence, count: int) -> Iterator[int]:
    """Numerators r_n of T_{Q,n}(x) = r_n / denominator(x), for n = 0 .. count-1."""
    x = Fraction(x)
    q = x.denominator
    r = x.numerator % q
    yield from itertools.islice(_residue_walk(r, q, Q), count)


def _residue_walk(r: int, q: int, Q: BasicSequence) -> Iterator[int]:
    yield r
    for base in Q.bases():
        r = (r * base) % q
        yield r


def orbit_point(x: Fraction, Q: BasicSequence, n: int) -> Fraction:
    """T_{Q,n}(x) = q_n ... q_1 x mod 1, exactly."""
    if n < 0:
        raise ValueError("n must be >= 0")
    x = Fraction(x)
    q = x.denominator
    r = x.numerator % q
    for base in Q.take(n):
        r = (r * base) % q
    return Fraction(r, q)


def orbit_points(x: Fraction, Q: BasicSequence, count: int) -> list[Fraction]:
    """[T_{Q,0}(x), ..., T_{Q,count-1}(x)]."""
    x = Fraction(x)
    q = x.denominator
    return [Fraction(r, q) for r in orbit_residues(x, Q, count)]


@dataclass(frozen=True)
class OrbitApprox:
    """An orbit value known to lie in ``[lo, lo + width)``.

    When built from a stream it keeps a reference to the digits so that a
    comparison against an endpoint inside the bound can read further digits
    (up to ``4 * lookahead`` in total) before giving up.
    """

    lo: Fraction
    width: Fraction
    index: int = 0
    lookahead: int = DEFAULT_LOOKAHEAD
    _digits: Sequence[int] | None = field(default=None, repr=False, compare=False)
    _bases: Sequence[int] | None = field(default=None, repr=False, compare=False)

    @property
    def hi(self) -> Fraction:
        return self.lo + self.width

    def below(self, t: Fraction) -> bool:
        """Decide whether the true value is < t."""
        if t <= self.lo:
            return False
        if t >= self.hi:
            return True
        if self._digits is None:
            raise UnresolvedBoundaryError(f"endpoint {t} inside [{self.lo}, {self.hi})")
        return _walk_below(self._digits, self._bases, self.index, Fraction(t), 4 * self.lookahead)

    def in_interval(self, lo: Fraction, hi: Fraction) -> bool:
        """Membership of the true value in [lo, hi)."""
        if lo >= hi:
            return False
        return not self.below(lo) and self.below(hi)


def _walk_below(
    digits: Sequence[int], bases: Sequence[int], n: int, t: Fraction, max_digits: int
) -> bool:
    # T = 0.E_{n+1} E_{n+2} ... ; compare with t one digit at a time
    for i in range(n, n + max_digits):
        if t <= 0:
            return False
        if t >= 1:
            return True
        if i >= len(digits) or i >= len(bases):
            raise UnresolvedBoundaryError(
                f"stream ended at digit {i} before orbit point {n} was separated from the endpoint"
            )
        s = t * bases[i]
        e = digits[i]
        if s <= e:
            return False
        if s >= e + 1:
            return True
        t = s - e
    raise UnresolvedBoundaryError(
        f"orbit point {n} not separated from endpoint within {max_digits} digits"
    )


def orbit_point_from_stream(
    digits: DigitStream | Sequence[int],
    n: int,
    lookahead: int = DEFAULT_LOOKAHEAD,
    basis: BasicSequence | None = None,
) -> OrbitApprox:
    """Approximate T_{Q,n}(x) from digits E_{n+1} .. E_{n+L} of x.

    The true value lies in ``[approx, approx + 1/(q_{n+1}...q_{n+L}))``.
    """
    if isinstance(digits, DigitStream):
        basis = digits.basis
        seq = digits.prefix(n + lookahead)
    else:
        if basis is None:
            raise ValueError("a basis is needed for a plain digit sequence")
        seq = list(digits)
        if len(seq) < n + lookahead:
            raise StreamExhaustedError(f"need {n + lookahead} digits, have {len(seq)}")
    bases = basis.take(len(seq))
    num, den = 0, 1
    for i in range(n, n + lookahead):
        num = num * bases[i] + seq[i]
        den *= bases[i]
    return OrbitApprox(Fraction(num, den), Fraction(1, den), n, lookahead, seq, bases)


def stream_orbit_points(
    stream: DigitStream, count: int, lookahead: int = DEFAULT_LOOKAHEAD
) -> list[OrbitApprox]:
    """Approximations of T_{Q,0}(x), ..., T_{Q,count-1}(x) from a digit stream.

    Uses a sliding window, so each point costs O(1) big-integer operations.
    """
    if count <= 0:
        return []
    need = count - 1 + lookahead
    digits = stream.prefix(need)
    bases = stream.basis.take(need)
    num, den = 0, 1
    for i in range(lookahead):
        num = num * bases[i] + digits[i]
        den *= bases[i]
    out = []
    for n in range(count):
        out.append(OrbitApprox(Fraction(num, den), Fraction(1, den), n, lookahead, digits, bases))
        if n + lookahead < need:
            den //= bases[n]
            num -= digits[n] * den
            nxt = n + lookahead
            num = num * bases[nxt] + digits[nxt]
            den *= bases[nxt]
    return out


def _require_mixed_radix(Q: BasicSequence) -> tuple[int, ...]:
    if not Q.is_purely_periodic:
        raise NotPeriodicError("digit conversion needs a purely periodic basic sequence")
    return Q.period


def convert_base_digits(b_digits: Iterable[int], Q: BasicSequence, b: int | None = None) -> Iterator[int]:
    """Split each base-b digit into one period (E_1, ..., E_m) of Q-digits.

    D = E_1 (c_2...c_m) + E_2 (c_3...c_m) + ... + E_m with E_i < c_i.
    """
    period = _require_mixed_radix(Q)
    prod = period_product(Q)
    if b is not None and b != prod:
        raise ValueError(f"period product {prod} does not match base {b}")
    for D in b_digits:
        if not 0 <= D < prod:
            raise ValueError(f"base-{prod} digit {D} out of range")
        group = []
        for c in reversed(period):
            D, e = divmod(D, c)
            group.append(e)
        yield from reversed(group)


def group_base_digits(q_digits: Iterable[int], Q: BasicSequence) -> Iterator[int]:
    """Inverse of :func:`convert_base_digits`: fold each period of Q-digits into a base-b digit.

    A trailing incomplete period is an error.
    """
    period = _require_mixed_radix(Q)
    m = len(period)
    it = iter(q_digits)
    while True:
        group = list(itertools.islice(it, m))
        if not group:
            return
        if len(group) < m:
            raise ValueError(f"trailing group of {len(group)} digits is shorter than the period {m}")
        D = 0
        for e, c in zip(group, period):
            if not 0 <= e < c:
                raise ValueError(f"digit {e} out of range for base {c}")
            D = D * c + e
        yield D


def regroup_digits(digits: Iterable[int], g: int, h: int) -> Iterator[int]:
    """Re-express base-g digits in an equivalent base h (g**p == h**q).

    Groups of p base-g digits become q base-h digits; an incomplete final
    group is dropped.
    """
    if g == h:
        for d in digits:
            if not 0 <= d < g:
                raise ValueError(f"base-{g} digit {d} out of range")
            yield d
        return
    p, q = common_power(g, h)
    it = iter(digits)
    while True:
        group = list(itertools.islice(it, p))
        if len(group) < p:
            return
        value = 0
        for d in group:
            if not 0 <= d < g:
                raise ValueError(f"base-{g} digit {d} out of range")
            value = value * g + d
        out = []
        for _ in range(q):
            value, e = divmod(value, h)
            out.append(e)
        yield from reversed(out)


def shift_to_periodic(Q: BasicSequence, x: Fraction) -> tuple[BasicSequence, Fraction]:
    """Drop the preperiod: P = (c_1, ..., c_m repeated), y = frac(d_1 ... d_k x).

    Afterwards ``orbit_point(y, P, n) == orbit_point(x, Q, n + k)`` for all n.
    """
    if not Q.is_periodic:
        raise NotPeriodicError("shift_to_periodic needs an eventually periodic sequence")
    x = Fraction(x)
    P = BasicSequence((), Q.period)
    y = (math.prod(Q.prefix) * x) % 1
    return P, y


def shift_stream_to_periodic(stream: DigitStream) -> DigitStream:
    """Stream counterpart of :func:`shift_to_periodic`: drop the first k digits."""
    Q = stream.basis
    if not Q.is_periodic:
        raise NotPeriodicError("shift needs an eventually periodic sequence")
    k = len(Q.prefix)
    if k == 0:
        return stream
    length = None if stream.length is None else stream.length - k
    return DigitStream(
        BasicSequence((), Q.period),
        lambda: itertools.islice(iter(stream), k, None),
        length,
    )


def format_digits(digits: Iterable[int]) -> str:
    return " ".join(str(d) for d in digits)


def parse_digits(text: str) -> list[int]:
    """Whitespace- or comma-separated non-negative integers."""
    tokens = text.replace(",", " ").split()
    try:
        digits = [int(tok) for tok in tokens]
    except ValueError as exc:
        raise ValueError(f"malformed digit list {text!r}") from exc
    if any(d < 0 for d in digits):
        raise ValueError("digits must be non-negative")
    return digits


def write_digit_file(path: str | os.PathLike, digits: Iterable[int], basis: BasicSequence | None = None) -> None:
    """Write digits as ASCII, with an optional ``# q: <encoding>`` header line."""
    with open(path, "w") as fh:
        if basis is not None:
            fh.write(f"# q: {basis.to_spec()}\n")
        fh.write(format_digits(digits) + "\n")


def read_digit_file(path: str | os.PathLike) -> tuple[list[int], BasicSequence | None]:
    """Read a digit file; returns the digits and the header basic sequence if present."""
    basis = None
    body = []
    with open(path) as fh:
        for line in fh:
            stripped = line.strip()
            if stripped.startswith("#"):
                header = stripped.lstrip("#").strip()
                if header.lower().startswith("q:"):
                    header = header[2:].strip()
                if "prefix=" in header or "period=" in header:
                    basis = BasicSequence.from_spec(header)
                continue
            body.append(stripped)
    return parse_digits(" ".join(body)), basis
