"""Basic sequences: the positional bases q_1, q_2, ... of a Cantor series expansion."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import NotPeriodicError, StreamExhaustedError

__all__ = [
    "BasicSequence",
    "q_at",
    "period_product",
    "rotate_period",
    "bases_equivalent",
    "prime_factorization",
    "common_power",
]


@dataclass(frozen=True)
class BasicSequence:
    """A basic sequence ``(d_1, ..., d_k, c_1, ..., c_m, c_1, ..., c_m, ...)``.

    With an empty ``period`` the value is a *truncation*: only the first
    ``len(prefix)`` bases are known and indexing past them is an error.
    The period supplied by the caller is used as-is (never canonicalized).
    """

    prefix: tuple[int, ...] = ()
    period: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "prefix", tuple(int(d) for d in self.prefix))
        object.__setattr__(self, "period", tuple(int(c) for c in self.period))
        for q in self.prefix + self.period:
            if q < 2:
                raise ValueError(f"every base must be >= 2, got {q}")
        if not self.prefix and not self.period:
            raise ValueError("a basic sequence needs at least one base")

    @classmethod
    def periodic(cls, *period: int) -> BasicSequence:
        return cls((), tuple(period))

    @classmethod
    def truncated(cls, bases: Sequence[int]) -> BasicSequence:
        return cls(tuple(bases), ())

    @property
    def is_periodic(self) -> bool:
        """True for the eventually periodic kind."""
        return bool(self.period)

    @property
    def is_purely_periodic(self) -> bool:
        return self.is_periodic and not self.prefix

    @property
    def length(self) -> int | None:
        """Number of known bases, or None when the sequence is infinite."""
        return None if self.is_periodic else len(self.prefix)

    def __getitem__(self, n: int) -> int:
        return q_at(self, n)

    def bases(self, start: int = 1) -> Iterator[int]:
        """Iterate q_start, q_{start+1}, ... (finite for truncations)."""
        if start < 1:
            raise ValueError("positions start at 1")
        k = len(self.prefix)
        if start <= k:
            head: Iterator[int] = iter(self.prefix[start - 1:])
            if not self.period:
                return head
            return itertools.chain(head, itertools.cycle(self.period))
        if not self.period:
            return iter(())
        m = len(self.period)
        r = (start - k - 1) % m
        return itertools.cycle(self.period[r:] + self.period[:r])

    def take(self, n: int, start: int = 1) -> list[int]:
        """The list (q_start, ..., q_{start+n-1})."""
        out = list(itertools.islice(self.bases(start), n))
        if len(out) < n:
            raise StreamExhaustedError(
                f"truncated basic sequence has {len(self.prefix)} bases, "
                f"needed up to position {start + n - 1}"
            )
        return out

    def product(self, start: int, count: int) -> int:
        """q_start * ... * q_{start+count-1} (1 for count == 0)."""
        return math.prod(self.take(count, start))

    def shifted(self, n: int) -> BasicSequence:
        """The sequence (q_{n+1}, q_{n+2}, ...)."""
        k = len(self.prefix)
        if n < k or (n == k and self.period):
            return BasicSequence(self.prefix[n:], self.period)
        if not self.period:
            raise StreamExhaustedError(f"cannot shift a {k}-base truncation by {n}")
        m = len(self.period)
        r = (n - k) % m
        return BasicSequence((), self.period[r:] + self.period[:r])

    def to_spec(self) -> str:
        """Text encoding ``prefix=d1,d2;period=c1,c2``."""
        return (
            "prefix=" + ",".join(map(str, self.prefix))
            + ";period=" + ",".join(map(str, self.period))
        )

    @classmethod
    def from_spec(cls, text: str) -> BasicSequence:
        """Parse the ``prefix=...;period=...`` encoding (either part may be omitted)."""
        parts: dict[str, tuple[int, ...]] = {"prefix": (), "period": ()}
        for chunk in text.strip().split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            key, sep, value = chunk.partition("=")
            key = key.strip()
            if not sep or key not in parts:
                raise ValueError(f"malformed basic-sequence field {chunk!r}")
            value = value.strip()
            try:
                parts[key] = tuple(int(v) for v in value.split(",") if v.strip()) if value else ()
            except ValueError as exc:
                raise ValueError(f"non-integer base in {chunk!r}") from exc
        return cls(parts["prefix"], parts["period"])

    def __str__(self) -> str:
        return self.to_spec()


def q_at(Q: BasicSequence, n: int) -> int:
    """Return q_n (positions are 1-based)."""
    if n < 1:
        raise IndexError("positions start at 1")
    k = len(Q.prefix)
    if n <= k:
        return Q.prefix[n - 1]
    if not Q.period:
        raise StreamExhaustedError(f"position {n} beyond truncation of length {k}")
    return Q.period[(n - k - 1) % len(Q.period)]


def period_product(Q: BasicSequence) -> int:
    """b = c_1 * c_2 * ... * c_m."""
    if not Q.is_periodic:
        raise NotPeriodicError("truncated basic sequence has no period")
    return math.prod(Q.period)


def rotate_period(Q: BasicSequence, r: int) -> BasicSequence:
    """Purely periodic sequence with period (c_{r+1}, ..., c_m, c_1, ..., c_r)."""
    if not Q.is_purely_periodic:
        raise NotPeriodicError("rotate_period needs a purely periodic sequence")
    m = len(Q.period)
    if not 0 <= r < m:
        raise ValueError(f"rotation {r} outside [0, {m})")
    return BasicSequence((), Q.period[r:] + Q.period[:r])


def prime_factorization(n: int) -> dict[int, int]:
    """Trial-division factorization; fine for machine-word inputs."""
    if n < 1:
        raise ValueError("n must be positive")
    factors: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def bases_equivalent(r: int, s: int) -> bool:
    """r ~ s: log r / log s is rational, i.e. r**p == s**q for some p, q >= 1.

    Holds exactly when the prime-exponent vectors of r and s are proportional.
    """
    if r < 2 or s < 2:
        raise ValueError("bases must be >= 2")
    fr, fs = prime_factorization(r), prime_factorization(s)
    if fr.keys() != fs.keys():
        return False
    ratios = {Fraction(fr[p], fs[p]) for p in fr}
    return len(ratios) == 1


def common_power(r: int, s: int) -> tuple[int, int]:
    """Smallest (p, q) with r**p == s**q, for equivalent bases."""
    if not bases_equivalent(r, s):
        raise ValueError(f"{r} and {s} are not equivalent bases")
    fr, fs = prime_factorization(r), prime_factorization(s)
    ratio = Fraction(fr[min(fr)], fs[min(fs)])
    # r**p == s**q  <=>  p * e_r == q * e_s  <=>  p / q == 1 / ratio
    return ratio.denominator, ratio.numerator
