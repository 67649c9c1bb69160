"""Exact integer and rational primitives, plus k-valid pair enumeration.

All threshold arithmetic in the package goes through :class:`fractions.Fraction`;
floats only appear when a value is rendered for display.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterator, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "ValidPair",
    "multinomial",
    "rat_pow",
    "canonical_valid_pairs",
    "all_valid_pairs",
    "parse_pair",
    "truncate_decimal",
]


def multinomial(n: int, parts: Sequence[int]) -> int:
    """Return ``n! / prod(p!)`` exactly.

    >>> multinomial(3, [2, 0, 1])
    3
    """
    if n < 0 or any(p < 0 for p in parts):
        raise ValueError("multinomial arguments must be non-negative")
    if sum(parts) != n:
        raise ValueError(f"parts {list(parts)} do not sum to {n}")
    result = 1
    remaining = n
    for p in parts:
        result *= comb(remaining, p)
        remaining -= p
    return result


def rat_pow(q: Fraction | int, e: int) -> Fraction:
    q = Fraction(q)
    if q == 0 and e < 0:
        raise ZeroDivisionError("zero base with negative exponent")
    return q**e


@dataclass(frozen=True, order=True)
class ValidPair:
    """A colour-count vector ``j`` with shift ``sigma``.

    The pair is k-valid for ``k = sigma + sum(j)`` provided ``j_i + sigma >= 0``
    for every coordinate.  Construction validates the second condition.
    """

    j: tuple[int, ...]
    sigma: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "j", tuple(int(x) for x in self.j))
        if self.sigma not in (-1, 1):
            raise ValueError(f"sigma must be +1 or -1, got {self.sigma}")
        if len(self.j) < 1:
            raise ValueError("j must have at least one coordinate")
        if any(x < 0 for x in self.j):
            raise ValueError(f"j must be non-negative, got {self.j}")
        if any(x + self.sigma < 0 for x in self.j):
            raise ValueError(f"j_i + sigma must be >= 0, got j={self.j}, sigma={self.sigma}")

    @property
    def k(self) -> int:
        return self.sigma + sum(self.j)

    @property
    def r(self) -> int:
        return len(self.j)

    def shifted(self, colour: int) -> tuple[int, ...]:
        """Edge type ``j + sigma * e_colour`` (colours are 1-based)."""
        if not 1 <= colour <= self.r:
            raise ValueError(f"colour {colour} outside 1..{self.r}")
        t = list(self.j)
        t[colour - 1] += self.sigma
        return tuple(t)

    def canonical(self) -> "ValidPair":
        return ValidPair(tuple(sorted(self.j, reverse=True)), self.sigma)

    @property
    def is_canonical(self) -> bool:
        return all(a >= b for a, b in zip(self.j, self.j[1:]))

    def check(self, k: int, r: int) -> None:
        if self.r != r:
            raise ValueError(f"pair has {self.r} coordinates, expected r={r}")
        if self.k != k:
            raise ValueError(f"pair is {self.k}-valid, expected k={k}")

    def __str__(self) -> str:
        return ",".join(map(str, self.j)) + (";+1" if self.sigma > 0 else ";-1")

    def to_json(self) -> dict:
        return {"j": list(self.j), "sigma": self.sigma}


def parse_pair(text: str) -> ValidPair:
    """Parse the CLI syntax ``"j1,j2,...;+1"`` or ``"...;-1"``."""
    try:
        js, sig = text.split(";")
        j = tuple(int(x) for x in js.split(","))
        sigma = int(sig)
    except ValueError as exc:
        raise ValueError(f"malformed pair {text!r}; expected 'j1,...,jr;+1|-1'") from exc
    return ValidPair(j, sigma)


def _partitions(total: int, parts: int, largest: int, smallest: int) -> Iterator[tuple[int, ...]]:
    # non-increasing tuples of exactly `parts` entries in [smallest, largest]
    if parts == 0:
        if total == 0:
            yield ()
        return
    hi = min(largest, total - smallest * (parts - 1))
    for first in range(hi, smallest - 1, -1):
        if first * parts < total:
            break
        for rest in _partitions(total - first, parts - 1, first, smallest):
            yield (first,) + rest


def canonical_valid_pairs(k: int, r: int) -> list[ValidPair]:
    """One representative per symmetry class of k-valid pairs.

    ``j`` is non-increasing; sigma = +1 pairs come first, then sigma = -1,
    each block in lexicographically decreasing order of ``j``.
    """
    if k < 2 or r < 2:
        raise ValueError("need k, r >= 2")
    out = []
    for sigma in (1, -1):
        smallest = 1 if sigma == -1 else 0
        for j in _partitions(k - sigma, r, k - sigma, smallest):
            out.append(ValidPair(j, sigma))
    return out


def _compositions(total: int, parts: int, smallest: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        if total >= smallest:
            yield (total,)
        return
    for first in range(total - smallest * (parts - 1), smallest - 1, -1):
        for rest in _compositions(total - first, parts - 1, smallest):
            yield (first,) + rest


def all_valid_pairs(k: int, r: int) -> Iterator[ValidPair]:
    """Every k-valid pair with r coordinates, coordinate order significant."""
    for sigma in (1, -1):
        for j in _compositions(k - sigma, r, 1 if sigma == -1 else 0):
            yield ValidPair(j, sigma)


def truncate_decimal(q: Fraction, places: int = 4) -> str:
    """Render ``q`` truncated toward zero (not rounded) to ``places`` decimals."""
    q = Fraction(q)
    scale = 10**places
    sign = "-" if q < 0 else ""
    scaled = abs(q.numerator) * scale // q.denominator
    whole, frac = divmod(scaled, scale)
    if places == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{places}d}"
