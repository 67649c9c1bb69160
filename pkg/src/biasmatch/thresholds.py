"""Limiting minimum-degree thresholds of the extremal family and their table."""

from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .exactmath import ValidPair, canonical_valid_pairs, multinomial, rat_pow, truncate_decimal

__all__ = [
    "Classification",
    "ThresholdReport",
    "TableRow",
    "f_pair",
    "f_pair_reduced",
    "f_kr",
    "f_star",
    "m_conjectured",
    "m_prime",
    "classify",
    "render_table",
    "table_csv",
    "table_json",
]


def _check(k: int, r: int, pair: ValidPair) -> None:
    if k < 2 or r < 2:
        raise ValueError("need k, r >= 2")
    pair.check(k, r)


def f_pair(k: int, r: int, pair: ValidPair) -> Fraction:
    """Relative minimum vertex degree of the edge-maximal member, in the limit.

    Evaluates, for each part ``i``, the normalised degree of a vertex in that
    part (summing the contribution of every colour class) and takes the
    minimum over parts.
    """
    _check(k, r, pair)
    j, sigma = pair.j, pair.sigma
    weights = [r * js + sigma for js in j]
    assert all(w >= 1 for w in weights)
    # colour-l term, shared by every part i
    terms = []
    for ell in range(1, r + 1):
        t = pair.shifted(ell)
        prod = 1
        for w, e in zip(weights, t):
            prod *= w**e
        terms.append((t, multinomial(k, t) * prod))
    base = k**k * r ** (k - 1)
    degrees = []
    for i in range(r):
        total = sum(t[i] * value for t, value in terms)
        degrees.append(Fraction(total, base * weights[i]))
    return min(degrees)


def _shift_factor(k: int, r: int, ji: int, sigma: int) -> Fraction:
    return rat_pow(Fraction((2 * k + 1 - sigma) * (r * ji + sigma), 2 * ji + 1 + sigma), sigma)


def f_pair_reduced(k: int, r: int, pair: ValidPair) -> Fraction:
    """Closed expression for :func:`f_pair` when ``j`` is non-increasing.

    The minimum over parts is always attained at the smallest part, which
    removes the minimisation.
    """
    _check(k, r, pair)
    if not pair.is_canonical:
        raise ValueError(f"j must be non-increasing, got {pair.j}")
    j, sigma = pair.j, pair.sigma
    big_pi = multinomial(k - sigma, j)
    for js in j:
        big_pi *= (r * js + sigma) ** js
    lam = sum(_shift_factor(k, r, js, sigma) for js in j)
    jr = j[-1]
    bracket = jr * lam + sigma * _shift_factor(k, r, jr, sigma)
    return Fraction(big_pi, k**k * r ** (k - 1) * (r * jr + sigma)) * bracket


def f_kr(k: int, r: int) -> tuple[Fraction, list[ValidPair]]:
    """Maximum of :func:`f_pair` over canonical pairs, with every maximiser."""
    best = None
    argmax: list[ValidPair] = []
    for pair in canonical_valid_pairs(k, r):
        value = f_pair_reduced(k, r, pair)
        if best is None or value > best:
            best, argmax = value, [pair]
        elif value == best:
            argmax.append(pair)
    return best, argmax


def f_star(k: int, r: int) -> Fraction:
    """``(1 - (r-1)/(kr))^(k-1)``, the value of the pair ``((k-1,0,...,0), +1)``."""
    if k < 2 or r < 2:
        raise ValueError("need k, r >= 2")
    return rat_pow(1 - Fraction(r - 1, k * r), k - 1)


def m_conjectured(ell: int, k: int) -> Fraction:
    """Conjectured perfect-matching threshold ``max(1/2, 1 - ((k-1)/k)^(k-ell))``."""
    if not 1 <= ell < k:
        raise ValueError(f"need 1 <= ell < k, got ell={ell}, k={k}")
    return max(Fraction(1, 2), 1 - rat_pow(Fraction(k - 1, k), k - ell))


def m_prime(k: int) -> Fraction:
    """``1 - ((k-1)/k)^(k-1)``, the table's comparison column (no 1/2 floor)."""
    return 1 - rat_pow(Fraction(k - 1, k), k - 1)


class Classification(str, enum.Enum):
    BIAS_EXCEEDS = "BIAS_EXCEEDS"
    COINCIDES = "COINCIDES"


@dataclass(frozen=True)
class ThresholdReport:
    k: int
    r: int
    f_kr: Fraction
    argmax_pairs: tuple[ValidPair, ...]
    m_prime: Fraction
    b_kr: Fraction
    classification: Classification
    # True where the verdict rests on the open vertex-degree matching conjecture
    conditional_on_conjecture: bool = False

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "r": self.r,
            "f_kr": _frac(self.f_kr),
            "argmax": [p.to_json() for p in self.argmax_pairs],
            "m_prime": _frac(self.m_prime),
            "b_kr": _frac(self.b_kr),
            "classification": self.classification.value,
            "conditional_on_conjecture": self.conditional_on_conjecture,
        }


def _frac(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def classify(k: int, r: int) -> ThresholdReport:
    f, argmax = f_kr(k, r)
    m = m_conjectured(1, k)
    cls = Classification.BIAS_EXCEEDS if f > m else Classification.COINCIDES
    return ThresholdReport(
        k=k,
        r=r,
        f_kr=f,
        argmax_pairs=tuple(argmax),
        m_prime=m,
        b_kr=max(f, m),
        classification=cls,
        conditional_on_conjecture=(r == 2 and 6 <= k <= 16),
    )


@dataclass(frozen=True)
class TableCell:
    r: int
    value: Fraction
    flagged: bool

    @property
    def text(self) -> str:
        return truncate_decimal(self.value, 4)


@dataclass(frozen=True)
class TableRow:
    k: int
    m_prime: Fraction
    cells: tuple[TableCell, ...] = field(default_factory=tuple)


def _row(args: tuple[int, int]) -> TableRow:
    k, r_max = args
    m = m_prime(k)
    cells = []
    for r in range(2, r_max + 1):
        f, _ = f_kr(k, r)
        cells.append(TableCell(r, f, f > m))
    return TableRow(k, m, tuple(cells))


def render_table(k_max: int = 22, r_max: int = 10, jobs: int = 1) -> list[TableRow]:
    """Rows ``3..k_max`` of thresholds ``f_{k,r}`` for ``r = 2..r_max``."""
    if k_max < 3 or r_max < 2:
        raise ValueError("need k_max >= 3 and r_max >= 2")
    args = [(k, r_max) for k in range(3, k_max + 1)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_row, args))
    return [_row(a) for a in args]


def table_csv(rows: list[TableRow]) -> str:
    r_max = rows[0].cells[-1].r if rows and rows[0].cells else 1
    header = ["k", "m_prime"] + [f"f_r{r}" for r in range(2, r_max + 1)]
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join([str(row.k), truncate_decimal(row.m_prime)] + [c.text for c in row.cells]))
    return "\n".join(lines) + "\n"


def table_json(rows: list[TableRow]) -> list[dict]:
    return [
        {
            "k": row.k,
            "m_prime": {"exact": _frac(row.m_prime), "decimal": truncate_decimal(row.m_prime)},
            "f": [
                {"r": c.r, "exact": _frac(c.value), "decimal": c.text, "flagged": c.flagged}
                for c in row.cells
            ],
        }
        for row in rows
    ]
