"""Explicit finite members of the extremal families and their degrees."""

from __future__ import annotations

import os
import warnings
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import comb, prod
from typing import Sequence

from .errors import BudgetExceeded
from .exactmath import ValidPair
from .hypergraph import ColouredHypergraph, Edge

__all__ = [
    "ExtremalSpec",
    "build_extremal",
    "build_member",
    "edge_type",
    "edges_of_type",
    "finite_colour_degree",
    "min_degree",
    "build_tight_cycle_counterexample",
    "MIN_DEGREE_SUBSET_BUDGET",
]

MIN_DEGREE_SUBSET_BUDGET = 250_000


@dataclass(frozen=True)
class ExtremalSpec:
    """One member of the family fixed by ``(k, r, pair, n)``.

    With ``alpha`` unset, part ``i`` has ``(r*j_i + sigma) * n / (r*k)``
    vertices and ``n`` must be divisible by ``k*r``.  An explicit ``alpha``
    (non-negative rationals summing to one) gives parts of size
    ``(j_i + sigma*alpha_i) * n / k`` instead; empty parts are then allowed.
    """

    k: int
    r: int
    pair: ValidPair
    n: int
    alpha: tuple[Fraction, ...] | None = None
    part_sizes: tuple[int, ...] = field(init=False)

    def __post_init__(self) -> None:
        if self.k < 2 or self.r < 2:
            raise ValueError("need k, r >= 2")
        self.pair.check(self.k, self.r)
        if self.alpha is None:
            if self.n <= 0 or self.n % (self.k * self.r):
                raise ValueError(f"n={self.n} must be a positive multiple of k*r={self.k * self.r}")
            sizes = [(self.r * j + self.pair.sigma) * self.n // (self.r * self.k) for j in self.pair.j]
            if min(sizes) < 1:
                raise ValueError(f"part sizes {sizes} underflow")
        else:
            alpha = tuple(Fraction(a) for a in self.alpha)
            object.__setattr__(self, "alpha", alpha)
            if len(alpha) != self.r or sum(alpha) != 1 or min(alpha) < 0:
                raise ValueError(f"alpha {alpha} must be {self.r} non-negative rationals summing to 1")
            if self.n <= 0 or self.n % self.k:
                raise ValueError(f"n={self.n} must be a positive multiple of k={self.k}")
            exact = [(j + self.pair.sigma * a) * self.n / self.k for j, a in zip(self.pair.j, alpha)]
            if any(x.denominator != 1 for x in exact):
                raise ValueError(f"alpha {alpha} gives non-integral part sizes {exact}")
            sizes = [int(x) for x in exact]
            if min(sizes) < 0:
                raise ValueError(f"part sizes {sizes} underflow")
        assert sum(sizes) == self.n
        object.__setattr__(self, "part_sizes", tuple(sizes))

    @property
    def parts(self) -> list[range]:
        out, start = [], 0
        for size in self.part_sizes:
            out.append(range(start, start + size))
            start += size
        return out

    def part_of(self) -> list[int]:
        """1-based part index of every vertex."""
        return [i + 1 for i, size in enumerate(self.part_sizes) for _ in range(size)]


def edge_type(edge: Sequence[int], part_of: Sequence[int], r: int) -> tuple[int, ...]:
    t = [0] * r
    for v in edge:
        t[part_of[v] - 1] += 1
    return tuple(t)


def edges_of_type(parts: Sequence[Sequence[int]], t: Sequence[int]) -> list[Edge]:
    """All k-sets meeting part ``s`` in exactly ``t[s]`` vertices."""
    choices = [list(combinations(part, ts)) for part, ts in zip(parts, t)]
    return [tuple(sorted(v for piece in pieces for v in piece)) for pieces in product(*choices)]


def build_member(k: int, r: int, pair: ValidPair, part_sizes: Sequence[int]) -> ColouredHypergraph:
    """Edge-maximal member for an arbitrary contiguous partition."""
    pair.check(k, r)
    parts, start = [], 0
    for size in part_sizes:
        parts.append(range(start, start + size))
        start += size
    edges: dict[Edge, int] = {}
    for colour in range(1, r + 1):
        found = edges_of_type(parts, pair.shifted(colour))
        if not found:
            warnings.warn(
                f"colour {colour} class is empty: parts {tuple(part_sizes)} cannot host type {pair.shifted(colour)}",
                stacklevel=2,
            )
        for e in found:
            edges[e] = colour
    return ColouredHypergraph(start, k, r, edges)


def build_extremal(spec: ExtremalSpec) -> ColouredHypergraph:
    return build_member(spec.k, spec.r, spec.pair, spec.part_sizes)


def finite_colour_degree(spec: ExtremalSpec, part: int, colour: int) -> int:
    """Number of ``colour``-coloured edges through one vertex of part ``part``.

    Both indices are 1-based.  Counts edges of the edge-maximal member.
    """
    if not (1 <= part <= spec.r and 1 <= colour <= spec.r):
        raise ValueError(f"part and colour must lie in 1..{spec.r}")
    t = spec.pair.shifted(colour)
    i = part - 1
    if t[i] == 0:
        return 0
    sizes = spec.part_sizes
    return comb(sizes[i] - 1, t[i] - 1) * prod(comb(sizes[s], t[s]) for s in range(spec.r) if s != i)


def _budget(default: int) -> int:
    env = os.environ.get("BIASMATCH_BUDGET")
    return min(default, int(env)) if env else default


def min_degree(h: ColouredHypergraph, ell: int, budget: int | None = None) -> int:
    """Minimum number of edges containing an ``ell``-set of vertices.

    Brute force over all ``ell``-sets; refuses when there are more of them
    than ``budget``.
    """
    if not 1 <= ell < h.k:
        raise ValueError(f"need 1 <= ell < k={h.k}, got {ell}")
    if h.n < ell:
        raise ValueError(f"fewer than {ell} vertices")
    budget = _budget(MIN_DEGREE_SUBSET_BUDGET if budget is None else budget)
    total = comb(h.n, ell)
    if total > budget:
        raise BudgetExceeded(f"{total} {ell}-sets exceed budget {budget}", nodes=0)
    counts: Counter[tuple[int, ...]] = Counter()
    for e in h.edges:
        counts.update(combinations(e, ell))
    if len(counts) < total:
        return 0
    return min(counts.values())


def build_tight_cycle_counterexample(n: int, default_colour: int = 1) -> ColouredHypergraph:
    """Two-coloured 4-graph with parts of sizes ``7n/8`` and ``n/8``.

    Contains every 4-set except those meeting both parts in two vertices.
    Type (4,0) is colour 1, type (3,1) colour 2, everything else
    ``default_colour``.
    """
    if n <= 0 or n % 8:
        raise ValueError(f"n={n} must be a positive multiple of 8")
    big = 7 * n // 8
    edges: dict[Edge, int] = {}
    for e in combinations(range(n), 4):
        inside = sum(1 for v in e if v < big)
        if inside == 2:
            continue
        edges[e] = {4: 1, 3: 2}.get(inside, default_colour)
    return ColouredHypergraph(n, 4, 2, edges)
