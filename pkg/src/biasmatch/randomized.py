"""Binomial random hypergraphs and the switcher-based colour-bias search.

Randomness comes from numpy's PCG64 bit generator.  ``sample_hkp`` draws one
raw 64-bit word per k-set, k-sets taken in lexicographic order, and keeps the
set iff ``word < p * 2**64`` (compared exactly, so ``p`` may be any rational).
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded, NoPerfectMatching
from .hypergraph import UNCOLOURED, ColouredHypergraph, Edge
from .oracle import Matching, SearchStats, Switcher, _cover, _mask, find_switcher, perfect_matchings

__all__ = [
    "BiasSearchConfig",
    "BiasResult",
    "RandomPropertyReport",
    "sample_hkp",
    "random_colouring",
    "check_random_properties",
    "spot_check_property_iii",
    "bias_search",
    "flip_switcher",
    "exhaustive_best_bias",
    "append_record",
]

_TWO64 = 1 << 64


def sample_hkp(n: int, k: int, p: Fraction | int | str, seed: int) -> ColouredHypergraph:
    """Binomial random k-graph on ``n`` vertices; edges are left uncoloured."""
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError(f"p={p} outside [0, 1]")
    ksets = list(combinations(range(n), k))
    words = np.random.PCG64(seed).random_raw(len(ksets)).tolist() if ksets else []
    cutoff_num, cutoff_den = p.numerator * _TWO64, p.denominator
    edges = {e: UNCOLOURED for e, w in zip(ksets, words) if w * cutoff_den < cutoff_num}
    return ColouredHypergraph(n, k, 1, edges)


def random_colouring(h: ColouredHypergraph, r: int, seed: int) -> ColouredHypergraph:
    """Colour every edge uniformly from ``1..r`` (PCG64, edges in sorted order)."""
    rng = np.random.Generator(np.random.PCG64(seed))
    colours = rng.integers(1, r + 1, size=len(h)).tolist()
    return h.with_colouring(colours, r=r)


def _has_independent_set(
    n: int, sets: Sequence[int], size: int, stats: SearchStats, excluded: int = 0
) -> bool:
    """Is there a set of ``size`` vertices, none in ``excluded``, containing none of ``sets``?"""
    if size <= 0:
        return True
    pool = [v for v in range(n) if not excluded >> v & 1]
    through: dict[int, list[int]] = {v: [s for s in sets if s >> v & 1] for v in pool}

    def rec(pos: int, chosen: int, count: int) -> bool:
        if count == size:
            return True
        if count + (len(pool) - pos) < size:
            return False
        stats.tick()
        v = pool[pos]
        grown = chosen | 1 << v
        if all(s & grown != s for s in through[v]) and rec(pos + 1, grown, count + 1):
            return True
        return rec(pos + 1, chosen, count)

    return rec(0, 0, 0)


@dataclass
class RandomPropertyReport:
    n: int
    k: int
    r: int
    property_i: bool
    property_ii: bool
    independent_threshold: int
    common_threshold: int
    # sampled, never exhaustive; None when not requested
    property_iii_sampled: bool | None = None
    nodes_explored: int = 0

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "r": self.r,
            "property_i": self.property_i,
            "property_ii": self.property_ii,
            "independent_threshold": self.independent_threshold,
            "common_threshold": self.common_threshold,
            "property_iii_sampled": self.property_iii_sampled,
            "nodes_explored": self.nodes_explored,
        }


def check_random_properties(
    h: ColouredHypergraph, r: int, budget: int | None = None
) -> RandomPropertyReport:
    """Exact check of the two random-graph properties used for colour bias.

    (i)  every vertex set of size at least ``ceil(n/(2r))`` contains an edge;
    (ii) for distinct ``x, y`` every set ``X`` of size at least ``ceil(n/3)``
         avoiding ``x`` and ``y`` contains a (k-1)-set of ``N(x) & N(y)``.

    Both reduce to "no independent set of the threshold size" in a suitable
    hypergraph, which is decided by depth-first search.
    """
    n = h.n
    stats = SearchStats(budget)
    s1 = math.ceil(Fraction(n, 2 * r))
    s2 = math.ceil(Fraction(n, 3))
    edge_masks = [m for m, _ in h.masks]
    prop_i = not _has_independent_set(n, edge_masks, s1, stats)
    prop_ii = True
    for x, y in combinations(range(n), 2):
        common = [_mask(s) for s in h.neighbourhood(x) & h.neighbourhood(y)]
        if _has_independent_set(n, common, s2, stats, excluded=1 << x | 1 << y):
            prop_ii = False
            break
    return RandomPropertyReport(n, h.k, r, prop_i, prop_ii, s1, s2, nodes_explored=stats.nodes)


def spot_check_property_iii(
    h: ColouredHypergraph, trials: int, seed: int, budget: int | None = None
) -> bool:
    """Random subsets of size >= n/2 (multiple of k) each host a perfect matching.

    A sampled check only; the real property quantifies over all subsets.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    k, n = h.k, h.n
    lo = math.ceil(Fraction(n, 2 * k)) * k
    sizes = list(range(lo, n + 1, k))
    if not sizes:
        return True
    stats = SearchStats(budget)
    for _ in range(trials):
        size = sizes[int(rng.integers(len(sizes)))]
        chosen = rng.choice(n, size=size, replace=False).tolist()
        if next(_cover(h, _mask(chosen), stats), None) is None:
            return False
    return True


@dataclass(frozen=True)
class BiasSearchConfig:
    gamma_target: Fraction = Fraction(0)
    switcher_budget: int | None = None  # defaults to k^2 + k
    seed: int = 0
    max_nodes: int = 5_000_000
    exhaustive_limit: int = 15
    restarts: int = 200

    def validate(self, k: int, r: int) -> None:
        g = Fraction(self.gamma_target)
        if not 0 <= g < Fraction(r - 1, k * r):
            raise ValueError(f"gamma_target {g} outside [0, {Fraction(r - 1, k * r)})")


@dataclass
class BiasResult:
    matching: Matching
    bias: Fraction
    majority_colour: int
    switchers: list[Switcher] = field(default_factory=list)
    reached_target: bool = True
    nodes_explored: int = 0

    def to_json(self) -> dict:
        return {
            "bias": f"{self.bias.numerator}/{self.bias.denominator}",
            "bias_float": float(self.bias),
            "majority_colour": self.majority_colour,
            "reached_target": self.reached_target,
            "switchers": [s.to_json() for s in self.switchers],
            "matching": self.matching.to_json(),
            "nodes_explored": self.nodes_explored,
        }


def _profile(edges: Sequence[tuple[Edge, int]], r: int) -> list[int]:
    prof = [0] * r
    for _, c in edges:
        prof[c - 1] += 1
    return prof


def flip_switcher(
    edges: Sequence[tuple[Edge, int]], switcher: Switcher, n: int, r: int
) -> list[tuple[Edge, int]]:
    """Swap a switcher's minority state for its majority state inside a matching."""
    minority = set(switcher.minority.edges)
    if not minority <= set(edges):
        raise ValueError("matching does not contain the switcher's minority state")
    out = [e for e in edges if e not in minority] + list(switcher.majority.edges)
    before = _profile(edges, r)[switcher.colour - 1]
    after = _profile(out, r)[switcher.colour - 1]
    assert after >= before + 1
    assert sorted(v for e, _ in out for v in e) == list(range(n))
    return sorted(out)


def _greedy_matching(
    h: ColouredHypergraph, target: int, rng: np.random.Generator, restarts: int, stats: SearchStats
) -> list[int] | None:
    masks, incident = h.masks, h.incident
    for _ in range(restarts):
        remaining, chosen = target, []
        while remaining:
            stats.tick()
            v = (remaining & -remaining).bit_length() - 1
            options = [i for i in incident[v] if masks[i][0] & remaining == masks[i][0]]
            if not options:
                break
            pick = options[int(rng.integers(len(options)))]
            chosen.append(pick)
            remaining &= ~masks[pick][0]
        if not remaining:
            return chosen
    return None


def _residual_matchings(
    h: ColouredHypergraph, target: int, config: BiasSearchConfig, stats: SearchStats
) -> list[list[int]]:
    if bin(target).count("1") <= config.exhaustive_limit:
        return list(_cover(h, target, stats))
    rng = np.random.Generator(np.random.PCG64(config.seed))
    found = _greedy_matching(h, target, rng, config.restarts, stats)
    if found is None:
        raise BudgetExceeded("randomised search found no residual perfect matching", nodes=stats.nodes)
    return [found]


def bias_search(h: ColouredHypergraph, config: BiasSearchConfig | None = None) -> BiasResult:
    """Perfect matching with large colour bias via vertex-disjoint switchers.

    Collects a maximal family of vertex-disjoint switchers greedily (minimum
    order, then lexicographic support), matches the remaining vertices, and
    for the best colour picks whichever state of each switcher carries more
    edges of that colour.  If the residual vertex set has no perfect matching,
    switchers are released newest first until it does.
    """
    config = config or BiasSearchConfig()
    k, r, n = h.k, h.r, h.n
    if n % k:
        raise ValueError(f"n={n} is not divisible by k={k}")
    if not h.is_fully_coloured():
        raise ValueError("bias search needs every edge coloured")
    config.validate(k, r)
    stats = SearchStats(config.max_nodes)
    max_order = config.switcher_budget if config.switcher_budget is not None else k * k + k

    switchers: list[Switcher] = []
    remaining = set(range(n))
    while True:
        sw = find_switcher(h, max_order, stats=stats, vertices=sorted(remaining))
        if sw is None:
            break
        switchers.append(sw)
        remaining -= set(sw.support)

    while True:
        target = _mask(sorted(remaining))
        residual = _residual_matchings(h, target, config, stats) if target else [[]]
        if residual:
            break
        if not switchers:
            raise NoPerfectMatching("hypergraph has no perfect matching")
        released = switchers.pop()
        remaining |= set(released.support)

    fair = Fraction(n, k * r)
    best = None
    for idx in residual:
        base = _profile([(h.edge_list[i], h.edges[h.edge_list[i]]) for i in idx], r)
        for c in range(r):
            total = base[c] + sum(
                max(sw.majority.colour_profile[c], sw.minority.colour_profile[c]) for sw in switchers
            )
            if best is None or total > best[0]:
                best = (total, c + 1, idx)
    total, colour, idx = best

    # start from all minority states, then flip toward the chosen colour
    edges = [(h.edge_list[i], h.edges[h.edge_list[i]]) for i in idx]
    for sw in switchers:
        edges.extend(sw.minority.edges)
    for sw in switchers:
        if sw.majority.colour_profile[colour - 1] > sw.minority.colour_profile[colour - 1]:
            edges = flip_switcher(edges, sw, n, r)
    edges = sorted(edges)
    prof = _profile(edges, r)
    assert prof[colour - 1] == total
    assert sorted(v for e, _ in edges for v in e) == list(range(n))
    matching = Matching(tuple(edges), tuple(prof), perfect=True)
    majority = max(range(r), key=lambda c: (prof[c], -c)) + 1
    bias = prof[majority - 1] - fair
    return BiasResult(
        matching=matching,
        bias=bias,
        majority_colour=majority,
        switchers=switchers,
        reached_target=bias >= Fraction(config.gamma_target) * n,
        nodes_explored=stats.nodes,
    )


def exhaustive_best_bias(h: ColouredHypergraph, budget: int | None = None) -> Fraction | None:
    """Largest ``max_i count_i - n/(kr)`` over every perfect matching, or None."""
    best = None
    for m in perfect_matchings(h, budget):
        top = max(m.colour_profile)
        if best is None or top > best:
            best = top
    return None if best is None else best - Fraction(h.n, h.k * h.r)


def append_record(path: str | Path, record: dict) -> None:
    """Append one JSON-lines record (keys sorted) to ``path``."""
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(json.dumps(record, sort_keys=True) + "\n")


def timed(fn, *args, **kwargs):
    started = time.perf_counter()
    value = fn(*args, **kwargs)
    return value, round((time.perf_counter() - started) * 1000, 3)
