"""Brute-force oracles: perfect matchings, colour balance, switchers, membership.

Every search here is exhaustive and meant for desk-scale instances.  Vertex
sets are handled as int bitmasks; searches count the nodes they expand and
raise :class:`~biasmatch.errors.BudgetExceeded` when they run past their
budget, which is distinct from a negative answer.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Sequence

from .constructor import ExtremalSpec, build_extremal, edge_type
from .errors import BudgetExceeded
from .exactmath import ValidPair, all_valid_pairs
from .hypergraph import ColouredHypergraph, Edge

__all__ = [
    "Matching",
    "Switcher",
    "BalanceReport",
    "Membership",
    "SearchStats",
    "perfect_matchings",
    "count_perfect_matchings",
    "verify_balance",
    "find_switcher",
    "family_membership",
    "is_member",
    "disjoint_common_neighbourhood",
    "oracle_report",
    "DEFAULT_NODE_BUDGET",
]

DEFAULT_NODE_BUDGET = 20_000_000


def node_budget(requested: int | None = None) -> int:
    """Requested budget, capped by ``BIASMATCH_BUDGET`` when that is set."""
    budget = DEFAULT_NODE_BUDGET if requested is None else requested
    env = os.environ.get("BIASMATCH_BUDGET")
    if env:
        budget = min(budget, int(env))
    return budget


class SearchStats:
    __slots__ = ("nodes", "budget")

    def __init__(self, budget: int | None = None):
        self.nodes = 0
        self.budget = node_budget(budget)

    def tick(self, amount: int = 1) -> None:
        self.nodes += amount
        if self.nodes > self.budget:
            raise BudgetExceeded(f"search exceeded {self.budget} nodes", nodes=self.nodes)


@dataclass(frozen=True)
class Matching:
    edges: tuple[tuple[Edge, int], ...]
    colour_profile: tuple[int, ...]
    perfect: bool = False

    @classmethod
    def from_indices(cls, h: ColouredHypergraph, indices: Sequence[int], perfect: bool = False) -> "Matching":
        chosen = sorted((h.edge_list[i], h.edges[h.edge_list[i]]) for i in indices)
        profile = [0] * h.r
        for _, c in chosen:
            if c:
                profile[c - 1] += 1
        return cls(tuple(chosen), tuple(profile), perfect)

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(v for e, _ in self.edges for v in e)

    def to_json(self) -> dict:
        return {
            "edges": [[c, *e] for e, c in self.edges],
            "colour_profile": list(self.colour_profile),
            "perfect": self.perfect,
        }


@dataclass(frozen=True)
class Switcher:
    """Two matchings on one vertex set; ``majority`` has more ``colour`` edges."""

    majority: Matching
    minority: Matching
    colour: int

    @property
    def order(self) -> int:
        return len(self.majority.vertices)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.majority.vertices))

    def to_json(self) -> dict:
        return {
            "colour": self.colour,
            "order": self.order,
            "support": list(self.support),
            "majority": self.majority.to_json(),
            "minority": self.minority.to_json(),
        }


def _mask(vertices: Sequence[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def _cover(h: ColouredHypergraph, target: int, stats: SearchStats) -> Iterator[list[int]]:
    """Edge-index lists partitioning the vertex bitmask ``target`` exactly."""
    masks = h.masks
    incident = h.incident
    chosen: list[int] = []

    def rec(remaining: int) -> Iterator[list[int]]:
        if not remaining:
            yield list(chosen)
            return
        stats.tick()
        v = (remaining & -remaining).bit_length() - 1
        for idx in incident[v]:
            m = masks[idx][0]
            if m & remaining == m:
                chosen.append(idx)
                yield from rec(remaining & ~m)
                chosen.pop()

    yield from rec(target)


def perfect_matchings(h: ColouredHypergraph, budget: int | None = None) -> Iterator[Matching]:
    """Every perfect matching once, branching on the lowest uncovered vertex."""
    if h.n == 0 or h.n % h.k:
        return
    stats = SearchStats(budget)
    for idx in _cover(h, (1 << h.n) - 1, stats):
        yield Matching.from_indices(h, idx, perfect=True)


def count_perfect_matchings(h: ColouredHypergraph, budget: int | None = None) -> int:
    if h.n == 0 or h.n % h.k:
        return 0
    return sum(1 for _ in _cover(h, (1 << h.n) - 1, SearchStats(budget)))


@dataclass
class BalanceReport:
    matchings_checked: int
    all_balanced: bool
    expected_profile: tuple[int, ...]
    violations: list[tuple[int, ...]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "matchings_checked": self.matchings_checked,
            "all_balanced": self.all_balanced,
            "expected_profile": list(self.expected_profile),
            "violations": [list(v) for v in self.violations],
        }


def verify_balance(
    spec: ExtremalSpec,
    host: ColouredHypergraph | None = None,
    budget: int | None = None,
    max_violations: int = 20,
) -> BalanceReport:
    """Check that every perfect matching has ``alpha_i * n / k`` edges of colour ``i``.

    ``host`` defaults to the edge-maximal member of ``spec``; a sub-member on
    the same partition may be supplied instead.  ``spec.alpha`` unset means
    ``alpha_i = 1/r``.
    """
    alpha = spec.alpha or tuple(Fraction(1, spec.r) for _ in range(spec.r))
    expected = []
    for a in alpha:
        x = a * spec.n / spec.k
        if x.denominator != 1:
            raise ValueError(f"alpha {alpha} gives a non-integral colour count {x}")
        expected.append(int(x))
    h = build_extremal(spec) if host is None else host
    report = BalanceReport(0, True, tuple(expected))
    for m in perfect_matchings(h, budget):
        report.matchings_checked += 1
        if m.colour_profile != report.expected_profile:
            report.all_balanced = False
            if len(report.violations) < max_violations:
                report.violations.append(m.colour_profile)
    return report


def _switcher_on(h: ColouredHypergraph, target: int, stats: SearchStats) -> Switcher | None:
    seen: dict[tuple[int, ...], list[int]] = {}
    for idx in _cover(h, target, stats):
        m = Matching.from_indices(h, idx)
        prof = m.colour_profile
        if prof in seen:
            continue
        if seen:
            other_idx = next(iter(seen.values()))
            other = Matching.from_indices(h, other_idx)
            colour = next(c for c in range(h.r) if prof[c] != other.colour_profile[c]) + 1
            if prof[colour - 1] > other.colour_profile[colour - 1]:
                return Switcher(m, other, colour)
            return Switcher(other, m, colour)
        seen[prof] = idx
    return None


def find_switcher(
    h: ColouredHypergraph,
    max_order: int | None = None,
    budget: int | None = None,
    stats: SearchStats | None = None,
    vertices: Sequence[int] | None = None,
) -> Switcher | None:
    """Minimum-order switcher of order at most ``max_order`` (default ``k^2 + k``).

    Supports are tried by increasing size, lexicographically within a size,
    so the witness is the lexicographically least support of minimum order.
    ``vertices`` restricts the search to a vertex subset.
    """
    k = h.k
    if max_order is None:
        max_order = k * k + k
    stats = stats if stats is not None else SearchStats(budget)
    pool = sorted(range(h.n) if vertices is None else set(vertices))
    pool_mask = _mask(pool)
    # a vertex can only sit in a support if some edge inside the pool contains it
    usable = [v for v in pool if any(h.masks[i][0] & pool_mask == h.masks[i][0] for i in h.incident[v])]
    masks = h.masks
    # orders below 2k cannot hold two distinct matchings
    for order in range(2 * k, max_order + 1, k):
        for support in combinations(usable, order):
            stats.tick()
            target = _mask(support)
            if any(
                not any(masks[i][0] & target == masks[i][0] for i in h.incident[v]) for v in support
            ):
                continue
            found = _switcher_on(h, target, stats)
            if found is not None:
                return found
    return None


@dataclass(frozen=True)
class Membership:
    parts: tuple[tuple[int, ...], ...]
    pair: ValidPair

    def to_json(self) -> dict:
        return {"parts": [list(p) for p in self.parts], "pair": self.pair.to_json()}


def is_member(h: ColouredHypergraph, parts: Sequence[Sequence[int]], pair: ValidPair) -> bool:
    """Direct check of the family definition for a given partition and pair."""
    if len(parts) != h.r or pair.r != h.r or pair.k != h.k:
        return False
    part_of = [0] * h.n
    for i, part in enumerate(parts, start=1):
        for v in part:
            if part_of[v]:
                return False
            part_of[v] = i
    if not all(part_of):
        return False
    return all(c and edge_type(e, part_of, h.r) == pair.shifted(c) for e, c in h.edges.items())


def _assign(
    h: ColouredHypergraph, pair: ValidPair, order: list[int], stats: SearchStats
) -> list[int] | None:
    r = h.r
    types = [pair.shifted(c) for c in range(1, r + 1)]
    counts = [[0] * r for _ in h.edge_list]
    colours = [h.edges[e] for e in h.edge_list]
    part_of = [0] * h.n

    def rec(pos: int) -> bool:
        if pos == len(order):
            return True
        stats.tick()
        v = order[pos]
        for p in range(r):
            ok = True
            touched = []
            for idx in h.incident[v]:
                counts[idx][p] += 1
                touched.append(idx)
                if counts[idx][p] > types[colours[idx] - 1][p]:
                    ok = False
                    break
            if ok:
                part_of[v] = p + 1
                if rec(pos + 1):
                    return True
            for idx in touched:
                counts[idx][p] -= 1
        part_of[v] = 0
        return False

    return part_of if rec(0) else None


def family_membership(h: ColouredHypergraph, budget: int | None = None) -> Membership | None:
    """Find a partition and k-valid pair placing ``h`` in the extremal family.

    Pairs are tried in :func:`~biasmatch.exactmath.all_valid_pairs` order;
    for each, vertices are assigned to parts depth-first with per-edge type
    counts pruning.  Vertices on no edge go to part 1.
    """
    if h.k < 2 or h.r < 2:
        raise ValueError("need k, r >= 2")
    if not h.is_fully_coloured():
        raise ValueError("membership needs every edge coloured")
    stats = SearchStats(budget)
    covered = sorted({v for e in h.edges for v in e})
    for pair in all_valid_pairs(h.k, h.r):
        part_of = _assign(h, pair, covered, stats)
        if part_of is None:
            continue
        parts: list[list[int]] = [[] for _ in range(h.r)]
        for v in range(h.n):
            parts[(part_of[v] or 1) - 1].append(v)
        return Membership(tuple(tuple(p) for p in parts), pair)
    return None


def _max_packing(sets: list[int], stats: SearchStats) -> int:
    best = 0
    if not sets:
        return 0
    size = bin(sets[0]).count("1")

    def rec(avail: list[int], used: int, count: int) -> None:
        nonlocal best
        stats.tick()
        if count > best:
            best = count
        if not avail:
            return
        union = 0
        for s in avail:
            union |= s
        if count + bin(union).count("1") // size <= best:
            return
        v = union & -union
        with_v = [s for s in avail if s & v]
        rest = [s for s in avail if not s & v]
        for s in with_v:
            rec([t for t in rest if not t & s], used | s, count + 1)
        rec(rest, used, count)

    rec(sorted(sets), 0, 0)
    return best


def disjoint_common_neighbourhood(
    h: ColouredHypergraph, x: int, y: int, exact_limit: int = 15, budget: int | None = None
) -> int:
    """Most pairwise disjoint (k-1)-sets lying in both ``N(x)`` and ``N(y)``.

    Exact set packing when ``n <= exact_limit``; a greedy lower bound above.
    """
    if x == y:
        raise ValueError("x and y must differ")
    common = sorted(h.neighbourhood(x) & h.neighbourhood(y))
    sets = [_mask(s) for s in common]
    if h.n <= exact_limit:
        return _max_packing(sets, SearchStats(budget))
    used, count = 0, 0
    for s in sets:
        if not s & used:
            used |= s
            count += 1
    return count


def oracle_report(h: ColouredHypergraph, query: str, witness, stats_nodes: int, started: float) -> dict:
    """JSON report shape shared by the oracle subcommands."""
    if witness is not None and hasattr(witness, "to_json"):
        witness = witness.to_json()
    return {
        "instance_digest": h.digest,
        "query": query,
        "witness": witness,
        "nodes_explored": stats_nodes,
        "wall_time_ms": round((time.perf_counter() - started) * 1000, 3),
    }
