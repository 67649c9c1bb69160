"""Edge-coloured k-uniform hypergraphs and their text/JSON interchange format.

Text format::

    k r n
    c v1 v2 ... vk
    ...

Colour first (1..r, or 0 for an uncoloured edge), vertices ascending, lines
sorted lexicographically as integer tuples (so grouped by colour).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping

__all__ = ["ColouredHypergraph", "Edge", "UNCOLOURED"]

Edge = tuple[int, ...]
UNCOLOURED = 0


@dataclass(frozen=True, eq=False)
class ColouredHypergraph:
    n: int
    k: int
    r: int
    edges: Mapping[Edge, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.n < 0 or self.k < 1 or self.r < 1:
            raise ValueError(f"bad parameters n={self.n} k={self.k} r={self.r}")
        clean: dict[Edge, int] = {}
        for e, c in self.edges.items():
            t = tuple(sorted(e))
            if len(t) != self.k or len(set(t)) != self.k:
                raise ValueError(f"edge {e} is not a {self.k}-set")
            if t[0] < 0 or t[-1] >= self.n:
                raise ValueError(f"edge {e} has a vertex outside 0..{self.n - 1}")
            if not 0 <= c <= self.r:
                raise ValueError(f"edge {e} has colour {c} outside 0..{self.r}")
            if t in clean and clean[t] != c:
                raise ValueError(f"k-set {t} given two colours")
            clean[t] = c
        object.__setattr__(self, "edges", dict(sorted(clean.items())))

    @classmethod
    def from_edges(cls, n: int, k: int, r: int, edges: Iterable[tuple[Edge, int]]) -> "ColouredHypergraph":
        return cls(n, k, r, dict(edges))

    @classmethod
    def complete(cls, n: int, k: int, r: int = 1, colour: int = 1) -> "ColouredHypergraph":
        return cls(n, k, r, {e: colour for e in combinations(range(n), k)})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ColouredHypergraph):
            return NotImplemented
        return (self.n, self.k, self.r, self.edges) == (other.n, other.k, other.r, other.edges)

    def __hash__(self) -> int:
        return hash(self.digest)

    def __len__(self) -> int:
        return len(self.edges)

    # derived views

    @cached_property
    def edge_list(self) -> list[Edge]:
        return list(self.edges)

    @cached_property
    def masks(self) -> list[tuple[int, int]]:
        """``(vertex bitmask, colour)`` per edge, in edge order."""
        return [(sum(1 << v for v in e), c) for e, c in self.edges.items()]

    @cached_property
    def incident(self) -> list[list[int]]:
        """Edge indices through each vertex."""
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for idx, e in enumerate(self.edge_list):
            for v in e:
                inc[v].append(idx)
        return inc

    def colour_counts(self) -> list[int]:
        counts = [0] * (self.r + 1)
        for c in self.edges.values():
            counts[c] += 1
        return counts[1:]

    def neighbourhood(self, x: int) -> set[Edge]:
        """The (k-1)-sets ``Y`` with ``{x} | Y`` an edge."""
        return {tuple(v for v in self.edge_list[i] if v != x) for i in self.incident[x]}

    def colour_degree(self, x: int, colour: int) -> int:
        return sum(1 for i in self.incident[x] if self.edges[self.edge_list[i]] == colour)

    def degree(self, x: int) -> int:
        return len(self.incident[x])

    def is_fully_coloured(self) -> bool:
        return all(c != UNCOLOURED for c in self.edges.values())

    # modifications return new hypergraphs

    def recoloured(self, edge: Edge, colour: int) -> "ColouredHypergraph":
        e = tuple(sorted(edge))
        if e not in self.edges:
            raise KeyError(f"{e} is not an edge")
        new = dict(self.edges)
        new[e] = colour
        return ColouredHypergraph(self.n, self.k, self.r, new)

    def without_edges(self, edges: Iterable[Edge]) -> "ColouredHypergraph":
        drop = {tuple(sorted(e)) for e in edges}
        return ColouredHypergraph(self.n, self.k, self.r, {e: c for e, c in self.edges.items() if e not in drop})

    def with_colouring(self, colours: Iterable[int], r: int | None = None) -> "ColouredHypergraph":
        r = self.r if r is None else r
        return ColouredHypergraph(self.n, self.k, r, dict(zip(self.edge_list, colours, strict=True)))

    def induced(self, vertices: Iterable[int]) -> "ColouredHypergraph":
        """Induced sub-hypergraph, relabelled to 0..|S|-1 in ascending order."""
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        edges = {
            tuple(index[v] for v in e): c for e, c in self.edges.items() if all(v in index for v in e)
        }
        return ColouredHypergraph(len(keep), self.k, self.r, edges)

    # interchange

    def _rows(self) -> list[tuple[int, ...]]:
        return sorted((c, *e) for e, c in self.edges.items())

    def to_text(self) -> str:
        lines = [f"{self.k} {self.r} {self.n}"]
        lines.extend(" ".join(map(str, row)) for row in self._rows())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ColouredHypergraph":
        rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not rows or len(rows[0]) != 3:
            raise ValueError("missing 'k r n' header")
        k, r, n = map(int, rows[0])
        edges: dict[Edge, int] = {}
        for row in rows[1:]:
            if len(row) != k + 1:
                raise ValueError(f"edge line {' '.join(row)!r} does not have k+1={k + 1} fields")
            c, *vs = map(int, row)
            e = tuple(sorted(vs))
            if e in edges:
                raise ValueError(f"duplicate edge {e}")
            edges[e] = c
        return cls(n, k, r, edges)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "r": self.r,
            "n": self.n,
            "edges": [list(row) for row in self._rows()],
        }

    @classmethod
    def from_json(cls, data: Mapping | str) -> "ColouredHypergraph":
        if isinstance(data, str):
            data = json.loads(data)
        edges: dict[Edge, int] = {}
        for c, *vs in data["edges"]:
            e = tuple(sorted(vs))
            if e in edges:
                raise ValueError(f"duplicate edge {e}")
            edges[e] = c
        return cls(data["n"], data["k"], data["r"], edges)

    @classmethod
    def loads(cls, text: str) -> "ColouredHypergraph":
        """Parse either interchange form, sniffing JSON by its leading brace."""
        if text.lstrip().startswith("{"):
            return cls.from_json(text)
        return cls.from_text(text)

    @cached_property
    def digest(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()[:16]
