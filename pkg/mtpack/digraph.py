"""
Core digraph and multipartite-tournament representations.

Vertices are dense integers 0..n-1. Both types are immutable; derived
adjacency is computed once and cached on the instance.
"""

from collections.abc import Iterable
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Optional
import logging

import networkx as nx

from .exceptions import (
    DoubleArc,
    EmptyGraph,
    InputError,
    IntraPartArc,
    MissingArc,
    ObservationViolated,
    OverlappingSets,
)

log = logging.getLogger("mtpack")


@dataclass(frozen=True)
class Digraph:
    """
    Loopless digraph without duplicate arcs. Opposite arcs may coexist, so
    complete digraphs are representable.
    """

    n: int
    arcs: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.n < 0:
            raise InputError(f"Vertex count must be non-negative, got {self.n}")
        for u, v in self.arcs:
            if u == v:
                raise InputError(f"Loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InputError(f"Arc ({u}, {v}) leaves the vertex range 0..{self.n - 1}")

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> "Digraph":
        """Build a digraph from any iterable of arcs"""
        return cls(n=n, arcs=frozenset((int(u), int(v)) for u, v in arcs))

    @classmethod
    def complete(cls, n: int) -> "Digraph":
        """The complete digraph K*_n: both arcs between every pair"""
        return cls.from_arcs(n, ((u, v) for u in range(n) for v in range(n) if u != v))

    @property
    def vertices(self) -> range:
        return range(self.n)

    def to_networkx(self) -> nx.DiGraph:
        G = nx.DiGraph()
        G.add_nodes_from(self.vertices)
        G.add_edges_from(self.arcs)
        return G

    @cached_property
    def out_adj(self) -> tuple[tuple[int, ...], ...]:
        """Sorted out-neighbour lists"""
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.arcs:
            adj[u].append(v)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def in_adj(self) -> tuple[tuple[int, ...], ...]:
        """Sorted in-neighbour lists"""
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.arcs:
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def _out_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(a) for a in self.out_adj)

    def has_arc(self, u: int, v: int) -> bool:
        return v in self._out_sets[u]

    def out_neighbors(self, x: int) -> frozenset[int]:
        """N+(x)"""
        return self._out_sets[x]

    def in_neighbors(self, x: int) -> frozenset[int]:
        """N-(x)"""
        return frozenset(self.in_adj[x])

    def out_degree(self, x: int, within: Optional[Iterable[int]] = None) -> int:
        """d+(x), or d+_{V'}(x) when `within` is given"""
        if within is None:
            return len(self.out_adj[x])
        return len(self._out_sets[x].intersection(within))

    def in_degree(self, x: int, within: Optional[Iterable[int]] = None) -> int:
        """d-(x), or d-_{V'}(x) when `within` is given"""
        if within is None:
            return len(self.in_adj[x])
        return len(set(self.in_adj[x]).intersection(within))

    def sorted_arcs(self) -> list[tuple[int, int]]:
        return sorted(self.arcs)


@dataclass(frozen=True)
class MultipartiteTournament(Digraph):
    """
    Orientation of a complete multipartite graph. Build validated instances
    with `build_multipartite`; the plain constructor trusts its input.
    """

    parts: tuple[frozenset[int], ...] = ()

    @property
    def t(self) -> int:
        """Number of partite sets"""
        return len(self.parts)

    @property
    def base(self) -> Digraph:
        return Digraph(n=self.n, arcs=self.arcs)

    @cached_property
    def part_of(self) -> tuple[int, ...]:
        """Part index of every vertex"""
        owner = [-1] * self.n
        for index, part in enumerate(self.parts):
            for v in part:
                owner[v] = index
        return tuple(owner)

    def same_part(self, u: int, v: int) -> bool:
        return self.part_of[u] == self.part_of[v]

    @property
    def is_tournament(self) -> bool:
        return all(len(part) == 1 for part in self.parts)

    def induced(
        self, vertices: Iterable[int]
    ) -> tuple["MultipartiteTournament", tuple[int, ...]]:
        """
        Induced sub-instance on `vertices`, relabelled to 0..m-1 in increasing
        label order. Returns the sub-instance and the label map
        (new index -> original vertex). Parts that become empty are dropped.
        """
        labels = tuple(sorted(set(vertices)))
        index = {v: i for i, v in enumerate(labels)}
        arcs = frozenset(
            (index[u], index[v])
            for u, v in self.arcs
            if u in index and v in index
        )
        parts = []
        for part in self.parts:
            kept = frozenset(index[v] for v in part if v in index)
            if kept:
                parts.append(kept)
        return MultipartiteTournament(n=len(labels), arcs=arcs, parts=tuple(parts)), labels


def build_multipartite(
    parts: Iterable[Iterable[int]], arcs: Iterable[tuple[int, int]]
) -> MultipartiteTournament:
    """
    Validate `parts` and `arcs` as a multipartite tournament.

    Vertex pairs are scanned in lexicographic order and the first offending
    pair is reported as IntraPartArc, DoubleArc or MissingArc.
    """
    part_sets = tuple(frozenset(int(v) for v in part) for part in parts)
    if len(part_sets) < 2:
        raise InputError(f"A multipartite tournament needs at least 2 parts, got {len(part_sets)}")
    seen: set[int] = set()
    for index, part in enumerate(part_sets):
        if not part:
            raise InputError(f"Part {index} is empty")
        overlap = seen & part
        if overlap:
            raise OverlappingSets(f"Vertex {min(overlap)} appears in more than one part")
        seen |= part
    n = len(seen)
    if seen != set(range(n)):
        raise InputError(f"Parts must cover the vertices 0..{n - 1} exactly")

    arc_set = frozenset((int(u), int(v)) for u, v in arcs)
    graph = MultipartiteTournament(n=n, arcs=arc_set, parts=part_sets)
    part_of = graph.part_of
    for u, v in combinations(range(n), 2):
        forward = graph.has_arc(u, v)
        backward = graph.has_arc(v, u)
        if part_of[u] == part_of[v]:
            if forward:
                raise IntraPartArc(u, v)
            if backward:
                raise IntraPartArc(v, u)
        elif forward and backward:
            raise DoubleArc(u, v)
        elif not (forward or backward):
            raise MissingArc(u, v)
    return graph


def min_out_degree(D: Digraph) -> int:
    """delta+(D)"""
    if D.n == 0:
        raise EmptyGraph("Minimum out-degree of the empty digraph is undefined")
    return min(len(a) for a in D.out_adj)


def arc_count_between(D: Digraph, X: Iterable[int], Y: Iterable[int]) -> int:
    """a_D(X, Y): number of arcs with tail in X and head in Y"""
    xs, ys = frozenset(X), frozenset(Y)
    if xs & ys:
        raise OverlappingSets(f"Vertex sets share {sorted(xs & ys)}")
    return sum(len(D.out_neighbors(x) & ys) for x in xs)


def sinks_within(
    D: MultipartiteTournament, U: Optional[Iterable[int]] = None
) -> frozenset[int]:
    """
    Sinks of D[U] (U defaults to all vertices).

    Also checks the structure every multipartite tournament has: all sinks
    share a part and every other vertex of U reaches each sink within two
    steps inside U. A failure raises ObservationViolated.
    """
    pool = frozenset(range(D.n)) if U is None else frozenset(U)
    sinks = frozenset(x for x in pool if not D.out_neighbors(x) & pool)
    if not sinks:
        return sinks

    if len({D.part_of[s] for s in sinks}) > 1:
        raise ObservationViolated(
            f"Sinks {sorted(sinks)} span more than one part", instance=_dump(D)
        )
    for x in sorted(pool - sinks):
        step_one = D.out_neighbors(x) & pool
        reach = set(step_one)
        for w in step_one:
            reach |= D.out_neighbors(w) & pool
        missing = sinks - reach
        if missing:
            raise ObservationViolated(
                f"Vertex {x} cannot reach sink {min(missing)} within two steps",
                instance=_dump(D),
            )
    return sinks


def _dump(D: MultipartiteTournament) -> str:
    # local import: mtg depends on this module
    from .mtg import serialize_mtg

    return serialize_mtg(D)
