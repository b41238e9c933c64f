"""
Cycle constructions shared by the packing algorithms: triangle search,
merging two triangles into a longer cycle, splitting three cyclically
dominating triangles into a 4-cycle and a triangle, and rerouting a
triangle through a pool of free vertices.

All searches scan vertices in increasing label order, so the first
witness found is the same on every run.
"""

from collections import deque
from collections.abc import Iterable, Iterator
from itertools import permutations
from typing import Optional
import logging

from .cycle import Cycle, path_on_cycle
from .digraph import Digraph, MultipartiteTournament, arc_count_between
from .exceptions import PreconditionViolated

log = logging.getLogger("mtpack")


def triangles(D: Digraph, forbidden: Iterable[int] = ()) -> Iterator[Cycle]:
    """All triangles of D - forbidden, in lexicographic canonical order"""
    banned = frozenset(forbidden)
    for a in D.vertices:
        if a in banned:
            continue
        back = D.in_neighbors(a)
        for b in D.out_adj[a]:
            if b <= a or b in banned:
                continue
            for c in D.out_adj[b]:
                if c <= a or c == b or c in banned:
                    continue
                if c in back:
                    yield Cycle((a, b, c))


def find_triangle(D: Digraph, forbidden: Iterable[int] = ()) -> Optional[Cycle]:
    """First triangle of D avoiding `forbidden`, or None if there is none"""
    return next(triangles(D, forbidden), None)


def merge_triangle_pair(D: Digraph, C: Cycle, C_prime: Cycle) -> Cycle:
    """
    Two disjoint triangles with arcs in both directions between them span a
    cycle of length at least 4.

    For a back arc y' -> y (y' in B, y in A) and a forward arc x -> x'
    avoiding both, the cycle is x x' B[x', y'] y' y A[y, x]. Both roles of
    (A, B) are tried.
    """
    if C.length != 3 or C_prime.length != 3:
        raise PreconditionViolated("merge_triangle_pair needs two triangles")
    if C.vertex_set & C_prime.vertex_set:
        raise PreconditionViolated("Triangles share a vertex")
    forward = arc_count_between(D, C.vertex_set, C_prime.vertex_set)
    backward = arc_count_between(D, C_prime.vertex_set, C.vertex_set)
    if forward == 0 or backward == 0:
        raise PreconditionViolated(
            f"Arcs go one way only between {C.verts} and {C_prime.verts}"
        )

    orders = [(C, C_prime), (C_prime, C)] if forward >= backward else [(C_prime, C), (C, C_prime)]
    for A, B in orders:
        for y_prime in B.verts:
            for y in A.verts:
                if not D.has_arc(y_prime, y):
                    continue
                for x in A.verts:
                    if x == y:
                        continue
                    for x_prime in B.verts:
                        if x_prime == y_prime or not D.has_arc(x, x_prime):
                            continue
                        verts = path_on_cycle(B, x_prime, y_prime) + path_on_cycle(A, y, x)
                        log.debug(f"Merged {A.verts} and {B.verts} into {verts}")
                        return Cycle(verts)
    raise PreconditionViolated(
        f"Fewer than six arcs join {C.verts} and {C_prime.verts}; no merge exists"
    )


def split_triangle_triple(
    D: MultipartiteTournament, C1: Cycle, C2: Cycle, C3: Cycle
) -> tuple[Cycle, Cycle]:
    """
    Three disjoint triangles with no arc from C_{i+1} back to C_i (indices
    mod 3) yield a 4-cycle x1 y1 z2 y3 and a triangle z1 y2 x3, where x, y, z
    name the vertices of each triangle by part and x1 -> y1 on C1.
    """
    triple = (C1, C2, C3)
    if any(c.length != 3 for c in triple):
        raise PreconditionViolated("split_triangle_triple needs three triangles")
    sets = [c.vertex_set for c in triple]
    if sets[0] & sets[1] or sets[1] & sets[2] or sets[0] & sets[2]:
        raise PreconditionViolated("Triangles are not vertex-disjoint")
    for i in range(3):
        if arc_count_between(D, sets[(i + 1) % 3], sets[i]) > 0:
            raise PreconditionViolated(
                f"Arc from C{(i + 1) % 3 + 1} back to C{i + 1}"
            )

    by_part = []
    for c in triple:
        owner = {D.part_of[v]: v for v in c.verts}
        if len(owner) != 3:
            raise PreconditionViolated(f"Triangle {c.verts} repeats a part")
        by_part.append(owner)
    part_ids = sorted(by_part[0])
    if any(sorted(owner) != part_ids for owner in by_part[1:]):
        raise PreconditionViolated("Triangles do not use the same three parts")

    for px, py, pz in permutations(part_ids):
        x = [owner[px] for owner in by_part]
        y = [owner[py] for owner in by_part]
        z = [owner[pz] for owner in by_part]
        if not D.has_arc(x[0], y[0]):
            continue
        long_cycle = (x[0], y[0], z[1], y[2])
        short_cycle = (z[0], y[1], x[2])
        if _closes(D, long_cycle) and _closes(D, short_cycle):
            return Cycle(long_cycle), Cycle(short_cycle)
    raise PreconditionViolated("No part alignment closes both cycles")


def _closes(D: Digraph, verts: tuple[int, ...]) -> bool:
    return all(D.has_arc(verts[i], verts[(i + 1) % len(verts)]) for i in range(len(verts)))


def shortest_path_within(
    D: Digraph, sources: Iterable[int], targets: Iterable[int], pool: Iterable[int]
) -> Optional[tuple[int, ...]]:
    """
    Shortest path inside D[pool] from some source to some target (BFS, lowest
    labels first). A source that is also a target is a one-vertex path.
    """
    allowed = frozenset(pool)
    goal = frozenset(targets) & allowed
    starts = sorted(frozenset(sources) & allowed)
    if not goal or not starts:
        return None
    parent: dict[int, Optional[int]] = {s: None for s in starts}
    queue = deque(starts)
    while queue:
        v = queue.popleft()
        if v in goal:
            path = [v]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return tuple(reversed(path))
        for w in D.out_adj[v]:
            if w in allowed and w not in parent:
                parent[w] = v
                queue.append(w)
    return None


def detour_through(D: Digraph, C: Cycle, pool: Iterable[int]) -> Optional[Cycle]:
    """
    Replace the triangle C by a longer cycle that leaves C at v, runs along a
    shortest path P inside `pool` and re-enters C at w:

        v P w C[w, v]

    With w the successor of v any P works (length >= 4). With w the
    predecessor of v, P needs two or more vertices.
    """
    free = frozenset(pool) - C.vertex_set
    for v in C.verts:
        exits = D.out_neighbors(v) & free
        if not exits:
            continue
        succ, pred = C.successor(v), C.predecessor(v)
        path = shortest_path_within(D, exits, D.in_neighbors(succ) & free, free)
        if path is not None:
            return Cycle((v,) + path + path_on_cycle(C, succ, v)[:-1])
        entries = D.in_neighbors(pred) & free
        for u in sorted(exits):
            # the path must not end where it starts
            path = shortest_path_within(D, (u,), entries - {u}, free)
            if path is not None:
                return Cycle((v,) + path + (pred,))
    return None


def shortest_cycle_through(D: Digraph, x: int, pool: Iterable[int]) -> Optional[Cycle]:
    """Shortest cycle through x inside D[pool]"""
    allowed = frozenset(pool) | {x}
    path = shortest_path_within(D, D.out_neighbors(x), D.in_neighbors(x), allowed - {x})
    if path is None:
        return None
    return Cycle((x,) + path)


def long_cycle_min_outdegree_two(D: Digraph, pool: Iterable[int]) -> Optional[Cycle]:
    """
    In D[pool] with no 2-cycles and every out-degree at least 2, grow a
    maximal path greedily; the earliest out-neighbour of its last vertex on
    the path closes a cycle of length at least 4.
    """
    allowed = frozenset(pool)
    if not allowed:
        return None
    start = min(allowed)
    path = [start]
    on_path = {start: 0}
    while True:
        last = path[-1]
        nxt = [w for w in D.out_adj[last] if w in allowed and w not in on_path]
        if not nxt:
            break
        on_path[nxt[0]] = len(path)
        path.append(nxt[0])
    last = path[-1]
    back = [on_path[w] for w in D.out_adj[last] if w in on_path]
    if not back:
        return None
    cycle = path[min(back):]
    return Cycle(tuple(cycle)) if len(cycle) >= 4 else None
