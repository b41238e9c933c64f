"""
Constructive cycle packers.

pack_3partite and pack_multipartite_3k2 peel off triangles while the
out-degree bound allows it and finish with the triangle-free lemma, which
reduces to 4-cycles in the bipartite terminal component. The 4-cycle and
triangle packers themselves search the lexicographically ordered candidate
list; the first descent of that search is the greedy pass.
"""

from collections.abc import Callable, Sequence
from itertools import combinations
from typing import Optional
import logging

from .condensation import terminal_component
from .config import get_settings
from .cycle import Cycle, CyclePacking
from .digraph import (
    Digraph,
    MultipartiteTournament,
    arc_count_between,
    build_multipartite,
    min_out_degree,
)
from .exceptions import (
    HypothesisViolated,
    InternalConsistencyError,
    InternalExhaustion,
    InvalidSpec,
    NonBipartiteTerminal,
    NotAnExtension,
    NotTriangleFree,
)
from .lemmas import find_triangle, triangles
from .mtg import serialize_mtg
from .oracle import verify_packing

log = logging.getLogger("mtpack")


class _NodeCapHit(Exception):
    pass


def _check_k(k: int) -> None:
    if k < 1:
        raise InvalidSpec(f"k must be a positive integer, got {k}")


def require_min_outdegree(D: Digraph, bound: int, rule: str) -> int:
    """Raise HypothesisViolated unless delta+(D) >= bound; returns delta+(D)"""
    delta = min_out_degree(D)
    if delta < bound:
        raise HypothesisViolated(f"delta+ = {delta} but {rule} needs at least {bound}")
    return delta


def checked_packing(D: Digraph, packing: CyclePacking, k: int, algorithm: str) -> CyclePacking:
    """Return `packing` if it is k valid disjoint cycles of D, else raise with the instance attached"""
    verdict = verify_packing(D, packing)
    if not verdict.ok or packing.k != k:
        instance = serialize_mtg(D)
        log.critical(
            f"{algorithm} produced an invalid packing ({verdict.violation or 'wrong size'}):\n{instance}"
        )
        raise InternalConsistencyError(
            f"{algorithm} returned an invalid packing: {verdict.violation or f'{packing.k} != {k} cycles'}",
            instance=instance,
        )
    return packing


def four_cycles(D: Digraph) -> list[Cycle]:
    """Every 4-cycle of D, in lexicographic canonical order"""
    found = []
    for a in D.vertices:
        back = D.in_neighbors(a)
        for b in D.out_adj[a]:
            if b < a:
                continue
            for c in D.out_adj[b]:
                if c <= a:
                    continue
                for d in D.out_adj[c]:
                    if d > a and d != b and d in back:
                        found.append(Cycle((a, b, c, d)))
    return found


def _search(candidates: Sequence[Cycle], k: int, max_nodes: int) -> Optional[list[Cycle]]:
    """
    Depth-first search for k pairwise disjoint candidates, lowest index
    first. Each placed cycle counts as one node.
    """
    chosen: list[Cycle] = []
    used: set[int] = set()
    nodes = 0

    def extend(start: int) -> bool:
        nonlocal nodes
        if len(chosen) == k:
            return True
        for i in range(start, len(candidates)):
            if len(candidates) - i < k - len(chosen):
                return False
            cycle = candidates[i]
            if used & cycle.vertex_set:
                continue
            nodes += 1
            if nodes > max_nodes:
                raise _NodeCapHit
            chosen.append(cycle)
            used.update(cycle.vertex_set)
            if extend(i + 1):
                return True
            chosen.pop()
            used.difference_update(cycle.vertex_set)
        return False

    found = extend(0)
    log.debug(f"Packing search visited {nodes} nodes over {len(candidates)} candidates")
    return chosen if found else None


def _pack_from_candidates(
    D: Digraph, candidates: list[Cycle], k: int, what: str
) -> CyclePacking:
    try:
        chosen = _search(candidates, k, get_settings().search_max_nodes)
    except _NodeCapHit:
        chosen = None
        reason = f"node cap {get_settings().search_max_nodes} reached"
    else:
        reason = "search space exhausted"
    if chosen is None:
        instance = serialize_mtg(D)
        log.critical(f"No {k} disjoint {what} found ({reason}); instance follows:\n{instance}")
        raise InternalExhaustion(f"No {k} disjoint {what} found: {reason}", instance=instance)
    return CyclePacking.of(chosen)


def pack_bipartite_4cycles(D: MultipartiteTournament, k: int) -> CyclePacking:
    """k vertex-disjoint 4-cycles in a bipartite tournament with delta+ >= 2k-1"""
    _check_k(k)
    if D.t != 2:
        raise HypothesisViolated(f"pack_bipartite_4cycles needs a bipartite tournament, got t = {D.t}")
    require_min_outdegree(D, 2 * k - 1, "the bipartite 4-cycle bound")
    packing = _pack_from_candidates(D, four_cycles(D), k, "4-cycles")
    return checked_packing(D, packing, k, "pack_bipartite_4cycles")


def pack_tournament_triangles(
    T: Digraph, k: int, accept: Optional[Callable[[Cycle], bool]] = None
) -> CyclePacking:
    """
    k vertex-disjoint triangles in a tournament with delta+ >= 2k-1.
    `accept` restricts the candidate triangles.
    """
    _check_k(k)
    if isinstance(T, MultipartiteTournament) and not T.is_tournament:
        raise HypothesisViolated("pack_tournament_triangles needs a tournament (singleton parts)")
    require_min_outdegree(T, 2 * k - 1, "the tournament triangle bound")
    candidates = [c for c in triangles(T) if accept is None or accept(c)]
    packing = _pack_from_candidates(T, candidates, k, "triangles")
    return checked_packing(T, packing, k, "pack_tournament_triangles")


def pack_triangle_free(D: MultipartiteTournament, k: int) -> CyclePacking:
    """
    k disjoint cycles in a triangle-free multipartite tournament with
    delta+ >= 2k-1, all of them 4-cycles of the terminal strong component.

    The terminal component H has no outgoing arcs, so delta+(H) >= delta+(D).
    A strong component with three or more parts always holds a triangle, so
    H must be bipartite.
    """
    _check_k(k)
    require_min_outdegree(D, 2 * k - 1, "the triangle-free lemma")
    triangle = find_triangle(D)
    if triangle is not None:
        raise NotTriangleFree(f"Found triangle {triangle.verts}")

    H, labels = D.induced(terminal_component(D))
    if H.t != 2:
        instance = serialize_mtg(D)
        log.critical(
            f"Terminal component of a triangle-free instance has {H.t} parts; instance follows:\n{instance}"
        )
        raise NonBipartiteTerminal(
            f"Terminal component {list(labels)} spans {H.t} parts", instance=instance
        )
    log.debug(f"Packing 4-cycles in terminal component of {H.n} vertices")
    packing = pack_bipartite_4cycles(H, k).relabel(labels)
    return checked_packing(D, packing, k, "pack_triangle_free")


def _peel_triangles(
    D: MultipartiteTournament, k: int, max_drop: int, bound: Callable[[int], int]
) -> tuple[list[Cycle], frozenset[int]]:
    """
    Take lexicographically first triangles while cycles are still needed.
    Removing one triangle lowers every out-degree by at most `max_drop`, so
    the bound for the remaining count still holds; a failure of that
    arithmetic is an internal error.
    """
    cycles: list[Cycle] = []
    removed: set[int] = set()
    while len(cycles) < k:
        triangle = find_triangle(D, removed)
        if triangle is None:
            break
        cycles.append(triangle)
        removed |= triangle.vertex_set
        remaining = k - len(cycles)
        if remaining == 0:
            break
        rest = [v for v in D.vertices if v not in removed]
        delta = min(D.out_degree(v, rest) for v in rest) if rest else 0
        if delta < bound(remaining):
            instance = serialize_mtg(D)
            log.critical(
                f"Removing {triangle.verts} dropped delta+ to {delta}, "
                f"below {bound(remaining)}; instance follows:\n{instance}"
            )
            raise InternalConsistencyError(
                f"Out-degree dropped by more than {max_drop} after removing a triangle",
                instance=instance,
            )
    log.debug(f"Peeled {len(cycles)} triangles, {k - len(cycles)} cycles left")
    return cycles, frozenset(removed)


def _finish_triangle_free(
    D: MultipartiteTournament, k: int, cycles: list[Cycle], removed: frozenset[int]
) -> CyclePacking:
    remaining = k - len(cycles)
    if remaining:
        sub, labels = D.induced(v for v in D.vertices if v not in removed)
        cycles = cycles + list(pack_triangle_free(sub, remaining).relabel(labels))
    return CyclePacking.of(cycles)


def pack_3partite(D: MultipartiteTournament, k: int) -> CyclePacking:
    """
    k vertex-disjoint cycles in a multipartite tournament with at most three
    parts and delta+ >= 2k-1
    """
    _check_k(k)
    if D.t > 3:
        raise HypothesisViolated(f"pack_3partite needs at most 3 parts, got {D.t}")
    require_min_outdegree(D, 2 * k - 1, "the 3-partite theorem")
    cycles, removed = _peel_triangles(D, k, 2, lambda r: 2 * r - 1)
    packing = _finish_triangle_free(D, k, cycles, removed)
    return checked_packing(D, packing, k, "pack_3partite")


def pack_multipartite_3k2(D: MultipartiteTournament, k: int) -> CyclePacking:
    """k vertex-disjoint cycles in any multipartite tournament with delta+ >= 3k-2"""
    _check_k(k)
    require_min_outdegree(D, 3 * k - 2, "the 3k-2 bound")
    cycles, removed = _peel_triangles(D, k, 3, lambda r: 3 * r - 2)
    packing = _finish_triangle_free(D, k, cycles, removed)
    return checked_packing(D, packing, k, "pack_multipartite_3k2")


def is_extension(D: MultipartiteTournament) -> bool:
    """True when every pair of parts is joined by arcs in one direction only"""
    for P, Q in combinations(D.parts, 2):
        if arc_count_between(D, P, Q) and arc_count_between(D, Q, P):
            return False
    return True


def auxiliary_tournament(D: MultipartiteTournament) -> MultipartiteTournament:
    """D with every part replaced by the transitive tournament lower label -> higher label"""
    arcs = set(D.arcs)
    for part in D.parts:
        arcs.update(combinations(sorted(part), 2))
    return build_multipartite([[v] for v in D.vertices], arcs)


def pack_extended(D: MultipartiteTournament, k: int) -> CyclePacking:
    """
    k vertex-disjoint triangles in an extended tournament with delta+ >= 2k-1,
    found as triangles of the auxiliary tournament that use arcs of D only
    """
    _check_k(k)
    if not is_extension(D):
        raise NotAnExtension("Some pair of parts has arcs in both directions")
    require_min_outdegree(D, 2 * k - 1, "the extended tournament bound")
    aux = auxiliary_tournament(D)
    packing = pack_tournament_triangles(
        aux, k, accept=lambda c: all(D.has_arc(u, v) for u, v in c.arcs())
    )
    return checked_packing(D, packing, k, "pack_extended")


PACKERS: dict[str, Callable[[MultipartiteTournament, int], CyclePacking]] = {
    "3partite": pack_3partite,
    "triangle-free": pack_triangle_free,
    "bipartite": pack_bipartite_4cycles,
    "3k2": pack_multipartite_3k2,
    "tournament": pack_tournament_triangles,
    "extended": pack_extended,
}


def choose_algorithm(D: MultipartiteTournament) -> str:
    """Pick the packer whose hypothesis class D belongs to"""
    if D.is_tournament:
        return "tournament"
    if D.t == 2:
        return "bipartite"
    if D.t == 3:
        return "3partite"
    if find_triangle(D) is None:
        return "triangle-free"
    return "3k2"


def pack(D: MultipartiteTournament, k: int, algorithm: str = "auto") -> tuple[str, CyclePacking]:
    """Run the named packer, or the one `choose_algorithm` picks for "auto"."""
    name = choose_algorithm(D) if algorithm == "auto" else algorithm
    if name not in PACKERS:
        raise InvalidSpec(f"Unknown algorithm {algorithm!r}; choose from {', '.join(PACKERS)}")
    log.info(f"Packing {k} cycles with {name} on {D.n} vertices, {D.t} parts")
    return name, PACKERS[name](D, k)
