"""
Two cycle lengths among k disjoint cycles of a 3-partite tournament.

Starting from the packer's k cycles, every construction below either
returns a packing with two lengths or rules out one configuration of an
all-triangle packing. When all of them fail the instance would contradict
the diversity theorem, so InternalExhaustion is raised with the instance.
"""

from collections.abc import Sequence
from dataclasses import dataclass
from itertools import combinations
import logging

from .condensation import terminal_component
from .cycle import Cycle, CyclePacking
from .digraph import MultipartiteTournament, arc_count_between, sinks_within
from .exceptions import HypothesisViolated, InternalExhaustion, TriangleFree
from .lemmas import (
    detour_through,
    find_triangle,
    long_cycle_min_outdegree_two,
    merge_triangle_pair,
    shortest_cycle_through,
    split_triangle_triple,
)
from .mtg import serialize_mtg
from .packing import checked_packing, pack_3partite, require_min_outdegree

log = logging.getLogger("mtpack")


@dataclass(frozen=True)
class DiversePacking:
    """
    A packing with at least two cycle lengths. `witness` indexes two cycles
    of `packing.cycles` with different lengths; `branch` names the
    construction that produced it.
    """

    packing: CyclePacking
    witness: tuple[int, int]
    branch: str

    @classmethod
    def of(cls, packing: CyclePacking, branch: str) -> "DiversePacking":
        lengths = packing.lengths
        for i, j in combinations(range(len(lengths)), 2):
            if lengths[i] != lengths[j]:
                return cls(packing, (i, j), branch)
        raise ValueError(f"Packing with lengths {lengths} has a single length")


def _exhausted(D: MultipartiteTournament, reason: str) -> InternalExhaustion:
    instance = serialize_mtg(D)
    log.critical(f"diversify_3partite failed: {reason}; instance follows:\n{instance}")
    return InternalExhaustion(f"No two-length packing found: {reason}", instance=instance)


def _finish(
    D: MultipartiteTournament, k: int, cycles: Sequence[Cycle], branch: str
) -> DiversePacking:
    packing = checked_packing(D, CyclePacking.of(cycles), k, "diversify_3partite")
    if packing.distinct_lengths < 2:
        raise _exhausted(D, f"{branch} left a single cycle length")
    log.debug(f"Diverse packing from {branch}: lengths {packing.lengths}")
    return DiversePacking.of(packing, branch)


def _swap(cycles: Sequence[Cycle], drop: Sequence[int], add: Sequence[Cycle]) -> list[Cycle]:
    return [c for i, c in enumerate(cycles) if i not in drop] + list(add)


def diversify_3partite(D: MultipartiteTournament, k: int) -> DiversePacking:
    """
    k vertex-disjoint cycles of at least two lengths in a 3-partite
    tournament with delta+ >= 2k-1 that contains a triangle.
    """
    if k < 2:
        raise HypothesisViolated(f"Two cycle lengths need k >= 2, got k = {k}")
    if D.t > 3:
        raise HypothesisViolated(f"diversify_3partite needs at most 3 parts, got {D.t}")
    require_min_outdegree(D, 2 * k - 1, "the diversity theorem")
    if find_triangle(D) is None:
        raise TriangleFree("The instance has no triangle")

    base = pack_3partite(D, k)
    if base.distinct_lengths >= 2:
        return DiversePacking.of(base, "packing")
    triangles = list(base)

    free = frozenset(D.vertices) - base.vertex_set
    for i, C in enumerate(triangles):
        long_cycle = detour_through(D, C, free)
        if long_cycle is not None:
            return _finish(D, k, _swap(triangles, [i], [long_cycle]), "detour")

    if sinks_within(D, free):
        raise _exhausted(D, "free vertices contain a sink but no triangle detours through them")
    if not free:
        raise _exhausted(D, "no vertices outside the triangles")

    # terminal component of the free vertices
    sub, labels = D.induced(free)
    terminal = frozenset(labels[v] for v in terminal_component(sub))
    degrees = {v: D.out_degree(v, terminal) for v in sorted(terminal)}
    if min(degrees.values()) >= 2:
        long_cycle = long_cycle_min_outdegree_two(D, terminal)
        if long_cycle is None:
            raise _exhausted(D, "terminal component with out-degree 2 has no long cycle")
        return _finish(D, k, _swap(triangles, [0], [long_cycle]), "terminal-long-cycle")

    x = min(degrees, key=lambda v: (degrees[v], v))
    extra = shortest_cycle_through(D, x, terminal)
    if extra is None:
        raise _exhausted(D, f"no cycle through {x} in the terminal component")
    if extra.length != 3:
        return _finish(D, k, _swap(triangles, [0], [extra]), "terminal-cycle")

    family = triangles + [extra]
    sets = [c.vertex_set for c in family]

    def dominates(a: int, b: int) -> bool:
        return arc_count_between(D, sets[a], sets[b]) > 0

    for i, j in combinations(range(len(family)), 2):
        if dominates(i, j) and dominates(j, i):
            merged = merge_triangle_pair(D, family[i], family[j])
            return _finish(D, k, _swap(family, [i, j], [merged]), "merge")

    for i, j, h in combinations(range(len(family)), 3):
        for a, b, c in ((i, j, h), (i, h, j)):
            if dominates(a, b) and dominates(b, c) and dominates(c, a):
                long_cycle, short_cycle = split_triangle_triple(D, family[a], family[b], family[c])
                return _finish(
                    D, k, _swap(family, [a, b, c], [long_cycle, short_cycle]), "split"
                )

    raise _exhausted(D, "triangles are transitively ordered and no detour exists")
