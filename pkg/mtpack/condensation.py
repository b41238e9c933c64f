"""
Strong components and their acyclic ordering.

Components come from networkx's condensation. They are ordered
topologically with ties broken by the smallest vertex label, so the
ordering is the same on every run.
"""

from dataclasses import dataclass
from functools import cached_property
import logging

import networkx as nx

from .digraph import Digraph, MultipartiteTournament
from .exceptions import EmptyGraph

log = logging.getLogger("mtpack")


@dataclass(frozen=True)
class CondensationDAG:
    """
    Strong components listed in an acyclic order: every arc between two
    components goes from an earlier to a later one.
    """

    components: tuple[frozenset[int], ...]

    @property
    def order(self) -> range:
        return range(len(self.components))

    @property
    def terminal_index(self) -> int:
        if not self.components:
            raise EmptyGraph("The empty digraph has no terminal component")
        return len(self.components) - 1

    @cached_property
    def component_of(self) -> dict[int, int]:
        return {v: i for i, comp in enumerate(self.components) for v in comp}

    @property
    def terminal(self) -> frozenset[int]:
        return self.components[self.terminal_index]

    def __len__(self) -> int:
        return len(self.components)


def condensation(D: Digraph) -> CondensationDAG:
    """
    Strong components of D in an acyclic order, ties broken by minimum
    vertex label. The last component has no outgoing arcs.
    """
    C = nx.condensation(D.to_networkx())
    smallest = {node: min(members) for node, members in C.nodes(data="members")}
    ordered = nx.lexicographical_topological_sort(C, key=smallest.__getitem__)
    components = tuple(frozenset(C.nodes[node]["members"]) for node in ordered)
    log.debug(f"{len(components)} strong components on {D.n} vertices")
    return CondensationDAG(components=components)


def is_strong(D: Digraph) -> bool:
    return D.n > 0 and len(condensation(D)) == 1


def terminal_component(D: MultipartiteTournament) -> frozenset[int]:
    """
    The terminal strong component of D. When D has a vertex of out-degree 0
    several singleton components may lack outgoing arcs; the last one in the
    ordering is returned. The empty digraph raises EmptyGraph.
    """
    return condensation(D).terminal
