from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

from .exceptions import VertexNotOnCycle


@dataclass(frozen=True)
class Cycle:
    """
    Directed cycle v0 -> v1 -> ... -> v_{p-1} -> v0, stored rotated to start
    at its minimum label so that equal cycles compare equal.
    """

    verts: tuple[int, ...]

    def __post_init__(self):
        verts = tuple(int(v) for v in self.verts)
        if verts:
            start = verts.index(min(verts))
            verts = verts[start:] + verts[:start]
        object.__setattr__(self, "verts", verts)

    @classmethod
    def of(cls, *verts: int) -> "Cycle":
        return cls(tuple(verts))

    @property
    def length(self) -> int:
        """p, the number of arcs"""
        return len(self.verts)

    def __len__(self) -> int:
        return len(self.verts)

    def __iter__(self):
        return iter(self.verts)

    def __contains__(self, v: object) -> bool:
        return v in self.vertex_set

    @cached_property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.verts)

    @cached_property
    def _position(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.verts)}

    def arcs(self) -> list[tuple[int, int]]:
        p = len(self.verts)
        return [(self.verts[i], self.verts[(i + 1) % p]) for i in range(p)]

    def successor(self, v: int) -> int:
        i = self.index_of(v)
        return self.verts[(i + 1) % len(self.verts)]

    def predecessor(self, v: int) -> int:
        i = self.index_of(v)
        return self.verts[i - 1]

    def relabel(self, labels: Sequence[int]) -> "Cycle":
        """Map vertex i to labels[i]"""
        return Cycle(tuple(labels[v] for v in self.verts))

    def index_of(self, v: int) -> int:
        try:
            return self._position[v]
        except KeyError:
            raise VertexNotOnCycle(f"Vertex {v} is not on cycle {self.verts}") from None

    def __str__(self) -> str:
        return " ".join(str(v) for v in self.verts)


def path_on_cycle(C: Cycle, x: int, y: int) -> tuple[int, ...]:
    """
    C[x, y]: the vertices from x to y following the orientation of C,
    both ends included
    """
    i = C.index_of(x)
    C.index_of(y)
    p = len(C.verts)
    path = [x]
    while path[-1] != y:
        i = (i + 1) % p
        path.append(C.verts[i])
    return tuple(path)


@dataclass(frozen=True)
class CyclePacking:
    """
    A set of cycles, kept sorted so that packings with the same cycles
    compare equal. Disjointness is checked by oracle.verify_packing, not here.
    """

    cycles: tuple[Cycle, ...]

    def __post_init__(self):
        object.__setattr__(self, "cycles", tuple(sorted(self.cycles, key=lambda c: c.verts)))

    @classmethod
    def of(cls, cycles: Iterable[Cycle]) -> "CyclePacking":
        return cls(tuple(cycles))

    @property
    def k(self) -> int:
        return len(self.cycles)

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(c.length for c in self.cycles)

    @property
    def distinct_lengths(self) -> int:
        """kappa^k of this packing"""
        return len(set(self.lengths))

    @property
    def vertex_set(self) -> frozenset[int]:
        return frozenset().union(*(c.vertex_set for c in self.cycles))

    def relabel(self, labels: Sequence[int]) -> "CyclePacking":
        return CyclePacking.of(c.relabel(labels) for c in self.cycles)

    def __iter__(self):
        return iter(self.cycles)

    def __len__(self) -> int:
        return len(self.cycles)
