"""
Exponential-time ground truth for the constructive packers.

Cycles are enumerated from each start vertex s through vertices larger than
s only, so every cycle is produced once, already in canonical rotation. A
reverse breadth-first search gives each vertex's distance back to s, which
prunes paths that cannot close within the length cap.
"""

from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass, field
from typing import Literal, Optional
import logging

import networkx as nx
from pydantic import BaseModel, Field, ValidationError

from .condensation import is_strong
from .config import get_settings
from .cycle import Cycle, CyclePacking
from .digraph import Digraph, MultipartiteTournament
from .exceptions import BudgetExceeded, HypothesisViolated, InvalidSpec, NotStrong

log = logging.getLogger("mtpack")


def _default_nodes() -> int:
    return get_settings().oracle_max_nodes


class OracleBudget(BaseModel):
    """
    Caps for one oracle call. `max_cycle_len` of None means n, which makes
    every answer unconditional.
    """

    max_cycle_len: Optional[int] = Field(default=None, ge=2)
    max_nodes: int = Field(default_factory=_default_nodes, ge=1)
    on_exceed: Literal["raise", "warn"] = "raise"

    @classmethod
    def make(cls, **kwargs) -> "OracleBudget":
        try:
            return cls(**kwargs)
        except ValidationError as e:
            raise InvalidSpec(str(e)) from e

    def cap(self, D: Digraph) -> int:
        if self.max_cycle_len is None:
            return D.n
        return min(self.max_cycle_len, D.n)

    def is_unconditional(self, D: Digraph) -> bool:
        return self.cap(D) >= D.n


class _Truncated(Exception):
    pass


class _NodeCounter:
    def __init__(self, budget: OracleBudget, what: str):
        self.budget = budget
        self.what = what
        self.nodes = 0

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget.max_nodes:
            message = f"{self.what} exceeded {self.budget.max_nodes} search nodes"
            if self.budget.on_exceed == "raise":
                raise BudgetExceeded(message)
            log.warning(f"{message}; result is truncated")
            raise _Truncated


@dataclass(frozen=True)
class PackingVerdict:
    ok: bool
    violation: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


def verify_packing(D: Digraph, P: Iterable[Cycle]) -> PackingVerdict:
    """
    Check that every cycle uses arcs of D and distinct vertices, and that
    the cycles are pairwise vertex-disjoint. Reports the first violation.
    """
    owner: dict[int, int] = {}
    for index, cycle in enumerate(P):
        if cycle.length < 2:
            return PackingVerdict(False, f"cycle {index} has fewer than 2 vertices")
        seen: set[int] = set()
        for v in cycle.verts:
            if not 0 <= v < D.n:
                return PackingVerdict(False, f"vertex {v} is not in the digraph")
            if v in seen:
                return PackingVerdict(False, f"vertex {v} repeats on cycle {index}")
            seen.add(v)
            if v in owner:
                return PackingVerdict(False, f"vertex {v} is on cycles {owner[v]} and {index}")
            owner[v] = index
        for u, v in cycle.arcs():
            if not D.has_arc(u, v):
                return PackingVerdict(False, f"arc ({u}, {v}) of cycle {index} is missing")
    return PackingVerdict(True)


def _distances_to(D: Digraph, s: int) -> dict[int, int]:
    """Arcs needed to reach s from each vertex >= s, inside vertices >= s"""
    dist = {s: 0}
    queue = deque([s])
    while queue:
        x = queue.popleft()
        for u in D.in_adj[x]:
            if u > s and u not in dist:
                dist[u] = dist[x] + 1
                queue.append(u)
    return dist


def _cycles_from(
    D: Digraph, s: int, cap: int, chordless: bool, counter: _NodeCounter, out: list[Cycle]
) -> None:
    dist = _distances_to(D, s)
    path = [s]
    on_path = {s}

    def walk(v: int) -> None:
        for w in D.out_adj[v]:
            if w == s:
                if len(path) >= 2:
                    out.append(Cycle(tuple(path)))
                continue
            if w < s or w in on_path or w not in dist or len(path) + dist[w] > cap:
                continue
            if chordless and (
                any(D.has_arc(path[i], w) for i in range(len(path) - 1))
                or any(D.has_arc(w, path[i]) for i in range(1, len(path)))
            ):
                continue
            counter.tick()
            path.append(w)
            on_path.add(w)
            if chordless and D.has_arc(w, s):
                # any longer extension would keep w -> s as a chord
                out.append(Cycle(tuple(path)))
            else:
                walk(w)
            path.pop()
            on_path.discard(w)

    walk(s)


def enumerate_cycles(
    D: Digraph, budget: Optional[OracleBudget] = None, chordless: bool = False
) -> list[Cycle]:
    """
    All simple cycles of length <= budget.cap(D), sorted by vertex tuple.
    With `chordless` only cycles without chords are listed.
    """
    budget = budget or OracleBudget()
    cap = budget.cap(D)
    counter = _NodeCounter(budget, "cycle enumeration")
    found: list[Cycle] = []
    try:
        for s in D.vertices:
            _cycles_from(D, s, cap, chordless, counter, found)
    except _Truncated:
        pass
    log.debug(f"Enumerated {len(found)} cycles (cap {cap}, {counter.nodes} nodes)")
    return sorted(found, key=lambda c: c.verts)


def reference_cycles(D: Digraph, max_cycle_len: Optional[int] = None) -> list[Cycle]:
    """Independent enumeration through networkx's bounded simple_cycles"""
    G = D.to_networkx()
    bound = D.n if max_cycle_len is None else max_cycle_len
    return sorted((Cycle(tuple(c)) for c in nx.simple_cycles(G, length_bound=bound)), key=lambda c: c.verts)


def _masks(cycles: list[Cycle]) -> list[int]:
    return [sum(1 << v for v in c.verts) for c in cycles]


def exists_k_disjoint(
    D: Digraph, k: int, budget: Optional[OracleBudget] = None
) -> Optional[CyclePacking]:
    """
    k vertex-disjoint cycles of D, or None when there are none.

    Every cycle contains a chordless cycle on a subset of its vertices, so
    searching chordless cycles only loses nothing. With a cap below n the
    None answer only covers cycles within the cap.
    """
    if k < 1:
        raise InvalidSpec(f"k must be a positive integer, got {k}")
    budget = budget or OracleBudget()
    cycles = enumerate_cycles(D, budget, chordless=True)
    masks = _masks(cycles)
    counter = _NodeCounter(budget, "disjoint packing search")
    chosen: list[int] = []

    def extend(start: int, used: int) -> bool:
        if len(chosen) == k:
            return True
        for i in range(start, len(cycles)):
            if len(cycles) - i < k - len(chosen):
                return False
            if masks[i] & used:
                continue
            counter.tick()
            chosen.append(i)
            if extend(i + 1, used | masks[i]):
                return True
            chosen.pop()
        return False

    try:
        found = extend(0, 0)
    except _Truncated:
        found = False
    log.debug(f"exists_k_disjoint(k={k}) searched {counter.nodes} nodes over {len(cycles)} chordless cycles")
    return CyclePacking.of(cycles[i] for i in chosen) if found else None


@dataclass(frozen=True)
class KappaResult:
    """kappa^k with a packing that attains it; value 0 and no witness when no k-packing exists"""

    value: int
    witness: Optional[CyclePacking] = None


def kappa_exact(D: Digraph, k: int, budget: Optional[OracleBudget] = None) -> KappaResult:
    """
    Maximum number of distinct lengths over all k vertex-disjoint cycle
    sets within the length cap, by branch and bound. The search stops as
    soon as min(k, number of available lengths) is reached.
    """
    if k < 1:
        raise InvalidSpec(f"k must be a positive integer, got {k}")
    budget = budget or OracleBudget()
    cycles = enumerate_cycles(D, budget)
    masks = _masks(cycles)
    target = min(k, len({c.length for c in cycles}))
    counter = _NodeCounter(budget, "kappa search")
    best: list = [0, None]
    chosen: list[int] = []

    def extend(start: int, used: int) -> bool:
        if len(chosen) == k:
            distinct = len({cycles[i].length for i in chosen})
            if distinct > best[0]:
                best[0], best[1] = distinct, list(chosen)
            return best[0] >= target
        distinct_now = len({cycles[i].length for i in chosen})
        if distinct_now + (k - len(chosen)) <= best[0]:
            return False
        for i in range(start, len(cycles)):
            if len(cycles) - i < k - len(chosen):
                return False
            if masks[i] & used:
                continue
            counter.tick()
            chosen.append(i)
            done = extend(i + 1, used | masks[i])
            chosen.pop()
            if done:
                return True
        return False

    try:
        extend(0, 0)
    except _Truncated:
        pass
    if best[1] is None:
        return KappaResult(0)
    return KappaResult(best[0], CyclePacking.of(cycles[i] for i in best[1]))


@dataclass(frozen=True)
class PancyclicResult:
    ok: bool
    witnesses: dict[int, int] = field(default_factory=dict)
    violation: Optional[str] = None


def vertex_pancyclic_check(
    D: MultipartiteTournament, budget: Optional[OracleBudget] = None
) -> PancyclicResult:
    """
    For each part of a strong t-partite tournament (t >= 3), find its
    smallest vertex lying on an m-cycle for every m in 3..t.
    """
    if D.t < 3:
        raise HypothesisViolated(f"Pancyclicity needs at least 3 parts, got {D.t}")
    if not is_strong(D):
        raise NotStrong("Pancyclicity check needs a strong multipartite tournament")
    base = budget or OracleBudget()
    capped = base.model_copy(update={"max_cycle_len": D.t})

    lengths_at: dict[int, set[int]] = {v: set() for v in D.vertices}
    for cycle in enumerate_cycles(D, capped):
        for v in cycle.verts:
            lengths_at[v].add(cycle.length)

    wanted = set(range(3, D.t + 1))
    witnesses = {}
    for index, part in enumerate(D.parts):
        hits = [v for v in sorted(part) if wanted <= lengths_at[v]]
        if not hits:
            message = f"no vertex of part {index} lies on cycles of every length in 3..{D.t}"
            log.error(f"Pancyclicity violated: {message}")
            return PancyclicResult(False, witnesses, message)
        witnesses[index] = hits[0]
    return PancyclicResult(True, witnesses)
