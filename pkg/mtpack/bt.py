"""
The BT(n_1, ..., n_2k) family and the test for 3-partite tournaments whose
k-cycle packings all share one length.

A member of BT is a bipartite tournament with sides X = X_1 + ... + X_2k and
Y = {y_1, ..., y_2k}: y_i dominates exactly X_i and every x in X_i dominates
Y - {y_i}.
"""

from dataclasses import dataclass
from typing import Optional
import logging

from .condensation import condensation
from .cycle import Cycle, CyclePacking
from .digraph import MultipartiteTournament
from .diversify import diversify_3partite
from .exceptions import BadArity, HypothesisViolated
from .lemmas import find_triangle, shortest_cycle_through
from .packing import checked_packing, require_min_outdegree

log = logging.getLogger("mtpack")


@dataclass(frozen=True)
class BTLabeling:
    """Groups ordered by the label of their y vertex"""

    k: int
    x_groups: tuple[frozenset[int], ...]
    y_singletons: tuple[int, ...]
    n_list: tuple[int, ...]

    def relabel(self, labels) -> "BTLabeling":
        return BTLabeling(
            k=self.k,
            x_groups=tuple(frozenset(labels[v] for v in g) for g in self.x_groups),
            y_singletons=tuple(labels[y] for y in self.y_singletons),
            n_list=self.n_list,
        )


def _labeling_with_y(D: MultipartiteTournament, Y: frozenset[int], X: frozenset[int]) -> Optional[BTLabeling]:
    if len(Y) < 4 or len(Y) % 2:
        return None
    ys = tuple(sorted(Y))
    groups = tuple(D.out_neighbors(y) for y in ys)
    if any(not g for g in groups) or sum(len(g) for g in groups) != len(X):
        return None
    if frozenset().union(*groups) != X:
        return None
    for y, group in zip(ys, groups):
        expected = Y - {y}
        if any(D.out_neighbors(x) != expected for x in group):
            return None
    return BTLabeling(
        k=len(ys) // 2,
        x_groups=groups,
        y_singletons=ys,
        n_list=tuple(len(g) for g in groups),
    )


def recognize_bt(D: MultipartiteTournament) -> Optional[BTLabeling]:
    """BT labeling of D, or None when D is not a BT member"""
    if not isinstance(D, MultipartiteTournament) or D.t != 2:
        return None
    first, second = D.parts
    return _labeling_with_y(D, second, first) or _labeling_with_y(D, first, second)


def bt_mixed_packing(labeling: BTLabeling, count: int, with_six: bool = False) -> CyclePacking:
    """
    `count` disjoint cycles of a BT member: 4-cycles y_a x_a y_b x_b on
    consecutive group pairs, the last one replaced by the 6-cycle
    y_a x_a y_b x_b y_c x_c when `with_six` is set.
    """
    groups_needed = 2 * count + (1 if with_six else 0)
    if count < 1 or groups_needed > 2 * labeling.k:
        raise BadArity(
            f"{count} cycles{' with a 6-cycle' if with_six else ''} need {groups_needed} "
            f"groups, BT has {2 * labeling.k}"
        )
    xs = [min(g) for g in labeling.x_groups]
    ys = labeling.y_singletons
    fours = count - 1 if with_six else count
    cycles = [
        Cycle((ys[2 * j], xs[2 * j], ys[2 * j + 1], xs[2 * j + 1])) for j in range(fours)
    ]
    if with_six:
        a = 2 * fours
        cycles.append(Cycle((ys[a], xs[a], ys[a + 1], xs[a + 1], ys[a + 2], xs[a + 2])))
    return CyclePacking.of(cycles)


@dataclass(frozen=True)
class KappaOneVerdict:
    """
    Whether every k-cycle packing of D has a single length. `labeling` is
    the terminal component's BT structure in D's labels when it has one;
    `component` is a nontrivial non-terminal strong component when one
    exists; `witness` is a packing with two lengths when one was built.
    """

    holds: bool
    reason: str
    labeling: Optional[BTLabeling] = None
    component: Optional[frozenset[int]] = None
    witness: Optional[CyclePacking] = None

    def __bool__(self) -> bool:
        return self.holds


def _component_witness(
    D: MultipartiteTournament, k: int, labeling: BTLabeling, component: frozenset[int]
) -> CyclePacking:
    extra = shortest_cycle_through(D, min(component), component)
    # with k = 2 the lone BT cycle must differ in length from the extra one
    with_six = not (k == 2 and extra.length == 6)
    mixed = bt_mixed_packing(labeling, k - 1, with_six=with_six)
    return checked_packing(
        D, CyclePacking.of(list(mixed) + [extra]), k, "kappa_one_characterization"
    )


def kappa_one_characterization(D: MultipartiteTournament, k: int) -> KappaOneVerdict:
    """
    Decide kappa^k(D) = 1 for a 3-partite tournament with delta+ >= 2k-1:
    it holds exactly when every strong component except the terminal one is
    a single vertex and the terminal one is a BT member with 2k groups of
    size at least 2k-1.
    """
    if k < 2:
        raise HypothesisViolated(f"The characterization needs k >= 2, got k = {k}")
    if D.t > 3:
        raise HypothesisViolated(f"The characterization needs at most 3 parts, got {D.t}")
    require_min_outdegree(D, 2 * k - 1, "the characterization")

    dag = condensation(D)
    H, labels = D.induced(dag.terminal)
    found = recognize_bt(H)
    labeling = found.relabel(labels) if found else None
    nontrivial = [
        comp
        for index, comp in enumerate(dag.components)
        if index != dag.terminal_index and len(comp) > 1
    ]

    if labeling is not None and labeling.k == k and not nontrivial:
        small = [i for i, size in enumerate(labeling.n_list) if size < 2 * k - 1]
        if not small:
            log.debug(f"Terminal component is BT{labeling.n_list}; kappa^{k} = 1")
            return KappaOneVerdict(True, "terminal component is a BT member", labeling=labeling)
        return KappaOneVerdict(
            False,
            f"BT groups {small} have fewer than {2 * k - 1} vertices",
            labeling=labeling,
        )

    witness: Optional[CyclePacking] = None
    if find_triangle(D) is not None:
        witness = diversify_3partite(D, k).packing
        reason = "the instance contains a triangle"
    elif labeling is None:
        reason = "terminal component is not a BT member"
    elif labeling.k != k:
        reason = f"terminal component is a BT member with {2 * labeling.k} groups, not {2 * k}"
    else:
        witness = _component_witness(D, k, labeling, nontrivial[0])
        reason = f"strong component {sorted(nontrivial[0])} is not the terminal one"
    return KappaOneVerdict(
        False,
        reason,
        labeling=labeling,
        component=nontrivial[0] if nontrivial else None,
        witness=witness,
    )
