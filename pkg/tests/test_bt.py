import pytest
from hypothesis import given, settings, strategies as st

from mtpack.bt import bt_mixed_packing, kappa_one_characterization, recognize_bt
from mtpack.cycle import Cycle
from mtpack.digraph import build_multipartite
from mtpack.exceptions import BadArity, HypothesisViolated
from mtpack.generators import GenSpec, gen_bt, gen_with_min_outdegree
from mtpack.oracle import OracleBudget, kappa_exact, verify_packing


def bt_under_bt1111(bt3333):
    """
    BT(1,1,1,1) on 16..23 above BT(3,3,3,3): its x's join the X side, its
    y's the Y side, and every cross arc between the two points down
    """
    top = gen_bt([1, 1, 1, 1])
    arcs = set(bt3333.arcs) | {(u + 16, v + 16) for u, v in top.arcs}
    arcs |= {(x, y) for x in range(16, 20) for y in range(12, 16)}
    arcs |= {(y, x) for y in range(20, 24) for x in range(12)}
    parts = [[*range(12), *range(16, 20)], [*range(12, 16), *range(20, 24)]]
    return build_multipartite(parts, arcs)


def triangle_host():
    parts = [[0, 1, 2], [3, 4, 5], [6, 7, 8]]
    part = {v: p for p, members in enumerate(parts) for v in members}
    cycles = [Cycle.of(i, 3 + i, 6 + i) for i in range(3)]
    arcs = [a for c in cycles for a in c.arcs()]
    for i in range(3):
        nxt = cycles[(i + 1) % 3]
        arcs += [(u, v) for u in cycles[i].verts for v in nxt.verts if part[u] != part[v]]
    return build_multipartite(parts, arcs)


def test_recognize_generated_members():
    """
    Test that generated members are recognized with their group sizes
    """
    labeling = recognize_bt(gen_bt([2, 3, 2, 3]))
    assert labeling.k == 2
    assert labeling.n_list == (2, 3, 2, 3)
    assert labeling.y_singletons == (10, 11, 12, 13)
    assert labeling.x_groups[1] == frozenset({2, 3, 4})
    assert recognize_bt(gen_bt([1] * 6)).k == 3


def test_recognize_rejects_non_members(triangle):
    """
    Test that a plain 4-cycle, a triangle and a random bipartite instance are not recognized
    """
    four_cycle = build_multipartite([[0, 2], [1, 3]], [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert recognize_bt(four_cycle) is None
    assert recognize_bt(triangle) is None
    D = gen_with_min_outdegree(GenSpec(sizes=[8, 8], seed=3, delta_min=3))
    assert recognize_bt(D) is None


def test_mixed_packings(bt3333):
    """
    Test 4-cycle packings and the 6-cycle variant on BT(3,3,3,3)
    """
    labeling = recognize_bt(bt3333)
    fours = bt_mixed_packing(labeling, 2)
    assert fours.lengths == (4, 4)
    assert verify_packing(bt3333, fours).ok
    six = bt_mixed_packing(labeling, 1, with_six=True)
    assert six.lengths == (6,)
    assert verify_packing(bt3333, six).ok
    with pytest.raises(BadArity):
        bt_mixed_packing(labeling, 2, with_six=True)


def test_bt_member_has_kappa_one(bt3333):
    """
    Test that a BT member with groups of 2k-1 vertices has kappa one
    """
    verdict = kappa_one_characterization(bt3333, 2)
    assert verdict
    assert verdict.labeling.n_list == (3, 3, 3, 3)
    assert verdict.witness is None


def test_acyclic_part_above_bt_keeps_kappa_one(bt3333):
    """
    Test that single-vertex components above the BT core keep every
    2-packing at one length
    """
    arcs = set(bt3333.arcs) | {(a, v) for a in (16, 17) for v in range(16)}
    D = build_multipartite([*bt3333.parts, [16, 17]], arcs)
    verdict = kappa_one_characterization(D, 2)
    assert verdict
    assert verdict.labeling.y_singletons == (12, 13, 14, 15)


def test_nontrivial_component_above_bt():
    """
    Test that a strong component above the core yields a witness mixing a
    6-cycle of the core with a 4-cycle of the component
    """
    D = bt_under_bt1111(gen_bt([3, 3, 3, 3]))
    verdict = kappa_one_characterization(D, 2)
    assert not verdict
    assert verdict.component == frozenset(range(16, 24))
    assert sorted(verdict.witness.lengths) == [4, 6]
    assert verify_packing(D, verdict.witness).ok


def test_triangle_host_is_not_kappa_one():
    """
    Test that a host with a triangle gets a witness with two lengths
    """
    D = triangle_host()
    verdict = kappa_one_characterization(D, 2)
    assert not verdict
    assert verdict.witness.distinct_lengths == 2
    assert verify_packing(D, verdict.witness).ok


def test_other_terminal_shapes():
    """
    Test that a BT core with the wrong number of groups, or no BT core at
    all, rules kappa one out without a witness
    """
    verdict = kappa_one_characterization(gen_bt([5] * 6), 2)
    assert not verdict
    assert verdict.labeling.k == 3
    D = gen_with_min_outdegree(GenSpec(sizes=[8, 8], seed=3, delta_min=3))
    assert not kappa_one_characterization(D, 2)


def test_characterization_hypotheses(bt3333):
    """
    Test that k = 1 and BT groups below the out-degree bound are rejected
    """
    with pytest.raises(HypothesisViolated):
        kappa_one_characterization(bt3333, 1)
    with pytest.raises(HypothesisViolated):
        kappa_one_characterization(gen_bt([2, 3, 2, 3]), 2)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32))
def test_characterization_agrees_with_exact_kappa(seed):
    """
    Test that the characterization holds exactly when the unconditional
    search finds no two disjoint cycles of different lengths
    """
    D = gen_with_min_outdegree(GenSpec(sizes=[4, 4, 4], seed=seed, delta_min=3))
    verdict = kappa_one_characterization(D, 2)
    assert bool(verdict) == (kappa_exact(D, 2).value == 1)


@pytest.mark.parametrize(
    "build, expected",
    [
        (lambda core: core, True),
        (
            lambda core: build_multipartite(
                [*core.parts, [16, 17]], set(core.arcs) | {(a, v) for a in (16, 17) for v in range(16)}
            ),
            True,
        ),
        (bt_under_bt1111, False),
    ],
)
def test_characterization_agrees_on_bt_hosts(build, expected):
    """
    Test the characterization against the exact kappa on hosts built
    around BT(3,3,3,3), with cycles up to length 6
    """
    D = build(gen_bt([3, 3, 3, 3]))
    assert bool(kappa_one_characterization(D, 2)) is expected
    assert kappa_exact(D, 2, OracleBudget(max_cycle_len=6)).value == (1 if expected else 2)
