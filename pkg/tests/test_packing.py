import pytest
from hypothesis import given, settings, strategies as st

from mtpack.bt import recognize_bt
from mtpack.cycle import Cycle, CyclePacking
from mtpack.digraph import build_multipartite
from mtpack.exceptions import (
    HypothesisViolated,
    InternalConsistencyError,
    InvalidSpec,
    NotAnExtension,
    NotTriangleFree,
)
from mtpack.generators import (
    GenSpec,
    gen_bt,
    gen_extended_tournament,
    gen_random_extended,
    gen_with_min_outdegree,
)
from mtpack.lemmas import find_triangle
from mtpack.oracle import verify_packing
from mtpack.packing import (
    auxiliary_tournament,
    checked_packing,
    choose_algorithm,
    four_cycles,
    is_extension,
    pack,
    pack_3partite,
    pack_bipartite_4cycles,
    pack_extended,
    pack_multipartite_3k2,
    pack_tournament_triangles,
    pack_triangle_free,
)

from conftest import transitive_tournament


def assert_packing(D, packing, k):
    assert packing.k == k
    assert verify_packing(D, packing).ok


def test_four_cycles_of_bt1111(bt1111):
    """
    Test that the 4-cycle scan lists each 4-cycle once, canonically rotated
    """
    cycles = four_cycles(bt1111)
    assert len(cycles) == 6
    assert len(set(cycles)) == 6
    assert all(c.verts[0] == min(c.verts) for c in cycles)


def test_bt_instances(bt1111, bt3333):
    """
    Test the bipartite packer on BT instances at exactly the bound
    """
    assert_packing(bt1111, pack_bipartite_4cycles(bt1111, 1), 1)
    packing = pack_bipartite_4cycles(bt3333, 2)
    assert_packing(bt3333, packing, 2)
    assert packing.lengths == (4, 4)
    assert_packing(bt3333, pack_triangle_free(bt3333, 2), 2)


def test_bipartite_random_instance():
    """
    Test that a random bipartite tournament with delta+ >= 3 gets two disjoint 4-cycles
    """
    D = gen_with_min_outdegree(GenSpec(sizes=[8, 8], seed=3, delta_min=3))
    assert_packing(D, pack_bipartite_4cycles(D, 2), 2)


def test_triangle_free_uses_terminal_component():
    """
    Test that cycles come from the bipartite core when an acyclic part
    dominates it
    """
    core = gen_bt([1, 1, 1, 1])
    arcs = set(core.arcs) | {(a, v) for a in (8, 9) for v in range(8)}
    D = build_multipartite([*core.parts, [8, 9]], arcs)
    packing = pack_triangle_free(D, 1)
    assert_packing(D, packing, 1)
    assert packing.vertex_set <= set(range(8))


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32))
def test_triangle_free_random_instances(seed):
    """
    Test random triangle-free 3-partite tournaments that are not BT members:
    a random bipartite core below a part that dominates it
    """
    core = gen_with_min_outdegree(GenSpec(sizes=[8, 8], seed=seed, delta_min=3))
    arcs = set(core.arcs) | {(a, v) for a in (16, 17) for v in range(16)}
    D = build_multipartite([*core.parts, [16, 17]], arcs)
    assert find_triangle(D) is None
    assert recognize_bt(D) is None
    packing = pack_triangle_free(D, 2)
    assert_packing(D, packing, 2)
    assert packing.vertex_set <= set(range(16))


def test_triangle_free_rejects_triangles(triangle):
    """
    Test that the triangle-free packer refuses an instance with a triangle
    """
    with pytest.raises(NotTriangleFree):
        pack_triangle_free(triangle, 1)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32))
def test_3partite_meets_the_bound(seed):
    """
    Test that random 3-partite tournaments with delta+ >= 3 get two disjoint
    cycles
    """
    D = gen_with_min_outdegree(GenSpec(sizes=[4, 4, 4], seed=seed, delta_min=3))
    assert_packing(D, pack_3partite(D, 2), 2)


def test_3partite_seeded():
    """
    Test the 3-partite packer on a seeded 15-vertex instance
    """
    D = gen_with_min_outdegree(GenSpec(sizes=[5, 5, 5], seed=1, delta_min=3))
    assert_packing(D, pack_3partite(D, 2), 2)


def test_3k2_on_four_parts():
    """
    Test that four parts with delta+ >= 4 get two disjoint cycles
    """
    D = gen_with_min_outdegree(GenSpec(sizes=[4, 4, 4, 4], seed=2, delta_min=4))
    assert_packing(D, pack_multipartite_3k2(D, 2), 2)


def test_tournament_triangles(rotational7):
    """
    Test that the rotational tournament is packed with two triangles
    """
    packing = pack_tournament_triangles(rotational7, 2)
    assert_packing(rotational7, packing, 2)
    assert packing.lengths == (3, 3)


@pytest.mark.parametrize(
    "packer", [pack_3partite, pack_bipartite_4cycles, pack_multipartite_3k2, pack_tournament_triangles]
)
def test_unmet_bounds_are_hypothesis_errors(packer, bt1111):
    """
    Test that instances below the out-degree bound, or outside the packer's
    class, are rejected before any search
    """
    with pytest.raises(HypothesisViolated):
        packer(transitive_tournament(4) if packer is not pack_bipartite_4cycles else bt1111, 2)


def test_3partite_rejects_four_parts():
    """
    Test that the 3-partite packer refuses four parts
    """
    D = gen_with_min_outdegree(GenSpec(sizes=[3, 3, 3, 3], seed=0, delta_min=1))
    with pytest.raises(HypothesisViolated):
        pack_3partite(D, 1)


def test_k_must_be_positive(bt1111):
    """
    Test that k = 0 is an invalid request
    """
    with pytest.raises(InvalidSpec):
        pack_bipartite_4cycles(bt1111, 0)


def test_extended_tournament_triangles(rotational7):
    """
    Test that a blow-up of a regular tournament is packed with triangles
    using arcs of the blow-up only
    """
    D = gen_extended_tournament(rotational7, [2] * 7)
    assert is_extension(D)
    packing = pack_extended(D, 3)
    assert_packing(D, packing, 3)
    assert set(packing.lengths) == {3}

    aux = auxiliary_tournament(D)
    assert aux.is_tournament
    assert aux.has_arc(0, 1)


def test_random_blow_up():
    """
    Test that a random blow-up of a 7-vertex tournament gets two triangles
    """
    D = gen_random_extended([2, 1, 2, 1, 2, 1, 2], seed=2, delta_min=3)
    packing = pack_extended(D, 2)
    assert_packing(D, packing, 2)
    assert packing.lengths == (3, 3)


def test_bt_is_not_an_extension(bt3333):
    """
    Test that a BT member is not recognized as an extended tournament
    """
    assert not is_extension(bt3333)
    with pytest.raises(NotAnExtension):
        pack_extended(bt3333, 1)


def test_checked_packing_attaches_instance(triangle):
    """
    Test that a packer result failing verification becomes an internal
    error carrying the instance text
    """
    wrong = CyclePacking.of([Cycle.of(0, 2, 1)])
    with pytest.raises(InternalConsistencyError) as info:
        checked_packing(triangle, wrong, 1, "test")
    assert info.value.instance.startswith("p mtg 3 3 3")


def test_choose_algorithm(rotational7, bt3333, triangle):
    """
    Test that the automatic choice follows the instance class
    """
    assert choose_algorithm(rotational7) == "tournament"
    assert choose_algorithm(bt3333) == "bipartite"
    name, packing = pack(bt3333, 2)
    assert name == "bipartite"
    assert_packing(bt3333, packing, 2)
    with pytest.raises(InvalidSpec):
        pack(triangle, 1, algorithm="greedy")
