import sys
from pathlib import Path
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from mtpack.digraph import Digraph, build_multipartite
from mtpack.generators import gen_bt


def tournament(n, arcs):
    """Tournament on 0..n-1 as a multipartite tournament with singleton parts"""
    return build_multipartite([[v] for v in range(n)], arcs)


def transitive_tournament(n):
    return tournament(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def rotational_tournament(n, steps):
    return tournament(n, [(i, (i + d) % n) for i in range(n) for d in steps])


@pytest.fixture
def triangle():
    return build_multipartite([[0], [1], [2]], [(0, 1), (1, 2), (2, 0)])


@pytest.fixture
def k_star_3():
    return Digraph.complete(3)


@pytest.fixture
def k_star_5():
    return Digraph.complete(5)


@pytest.fixture
def bt1111():
    return gen_bt([1, 1, 1, 1])


@pytest.fixture
def bt3333():
    return gen_bt([3, 3, 3, 3])


@pytest.fixture
def rotational7():
    """i -> i+1, i+2, i+3 (mod 7); every out-degree is 3"""
    return rotational_tournament(7, (1, 2, 3))
