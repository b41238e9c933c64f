import pytest
from hypothesis import given, settings, strategies as st

from mtpack.cycle import Cycle, CyclePacking
from mtpack.digraph import Digraph
from mtpack.exceptions import CountMismatch, MissingArc, MtgSyntaxError
from mtpack.generators import GenSpec, gen_random_multipartite
from mtpack.mtg import (
    parse_mtg,
    parse_packing,
    read_mtg,
    read_packing,
    serialize_mtg,
    serialize_packing,
    write_mtg,
)

TRIANGLE = """p mtg 3 3 3
s 0 0
s 1 1
s 2 2
a 0 1
a 1 2
a 2 0
"""


def test_parse_triangle(triangle):
    """
    Test that the triangle file parses to the triangle fixture
    """
    assert parse_mtg(TRIANGLE) == triangle
    assert serialize_mtg(triangle) == TRIANGLE


def test_comments_and_blank_lines_are_skipped():
    """
    Test that comment and blank lines are ignored
    """
    text = "c generated\n\n" + TRIANGLE.replace("a 1 2", "c middle\na 1 2")
    assert parse_mtg(text).n == 3


def test_arc_count_mismatch():
    """
    Test that a file declaring more arcs than it lists is rejected
    """
    with pytest.raises(CountMismatch):
        parse_mtg(TRIANGLE.replace("a 2 0\n", ""))


def test_missing_arc_in_file():
    """
    Test that a file leaving a cross pair unoriented is rejected
    """
    text = TRIANGLE.replace("p mtg 3 3 3", "p mtg 3 3 2").replace("a 2 0\n", "")
    with pytest.raises(MissingArc):
        parse_mtg(text)


@pytest.mark.parametrize(
    "text, line",
    [
        ("p mtg 3 3\n", 1),
        ("p mtg 3 3 3\np mtg 3 3 3\n", 2),
        ("p mtg 2 2 1\ns 0 0\ns 1 1\na 0 x\n", 4),
        ("p mtg 2 2 1\ns 0 0\ns 0 1\n", 3),
        ("p mtg 2 2 2\ns 0 0\ns 1 1\na 0 1\na 0 1\n", 5),
        ("p mtg 2 2 1\ns 0 0\ns 1 1\na 0 5\n", 4),
        ("q 1\n", 1),
    ],
)
def test_syntax_errors_carry_line_numbers(text, line):
    """
    Test that syntax errors report the offending line
    """
    with pytest.raises(MtgSyntaxError) as info:
        parse_mtg(text)
    assert info.value.line == line


def test_plain_digraph_round_trip(k_star_3):
    """
    Test that plain digraphs with opposite arcs survive serialization
    """
    text = serialize_mtg(k_star_3)
    assert text.startswith("p dig 3 6\n")
    parsed = parse_mtg(text)
    assert isinstance(parsed, Digraph)
    assert parsed.arcs == k_star_3.arcs


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 4), min_size=2, max_size=4), st.integers(0, 2**32))
def test_canonical_round_trip(sizes, seed):
    """
    Test that serializing a parsed canonical file reproduces it exactly
    """
    text = serialize_mtg(gen_random_multipartite(GenSpec(sizes=sizes, seed=seed)))
    assert serialize_mtg(parse_mtg(text)) == text


def test_file_round_trip(tmp_path, bt3333):
    """
    Test that an instance written with comments reads back unchanged
    """
    path = tmp_path / "bt.mtg"
    write_mtg(bt3333, path, comments=["BT(3,3,3,3)"])
    assert path.read_text().startswith("c BT(3,3,3,3)\n")
    assert read_mtg(path) == bt3333


def test_invalid_utf8_is_a_syntax_error(tmp_path):
    """
    Test that undecodable bytes are reported with the line they sit on
    """
    path = tmp_path / "bad.mtg"
    path.write_bytes(b"p mtg 3 3 3\n\xff\xfe\n")
    with pytest.raises(MtgSyntaxError) as info:
        read_mtg(path)
    assert info.value.line == 2

    path.write_bytes(b"y 0 1 2\ny \xc3\n")
    with pytest.raises(MtgSyntaxError) as info:
        read_packing(path)
    assert info.value.line == 2


def test_packing_formats():
    """
    Test that packings read back from both the line format and JSON
    """
    packing = CyclePacking.of([Cycle.of(0, 1, 2), Cycle.of(3, 4, 5, 6)])
    text = serialize_packing(packing)
    assert text == "y 0 1 2\ny 3 4 5 6\n"
    assert parse_packing("c comment\n" + text) == packing
    assert parse_packing('{"cycles": [[3, 4, 5, 6], [0, 1, 2]]}') == packing
    with pytest.raises(MtgSyntaxError):
        parse_packing("x 0 1 2\n")
