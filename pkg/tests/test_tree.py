from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from daugtree.errors import InvalidNode
from daugtree.spaces import TreeVector, norm
from daugtree.tree import (TreeKind, Relation, branches, children, compare, enumerate_admissible_sets,
                           enumerate_unit_antichains, format_node, is_admissible, is_antichain,
                           is_unit_antichain, lambda_segments, nodes_upto, parent, parse_node, path,
                           rank, sibling, sort_nodes, unrank)

B, M = TreeKind.B, TreeKind.M
nodes = st.text(alphabet="01", max_size=8)


def test_rank_examples():
    assert rank("") == 0
    assert rank("1") == 2
    assert rank("10") == 5
    assert unrank(5) == "10"


@given(nodes)
def test_rank_roundtrip(t):
    assert unrank(rank(t)) == t


@given(nodes, nodes)
def test_rank_is_shortlex(s, t):
    assert (rank(s) < rank(t)) == ((len(s), s) < (len(t), t))


def test_parse_and_format():
    assert parse_node("ε") == ""
    assert parse_node("10") == "10"
    assert format_node("") == "ε"
    with pytest.raises(InvalidNode):
        parse_node("012")


def test_relations():
    assert compare("0", "01") is Relation.ANCESTOR
    assert compare("01", "0") is Relation.DESCENDANT
    assert compare("01", "01") is Relation.EQUAL
    assert compare("00", "01") is Relation.INCOMPARABLE
    assert parent("01") == "0" and sibling("01") == "00"
    assert children("1") == ("10", "11")


def test_paths():
    assert path("01", B) == ["", "0", "01"]
    assert path("01", M) == ["0", "01"]


def test_admissible_counts():
    sets = enumerate_admissible_sets(M, 2)
    assert len([a for a in sets if a.kind.name == "BRANCH"]) == 4
    assert {frozenset(a.nodes) for a in sets if a.kind.name == "LAMBDA"} == {
        frozenset({"0", "1"}), frozenset({"0", "00", "01"}), frozenset({"1", "10", "11"})}
    assert len(enumerate_admissible_sets(B, 3)) == 8
    assert len(branches(B, 2)) == 4
    assert all(is_admissible(a.nodes, M) for a in lambda_segments(3))


def test_zero_depth_rejected():
    with pytest.raises(ValueError):
        enumerate_admissible_sets(M, 0)


def test_unit_antichain_examples():
    assert is_unit_antichain({"0", "10"}, M)
    assert not is_unit_antichain({"0", "1"}, M)
    assert is_unit_antichain({"0", "1"}, B)
    assert not is_unit_antichain({"0", "01"}, M)


@pytest.mark.parametrize("kind", [B, M])
def test_unit_antichains_match_norm_oracle(kind):
    """``E`` is a unit antichain exactly when the indicator of ``E`` has norm one."""
    universe = nodes_upto(kind, 3)
    found = set(enumerate_unit_antichains(kind, 3))
    for size in range(1, 4):
        for E in combinations(universe, size):
            unit = norm(TreeVector(kind, {t: 1 for t in E})) == 1
            assert unit == is_unit_antichain(E, kind)
            assert unit == (frozenset(E) in found)


def test_unit_antichain_order():
    found = enumerate_unit_antichains(M, 2)
    assert found[0] == frozenset({"0"})
    assert [len(e) for e in found] == sorted(len(e) for e in found)


@given(st.lists(nodes, max_size=6))
def test_antichain_definition(ts):
    expected = all(compare(s, t) is Relation.INCOMPARABLE
                   for i, s in enumerate(ts) for t in ts[i + 1:] if s != t)
    assert is_antichain(set(ts)) == expected


def test_sort_nodes():
    assert sort_nodes({"1", "00", "0"}) == ["0", "1", "00"]
