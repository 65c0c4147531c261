from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from daugtree.construct import standard_vector
from daugtree.errors import FormatError
from daugtree.fileio import (atomic_write, format_vector, fparse, fstr, functional_from_json,
                             functional_to_json, parse_vector, read_vector, vector_from_json,
                             vector_to_json)
from daugtree.functionals import NormedFunctional
from daugtree.spaces import TreeVector
from daugtree.tree import TreeKind, nodes_upto


@given(st.dictionaries(st.sampled_from(nodes_upto(TreeKind.B, 3)),
                       st.fractions(-3, 3, max_denominator=16).filter(bool), max_size=6))
def test_vector_text_roundtrip(coeffs):
    v = TreeVector(TreeKind.B, coeffs)
    assert parse_vector(format_vector(v)) == v
    assert vector_from_json(vector_to_json(v)) == v


def test_tails_roundtrip():
    w = standard_vector("w")
    text = format_vector(w)
    assert text.splitlines()[0] == "kind=M depth=2"
    assert "tail 10 1/2" in text
    assert parse_vector(text) == w


@pytest.mark.parametrize("text", ["", "kind=Q\n", "kind=M\nε 1\n", "kind=M\n0 0.5\n",
                                  "kind=M depth=1\n00 1\n", "kind=M\n0 1\n0 1\n", "kind=M\n2 1\n"])
def test_malformed_vectors(text):
    with pytest.raises(FormatError):
        parse_vector(text)


def test_fractions():
    assert fstr(F(3, 6)) == "1/2" and fstr(2) == "2"
    assert fparse("-3/4") == F(-3, 4)
    with pytest.raises(FormatError):
        fparse("abc")


def test_functional_roundtrip():
    phi = NormedFunctional.average([NormedFunctional.from_row({1: 1}),
                                    NormedFunctional.from_row({3: -1})], witness={1: 1, 3: -1})
    back = functional_from_json(functional_to_json(phi, "c0"))
    assert back.coeffs == phi.coeffs and back.claimed_norm == 1 and back.witness == {1: 1, 3: -1}
    tree = NormedFunctional.from_row({"0": 1}, witness=TreeVector(TreeKind.M, {"0": 1}))
    assert functional_from_json(functional_to_json(tree, "tree:M")).witness == tree.witness


def test_atomic_write(tmp_path):
    target = tmp_path / "v.vec"
    atomic_write(target, format_vector(standard_vector("g")))
    assert read_vector(target) == standard_vector("g")
    assert [p.name for p in tmp_path.iterdir()] == ["v.vec"]
