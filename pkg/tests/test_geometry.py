import random
from fractions import Fraction as F

import pytest

from daugtree.errors import NormalizationError, PreconditionError
from daugtree.geometry import (LASQ_X, OCTA_X, lasq_minimum, lasq_probe, octahedral_probe,
                               octahedral_sweep, pm_norms, random_unit, weak_nbhd_diameter_DB)
from daugtree.construct import standard_vector
from daugtree.spaces import TreeVector, norm
from daugtree.tree import TreeKind

M = TreeKind.M


def e(t):
    return TreeVector(M, {t: 1})


def test_lasq_examples():
    # the segment {(0), (1)} counts both coordinates: 1/4 + 7/4
    assert max(pm_norms(LASQ_X, e("1"))) == 2
    assert max(pm_norms(LASQ_X, e("00"))) == F(5, 4)


def test_lasq_exact_minimum():
    value, y = lasq_minimum()
    assert value == F(5, 4)
    assert norm(y) == 1 and max(pm_norms(LASQ_X, y)) == value


def test_lasq_probe_small():
    rep = lasq_probe(300, depth=3, seed=1)
    assert rep.verdict == "consistent" and rep.worst == F(5, 4)


def test_octahedral_examples():
    assert octahedral_probe(e("0")) == 1
    assert octahedral_probe(e("00")) == F(3, 2)
    with pytest.raises(NormalizationError):
        octahedral_probe(TreeVector(M, {"0": F(1, 2)}))


def test_octahedral_sweep_small():
    rep = octahedral_sweep(300, depth=3, seed=1)
    assert rep.verdict == "consistent" and rep.worst == F(3, 2)


def test_random_unit_is_unit():
    rng = random.Random(0)
    assert all(norm(random_unit(rng, 3)) == 1 for _ in range(50))


def test_weak_neighbourhood_of_g():
    rep = weak_nbhd_diameter_DB(standard_vector("g"), F(1, 2))
    assert rep.n == 5 and rep.tail_norm == F(1, 32)
    assert rep.bound == F(39, 128) and rep.holds


def test_weak_neighbourhood_large_eps():
    rep = weak_nbhd_diameter_DB(standard_vector("g"), F(4))
    # the tail below level 1 has norm exactly 1/2, so n = 2
    assert rep.n == 2 and rep.bound <= 2 < rep.eps


def test_weak_neighbourhood_requires_branch_norming_point():
    with pytest.raises(PreconditionError):
        weak_nbhd_diameter_DB(standard_vector("w"), F(1, 2))
