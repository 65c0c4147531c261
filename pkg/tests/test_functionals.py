from fractions import Fraction as F

import pytest

from daugtree.errors import VerificationError
from daugtree.functionals import NormedFunctional
from daugtree.spaces import L1, C0, TreeNorm, TreeVector
from daugtree.tree import TreeKind

M = TreeKind.M


def test_average_of_rows():
    a = NormedFunctional.from_row({1: 1})
    b = NormedFunctional.from_row({2: -1})
    z = NormedFunctional.average([a, b], witness={1: F(1), 2: F(-1)})
    assert z.coeffs == {1: F(1, 2), 2: F(-1, 2)}
    assert z.claimed_norm == 1
    z.check(C0())


def test_tree_functional_certificate():
    phi = NormedFunctional.from_row({"0": 1, "00": 1}, witness=TreeVector(M, {"00": 1}))
    assert phi.claimed_norm == 1
    phi.check(TreeNorm(M))


@pytest.mark.parametrize("tamper", ["weight", "row", "coeffs", "claim", "witness"])
def test_tampering_is_detected(tamper):
    z = NormedFunctional.average([NormedFunctional.from_row({1: 1}),
                                  NormedFunctional.from_row({2: 1})], witness={1: 1, 2: 1})
    if tamper == "weight":
        z.decomposition[0] = (F(3, 4), z.decomposition[0][1])
    elif tamper == "row":
        z.decomposition[0] = (z.decomposition[0][0], {1: 2})
    elif tamper == "coeffs":
        z.coeffs[1] = F(1)
    elif tamper == "claim":
        z.claimed_norm = F(2)
    else:
        z.witness = {1: 2, 2: 0}
    with pytest.raises(VerificationError):
        z.check(C0() if tamper != "row" else L1())
