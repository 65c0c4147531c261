from fractions import Fraction as F
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from daugtree.errors import CapacityError, NotApplicable, UndefinedInput
from daugtree.functionals import NormedFunctional
from daugtree.minimal_sets import (all_minimal_sets, delta_refutation, families,
                                   minimal_norming_set, minimal_transversals, weak_nbhd_bound)
from daugtree.spaces import C0, L1, Lorentz, TreeVector, norm
from daugtree.tree import TreeKind, nodes_upto

B, M = TreeKind.B, TreeKind.M
LORENTZ = Lorentz((F(1), F(1, 2), F(1, 4), F(1, 8)))
grid = st.lists(st.sampled_from([F(0), F(1, 4), F(1, 2), F(3, 4), F(1)]), min_size=1, max_size=4)


def subset_oracle(values, norm_of):
    """Minimal index sets whose restriction keeps the norm, by brute force."""
    supp = [i for i, v in values.items() if v]
    target = norm_of(values)
    good = [frozenset(A) for k in range(1, len(supp) + 1) for A in combinations(supp, k)
            if norm_of({i: values[i] for i in A}) == target]
    return {A for A in good if not any(B < A for B in good)}


def test_greedy_examples():
    assert minimal_norming_set([1, F(1, 2), 1], C0()) == {3}
    assert minimal_norming_set(TreeVector(B, {"0": 1, "1": 1})) == {"1"}
    with pytest.raises(UndefinedInput):
        minimal_norming_set([0, 0], L1())


def test_minimal_sets_examples():
    assert all_minimal_sets([F(1, 4), F(3, 4)], L1()).finite == [frozenset({1, 2})]
    assert set(all_minimal_sets([1, F(1, 2), 1], C0()).finite) == {frozenset({1}), frozenset({3})}
    assert all_minimal_sets([F(1, 4), F(3, 4)], L1()).infinite == []


@pytest.mark.parametrize("backend", [C0(), L1(), LORENTZ], ids=["c0", "l1", "lorentz"])
@settings(max_examples=60)
@given(values=grid)
def test_sequence_sets_match_oracle(backend, values):
    x = {i + 1: v for i, v in enumerate(values)}
    if not any(x.values()):
        return
    expected = subset_oracle(x, backend.norm)
    assert set(all_minimal_sets(x, backend).finite) == expected
    assert set(all_minimal_sets(x, backend, mode="pruned").finite) == expected
    assert minimal_norming_set(x, backend) in expected


@pytest.mark.parametrize("backend", [L1(), LORENTZ], ids=["l1", "lorentz"])
@settings(max_examples=60)
@given(values=grid)
def test_symmetric_structure(backend, values):
    """For a 1-symmetric norm all minimal sets have one size and |x| is constant on A ^ B."""
    x = {i + 1: v for i, v in enumerate(values)}
    if not any(x.values()):
        return
    sets = all_minimal_sets(x, backend).finite
    assert len({len(A) for A in sets}) == 1
    for A, B2 in combinations(sets, 2):
        assert len({abs(x[i]) for i in A ^ B2}) <= 1
    if isinstance(backend, L1):
        assert sets == [frozenset(i for i, v in x.items() if v)]


def test_exhaustive_capacity():
    with pytest.raises(CapacityError):
        all_minimal_sets([1] * 21, C0())


@settings(max_examples=80)
@given(st.dictionaries(st.sampled_from(nodes_upto(M, 3)),
                       st.sampled_from([F(-1, 2), F(1, 4), F(1, 2), F(1)]), min_size=1, max_size=5))
def test_tree_sets_match_oracle(coeffs):
    v = TreeVector(M, coeffs)
    expected = subset_oracle(dict(v.coeffs), lambda c: norm(TreeVector(M, c)))
    assert set(all_minimal_sets(v).finite) == expected
    assert minimal_norming_set(v) in expected


def test_tree_with_tail_has_branch_families():
    x = TreeVector(B, {}, {"": 1})
    rep = all_minimal_sets(x)
    assert rep.finite == []
    # the tail is pushed one level down, giving one family per child of the root
    assert {f.anchor for f in rep.infinite} == {"0", "1"}
    assert all(f.amplitude == F(1, 2) for f in rep.infinite)


@given(st.lists(st.frozensets(st.integers(1, 5), min_size=1, max_size=3), min_size=1, max_size=4))
def test_transversals_match_bruteforce(sets):
    universe = sorted(set().union(*sets))
    hitting = [frozenset(T) for k in range(1, len(universe) + 1) for T in combinations(universe, k)
               if all(set(T) & S for S in sets)]
    expected = {T for T in hitting if not any(U < T for U in hitting)}
    assert set(minimal_transversals(sets)) == expected


def test_families_finite_support():
    x = [F(1), F(1), F(1, 2)]
    for n in (1, 2):
        fam = families(x, C0(), n)
        assert set(fam.F) == set(all_minimal_sets(x, C0()).finite)
        assert set(fam.G) == set(fam.F)
        assert fam.gamma > 0


def test_weak_neighbourhood_bounds():
    rep = weak_nbhd_bound([F(1, 2), F(1, 2)], L1())
    assert rep.bound == F(7, 4) and rep.verified_max == F(3, 2)
    assert rep.E == {1}
    rep = weak_nbhd_bound(TreeVector(M, {"0": 1}))
    assert rep.bound == F(3, 2) and rep.verified_max == 1


def test_delta_refutation_l1():
    cert = delta_refutation([F(1, 4), F(3, 4)], L1())
    assert (cert.bound, cert.verified_max) == (F(61, 32), F(3, 4))
    assert cert.eta == F(3, 8) and cert.gamma == F(1, 4)
    assert cert.verified_max <= cert.bound < 2
    cert.functional.check(L1())


def test_delta_refutation_other_backends():
    assert delta_refutation([1], C0()).verified_max == 1
    cert = delta_refutation([1], Lorentz((F(1), F(1, 2), F(1, 4))))
    assert cert.bound == F(3, 2) and cert.verified_max == F(5, 8)


def test_delta_refutation_rejects_delta_points():
    with pytest.raises(NotApplicable):
        delta_refutation(TreeVector(B, {}, {"": 1}))


def test_delta_refutation_with_given_slice():
    phi = NormedFunctional.from_row({1: 1, 2: 1}, claimed=1)
    cert = delta_refutation([F(1, 2), F(1, 2)], L1(), phi, F(1, 4))
    assert cert.verified_max <= cert.bound < 2
