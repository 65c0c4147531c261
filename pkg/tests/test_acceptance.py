"""Acceptance criteria.  Each test carries a ``criterion`` marker; the pytest
summary prints one PASS/FAIL line per criterion.

Run just this file with ``pytest tests/test_acceptance.py``.
"""
import random
import time
from fractions import Fraction as F
from itertools import product

import pytest

from daugtree.construct import daugavetify, decompose_into_DB, decompose_into_F, standard_vector
from daugtree.functionals import NormedFunctional
from daugtree.geometry import (LASQ_LEVEL, OCTA_LEVEL, lasq_probe, octahedral_probe,
                               octahedral_sweep, weak_nbhd_diameter_DB)
from daugtree.minimal_sets import all_minimal_sets, delta_refutation, minimal_norming_set
from daugtree.points import (DaugavetCertificate, Refutation, daugavet_check, daugavet_refute_XB,
                             delta_witness_XB, dyadic_check, z_tree, z_vector)
from daugtree.polytope import max_linear, tree_ball
from daugtree.spaces import C0, L1, Lorentz, TreeNorm, TreeVector, norm, project, remove
from daugtree.tree import (TreeKind, enumerate_admissible_sets, is_unit_antichain, nodes_at_depth,
                           nodes_upto)

B, M = TreeKind.B, TreeKind.M
QUARTERS = [F(0), F(1, 4), F(1, 2), F(3, 4), F(1)]
LORENTZ = Lorentz((F(1), F(1, 2), F(1, 4), F(1, 8)))
criterion = pytest.mark.criterion


def brute_norm(v: TreeVector, depth: int) -> F:
    return max(sum(abs(v.coeffs.get(t, 0)) for t in a.nodes)
               for a in enumerate_admissible_sets(v.kind, depth))


def random_vector(rng, kind, depth, scale=8, density=0.5, signed=True):
    low = -scale if signed else 0
    return TreeVector(kind, {t: F(rng.randint(low, scale), scale)
                             for t in nodes_upto(kind, depth) if rng.random() < density})


def unit(v: TreeVector) -> TreeVector:
    return v.scale(1 / norm(v))


@criterion(1, "DP norm equals brute force (depth-2 grid, 1000 random depth-4 vectors, < 60 s)")
def test_norm_against_bruteforce():
    start = time.perf_counter()
    checked = 0
    for kind in (B, M):
        pool = nodes_upto(kind, 2)
        for combo in product(QUARTERS, repeat=len(pool)):
            v = TreeVector(kind, dict(zip(pool, combo)))
            assert norm(v) == brute_norm(v, 2)
            checked += 1
    rng = random.Random(1)
    for _ in range(1000):
        v = random_vector(rng, rng.choice([B, M]), 4, density=0.3)
        assert norm(v) == brute_norm(v, 4)
        checked += 1
    assert checked == 5 ** 7 + 5 ** 6 + 1000
    assert time.perf_counter() - start < 60


@criterion(2, "geometric vector of X_B has norm 1, truncations 1 - 2^-d")
def test_geometric_norms():
    x = standard_vector("xB")
    assert norm(x) == 1
    for d in range(2, 7):
        truncated = x.expand(d)
        assert norm(project(truncated, truncated.coeffs)) == 1 - F(1, 2 ** d)


def branch_functional(rng) -> NormedFunctional:
    """Average of indicator rows of random root branches of length 4 to 7."""
    rows = []
    for _ in range(rng.randint(1, 3)):
        end = "".join(rng.choice("01") for _ in range(rng.randint(4, 7)))
        rows.append(NormedFunctional.from_row({end[:k]: 1 for k in range(len(end) + 1)}, claimed=1))
    phi = NormedFunctional.average(rows)
    depth = max(len(t) for t in phi.coeffs)
    phi.claimed_norm, phi.witness = max_linear(phi.coeffs, tree_ball(B, depth))
    phi.witness = TreeVector(B, phi.witness)
    return phi


@criterion(3, "delta witness in X_B: distance 2 inside 10 seeded slices, delta = 1/8")
def test_delta_witness():
    rng = random.Random(3)
    x = standard_vector("xB")
    delta = F(1, 8)
    for _ in range(10):
        phi = branch_functional(rng)
        phi.check(TreeNorm(B))
        assert phi(x) > phi.claimed_norm - delta
        wit = delta_witness_XB(phi, delta)
        assert norm(wit.y) <= 1
        assert norm(x - wit.y) == 2 == wit.distance
        assert phi(wit.y) > phi.claimed_norm - delta


@criterion(4, "X_B positive cone: 500 unit vectors refuted by an antichain with value < 1")
def test_positive_cone_refutations():
    rng = random.Random(4)
    done = 0
    while done < 500:
        v = random_vector(rng, B, rng.randint(1, 4), signed=False)
        if not v.coeffs:
            continue
        done += 1
        x = unit(v)
        ref = daugavet_refute_XB(x)
        assert is_unit_antichain(ref.E, B)
        assert norm(remove(x, ref.E)) == ref.value < 1


def ball_vector(rng, depth, kind=M) -> TreeVector:
    """Random nonzero vector of norm 1, 3/4, 1/2 or 1/4 supported up to ``depth``."""
    while True:
        v = random_vector(rng, kind, depth)
        if v.coeffs:
            return v.scale(rng.choice([F(1), F(1), F(3, 4), F(1, 2), F(1, 4)]) / norm(v))


@criterion(5, "g is certified by branch norms; w is refuted with E = {(0),(1,0)} and value 1/2")
def test_g_and_w():
    cert = daugavet_check(standard_vector("g"))
    assert isinstance(cert, DaugavetCertificate) and cert.method == "AllBranchesNorm"
    w = standard_vector("w")
    ref = daugavet_check(w)
    assert isinstance(ref, Refutation)
    assert ref.E == frozenset({"0", "10"}) and ref.value == F(1, 2)
    assert norm(remove(w, ref.E)) == F(1, 2)


@criterion(6, "decomposition into sign vectors on unit antichains for 1000 ball vectors")
def test_decompose_into_F():
    rng = random.Random(6)
    for _ in range(1000):
        y = ball_vector(rng, rng.randint(1, 4))
        dec = decompose_into_F(y)
        assert all(lam > 0 for lam, _ in dec.terms)
        assert sum(lam for lam, _ in dec.terms) == 1
        assert dec.recombine() == y
        for _, z in dec.terms:
            assert all(abs(c) == 1 for c in z.coeffs.values())
            assert not z.coeffs or is_unit_antichain(z.coeffs, M)
            assert set(z.coeffs) <= set(y.coeffs)


def tree_functional(rng, depth) -> NormedFunctional:
    """Average of signed admissible-set rows of the rootless tree."""
    sets = enumerate_admissible_sets(M, depth)
    rows = []
    for _ in range(rng.randint(1, 3)):
        a = rng.choice(sets)
        rows.append(NormedFunctional.from_row({t: rng.choice([1, -1]) for t in a.nodes}, claimed=1))
    phi = NormedFunctional.average(rows)
    value, y = max_linear(phi.coeffs, tree_ball(M, depth))
    phi.claimed_norm, phi.witness = value, TreeVector(M, y)
    return phi


@criterion(7, "daugavetify: 100 seeded cases land in the weak neighbourhood (< 120 s)")
def test_daugavetify():
    rng = random.Random(7)
    start = time.perf_counter()
    for _ in range(100):
        y = ball_vector(rng, 3)
        functionals = [tree_functional(rng, rng.randint(2, 5)) for _ in range(rng.randint(0, 3))]
        eps = rng.choice([F(1, 2), F(1, 4), F(1, 8), F(1, 64)])
        res = daugavetify(y, functionals, eps)
        assert norm(res.x) == 1
        assert all(abs(phi(y) - phi(res.x)) < eps for phi in functionals)
        assert isinstance(daugavet_check(res.x), DaugavetCertificate)
    assert time.perf_counter() - start < 120


@criterion(8, "decomposition into branch-norming Daugavet-points for 100 depth-3 vectors")
def test_decompose_into_DB():
    rng = random.Random(8)
    for _ in range(100):
        y = ball_vector(rng, 3)
        dec = decompose_into_DB(y)
        assert all(lam > 0 for lam, _ in dec.terms)
        assert sum(lam for lam, _ in dec.terms) == 1
        assert dec.recombine() == y
        for _, z in dec.terms:
            assert norm(z) == 1
            cert = daugavet_check(z)
            assert isinstance(cert, DaugavetCertificate) and cert.method == "AllBranchesNorm"


SEQUENCE_BACKENDS = [("l1", L1()), ("c0", C0()), ("lorentz", LORENTZ)]


def sequence_grid(backend):
    """Unit vectors with at most four coordinates from {0, 1/4, 1/2, 3/4, 1}, normalized."""
    seen = {}
    for combo in product(QUARTERS, repeat=4):
        x = {i + 1: v for i, v in enumerate(combo) if v}
        if not x:
            continue
        r = backend.norm(x)
        x = {i: v / r for i, v in x.items()}
        seen.setdefault(tuple(sorted(x.items())), x)
    return list(seen.values())


def subset_oracle(x, norm_of):
    """Minimal sets keeping the norm, by checking every subset of the support."""
    supp = sorted(x)
    target = norm_of(x)
    good = []
    for mask in range(1, 1 << len(supp)):
        A = frozenset(i for k, i in enumerate(supp) if mask >> k & 1)
        if norm_of({i: x[i] for i in A}) == target:
            good.append(A)
    return {A for A in good if not any(other < A for other in good)}


@criterion(9, "delta-point refutations in l1, c0 and Lorentz over the quarter grid")
def test_delta_refutations():
    for name, backend in SEQUENCE_BACKENDS:
        for x in sequence_grid(backend):
            cert = delta_refutation(x, backend)
            cert.functional.check(backend)
            assert cert.bound == 2 - cert.eta * cert.gamma < 2, (name, x)
            assert cert.verified_max <= cert.bound, (name, x)


@criterion(10, "LASQ minimum 5/4, octahedral maximum 3/2 at e_(0,0), weak diameter < 1/2")
def test_geometric_probes():
    lasq = lasq_probe(samples=10_000, depth=3, seed=0)
    assert lasq.exact == LASQ_LEVEL == F(5, 4)
    assert lasq.worst == LASQ_LEVEL and lasq.verdict == "consistent"
    octa = octahedral_sweep(samples=10_000, depth=3, seed=0)
    assert octa.worst == OCTA_LEVEL and octa.verdict == "consistent"
    assert octahedral_probe(TreeVector(M, {"00": 1})) == OCTA_LEVEL == F(3, 2)
    diam = weak_nbhd_diameter_DB(standard_vector("g"), F(1, 2))
    assert diam.bound < F(1, 2) and diam.holds


@criterion(11, "greedy minimal norming set is among all minimal sets; symmetric invariants")
def test_minimal_sets_on_grid():
    for name, backend in SEQUENCE_BACKENDS:
        for x in sequence_grid(backend):
            expected = subset_oracle(x, backend.norm)
            found = all_minimal_sets(x, backend).finite
            assert set(found) == expected, (name, x)
            assert minimal_norming_set(x, backend) in expected, (name, x)
            # every backend here is 1-symmetric
            assert len({len(A) for A in found}) == 1, (name, x)
            for A in found:
                for other in found:
                    assert len({abs(x[i]) for i in A ^ other}) <= 1, (name, x)


@criterion(12, "z-tree rooted at x_B is dyadic to level 4 with level distance 2 - 2^(1-n)")
def test_dyadic_tree():
    T = z_tree(4)
    half = F(1, 2)
    for k in range(4):
        for t in nodes_at_depth(k):
            assert (z_vector(t + "0") + z_vector(t + "1")).scale(half) == \
                z_vector(t) + TreeVector(B, {t + "0": half, t + "1": half})
    for n in range(1, 5):
        rep = dyadic_check(T, n)
        assert rep.is_dyadic and rep.averaging
        assert rep.min_level_distance == 2 - F(2, 2 ** n)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
