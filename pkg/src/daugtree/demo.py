"""Reference values reproduced by ``daugtree demo``."""
from __future__ import annotations

from fractions import Fraction

from .construct import decompose_into_F, shift, standard_vector
from .fileio import fstr
from .functionals import NormedFunctional
from .geometry import LASQ_X, OCTA_X, lasq_minimum, pm_norms
from .minimal_sets import all_minimal_sets
from .points import Refutation, daugavet_check, delta_witness_XB, dyadic_check, z_tree, z_vector
from .spaces import C0, L1, TreeVector, norm, project
from .tree import TreeKind, is_unit_antichain, nodes_at_depth, rank

B, M = TreeKind.B, TreeKind.M


def _show(value) -> str:
    if isinstance(value, Fraction):
        return fstr(value)
    if isinstance(value, (set, frozenset, list, tuple)):
        return "{" + ",".join(sorted(_show(v) for v in value)) + "}"
    return str(value)


def run_demo():
    rows = []

    def row(claim, got, want):
        rows.append((claim, _show(got), _show(want), got == want))

    row("rank((1)) in M", rank("1"), 2)
    row("rank((1,0)) in M", rank("10"), 5)
    row("{(0),(1,0)} is a unit antichain", is_unit_antichain({"0", "10"}, M), True)

    xB = standard_vector("xB")
    row("||x|| in X_B (with tails)", norm(xB), Fraction(1))
    for d in range(2, 7):
        row(f"||x|| truncated at depth {d}", norm(project(xB.expand(d), xB.expand(d).coeffs)),
            1 - Fraction(1, 1 << d))
    y2 = standard_vector("yN(2)")
    rest = TreeVector(B, {}, {t: Fraction(1, 4) for t in nodes_at_depth(2)})
    row("y_2 + sum_{|t|>2} 2^-|t| e_t = x", y2 + rest == xB, True)

    phi = NormedFunctional.from_row({"": 1, "0": 1, "00": 1, "000": 1, "0000": 1}, claimed=1)
    wit = delta_witness_XB(phi, Fraction(1, 8))
    row("delta witness ||x - y|| in X_B", wit.distance, Fraction(2))

    T = z_tree(4)
    half = Fraction(1, 2)
    mid = all((z_vector(t + "0") + z_vector(t + "1")).scale(half)
              == z_vector(t) + TreeVector(B, {t + "0": half, t + "1": half})
              for k in range(5) for t in nodes_at_depth(k))
    row("midpoint identity for z_t, |t| <= 4", mid, True)
    row("z-tree rooted at x is dyadic", dyadic_check(T, 4).is_dyadic, True)

    g, w = standard_vector("g"), standard_vector("w")
    row("||g||", norm(g), Fraction(1))
    row("||w||", norm(w), Fraction(1))
    row("||S_(0) g||", norm(shift("0", g)), Fraction(1))
    row("g certified Daugavet", daugavet_check(g).method, "AllBranchesNorm")
    ref = daugavet_check(w)
    row("w refuted with E", ref.E if isinstance(ref, Refutation) else None, frozenset({"0", "10"}))
    row("||w - P_E w||", ref.value if isinstance(ref, Refutation) else None, Fraction(1, 2))

    y = TreeVector(M, {"0": Fraction(1, 4), "1": Fraction(1, 2)})
    dec = decompose_into_F(y)
    got = {(lam, tuple(sorted(z.coeffs))) for lam, z in dec.terms}
    want = {(Fraction(1, 4), ()), (Fraction(1, 4), ("0",)), (Fraction(1, 2), ("1",))}
    row("base step c*0 + a0 e_(0) + a1 e_(1)", got == want, True)

    row("M(x) in c0 for x = (1, 1/2, 1)",
        {frozenset(A) for A in all_minimal_sets([1, Fraction(1, 2), 1], C0()).finite},
        {frozenset({1}), frozenset({3})})
    row("M(x) in l1 for x = (1/4, 3/4)",
        {frozenset(A) for A in all_minimal_sets([Fraction(1, 4), Fraction(3, 4)], L1()).finite},
        {frozenset({1, 2})})

    row("min max ||x +- y|| (not locally almost square)", lasq_minimum()[0], Fraction(5, 4))
    e00 = TreeVector(M, {"00": 1})
    row("max ||x +- e_(0,0)|| for x = e_(0)/4 + 3e_(1)/4", max(pm_norms(LASQ_X, e00)),
        Fraction(5, 4))
    row("min ||x +- e_(0,0)|| for x = (e_(0)+e_(1))/2", min(pm_norms(OCTA_X, e00)),
        Fraction(3, 2))
    return rows
