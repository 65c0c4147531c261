"""Finite checks of three geometric properties of the rootless tree space.

Points that norm every branch are points of weak-to-norm continuity, the
space is not locally almost square, and it is not locally octahedral.  The
probes below are falsification harnesses for the universal statements; any
counterexample they report carries an exact witness.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .errors import ConfigurationError, NormalizationError, PreconditionError
from .lp import LinearProgram
from .points import DaugavetCertificate, daugavet_check
from .polytope import _Problem, tree_ball
from .spaces import TreeVector, frac, norm, remove
from .tree import TreeKind, enumerate_admissible_sets, enumerate_unit_antichains, nodes_upto

ZERO = Fraction(0)
M = TreeKind.M


@dataclass
class ProbeReport:
    statement: str
    samples: int
    worst: Fraction
    verdict: str                 # "consistent" or "counterexample"
    witness: TreeVector | None = None
    seed: int | None = None
    depth: int | None = None
    exact: Fraction | None = None    # decisive optimum at the LP depth, if computed
    exact_witness: TreeVector | None = None
    notes: list = field(default_factory=list)


# -- weak-to-norm continuity ------------------------------------------------

@dataclass
class DiameterReport:
    eps: Fraction
    n: int
    tail_norm: Fraction
    radii: dict                  # node -> box radius eps / 2^(|t|+3)
    depth: int
    bound: Fraction              # upper bound for the diameter of W at this depth
    worst_set: frozenset
    programs: int

    @property
    def holds(self) -> bool:
        return self.bound < self.eps


def tail_norm(x: TreeVector, n: int) -> Fraction:
    """Norm of the part of ``x`` strictly below depth ``n``."""
    return norm(remove(x, nodes_upto(x.kind, n)))


def weak_nbhd_diameter_DB(x: TreeVector, eps, depth: int | None = None,
                          max_n: int = 24) -> DiameterReport:
    """Weak neighbourhood of ``x`` with diameter below ``eps``.

    ``n`` is the least level whose tail has norm below ``eps/8``; the
    neighbourhood boxes every coordinate of level at most ``n``.  For each
    admissible set ``A`` the diameter along ``A`` is at most the total box
    width on its shallow part plus twice the largest mass a point of the
    neighbourhood can put on its deep part, and the latter is an exact
    linear program (coordinates outside ``A`` sit at their smallest modulus).
    The bound is computed on the tree truncated at ``depth`` (default ``n + 1``).
    """
    eps = frac(eps)
    if eps <= 0:
        raise ConfigurationError("eps must be positive")
    cert = daugavet_check(x)
    if not (isinstance(cert, DaugavetCertificate) and cert.method == "AllBranchesNorm"):
        raise PreconditionError("x must norm every branch")
    n = next((k for k in range(1, max_n + 1) if tail_norm(x, k) < eps / 8), None)
    if n is None:
        raise ConfigurationError(f"no level up to {max_n} has a tail below eps/8")
    d = depth or n + 1
    if d <= n:
        raise ConfigurationError("the depth must exceed n")
    v = x.expand(d) if x.tails else x
    radii = {t: eps / (1 << (len(t) + 3)) for t in nodes_upto(x.kind, n)}
    boxes = {t: (v.coeffs.get(t, ZERO) - r, v.coeffs.get(t, ZERO) + r) for t, r in radii.items()}
    prob = _Problem(tree_ball(x.kind, d), [], boxes)
    best, worst, masses = None, frozenset(), {}
    for a in enumerate_admissible_sets(x.kind, d):
        shallow = sum((2 * radii[t] for t in a.nodes if t in radii), ZERO)
        deep = tuple(t for t in a.nodes if t not in radii)
        # deep coordinates are unboxed, so by unconditionality one sign suffices
        if deep not in masses:
            masses[deep] = prob.maximize({t: 1 for t in deep})[0] if deep else ZERO
        mass = masses[deep]
        total = shallow + 2 * mass
        if best is None or total > best:
            best, worst = total, frozenset(a.nodes)
    return DiameterReport(eps, n, tail_norm(x, n), radii, d, best, worst, prob.solved)


# -- local almost squareness ----------------------------------------------

LASQ_X = TreeVector(M, {"0": Fraction(1, 4), "1": Fraction(3, 4)})
OCTA_X = TreeVector(M, {"0": Fraction(1, 2), "1": Fraction(1, 2)})
LASQ_LEVEL = Fraction(5, 4)
OCTA_LEVEL = Fraction(3, 2)


def pm_norms(x: TreeVector, y: TreeVector):
    return norm(x + y), norm(x - y)


def lasq_minimum(x: TreeVector = LASQ_X, depth: int = 2):
    """Exact ``min max(||x + y||, ||x - y||)`` over unit ``y`` of the given depth.

    The sphere is the union of the faces ``sum_A s_t y_t = 1`` of the ball;
    on each face the objective is convex and the epigraph is a linear program.
    """
    sets = [a.nodes for a in enumerate_admissible_sets(M, depth)]
    coords = nodes_upto(M, depth)
    best, arg = None, None
    for face in sets:
        for signs in product((1, -1), repeat=len(face)):
            lp = LinearProgram()
            y = {t: lp.var(f"y{t}", free=True) for t in coords}
            a = {t: lp.var(f"a{t}") for t in coords}
            for t in coords:
                lp.ge({y[t]: 1, a[t]: 1}, 0)
                lp.le({y[t]: 1, a[t]: -1}, 0)
            s = lp.var("s", free=True)
            for nodes in sets:
                lp.le({a[t]: 1 for t in nodes}, 1)
            lp.eq({y[t]: sg for t, sg in zip(face, signs)}, 1)
            for sg in (1, -1):
                u = {t: lp.var(f"u{sg}{t}") for t in coords}
                for t in coords:
                    c = x.coeffs.get(t, ZERO)
                    lp.ge({u[t]: 1, y[t]: -sg}, c)
                    lp.ge({u[t]: 1, y[t]: sg}, -c)
                for nodes in sets:
                    row = {u[t]: 1 for t in nodes}
                    row[s] = -1
                    lp.le(row, 0)
            sol = lp.minimize({s: 1})
            if best is None or sol.value < best:
                best = sol.value
                arg = TreeVector(M, {t: sol.values[y[t]] for t in coords})
    return best, arg


def random_unit(rng: random.Random, depth: int, kind=M, scale: int = 8) -> TreeVector:
    """A random rational unit vector supported up to ``depth``."""
    while True:
        coeffs = {t: Fraction(rng.randint(-scale, scale), scale) for t in nodes_upto(kind, depth)
                  if rng.random() < 0.6}
        v = TreeVector(kind, {t: c for t, c in coeffs.items() if c})
        r = norm(v)
        if r:
            return v.scale(1 / r)


def lasq_probe(samples: int = 10_000, depth: int = 3, seed: int = 0,
               lp_depth: int = 2) -> ProbeReport:
    """Search for a unit ``y`` with ``max ||x +- y|| < 5/4``."""
    if depth < 2 or lp_depth < 2:
        raise ConfigurationError("depth must be at least 2")
    exact, exact_y = lasq_minimum(LASQ_X, lp_depth)
    worst, witness = exact, exact_y
    rng = random.Random(seed)
    for _ in range(samples):
        y = random_unit(rng, depth)
        value = max(pm_norms(LASQ_X, y))
        if value < worst:
            worst, witness = value, y
    verdict = "consistent" if worst >= LASQ_LEVEL else "counterexample"
    return ProbeReport("lasq", samples, worst, verdict, witness, seed, depth, exact, exact_y,
                       [f"exact minimum over depth {lp_depth}"])


# -- local octahedrality ---------------------------------------------------

def octahedral_probe(y: TreeVector, x: TreeVector = OCTA_X) -> Fraction:
    """``min(||x + y||, ||x - y||)`` for a unit ``y``."""
    if norm(y) != 1:
        raise NormalizationError(f"expected a unit vector, norm is {norm(y)}")
    return min(pm_norms(x, y))


def octahedral_sweep(samples: int = 10_000, depth: int = 3, seed: int = 0) -> ProbeReport:
    """Largest ``min ||x +- y||`` over sampled unit ``y``; sign vectors on unit
    antichains up to depth 2 are always included."""
    candidates = []
    for E in enumerate_unit_antichains(M, 2):
        for signs in product((1, -1), repeat=len(E)):
            candidates.append(TreeVector(M, dict(zip(sorted(E), signs))))
    rng = random.Random(seed)
    candidates.extend(random_unit(rng, depth) for _ in range(samples))
    worst, witness = None, None
    for y in candidates:
        value = octahedral_probe(y)
        if worst is None or value > worst:
            worst, witness = value, y
    verdict = "consistent" if worst <= OCTA_LEVEL else "counterexample"
    return ProbeReport("octahedral", len(candidates), worst, verdict, witness, seed, depth)
