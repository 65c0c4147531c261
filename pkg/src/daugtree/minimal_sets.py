"""Minimal norming sets and the refutation machinery for 1-unconditional bases.

``M(x)`` collects the inclusion-minimal index sets ``A`` with
``||P_A x|| = ||x||``.  From it come the families ``F_n``, ``G_n``, their
hitting sets ``E_n`` and the gap ``gamma_n``, which drive the weak-neighbourhood
bound and the delta-point refutation certificates.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping

from .errors import (CapacityError, ConfigurationError, NormalizationError,
                     NotApplicable, UndefinedInput, VerificationError)
from .functionals import NormedFunctional
from .polytope import (Polytope, max_linear, sequence_ball, sup_distance, tree_ball,
                       tree_objective)
from .spaces import (L1, C0, Lorentz, TreeNorm, TreeVector, as_sequence, norm, project,
                     remove)
from .tree import SetKind, enumerate_admissible_sets, rank_key

ZERO = Fraction(0)
EXHAUSTIVE_LIMIT = 20
MATERIALIZE_LIMIT = 12


def _key(i):
    return rank_key(i) if isinstance(i, str) else (0, i)


def ordered(A):
    return sorted(A, key=_key)


def prefix(A, n: int) -> frozenset:
    """``A(n)``: the ``n`` smallest elements of ``A``."""
    return frozenset(ordered(A)[:n])


class _Space:
    """Uniform access to a tree vector or a finite sequence with its norm."""

    def __init__(self, x, backend=None):
        if isinstance(x, TreeVector):
            self.tree = True
            self.x = x
            self.backend = backend if isinstance(backend, TreeNorm) else TreeNorm(x.kind)
            self.values = dict(x.coeffs)
        else:
            if backend is None or isinstance(backend, TreeNorm):
                raise ConfigurationError("a sequence backend is required for sequences")
            self.tree = False
            self.backend = backend
            self.values = as_sequence(x)
            self.x = self.values

    @property
    def has_tails(self):
        return self.tree and bool(self.x.tails)

    def support(self):
        return ordered(self.values)

    def norm(self) -> Fraction:
        return norm(self.x) if self.tree else self.backend.norm(self.values)

    def restricted(self, A) -> Fraction:
        if self.tree:
            return norm(project(self.x, A))
        return self.backend.norm({i: self.values[i] for i in A if i in self.values})

    def without(self, E) -> Fraction:
        if self.tree:
            return norm(remove(self.x, E))
        E = set(E)
        return self.backend.norm({i: v for i, v in self.values.items() if i not in E})

    def sign(self, i) -> int:
        return 1 if self.values.get(i, ZERO) >= 0 else -1


def _minimal(sets):
    unique = sorted(set(sets), key=lambda a: (len(a), [_key(i) for i in ordered(a)]))
    out = []
    for a in unique:
        if not any(b <= a for b in out):
            out.append(a)
    return out


def _sort_sets(sets):
    return sorted(sets, key=lambda a: [_key(i) for i in ordered(a)])


# -- greedy and exhaustive searches ---------------------------------------

def minimal_norming_set(x, backend=None) -> frozenset:
    """Greedy sweep: keep removing the smallest removable index.

    An index is removable when the norm survives its removal.  The indices
    below a removed one are never removable again, which is the invariant
    the existence proof maintains.
    """
    sp = _Space(x, backend)
    if sp.has_tails:
        raise ConfigurationError("greedy sweep needs a finitely supported vector")
    target = sp.norm()
    if target == 0:
        raise UndefinedInput("the zero vector has no norming sets")
    A = sp.support()
    start = 0
    while True:
        for k in range(start, len(A)):
            rest = A[:k] + A[k + 1:]
            if sp.restricted(rest) == target:
                A = rest
                start = k
                break
        else:
            return frozenset(A)


def _pruned_search(sp: _Space, target):
    found, seen = set(), set()
    stack = [frozenset(sp.support())]
    while stack:
        A = stack.pop()
        if A in seen:
            continue
        seen.add(A)
        removable = False
        for i in ordered(A):
            B = A - {i}
            if sp.restricted(B) == target:
                removable = True
                if B not in seen:
                    stack.append(B)
        if not removable:
            found.add(A)
    return _sort_sets(_minimal(found))


def _exhaustive_search(sp: _Space, target):
    supp = sp.support()
    if len(supp) > EXHAUSTIVE_LIMIT:
        raise CapacityError(
            f"support of size {len(supp)} exceeds {EXHAUSTIVE_LIMIT}; use the pruned search")
    found = []
    for k in range(1, len(supp) + 1):
        for combo in combinations(supp, k):
            A = frozenset(combo)
            if any(B <= A for B in found):
                continue
            if sp.restricted(A) == target:
                found.append(A)
    return _sort_sets(found)


@dataclass(frozen=True)
class BranchFamily:
    """Norming infinite branches through a tail anchor.

    ``trace`` lists the explicit support nodes on the path down to the anchor;
    every branch below the anchor continues it with nonzero tail coefficients.
    """

    trace: tuple
    anchor: str
    amplitude: Fraction

    def prefix(self, n: int) -> frozenset:
        if n <= len(self.trace):
            return frozenset(self.trace[:n])
        raise ValueError("prefix reaches below the anchor; expand the vector first")


@dataclass
class MinimalSetReport:
    finite: list
    infinite: list
    depth: int | None = None
    # True when finitely supported lambda-sets below tail anchors are omitted
    truncated: bool = False
    vector: object = None

    def prefixes(self, n: int):
        out = [prefix(A, n) for A in self.finite]
        out += [D.prefix(n) for D in self.infinite]
        return out


def _tree_traces(x: TreeVector, depth: int):
    target = norm(x)
    finite, infinite = set(), {}
    supp = set(x.coeffs)
    for a in enumerate_admissible_sets(x.kind, max(depth, 1)):
        total = sum((abs(x.coeffs.get(t, ZERO)) for t in a.nodes), ZERO)
        tail = x.tails.get(a.end, ZERO) if a.kind is SetKind.BRANCH else ZERO
        if total + abs(tail) != target:
            continue
        trace = frozenset(a.nodes & supp)
        if tail:
            infinite[a.end] = BranchFamily(tuple(ordered(trace)), a.end, tail)
        elif trace:
            finite.add(trace)
    return _sort_sets(_minimal(finite)), [infinite[u] for u in ordered(infinite)]


def all_minimal_sets(x, backend=None, mode: str = "exhaustive", depth: int | None = None):
    """``M(x)``: finite members exactly, infinite members as branch families.

    Sequences use exhaustive subset search (``mode="exhaustive"``, capped at
    twenty support points) or the pruned removal search (``mode="pruned"``).
    Tree vectors are handled through the traces of norming admissible sets,
    which is exact for 0/1 norm rows.
    """
    if mode not in ("exhaustive", "pruned"):
        raise ConfigurationError(f"unknown mode {mode!r}")
    sp = _Space(x, backend)
    target = sp.norm()
    if target == 0:
        return MinimalSetReport([], [], depth, False, sp.x)
    if not sp.tree:
        search = _exhaustive_search if mode == "exhaustive" else _pruned_search
        return MinimalSetReport(search(sp, target), [], None, False, sp.x)
    v = sp.x
    d = max(v.depth, 1, depth or 0)
    if v.tails:
        v = v.expand(d)
    finite, infinite = _tree_traces(v, d)
    return MinimalSetReport(finite, infinite, d, bool(infinite) and v.kind.value == "M", v)


# -- families and the gap -------------------------------------------------

def minimal_transversals(sets):
    """Inclusion-minimal hitting sets (Berge's sequential algorithm)."""
    current = [frozenset()]
    for A in sets:
        nxt = set()
        for T in current:
            if T & A:
                nxt.add(T)
            else:
                for a in A:
                    nxt.add(T | {a})
        current = _minimal(nxt)
    return _sort_sets(current)


@dataclass
class FamilyReport:
    n: int
    F: list
    G: list
    transversals: list
    E: list | None
    gamma: Fraction
    worst: frozenset
    depth: int | None = None
    vector: object = None


def _working_vector(x, n):
    """Expand tails so that every anchored branch has ``n`` explicit support nodes."""
    if not isinstance(x, TreeVector) or not x.tails:
        return x, (max(x.depth, 1) if isinstance(x, TreeVector) else None)
    d = max(x.depth, max(len(u) for u in x.tails) + n, 1)
    return x.expand(d), d


def families(x, backend=None, n: int = 1, materialize_limit: int = MATERIALIZE_LIMIT):
    if n < 1:
        raise ValueError("n must be positive")
    sp = _Space(x, backend)
    if sp.norm() != 1:
        raise NormalizationError(f"expected a unit vector, norm is {sp.norm()}")
    v, depth = _working_vector(sp.x, n)
    report = all_minimal_sets(v, sp.backend, depth=depth)
    heads = [D.prefix(n) for D in report.infinite]
    F = [A for A in report.finite if not any(h <= A for h in heads)]
    G = _sort_sets(set(F) | set(heads))
    T = minimal_transversals(G)
    wsp = _Space(v, sp.backend)
    worst, best = None, None
    for E in T:
        value = wsp.without(E)
        if best is None or value > best:
            worst, best = E, value
    gamma = 1 - best
    if gamma <= 0:
        raise VerificationError("hitting set leaves the norm intact")
    union = frozenset().union(*G) if G else frozenset()
    E_all = None
    if len(union) <= materialize_limit:
        E_all = []
        for k in range(1, len(union) + 1):
            for combo in combinations(ordered(union), k):
                S = frozenset(combo)
                if all(S & A for A in G):
                    E_all.append(S)
    return FamilyReport(n, F, G, T, E_all, gamma, worst, depth, v)


# -- weak neighbourhoods --------------------------------------------------

def _ball_for(sp: _Space, depth=None, dimension=None):
    if sp.tree:
        d = max(sp.x.depth, 1, depth or 0)
        coords, rows = tree_objective(sp.x, d)
        return tree_ball(sp.x.kind, d), coords, rows, d
    if dimension is None:
        if isinstance(sp.backend, Lorentz):
            dimension = len(sp.backend.weights)
        else:
            dimension = max(sp.values, default=0) + 1
    if sp.values and max(sp.values) > dimension:
        raise ConfigurationError("dimension does not cover the support")
    ball = sequence_ball(sp.backend, dimension)
    return ball, dict(sp.values), [(r, ZERO) for r in ball.rows], dimension


@dataclass
class WeakNbhdReport:
    E: frozenset
    tolerance: Fraction
    delta: Fraction
    bound: Fraction
    verified_max: Fraction
    witness: dict
    size: int


def weak_nbhd_bound(x, backend=None, depth=None, dimension=None) -> WeakNbhdReport:
    """Weak neighbourhood ``W`` of ``x`` with ``sup ||x - y|| <= 2 - delta`` on ``W``.

    ``W`` restricts the coordinates in ``E = U A(1)`` (``A`` over ``M(x)``) to
    within half the smallest of them; ``delta = gamma_1 / 2``.
    """
    fam = families(x, backend, 1)
    sp = _Space(fam.vector, backend)
    report = all_minimal_sets(fam.vector, sp.backend, depth=fam.depth)
    E = frozenset().union(*report.prefixes(1))
    tol = min(abs(sp.values[k]) for k in E) / 2
    delta = fam.gamma / 2
    bound = 2 - delta
    ball, coords, rows, size = _ball_for(sp, depth or fam.depth, dimension)
    boxes = {i: (sp.values[i] - tol, sp.values[i] + tol) for i in E}
    result = sup_distance(coords, ball, rows, boxes=boxes)
    if result.value > bound:
        raise VerificationError(f"weak neighbourhood reaches {result.value} > {bound}")
    return WeakNbhdReport(E, tol, delta, bound, result.value, result.witness, size)


# -- delta-point refutation -----------------------------------------------

def norming_functional(sp: _Space, A) -> NormedFunctional:
    """``x_A^*``: positive on ``A`` (with the signs of ``x``) and ``x_A^*(P_A x) = ||x||``."""
    A = ordered(A)
    if isinstance(sp.backend, Lorentz):
        by_size = sorted(A, key=lambda i: (-abs(sp.values[i]), _key(i)))
        row = {i: w * sp.sign(i) for i, w in zip(by_size, sp.backend.weights)}
    else:
        row = {i: Fraction(sp.sign(i)) for i in A}
    return NormedFunctional.from_row(row)


@dataclass
class RefutationCertificate:
    functional: NormedFunctional
    slice_functional: NormedFunctional
    slice_delta: Fraction
    threshold: Fraction          # the slice is {y : z*(y) > threshold}
    eta: Fraction
    n: int
    gamma: Fraction
    bound: Fraction
    verified_max: Fraction
    witness: dict
    size: int                    # tree depth or sequence dimension of the finite model
    F: list = field(default_factory=list)

    @property
    def slice_radius(self):
        return self.functional.claimed_norm - self.threshold


def _hypothesis_ii(sp, ball, phi, level, heads, eta):
    """No point of the ball with ``phi > level`` misses the ``eta``-condition on a head."""
    for D in heads:
        boxes = {}
        for i in D:
            bound = eta * abs(sp.values[i])
            boxes[i] = (None, bound) if sp.sign(i) > 0 else (-bound, None)
        value, _ = max_linear(phi.coeffs, ball, boxes=boxes)
        if value > level:
            return False
    return True


def delta_refutation(x, backend=None, functional: NormedFunctional | None = None,
                     delta=None, eta=None, n: int | None = None,
                     depth=None, dimension=None) -> RefutationCertificate:
    """Certificate that ``x`` is not a delta-point.

    Default slice: ``{y : sgn(x_s) y_s > |x_s| / 2}`` where ``s`` is the largest
    index of a coordinate of maximal modulus.
    """
    sp = _Space(x, backend)
    if sp.norm() != 1:
        raise NormalizationError(f"expected a unit vector, norm is {sp.norm()}")
    if sp.has_tails:
        sp = _Space(sp.x.expand(max(len(u) for u in sp.x.tails) + 1), sp.backend)
    if functional is None:
        top = max(abs(v) for v in sp.values.values())
        s = max((i for i, v in sp.values.items() if abs(v) == top), key=_key)
        functional = NormedFunctional.from_row({s: sp.sign(s)}, claimed=1)
        delta = 1 - top / 2
    if functional.claimed_norm != 1:
        raise ConfigurationError("slice functional must have norm one")
    delta = Fraction(delta)
    functional.check(sp.backend)
    if not functional(sp.x) > 1 - delta:
        raise NotApplicable("x is not in the slice")
    if eta is None:
        eta = 1 - delta
    eta = Fraction(eta)
    if not 0 < eta <= 1 - delta:
        raise ConfigurationError("eta must lie in (0, 1 - delta]")
    candidates = [n] if n is not None else list(range(1, _max_n(sp) + 1))
    chosen = None
    for k in candidates:
        fam = families(sp.x, sp.backend, k)
        wsp = _Space(fam.vector, sp.backend)
        rep = all_minimal_sets(fam.vector, sp.backend, depth=fam.depth)
        heads = [D.prefix(k) for D in rep.infinite]
        ball, coords, rows, size = _ball_for(wsp, depth or fam.depth, dimension)
        if _hypothesis_ii(wsp, ball, functional, 1 - delta, heads, eta):
            chosen = (k, fam, wsp, ball, coords, rows, size)
            break
    if chosen is None:
        raise NotApplicable("no n satisfies the slice hypothesis for this functional")
    k, fam, wsp, ball, coords, rows, size = chosen
    parts = [norming_functional(wsp, A) for A in fam.F] + [functional]
    z = NormedFunctional.average(parts)
    m = len(fam.F)
    threshold = 1 - delta / (m + 1)
    if not z(wsp.x) > threshold:
        raise VerificationError("x is not in the averaged slice")
    z.claimed_norm, z.witness = max_linear(z.coeffs, ball)
    z.witness = _as_vector(wsp, z.witness)
    bound = 2 - eta * fam.gamma
    result = sup_distance(coords, ball, rows, ge=[(z.coeffs, threshold)])
    if result.value > bound:
        raise VerificationError(f"slice reaches {result.value} > {bound}")
    return RefutationCertificate(z, functional, delta, threshold, eta, k, fam.gamma, bound,
                                 result.value, result.witness, size, fam.F)


def _as_vector(sp, values):
    if sp.tree:
        return TreeVector(sp.x.kind, values)
    return dict(values)


def _max_n(sp):
    if not sp.has_tails:
        return 1
    return max(len(u) for u in sp.x.tails) + sp.x.depth + 2
