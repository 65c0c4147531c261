"""Explicit constructions on the rootless tree.

Convex decompositions into sign vectors on unit antichains, the shift
operators, the standard vectors, Daugavet-points inside weak neighbourhoods,
and decompositions of the ball into Daugavet-points that norm every branch.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import (CapacityError, ConfigurationError, DepthExceeded, NotInBall,
                     PreconditionError, VerificationError)
from .functionals import NormedFunctional
from .points import DaugavetCertificate, daugavet_check, geometric, z_vector
from .spaces import TreeVector, frac, norm
from .tree import (TreeKind, children, is_unit_antichain, nodes_at_depth, path,
                   sort_nodes)

ZERO = Fraction(0)


@dataclass(frozen=True)
class FElement:
    """Sign vector on a unit antichain (or the zero vector)."""

    signs: tuple  # ((node, +1 | -1), ...) in rank order

    @classmethod
    def from_vector(cls, v: TreeVector) -> "FElement":
        if v.tails or any(abs(c) != 1 for c in v.coeffs.values()):
            raise ValueError("not a sign vector")
        if v.coeffs and not is_unit_antichain(v.coeffs, v.kind):
            raise ValueError("support is not a unit antichain")
        return cls(tuple((t, int(v.coeffs[t])) for t in sort_nodes(v.coeffs)))

    def vector(self, kind=TreeKind.M) -> TreeVector:
        return TreeVector(kind, dict(self.signs))

    @property
    def support(self):
        return frozenset(t for t, _ in self.signs)


@dataclass
class ConvexDecomposition:
    terms: list                  # [(weight, TreeVector)]
    target: TreeVector
    certificates: list = field(default_factory=list)

    def recombine(self) -> TreeVector:
        coeffs, tails = {}, {}
        for lam, z in self.terms:
            for part, acc in ((z.coeffs, coeffs), (z.tails, tails)):
                for t, c in part.items():
                    acc[t] = acc.get(t, ZERO) + lam * c
        if not tails:
            return TreeVector(self.target.kind, coeffs)
        # tails anchored at different depths must be merged by the vector sum
        total = TreeVector(self.target.kind, coeffs)
        for t, a in tails.items():
            total = total + TreeVector(self.target.kind, {}, {t: a})
        return total

    def check(self) -> None:
        if any(lam <= 0 for lam, _ in self.terms):
            raise VerificationError("non-positive weight")
        if sum(lam for lam, _ in self.terms) != 1:
            raise VerificationError("weights do not sum to 1")
        if self.recombine() != self.target:
            raise VerificationError("terms do not recombine to the target")


def decompose_into_F(y: TreeVector) -> ConvexDecomposition:
    """Write a finitely supported ``y`` in the unit ball as a convex combination
    of sign vectors on unit antichains contained in ``supp(y)``.

    Sibling pairs are added in shortlex order.  Terms vanishing on the path to
    the current parent absorb the new pair with weights proportional to
    ``a0``, ``a1`` and the slack ``c``.
    """
    if y.kind is not TreeKind.M:
        raise PreconditionError("the decomposition is for the rootless tree")
    if y.tails:
        raise CapacityError("infinitely supported vectors cannot be decomposed finitely")
    if norm(y) > 1:
        raise NotInBall(f"norm {norm(y)} exceeds 1")
    a = y.abs()
    terms = [(Fraction(1), frozenset())]
    depth = y.depth
    for k in range(0, depth):
        for t in nodes_at_depth(k):
            c0, c1 = children(t)
            a0, a1 = a.coeffs.get(c0, ZERO), a.coeffs.get(c1, ZERO)
            if not a0 and not a1:
                continue
            seg = set(path(t, TreeKind.M))
            hit = [(lam, z) for lam, z in terms if z & seg]
            free = [(lam, z) for lam, z in terms if not (z & seg)]
            sI = sum((lam for lam, _ in free), ZERO)
            c = sI - a0 - a1
            if c < 0:
                raise VerificationError("slack became negative; input outside the ball")
            new = hit
            for lam, z in free:
                for weight, piece in ((a0, z | {c0}), (a1, z | {c1}), (c, z)):
                    if weight:
                        new.append((lam * weight / sI, piece))
            merged = {}
            for lam, z in new:
                merged[z] = merged.get(z, ZERO) + lam
            terms = [(lam, z) for z, lam in merged.items()]
    sign = {t: (1 if v > 0 else -1) for t, v in y.coeffs.items()}
    out = []
    for lam, z in sorted(terms, key=lambda p: (len(p[1]), sort_nodes(p[1]))):
        out.append((lam, TreeVector(TreeKind.M, {t: sign[t] for t in z})))
    dec = ConvexDecomposition(out, y)
    dec.check()
    return dec


def shift(t0: str, v: TreeVector) -> TreeVector:
    """``S_{t0}``: move the coefficient at ``t`` to ``t0 + t``."""
    return TreeVector(v.kind, {t0 + t: c for t, c in v.coeffs.items()},
                      {t0 + u: a for u, a in v.tails.items()})


def L(v: TreeVector) -> TreeVector:
    """Keep the ``(0)``-subtree and move the ``(1)``-subtree under ``(1,0)``."""
    def move(t):
        return t if t.startswith("0") else "10" + t[1:]
    return TreeVector(v.kind, {move(t): c for t, c in v.coeffs.items()},
                      {move(u): a for u, a in v.tails.items()})


def standard_vector(name: str, depth: int | None = None) -> TreeVector:
    """``xB``, ``g``, ``w``, ``z(<node>)`` or ``yN(<N>)``; ``depth`` expands tails."""
    name = name.strip()
    if name == "xB":
        v = geometric(TreeKind.B)
    elif name == "g":
        v = geometric(TreeKind.M)
    elif name == "w":
        v = L(geometric(TreeKind.M))
    elif m := re.fullmatch(r"z\(([01]*|ε)\)", name):
        t = "" if m.group(1) == "ε" else m.group(1)
        v = z_vector(t)
    elif m := re.fullmatch(r"yN\((\d+)\)", name):
        N = int(m.group(1))
        v = TreeVector(TreeKind.B, {t: Fraction(1, 1 << k) for k in range(1, N + 1)
                                    for t in nodes_at_depth(k)})
    else:
        raise ConfigurationError(f"unknown standard vector {name!r}")
    if depth is not None and v.tails:
        v = v.expand(depth)
    return v


# -- Daugavet-points in weak neighbourhoods --------------------------------

@dataclass
class DaugavetifyResult:
    x: TreeVector
    m: int
    mu: dict                     # t -> mu_t for t in N
    anchors: dict                # t -> b_t
    gaps: list                   # |phi_i(y - x)| per functional
    certificate: object


def _path_mass(y: TreeVector, t: str) -> Fraction:
    return sum((abs(y.coeffs.get(s, ZERO)) for s in path(t, y.kind)), ZERO)


def daugavetify(y: TreeVector, functionals: Sequence[NormedFunctional], eps,
                max_depth: int = 16) -> DaugavetifyResult:
    """A Daugavet-point ``x = y + sum mu_t S_{b_t}(g)`` with ``|phi(y - x)| < eps``."""
    eps = frac(eps)
    if eps <= 0:
        raise ConfigurationError("eps must be positive")
    if y.kind is not TreeKind.M:
        raise PreconditionError("the construction is for the rootless tree")
    if y.tails:
        raise CapacityError("y must be finitely supported")
    if norm(y) > 1:
        raise NotInBall(f"norm {norm(y)} exceeds 1")
    m = max(y.depth, 1)
    bound = eps / (1 << m)
    mu, anchors = {}, {}
    for t in nodes_at_depth(m):
        mass = 1 - _path_mass(y, t)
        if mass <= 0:
            continue
        mu[t] = mass
        b = None
        for k in range(1, max_depth - m + 1):
            cand = t + "0" * (k - 1) + "1"
            sg = TreeVector(TreeKind.M, {}, {cand: 1})
            if all(abs(phi(sg)) < bound for phi in functionals):
                b = cand
                break
        if b is None:
            deepest = max((len(s) for phi in functionals for s in phi.coeffs), default=m)
            raise DepthExceeded(f"no anchor below {t} within depth {max_depth}",
                                needed=deepest + 1)
        anchors[t] = b
    x = TreeVector(TreeKind.M, y.coeffs, {anchors[t]: mu[t] for t in anchors})
    if norm(x) != 1:
        raise VerificationError("constructed vector is not a unit vector")
    gaps = [abs(phi(y - x)) for phi in functionals]
    if any(gap >= eps for gap in gaps):
        raise VerificationError("constructed vector left the weak neighbourhood")
    cert = daugavet_check(x)
    if not isinstance(cert, DaugavetCertificate):
        raise VerificationError(f"constructed vector was refuted: {cert}")
    return DaugavetifyResult(x, m, mu, anchors, gaps, cert)


def decompose_into_DB(y: TreeVector) -> ConvexDecomposition:
    """Convex combination of Daugavet-points that norm every branch.

    Each term ``z`` of the decomposition into sign vectors is split as
    ``(z + x_z)/2 + (z - x_z)/2`` where ``x_z`` hangs a shifted copy of the
    geometric vector below every depth-``m`` node with no ``z``-mass above it.
    """
    base = decompose_into_F(y)
    terms, certs = [], []
    for lam, z in base.terms:
        m = max(z.depth, 1)
        free = [t for t in nodes_at_depth(m) if _path_mass(z, t) == 0]
        xk = TreeVector(TreeKind.M, {}, {t: 1 for t in free})
        for piece in (z + xk, z - xk):
            cert = daugavet_check(piece)
            if not (isinstance(cert, DaugavetCertificate) and cert.method == "AllBranchesNorm"):
                raise VerificationError("term is not certified by branch norms")
            terms.append((lam / 2, piece))
            certs.append(cert)
    dec = ConvexDecomposition(terms, y, certs)
    dec.check()
    return dec
