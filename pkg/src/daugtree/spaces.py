"""Exact norms on the tree spaces and on classical sequence spaces.

Tree vectors are finitely supported coefficient maps that may carry
geometric-half tails: a tail of amplitude ``a`` anchored at ``u`` puts the
coefficient ``a * 2**-(|v| - |u|)`` on every strict descendant ``v`` of ``u``.
Along any branch through ``u`` the tail has l1 mass ``|a|``, and so does any
lambda-segment hanging off ``u``'s children, which keeps the norm computable
exactly by a sweep over the explicit nodes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Iterable, Mapping, Sequence

from .errors import ConfigurationError, InvalidNode
from .tree import (
    ROOT,
    TreeKind,
    check_node,
    children,
    comparable,
    enumerate_admissible_sets,
    is_admissible,
    nodes_at_depth,
    parent,
    precedes,
    sort_nodes,
)


def frac(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'p/q' string")
    return Fraction(value)


def _clean(mapping) -> dict:
    out = {}
    for key, value in (mapping or {}).items():
        value = frac(value)
        if value:
            out[key] = value
    return out


class TreeVector:
    """Immutable tree vector with optional geometric-half tails."""

    __slots__ = ("kind", "coeffs", "tails")

    def __init__(self, kind, coeffs=None, tails=None):
        kind = TreeKind.parse(kind)
        coeffs = _clean(coeffs)
        tails = _clean(tails)
        for t in coeffs:
            check_node(t, kind)
        for u in tails:
            if u == ROOT and kind is TreeKind.M:
                # the rootless tree has no root to anchor at
                raise InvalidNode("tail anchor must be a node of the tree")
            if not isinstance(u, str) or any(c not in "01" for c in u):
                raise InvalidNode(f"not a node: {u!r}")
        anchors = list(tails)
        for i, u in enumerate(anchors):
            for w in anchors[i + 1:]:
                if comparable(u, w):
                    raise InvalidNode(f"tail anchors {u!r} and {w!r} are comparable")
        for t in coeffs:
            for u in anchors:
                if t != u and t.startswith(u):
                    raise InvalidNode(f"coefficient at {t!r} lies below tail anchor {u!r}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "tails", tails)

    def __setattr__(self, name, value):
        raise AttributeError("TreeVector is immutable")

    # -- basic structure -------------------------------------------------
    @classmethod
    def zero(cls, kind):
        return cls(kind)

    @classmethod
    def basis(cls, kind, t, value=1):
        return cls(kind, {t: value})

    @property
    def is_finite(self) -> bool:
        return not self.tails

    @property
    def depth(self) -> int:
        """Largest depth carrying an explicit coefficient or a tail anchor."""
        nodes = list(self.coeffs) + list(self.tails)
        return max((len(t) for t in nodes), default=0)

    def support(self) -> list[str]:
        return sort_nodes(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs or self.tails)

    def coefficient(self, t: str) -> Fraction:
        if t in self.coeffs:
            return self.coeffs[t]
        for u, a in self.tails.items():
            if len(t) > len(u) and t.startswith(u):
                return a / (1 << (len(t) - len(u)))
        return Fraction(0)

    def expand(self, depth: int) -> "TreeVector":
        """Same vector with every tail anchor pushed down to ``depth``."""
        coeffs = dict(self.coeffs)
        tails = {}
        for u, a in self.tails.items():
            if len(u) >= depth:
                tails[u] = a
                continue
            for k in range(1, depth - len(u) + 1):
                scale = Fraction(1, 1 << k)
                for s in nodes_at_depth(k):
                    coeffs[u + s] = a * scale
            scale = Fraction(1, 1 << (depth - len(u)))
            for s in nodes_at_depth(depth - len(u)):
                tails[u + s] = a * scale
        return TreeVector(self.kind, coeffs, tails)

    def aligned(self, other: "TreeVector"):
        if self.kind is not other.kind:
            raise ValueError("vectors live on different trees")
        if not self.tails and not other.tails:
            return self, other
        d = max(self.depth, other.depth)
        return self.expand(d), other.expand(d)

    # -- linear structure ------------------------------------------------
    def _combine(self, other, sign):
        a, b = self.aligned(other)
        coeffs = dict(a.coeffs)
        for t, v in b.coeffs.items():
            coeffs[t] = coeffs.get(t, 0) + sign * v
        tails = dict(a.tails)
        for u, v in b.tails.items():
            tails[u] = tails.get(u, 0) + sign * v
        return TreeVector(self.kind, coeffs, tails)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "TreeVector":
        c = frac(c)
        return TreeVector(self.kind,
                          {t: c * v for t, v in self.coeffs.items()},
                          {u: c * v for u, v in self.tails.items()})

    __rmul__ = scale

    def __mul__(self, c):
        return self.scale(c)

    def abs(self) -> "TreeVector":
        return TreeVector(self.kind,
                          {t: abs(v) for t, v in self.coeffs.items()},
                          {u: abs(v) for u, v in self.tails.items()})

    def __eq__(self, other):
        if not isinstance(other, TreeVector) or other.kind is not self.kind:
            return NotImplemented
        a, b = self.aligned(other)
        return a.coeffs == b.coeffs and a.tails == b.tails

    def __hash__(self):
        raise TypeError("TreeVector is not hashable")

    def __repr__(self):
        parts = [f"{t or 'ε'}:{v}" for t, v in sorted(self.coeffs.items(), key=lambda kv: (len(kv[0]), kv[0]))]
        parts += [f"tail {u or 'ε'}:{v}" for u, v in sorted(self.tails.items())]
        return f"TreeVector({self.kind.value}; " + ", ".join(parts) + ")"

    def is_positive(self) -> bool:
        return all(v > 0 for v in self.coeffs.values()) and all(v > 0 for v in self.tails.values())


def path_sums(v: TreeVector) -> dict:
    """|v|-mass on the path down to each explicit node or anchor."""
    coeffs = v.coeffs
    out = {}
    for t in sort_nodes(set(coeffs) | set(v.tails)):
        above = ROOT if t == ROOT else None
        total = abs(coeffs.get(t, 0))
        # walk up to the nearest ancestor already summed
        s = t
        while s:
            s = s[:-1]
            if s in out:
                above = s
                break
            total += abs(coeffs.get(s, 0))
        if above is not None and above != t:
            total += out[above]
        out[t] = total
    return out


def _path_sum(v: TreeVector, sums: dict, t: str) -> Fraction:
    if t in sums:
        return sums[t]
    total = Fraction(0)
    s = t
    while True:
        if s in sums:
            return total + sums[s]
        total += abs(v.coeffs.get(s, 0))
        if not s:
            return total
        s = s[:-1]


def norm(v: TreeVector) -> Fraction:
    """Supremum over admissible sets of the l1 sum of ``|v|``."""
    sums = path_sums(v)
    best = Fraction(0)
    for t, s in sums.items():
        s += abs(v.tails.get(t, 0))
        if s > best:
            best = s
    if v.kind is TreeKind.M:
        seen = set()
        for t in v.coeffs:
            if not t:
                continue
            p = parent(t)
            if p in seen:
                continue
            seen.add(p)
            c0, c1 = children(p)
            value = abs(v.coeffs.get(c0, 0)) + abs(v.coeffs.get(c1, 0))
            if p:
                value += _path_sum(v, sums, p)
            if value > best:
                best = value
    return best


def project(v: TreeVector, nodes: Iterable[str], keep_tails: bool = False) -> TreeVector:
    """Coordinate projection onto ``nodes``; tails survive only with ``keep_tails``."""
    nodes = set(nodes)
    return TreeVector(v.kind,
                      {t: c for t, c in v.coeffs.items() if t in nodes},
                      v.tails if keep_tails else None)


def remove(v: TreeVector, nodes: Iterable[str]) -> TreeVector:
    """``v - P_E v``: zero the coefficients on ``nodes``, tails included."""
    nodes = set(nodes)
    if not nodes:
        return v
    deepest = max(len(t) for t in nodes)
    if any(len(t) > len(u) and t.startswith(u) for t in nodes for u in v.tails):
        v = v.expand(deepest)
    return TreeVector(v.kind,
                      {t: c for t, c in v.coeffs.items() if t not in nodes},
                      v.tails)


def apply_signs(v: TreeVector, signs: Mapping[str, int], tail_signs: Mapping[str, int] | None = None) -> TreeVector:
    """Coefficientwise sign change; unspecified nodes keep their sign."""
    tail_signs = tail_signs or {}
    for s in list(signs.values()) + list(tail_signs.values()):
        if s not in (1, -1):
            raise ValueError("signs must be +1 or -1")
    return TreeVector(v.kind,
                      {t: c * signs.get(t, 1) for t, c in v.coeffs.items()},
                      {u: a * tail_signs.get(u, 1) for u, a in v.tails.items()})


def sign_pattern(v: TreeVector):
    """Signs turning ``v`` into ``|v|`` (an involution)."""
    return ({t: (1 if c > 0 else -1) for t, c in v.coeffs.items()},
            {u: (1 if a > 0 else -1) for u, a in v.tails.items()})


def evaluate(functional: Mapping[str, Fraction], v: TreeVector) -> Fraction:
    """Action of a finitely supported dual vector on a tree vector."""
    return sum((c * v.coefficient(t) for t, c in functional.items()), Fraction(0))


# -- backends -------------------------------------------------------------

@dataclass(frozen=True)
class C0:
    name = "c0"

    def norm(self, values: Mapping) -> Fraction:
        return max((abs(frac(x)) for x in values.values()), default=Fraction(0))

    def rows(self, indices: Sequence):
        return [{i: Fraction(1)} for i in indices]

    def dominated(self, row: Mapping) -> bool:
        nonzero = [i for i, c in row.items() if c]
        return len(nonzero) <= 1 and all(abs(c) <= 1 for c in row.values())


@dataclass(frozen=True)
class L1:
    name = "l1"

    def norm(self, values: Mapping) -> Fraction:
        return sum((abs(frac(x)) for x in values.values()), Fraction(0))

    def rows(self, indices: Sequence):
        return [{i: Fraction(1) for i in indices}]

    def dominated(self, row: Mapping) -> bool:
        return all(abs(c) <= 1 for c in row.values())


@dataclass(frozen=True)
class Lorentz:
    """Lorentz sequence norm ``sum_i w_i x*_i`` for a non-increasing weight list."""

    weights: tuple = field(default=(Fraction(1),))
    name = "lorentz"

    def __post_init__(self):
        w = tuple(frac(x) for x in self.weights)
        if not w or w[0] != 1:
            raise ConfigurationError("Lorentz weights must start with 1")
        if any(x <= 0 for x in w):
            raise ConfigurationError("Lorentz weights must be positive")
        if any(w[i + 1] > w[i] for i in range(len(w) - 1)):
            raise ConfigurationError("Lorentz weights must be non-increasing")
        object.__setattr__(self, "weights", w)

    def _check_length(self, n):
        if n > len(self.weights):
            raise ConfigurationError(
                f"vector has {n} nonzero coordinates but only {len(self.weights)} weights")

    def norm(self, values: Mapping) -> Fraction:
        mags = sorted((abs(frac(x)) for x in values.values() if x), reverse=True)
        self._check_length(len(mags))
        return sum((w * m for w, m in zip(self.weights, mags)), Fraction(0))

    def rows(self, indices: Sequence):
        indices = list(indices)
        self._check_length(len(indices))
        w = self.weights[:len(indices)]
        return [dict(zip(perm, w)) for perm in permutations(indices)]

    def dominated(self, row: Mapping) -> bool:
        mags = sorted((abs(c) for c in row.values() if c), reverse=True)
        if len(mags) > len(self.weights):
            return False
        return all(m <= w for m, w in zip(mags, self.weights))


@dataclass(frozen=True)
class TreeNorm:
    kind: TreeKind
    name = "tree"

    def __post_init__(self):
        object.__setattr__(self, "kind", TreeKind.parse(self.kind))

    def norm(self, values) -> Fraction:
        if isinstance(values, TreeVector):
            return norm(values)
        return norm(TreeVector(self.kind, values))

    def rows_at(self, depth: int):
        return [{t: Fraction(1) for t in a.nodes}
                for a in enumerate_admissible_sets(self.kind, max(depth, 1))]

    def rows(self, indices: Sequence):
        depth = max((len(t) for t in indices), default=1)
        return self.rows_at(depth)

    def dominated(self, row: Mapping) -> bool:
        nodes = [t for t, c in row.items() if c]
        return all(abs(c) <= 1 for c in row.values()) and (not nodes or is_admissible(nodes, self.kind))


def parse_backend(spec: str):
    """``c0``, ``l1``, ``lorentz:1,1/2,1/4`` or ``tree:B`` / ``tree:M``."""
    name, _, arg = spec.partition(":")
    name = name.strip().lower()
    if name == "c0":
        return C0()
    if name in ("l1", "ell1"):
        return L1()
    if name == "lorentz":
        return Lorentz(tuple(Fraction(x) for x in arg.split(",") if x.strip()))
    if name == "tree":
        return TreeNorm(TreeKind.parse(arg or "M"))
    raise ConfigurationError(f"unknown backend {spec!r}")


def as_sequence(x) -> dict:
    """1-based coordinate map for a finite sequence."""
    if isinstance(x, Mapping):
        return _clean(x)
    return _clean({i + 1: v for i, v in enumerate(x)})


def backend_norm(x, backend) -> Fraction:
    if isinstance(x, TreeVector):
        return norm(x)
    return backend.norm(as_sequence(x))


def norming_sets(v, backend=None) -> list[frozenset]:
    """Maximal index sets on which the defining l1-type sum reaches the norm.

    For tree vectors the sets are admissible sets at the working depth (tails
    expanded one level below the deepest anchor so that a norming branch is
    reported through its anchor).  For sequence backends the rows of the
    polyhedral description play the role of admissible sets.
    """
    if isinstance(v, TreeVector):
        if not v:
            return []
        w = v.expand(v.depth) if v.tails else v
        depth = max(w.depth, 1)
        target = norm(w)
        found = []
        for a in enumerate_admissible_sets(w.kind, depth):
            total = sum((abs(w.coeffs.get(t, 0)) for t in a.nodes), Fraction(0))
            if a.kind.value == "branch":
                total += abs(w.tails.get(a.end, 0))
            if total == target:
                found.append(frozenset(a.nodes))
        return _maximal(found)
    values = as_sequence(v)
    if not values:
        return []
    target = backend.norm(values)
    found = []
    for row in backend.rows(sorted(values)):
        if sum((c * abs(values.get(i, 0)) for i, c in row.items()), Fraction(0)) == target:
            found.append(frozenset(i for i, c in row.items() if c))
    return _maximal(found)


def _maximal(sets):
    unique = list(dict.fromkeys(sets))
    return [a for a in unique if not any(a < b for b in unique)]
