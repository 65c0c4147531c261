"""Polyhedral models of the unit balls and exact distance maximization.

Every norm here is ``max_r sum_i r_i |v_i|`` over finitely many nonnegative
rows ``r``.  The supremum of ``||x - y||`` over ``y`` in the ball cut by linear
constraints is a maximum of linear programs, one per row and sign pattern.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .errors import EmptySlice, InfeasibleProgram
from .lp import Region
from .spaces import TreeNorm, TreeVector, as_sequence
from .tree import SetKind, TreeKind, enumerate_admissible_sets, nodes_upto, rank_key

ZERO = Fraction(0)


@dataclass(frozen=True)
class Polytope:
    """Unit ball ``{y : sum_i r_i |y_i| <= 1 for every row}``."""

    coords: tuple
    rows: tuple  # tuple of dicts coord -> positive Fraction

    def norm(self, values: Mapping) -> Fraction:
        return max((sum((c * abs(values.get(i, 0)) for i, c in r.items()), ZERO)
                    for r in self.rows), default=ZERO)


def tree_ball(kind, depth: int) -> Polytope:
    kind = TreeKind.parse(kind)
    rows = tuple({t: Fraction(1) for t in a.nodes} for a in enumerate_admissible_sets(kind, depth))
    return Polytope(tuple(nodes_upto(kind, depth)), rows)


def sequence_ball(backend, n: int) -> Polytope:
    coords = tuple(range(1, n + 1))
    return Polytope(coords, tuple(backend.rows(coords)))


def tree_objective(x: TreeVector, depth: int):
    """Coordinates of ``x`` at ``depth`` and its norm rows with tail offsets."""
    if x.depth > depth:
        raise ValueError("depth must cover the support and tail anchors of x")
    w = x.expand(depth) if x.tails else x
    rows = []
    for a in enumerate_admissible_sets(x.kind, max(depth, 1)):
        off = abs(w.tails.get(a.end, ZERO)) if a.kind is SetKind.BRANCH else ZERO
        rows.append(({t: Fraction(1) for t in a.nodes}, off))
    return dict(w.coeffs), rows


@dataclass
class DistanceResult:
    value: Fraction
    witness: dict
    row: dict
    signs: dict
    programs: int = 0


@dataclass
class _Problem:
    ball: Polytope
    ge: list           # (coeffs, rhs) constraints coeffs.y >= rhs
    boxes: dict        # coord -> (lo, hi), either may be None
    cache: dict = field(default_factory=dict)
    regions: dict = field(default_factory=dict)
    solved: int = 0

    def constrained(self):
        out = set(self.boxes)
        for coeffs, _ in self.ge:
            out.update(i for i, c in coeffs.items() if c)
        return out

    def fixed_value(self, i):
        lo, hi = self.boxes.get(i, (None, None))
        if lo is not None and lo > 0:
            return lo
        if hi is not None and hi < 0:
            return hi
        return ZERO

    def _region(self, active: tuple):
        """Constraint system in the split variables ``y = p - q`` over ``active``."""
        if active in self.regions:
            return self.regions[active]
        index = {i: k for k, i in enumerate(active)}
        n = len(active)
        fixed = {i: self.fixed_value(i) for i in self.ball.coords if i not in index}
        rows = {}
        for r in self.ball.rows:
            used = sum((c * abs(fixed.get(i, ZERO)) for i, c in r.items() if i not in index), ZERO)
            vec = [ZERO] * (2 * n)
            for i, c in r.items():
                k = index.get(i)
                if k is not None:
                    vec[k] = c
                    vec[n + k] = c
            key = tuple(vec)
            rhs = 1 - used
            if key not in rows or rhs < rows[key]:
                rows[key] = rhs
        A, b = [], []
        for key, rhs in rows.items():
            if not any(key):
                if rhs < 0:
                    raise InfeasibleProgram("fixed coordinates leave the ball")
                continue
            A.append(list(key))
            b.append(rhs)
        for coeffs, rhs in self.ge:
            vec = [ZERO] * (2 * n)
            for i, c in coeffs.items():
                if i in index:
                    vec[index[i]] -= c
                    vec[n + index[i]] += c
                else:
                    rhs -= c * fixed.get(i, ZERO)
            A.append(vec)
            b.append(-rhs)
        for i, (lo, hi) in self.boxes.items():
            k = index.get(i)
            if k is None:
                continue
            if hi is not None:
                vec = [ZERO] * (2 * n)
                vec[k], vec[n + k] = Fraction(1), Fraction(-1)
                A.append(vec)
                b.append(hi)
            if lo is not None:
                vec = [ZERO] * (2 * n)
                vec[k], vec[n + k] = Fraction(-1), Fraction(1)
                A.append(vec)
                b.append(-lo)
        entry = (index, fixed, Region(A, b, n=2 * n))
        self.regions[active] = entry
        return entry

    def maximize(self, objective: Mapping, extra_active=()):
        """Max of ``objective . y`` over the constrained ball."""
        active = tuple(sorted(set(i for i, c in objective.items() if c) | set(extra_active),
                              key=_key))
        index, fixed, region = self._region(active)
        n = len(active)
        c = [ZERO] * (2 * n)
        for i, v in objective.items():
            if v:
                c[index[i]] = Fraction(v)
                c[n + index[i]] = -Fraction(v)
        key = (active, tuple(c))
        if key in self.cache:
            value, sol = self.cache[key]
        else:
            self.solved += 1
            value, sol = region.maximize(c)
            self.cache[key] = (value, sol)
        y = {i: sol[k] - sol[n + k] for i, k in index.items()}
        for i, f in fixed.items():
            if f:
                y[i] = f
        return value, {i: v for i, v in y.items() if v}


def _key(i):
    return rank_key(i) if isinstance(i, str) else (0, i)


def sup_distance(x: Mapping, ball: Polytope, objective_rows: Sequence,
                 ge: Sequence = (), boxes: Mapping | None = None) -> DistanceResult:
    """Exact ``max ||x - y||`` over ``y`` in ``ball`` meeting the constraints.

    ``objective_rows`` lists ``(row, offset)`` pairs describing ``||x - y||``
    as ``max_r sum r_i |x_i - y_i| + offset_r`` (offsets carry tails of ``x``
    beyond the ball's coordinates).  ``ge`` holds constraints ``c . y >= b``
    and ``boxes`` maps coordinates to ``(lo, hi)`` bounds.
    """
    prob = _Problem(ball, [(dict(c), Fraction(b)) for c, b in ge], dict(boxes or {}))
    constrained = prob.constrained()
    candidates = []
    for row, off in objective_rows:
        free = []
        base = {}
        for i in sorted(row, key=_key):
            if i in constrained:
                free.append(i)
            else:
                base[i] = 1 if x.get(i, ZERO) >= 0 else -1
        for pattern in product((1, -1), repeat=len(free)):
            sigma = dict(base)
            sigma.update(zip(free, pattern))
            lin = sum((row[i] * sigma[i] * x.get(i, ZERO) for i in row), ZERO)
            candidates.append((lin + off + 1, lin + off, row, sigma))
    if len(candidates) > 4 * len(constrained):
        candidates = _tighten(prob, constrained, candidates)
    candidates.sort(key=lambda c: -c[0])
    best = None
    for upper, const, row, sigma in candidates:
        if best is not None and upper <= best.value:
            break
        objective = {i: -row[i] * sigma[i] for i in row}
        try:
            value, y = prob.maximize(objective, constrained)
        except InfeasibleProgram:
            raise EmptySlice("the constraints leave no point of the ball") from None
        total = const + value
        if best is None or total > best.value:
            best = DistanceResult(total, y, row, sigma)
    if best is None:
        raise EmptySlice("no objective rows")
    best.programs = prob.solved
    return best


def _tighten(prob: _Problem, constrained, candidates):
    """Sharper upper bounds from the range of each constrained coordinate."""
    ranges = {}
    try:
        for i in constrained:
            hi, _ = prob.maximize({i: 1}, constrained)
            lo, _ = prob.maximize({i: -1}, constrained)
            ranges[i] = (-lo, hi)
    except InfeasibleProgram:
        raise EmptySlice("the constraints leave no point of the ball") from None
    reach = {}
    for r in prob.ball.rows:
        for i, c in r.items():
            reach[i] = max(reach.get(i, ZERO), c)
    out = []
    for upper, const, row, sigma in candidates:
        part = ZERO
        for i, c in row.items():
            if i in ranges:
                lo, hi = ranges[i]
                part += max(-c * sigma[i] * lo, -c * sigma[i] * hi)
            elif reach.get(i):
                part += c / reach[i]
            else:
                part = Fraction(1)
                break
        out.append((const + min(part, Fraction(1)), const, row, sigma))
    return out


def max_linear(objective: Mapping, ball: Polytope, ge: Sequence = (), boxes=None):
    """Exact ``max objective . y`` over the constrained ball, with a maximizer."""
    prob = _Problem(ball, [(dict(c), Fraction(b)) for c, b in ge], dict(boxes or {}))
    try:
        return prob.maximize(objective, prob.constrained())
    except InfeasibleProgram:
        raise EmptySlice("the constraints leave no point of the ball") from None


def distance_rows(x: Mapping, y: Mapping, rows: Sequence) -> Fraction:
    keys = set(x) | set(y)
    return max(sum((r.get(i, ZERO) * abs(x.get(i, ZERO) - y.get(i, ZERO)) for i in keys), ZERO) + off
               for r, off in rows)
