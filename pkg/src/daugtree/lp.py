"""Exact linear programming.

A two-phase tableau simplex over the integers: the tableau is kept
fraction-free with Bareiss updates, so every entry stays an integer and the
common denominator is the current basis determinant.  Bland's rule prevents
cycling.  Good for the small dense programs that polyhedral tree norms give.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Hashable, Mapping, Sequence

from .errors import InfeasibleProgram, UnboundedProgram


def _int_row(coeffs: Sequence[Fraction], rhs: Fraction):
    den = 1
    for c in coeffs:
        if c:
            den = lcm(den, Fraction(c).denominator)
    den = lcm(den, Fraction(rhs).denominator)
    return [int(Fraction(c) * den) for c in coeffs], int(Fraction(rhs) * den)


@dataclass
class _Tableau:
    rows: list          # constraint rows: [coefficients..., rhs]
    objs: list          # objective rows, same width
    basis: list         # basic column per constraint row
    d: int = 1

    def pivot(self, r: int, c: int):
        d = self.d
        prow = self.rows[r]
        p = prow[c]
        for row in self.rows + self.objs:
            if row is prow:
                continue
            f = row[c]
            if f:
                row[:] = [(a * p - f * v) // d for a, v in zip(row, prow)]
            elif p != d:
                row[:] = [a * p // d for a in row]
        self.d = p
        self.basis[r] = c
        if p < 0:
            for row in self.rows + self.objs:
                row[:] = [-a for a in row]
            self.d = -p

    def run(self, obj: int, allowed: int):
        """Bland's rule simplex on objective ``obj`` over columns ``< allowed``."""
        R = self.objs[obj]
        while True:
            col = next((j for j in range(allowed) if R[j] < 0), None)
            if col is None:
                return
            best = None
            for i, row in enumerate(self.rows):
                a = row[col]
                if a > 0:
                    if best is None:
                        best = i
                        continue
                    b = self.rows[best]
                    lhs, rhs = row[-1] * b[col], b[-1] * a
                    if lhs < rhs or (lhs == rhs and self.basis[i] < self.basis[best]):
                        best = i
            if best is None:
                raise UnboundedProgram("objective is unbounded")
            self.pivot(best, col)


def simplex_max(c: Sequence, A_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
                A_eq: Sequence[Sequence] = (), b_eq: Sequence = ()):
    """Maximize ``c.x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``x >= 0``.

    Returns ``(value, x)`` with exact Fractions.
    """
    return Region(A_ub, b_ub, A_eq, b_eq, n=len(c)).maximize(c)


class Region:
    """A polyhedron ``{x >= 0 : A_ub x <= b_ub, A_eq x = b_eq}`` with a feasible basis.

    Phase one runs once; every :meth:`maximize` call restarts phase two from
    the stored basis, which pays off when many objectives share constraints.
    """

    def __init__(self, A_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
                 A_eq: Sequence[Sequence] = (), b_eq: Sequence = (), n: int | None = None):
        if n is None:
            n = len(A_ub[0]) if A_ub else len(A_eq[0]) if A_eq else 0
        self.n = n
        m_ub = len(A_ub)
        raw = [(*_int_row(row, b), True) for row, b in zip(A_ub, b_ub)]
        raw += [(*_int_row(row, b), False) for row, b in zip(A_eq, b_eq)]
        needs_art = [i for i, (_, rhs, slack) in enumerate(raw) if not slack or rhs < 0]
        n_art = len(needs_art)
        width = n + m_ub + n_art + 1
        rows, basis = [], []
        art_of = {i: n + m_ub + k for k, i in enumerate(needs_art)}
        for i, (coeffs, rhs, slack) in enumerate(raw):
            row = [0] * width
            row[:n] = coeffs
            if slack:
                row[n + i] = 1
            row[-1] = rhs
            if i in art_of:
                if rhs < 0:
                    row = [-v for v in row]
                row[art_of[i]] = 1
                basis.append(art_of[i])
            else:
                basis.append(n + i)
            rows.append(row)
        phase1 = [0] * width
        for i in needs_art:
            for j in range(width):
                if j < n + m_ub or j == width - 1:
                    phase1[j] -= rows[i][j]
        tab = _Tableau(rows, [phase1], basis)
        if n_art:
            tab.run(0, n + m_ub + n_art)
            if tab.objs[0][-1] != 0:
                raise InfeasibleProgram("constraints are infeasible")
            # move zero-level artificials out of the basis, drop redundant rows
            i = 0
            while i < len(tab.rows):
                if tab.basis[i] >= n + m_ub:
                    row = tab.rows[i]
                    col = next((j for j in range(n + m_ub) if row[j]), None)
                    if col is None:
                        del tab.rows[i]
                        del tab.basis[i]
                        continue
                    tab.pivot(i, col)
                i += 1
        self.columns = n + m_ub
        self.rows, self.basis, self.d = tab.rows, tab.basis, tab.d

    def maximize(self, c: Sequence):
        n = self.n
        c_int, _ = _int_row(c, 0)
        c_den = 1
        for v in c:
            c_den = lcm(c_den, Fraction(v).denominator)
        width = len(self.rows[0]) if self.rows else self.columns + 1
        obj = [0] * width
        for j in range(n):
            obj[j] = -c_int[j] * self.d
        for row, j in zip(self.rows, self.basis):
            if j < n and c_int[j]:
                cj = c_int[j]
                for k, v in enumerate(row):
                    obj[k] += cj * v
        tab = _Tableau([list(r) for r in self.rows], [obj], list(self.basis), self.d)
        tab.run(0, self.columns)
        x = [Fraction(0)] * n
        for row, j in zip(tab.rows, tab.basis):
            if j < n:
                x[j] = Fraction(row[-1], tab.d)
        value = Fraction(tab.objs[0][-1], tab.d)
        return value / c_den, x


@dataclass
class Solution:
    value: Fraction
    values: dict


@dataclass
class LinearProgram:
    """Named-variable front end to :func:`simplex_max`.

    Variables are nonnegative unless declared free or given bounds.
    """

    _vars: list = field(default_factory=list)
    _lower: dict = field(default_factory=dict)
    _free: set = field(default_factory=set)
    _le: list = field(default_factory=list)
    _eq: list = field(default_factory=list)

    def var(self, name: Hashable, lower=0, upper=None, free=False):
        if name in self._lower or name in self._free:
            raise ValueError(f"variable {name!r} declared twice")
        self._vars.append(name)
        if free:
            self._free.add(name)
        else:
            self._lower[name] = Fraction(lower)
        if upper is not None:
            self.le({name: 1}, upper)
        return name

    def le(self, coeffs: Mapping, rhs):
        self._le.append((dict(coeffs), Fraction(rhs)))

    def ge(self, coeffs: Mapping, rhs):
        self._le.append(({k: -Fraction(v) for k, v in coeffs.items()}, -Fraction(rhs)))

    def eq(self, coeffs: Mapping, rhs):
        self._eq.append((dict(coeffs), Fraction(rhs)))

    def _columns(self):
        cols = {}
        k = 0
        for name in self._vars:
            if name in self._free:
                cols[name] = (k, k + 1)
                k += 2
            else:
                cols[name] = (k, None)
                k += 1
        return cols, k

    def _encode(self, coeffs, rhs, cols, n):
        row = [Fraction(0)] * n
        for name, v in coeffs.items():
            if name not in cols:
                raise KeyError(f"unknown variable {name!r}")
            v = Fraction(v)
            pos, neg = cols[name]
            row[pos] += v
            if neg is not None:
                row[neg] -= v
            else:
                rhs -= v * self._lower[name]
        return row, rhs

    def maximize(self, objective: Mapping) -> Solution:
        cols, n = self._columns()
        c, offset = self._encode(objective, Fraction(0), cols, n)
        A_ub, b_ub = [], []
        for coeffs, rhs in self._le:
            row, r = self._encode(coeffs, rhs, cols, n)
            A_ub.append(row)
            b_ub.append(r)
        A_eq, b_eq = [], []
        for coeffs, rhs in self._eq:
            row, r = self._encode(coeffs, rhs, cols, n)
            A_eq.append(row)
            b_eq.append(r)
        value, x = simplex_max(c, A_ub, b_ub, A_eq, b_eq)
        values = {}
        for name, (pos, neg) in cols.items():
            if neg is None:
                values[name] = x[pos] + self._lower[name]
            else:
                values[name] = x[pos] - x[neg]
        # offset carries -(c . lower); undo it
        return Solution(value - offset, values)

    def minimize(self, objective: Mapping) -> Solution:
        sol = self.maximize({k: -Fraction(v) for k, v in objective.items()})
        return Solution(-sol.value, sol.values)
