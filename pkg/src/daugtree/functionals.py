"""Dual vectors certified by a convex decomposition.

A functional is stored with weights ``lambda_k >= 0`` summing to one and rows
``r_k`` that lie in the dual unit ball by inspection (signed indicators of
admissible sets, signed coordinate functionals, permuted Lorentz weights).
Then ``sum lambda_k r_k`` has dual norm at most one without ever computing
a dual norm.  A witness in the unit ball shows the claimed value is attained.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .errors import VerificationError
from .spaces import TreeNorm, TreeVector, as_sequence, backend_norm, evaluate, frac

ZERO = Fraction(0)


def apply(coeffs: Mapping, y) -> Fraction:
    if isinstance(y, TreeVector):
        return evaluate(coeffs, y)
    y = as_sequence(y)
    return sum((c * y.get(i, ZERO) for i, c in coeffs.items()), ZERO)


@dataclass
class NormedFunctional:
    coeffs: dict
    decomposition: list          # [(weight, row)] with rows dominated by the dual ball
    claimed_norm: Fraction
    witness: object = None       # vector in the unit ball attaining claimed_norm

    def __call__(self, y) -> Fraction:
        return apply(self.coeffs, y)

    @property
    def support(self):
        return {i for i, c in self.coeffs.items() if c}

    @classmethod
    def from_row(cls, row: Mapping, witness=None, claimed=None):
        row = {i: frac(c) for i, c in row.items() if c}
        if claimed is None and witness is not None:
            claimed = apply(row, witness)
        return cls(dict(row), [(Fraction(1), dict(row))], frac(claimed or 0), witness)

    @classmethod
    def average(cls, parts, weights=None, witness=None, claimed=None):
        """Convex combination of certified functionals (equal weights by default)."""
        parts = list(parts)
        if weights is None:
            weights = [Fraction(1, len(parts))] * len(parts)
        weights = [frac(w) for w in weights]
        coeffs, decomposition = {}, []
        for w, f in zip(weights, parts):
            for i, c in f.coeffs.items():
                coeffs[i] = coeffs.get(i, ZERO) + w * c
            decomposition.extend((w * lam, row) for lam, row in f.decomposition)
        coeffs = {i: c for i, c in coeffs.items() if c}
        if claimed is None and witness is not None:
            claimed = apply(coeffs, witness)
        return cls(coeffs, decomposition, frac(claimed or 0), witness)

    def check(self, backend) -> None:
        """Raise VerificationError unless every certificate claim holds exactly."""
        if any(lam < 0 for lam, _ in self.decomposition):
            raise VerificationError("negative weight in decomposition")
        if self.decomposition and sum(lam for lam, _ in self.decomposition) != 1:
            raise VerificationError("decomposition weights do not sum to 1")
        total = {}
        for lam, row in self.decomposition:
            if not backend.dominated(row):
                raise VerificationError(f"row {row} is not in the dual unit ball")
            for i, c in row.items():
                total[i] = total.get(i, ZERO) + lam * c
        total = {i: c for i, c in total.items() if c}
        if total != {i: c for i, c in self.coeffs.items() if c}:
            raise VerificationError("decomposition does not reproduce the coefficients")
        if self.witness is not None:
            if backend_norm(self.witness, backend) > 1:
                raise VerificationError("witness lies outside the unit ball")
            if self(self.witness) != self.claimed_norm:
                raise VerificationError("witness does not attain the claimed norm")
