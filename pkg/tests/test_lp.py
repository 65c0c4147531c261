"""Exact simplex against HiGHS (floating point) on random small programs."""
import random
from fractions import Fraction as F

import pytest

from daugtree.errors import InfeasibleProgram, UnboundedProgram
from daugtree.lp import LinearProgram, simplex_max

linprog = pytest.importorskip("scipy.optimize").linprog


def random_program(rng):
    n, m, me = rng.randint(1, 5), rng.randint(1, 6), rng.randint(0, 2)
    c = [F(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(n)]
    A = [[F(rng.randint(-3, 5), rng.randint(1, 3)) for _ in range(n)] for _ in range(m)]
    b = [F(rng.randint(-2, 6), rng.randint(1, 3)) for _ in range(m)]
    Ae = [[F(rng.randint(-3, 3)) for _ in range(n)] for _ in range(me)]
    be = [F(rng.randint(-2, 3)) for _ in range(me)]
    return c, A, b, Ae, be


def floats(rows):
    return [[float(v) for v in r] for r in rows]


@pytest.mark.parametrize("seed", range(4))
def test_simplex_matches_highs(seed):
    rng = random.Random(seed)
    for _ in range(100):
        c, A, b, Ae, be = random_program(rng)
        ref = linprog([-float(v) for v in c], A_ub=floats(A), b_ub=[float(v) for v in b],
                      A_eq=floats(Ae) or None, b_eq=[float(v) for v in be] or None,
                      bounds=[(0, None)] * len(c), method="highs")
        try:
            value, x = simplex_max(c, A, b, Ae, be)
            status = 0
        except InfeasibleProgram:
            status = 2
        except UnboundedProgram:
            status = 3
        assert status == ref.status
        if status:
            continue
        assert abs(float(value) + ref.fun) < 1e-7
        assert all(v >= 0 for v in x)
        assert all(sum(a * v for a, v in zip(row, x)) <= rhs for row, rhs in zip(A, b))
        assert all(sum(a * v for a, v in zip(row, x)) == rhs for row, rhs in zip(Ae, be))
        assert sum(a * v for a, v in zip(c, x)) == value


def test_builder_free_and_bounded_variables():
    lp = LinearProgram()
    x = lp.var("x", free=True)
    y = lp.var("y", lower=F(-1), upper=F(1, 2))
    lp.le({x: 1, y: 1}, 1)
    lp.ge({x: 1}, F(-3))
    sol = lp.minimize({x: 1, y: -2})
    assert sol.value == F(-4)
    assert sol.values[x] == -3 and sol.values[y] == F(1, 2)


def test_builder_detects_infeasible():
    lp = LinearProgram()
    x = lp.var("x")
    lp.le({x: 1}, -1)
    with pytest.raises(InfeasibleProgram):
        lp.maximize({x: 1})


def test_builder_detects_unbounded():
    lp = LinearProgram()
    x = lp.var("x")
    with pytest.raises(UnboundedProgram):
        lp.maximize({x: 1})
