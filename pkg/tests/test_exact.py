"""Exact fibre arithmetic and linear algebra."""
import random
from fractions import Fraction as F

import pytest

from fourwave.errors import NullDenominator, SingularMetric
from fourwave.exact import (MINKOWSKI, CoVec4, RationalSym2, covec,
                            involution, is_lightlike, mink_pair, q_factor,
                            rank_nullspace, rat_str, solve_exact, sym_outer)

E0 = covec(1, 0, 0, 0)
E1 = covec(0, 1, 0, 0)
XI = covec(1, 1, 0, 0)


def test_mink_pair_signature():
    assert mink_pair(E0, E0) == -1
    assert mink_pair(XI, XI) == 0
    b = covec(3, 2, 2, -1)
    assert mink_pair(b, b) == 0  # -9 + 4 + 4 + 1


def test_mink_pair_bilinear_symmetric():
    u, v = covec(2, -1, 3, 5), covec(1, 7, 0, -2)
    assert mink_pair(u, v) == mink_pair(v, u)
    assert mink_pair(u + v, u + v) == (mink_pair(u, u) + 2 * mink_pair(u, v)
                                       + mink_pair(v, v))


def test_mink_pair_rejects_mixed_variance():
    with pytest.raises(ValueError):
        mink_pair(E0, E0.raise_index())


def test_raise_lower_roundtrip():
    rng = random.Random(5)
    for _ in range(50):
        u = covec(*[F(rng.randint(-20, 20), rng.randint(1, 9))
                    for _ in range(4)])
        assert u.raise_index().lower_index() == u


def test_involution_examples():
    # tr of the metric is 4, so trace reversal negates it
    assert involution(MINKOWSKI) == MINKOWSKI.scale(-1)
    assert involution(RationalSym2.zero()) == RationalSym2.zero()
    h = sym_outer(XI, XI).scale(F(1, 2))  # xi (x) xi, lightlike xi
    assert involution(h) == h


def test_involution_is_involution_and_trace_flips():
    rng = random.Random(11)
    for _ in range(30):
        h = RationalSym2(tuple(F(rng.randint(-9, 9), rng.randint(1, 5))
                               for _ in range(10)))
        assert involution(involution(h)) == h
        assert involution(h).trace_mink() == -h.trace_mink()


def test_involution_general_metric_and_singular():
    g = RationalSym2((-2, 0, 0, 0, 3, 0, 0, 1, 0, 5))
    h = RationalSym2(tuple(range(1, 11)))
    assert involution(involution(h, g), g) == h
    singular = RationalSym2((0,) * 10)
    with pytest.raises(SingularMetric):
        involution(h, singular)


def test_sym_outer():
    t = sym_outer(E0, E1)
    assert t.entry(0, 1) == 1 and t.entry(1, 0) == 1
    assert sum(1 for v in t.data if v != 0) == 1
    assert sym_outer(XI, covec(0, 0, 0, 0)).is_zero()
    u, v = covec(1, 2, 3, 4), covec(-1, 0, 2, 7)
    assert sym_outer(u, v) == sym_outer(v, u)
    assert sym_outer(u, u) == RationalSym2.from_matrix(
        [[2 * u[i] * u[j] for j in range(4)] for i in range(4)])


def test_q_factor():
    assert q_factor(E0) == -1
    assert q_factor(covec(0, 1, 0, 0)) == 1
    with pytest.raises(NullDenominator):
        q_factor(XI)


def test_rank_nullspace_edges():
    eye = [[int(i == j) for j in range(4)] for i in range(4)]
    assert rank_nullspace(eye) == (4, [])
    rank, null = rank_nullspace([[0] * 10 for _ in range(4)])
    assert rank == 0 and len(null) == 10


def _rref_rank(rows):
    """Independent oracle: plain Gauss-Jordan with last-nonzero pivoting."""
    m = [[F(x) for x in r] for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    rank = 0
    used = set()
    for c in range(ncols - 1, -1, -1):  # opposite column order
        piv = None
        for r in range(nrows - 1, -1, -1):
            if r not in used and m[r][c] != 0:
                piv = r
                break
        if piv is None:
            continue
        used.add(piv)
        pv = m[piv][c]
        m[piv] = [x / pv for x in m[piv]]
        for r in range(nrows):
            if r != piv and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[piv])]
        rank += 1
    return rank


def test_rank_matches_independent_oracle_on_200_matrices():
    rng = random.Random(42)
    for _ in range(200):
        nr = rng.randint(1, 12)
        nc = rng.randint(1, 12)
        rows = [[F(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(nc)]
                for _ in range(nr)]
        rank, null = rank_nullspace(rows)
        assert rank == _rref_rank(rows)
        assert rank + len(null) == nc
        for v in null:
            for row in rows:
                assert sum(a * b for a, b in zip(row, v)) == 0


def test_solve_exact():
    rows = [[1, 2], [3, 4]]
    x = solve_exact(rows, [5, 6])
    assert [sum(F(a) * b for a, b in zip(r, x)) for r in rows] == [5, 6]
    assert solve_exact([[1, 1], [1, 1]], [0, 1]) is None
    # underdetermined: free variable pinned to zero deterministically
    x = solve_exact([[1, 1, 0]], [2])
    assert x == [F(2), F(0), F(0)]


def test_serialization_contract():
    assert rat_str(F(-3, 2)) == "-3/2"
    assert rat_str(F(4)) == "4/1"
    h = RationalSym2(tuple(range(10)))
    assert h.entry(0, 0) == 0 and h.entry(3, 3) == 9 and h.entry(1, 2) == 5
    assert h.serial()[4] == "4/1"  # component (1,1) sits at index 4


def test_floats_rejected():
    with pytest.raises(TypeError):
        covec(1.5, 0, 0, 0)
