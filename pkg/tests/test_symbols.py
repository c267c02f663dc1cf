"""Light directions, census, polarization subspace, frame maps, fluids."""
import random
from fractions import Fraction as F

import pytest

from fourwave.errors import (NDViolation, NotABasis, PreconditionError,
                             RankDeficient)
from fourwave.exact import (MINKOWSKI, RationalSym2, covec, is_lightlike,
                            mink_pair, rank_nullspace, solve_exact, sym_outer)
from fourwave.symbols import (XI, LightDirection, compat_maps,
                              constraint_fibre_basis, constraint_membership,
                              decompose_xi, divergence_symbol_pair,
                              enumerate_valid_quadruples, fluid_decompose,
                              pythagorean_directions)


def test_directions_enumeration():
    B = pythagorean_directions()
    assert len(B) == 6
    assert B[0].ints() == (3, 2, 2, -1)       # (m, n) = (1, 1)
    assert B[5].ints() == (14, 6, 4, -12)     # (m, n) = (3, 2)
    for d in B:
        assert is_lightlike(d.b) and d.b[0] > 0
    # lexicographic (m, n) order
    assert [d.ints() for d in B] == [
        (3, 2, 2, -1), (6, 2, 4, -4), (6, 4, 2, -4),
        (9, 4, 4, -7), (11, 6, 2, -9), (14, 6, 4, -12)]


def test_light_direction_invariants():
    with pytest.raises(PreconditionError):
        LightDirection(covec(1, 0, 0, 0))      # timelike
    with pytest.raises(PreconditionError):
        LightDirection(covec(-1, 1, 0, 0))     # past pointing
    with pytest.raises(PreconditionError):
        LightDirection(covec(F(1, 2), F(1, 2), 0, 0))  # non-integer


def test_decompose_xi_trivial():
    dirs = [covec(1, 1, 0, 0), covec(1, -1, 0, 0),
            covec(1, 0, 1, 0), covec(1, 0, 0, 1)]
    q = decompose_xi(dirs)
    assert q.coefficients == (F(1), F(0), F(0), F(0))
    assert not q.valid


def test_decompose_xi_exact_case():
    dirs = [covec(3, 2, 2, -1), covec(6, 2, 4, -4),
            covec(6, 4, 2, -4), covec(11, 6, 2, -9)]
    q = decompose_xi(dirs)
    assert q.coefficients == (F(3, 2), F(-1, 2), F(-1), F(1, 2))
    # back substitution oracle
    for i in range(4):
        assert sum(r * d.b[i] for r, d in zip(q.coefficients, q.directions)) \
            == XI[i]
    assert q.valid


def test_decompose_xi_not_a_basis():
    dirs = [covec(3, 2, 2, -1), covec(6, 4, 4, -2),
            covec(1, 1, 0, 0), covec(1, 0, 1, 0)]
    with pytest.raises(NotABasis):
        decompose_xi(dirs)


def test_census_counts_and_reasons():
    quads, census = enumerate_valid_quadruples(with_reasons=True)
    assert len(census) == 15          # C(6, 4)
    assert len(quads) == 9
    reasons = [status for _, status, _ in census]
    assert reasons.count("valid") == 9
    assert reasons.count("not_a_basis") + reasons.count("zero_coefficient") == 6
    for idx, status, detail in census:
        if status == "zero_coefficient":
            assert any(c == 0 for c in detail)
        if status == "valid":
            assert all(c != 0 for c in detail)


def test_constraint_membership_examples():
    assert constraint_membership(RationalSym2.zero(), XI)
    assert constraint_membership(sym_outer(XI, XI).scale(F(1, 2)), XI)
    assert not constraint_membership(MINKOWSKI, XI)


def test_constraint_fibre_dimension_six():
    for xi in [XI] + [d.b for d in pythagorean_directions()]:
        fibre = constraint_fibre_basis(xi)
        assert len(fibre.basis) == 6
        for h in fibre.basis:
            assert constraint_membership(h, xi)
        # xi (x) xi lies in the span
        assert fibre.contains(sym_outer(xi, xi).scale(F(1, 2)))
    rows = [[h.data[c] for c in range(10)] for h in
            constraint_fibre_basis(XI).basis]
    rank, _ = rank_nullspace(rows)
    assert rank == 6


def test_constraint_fibre_rejects_off_cone():
    with pytest.raises(PreconditionError):
        constraint_fibre_basis(covec(1, 0, 0, 0))
    with pytest.raises(PreconditionError):
        constraint_fibre_basis(covec(0, 0, 0, 0))


def test_divergence_pair():
    for xi in [XI, pythagorean_directions()[0].b]:
        iota, rho, mat = divergence_symbol_pair(xi)
        rank, null = rank_nullspace(mat)
        assert rank == 4 and len(null) == 6
        fibre = constraint_fibre_basis(xi)
        # kernel equals the constraint fibre: containment + dimensions
        for h in fibre.basis:
            assert iota(h).is_zero()
        for k in range(4):
            e = covec(*[int(i == k) for i in range(4)])
            assert iota(rho(e)) == e
        # right inverse is reproducible
        v = covec(2, -3, 5, 7)
        assert rho(v) == rho(v)


def test_divergence_pair_rejects_zero():
    with pytest.raises(PreconditionError):
        divergence_symbol_pair(covec(0, 0, 0, 0))


def test_compat_maps_identity_frame():
    frame = [covec(*[int(i == k) for i in range(4)]) for k in range(4)]
    a1, a2 = compat_maps(frame)
    v = covec(3, -2, 1, 5)
    assert a1(v) == [F(3), F(-2), F(1), F(5)]
    assert a2([F(1), F(2), F(3), F(4)]) == [F(0)] * 4


def test_compat_maps_dependent_extra_leg():
    frame = [covec(*[int(i == k) for i in range(4)]) for k in range(4)]
    frame.append(frame[0] + frame[1].scale(2))  # d5 = d1 + 2 d2
    a1, a2 = compat_maps(frame)
    e5 = [F(0)] * 4 + [F(1)]
    assert a2(e5) == [F(-1), F(-2), F(0), F(0), F(1)]


def test_compat_maps_nd_violation():
    frame = [covec(1, 0, 0, 0), covec(0, 1, 0, 0),
             covec(1, 1, 0, 0), covec(0, 0, 0, 1)]
    with pytest.raises(NDViolation):
        compat_maps(frame)


def _random_frame(rng, L):
    while True:
        frame = [covec(*[F(rng.randint(-5, 5), rng.randint(1, 3))
                         for _ in range(4)]) for _ in range(L)]
        rows = [[frame[j][i] for j in range(4)] for i in range(4)]
        if rank_nullspace(rows)[0] == 4:
            return frame


def test_compat_maps_properties_random():
    rng = random.Random(2024)
    for trial in range(50):
        L = rng.randint(4, 8)
        frame = _random_frame(rng, L)
        a1, a2 = compat_maps(frame)
        v = covec(*[F(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(4)])
        w = [F(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(L)]
        # (i) A1(v) . dphi = v
        coeff = a1(v)
        for i in range(4):
            assert sum(c * frame[l][i] for l, c in enumerate(coeff)) == v[i]
        # (ii) A2(w) . dphi = 0
        a2w = a2(w)
        for i in range(4):
            assert sum(c * frame[l][i] for l, c in enumerate(a2w)) == 0
        # (iii) A1(w . dphi) + A2(w) = w
        wd = covec(*[sum(w[l] * frame[l][i] for l in range(L))
                     for i in range(4)])
        a1wd = a1(wd)
        assert [a + b for a, b in zip(a1wd, a2w)] == w


def _timelike_basis_dirs():
    """Ten timelike covectors whose squares span the Sym2 fibre."""
    dirs = [covec(3, 1, 1, 1), covec(3, -1, 1, 1), covec(3, 1, -1, 1),
            covec(3, 1, 1, -1), covec(3, -1, -1, 1), covec(3, -1, 1, -1),
            covec(3, 1, -1, -1), covec(4, 2, 1, 0), covec(4, 0, 2, 1),
            covec(4, 1, 0, 2)]
    for d in dirs:
        assert mink_pair(d, d) < 0
    return dirs


def test_fluid_decompose_roundtrip():
    rng = random.Random(8)
    dirs = _timelike_basis_dirs()
    P = RationalSym2(tuple(F(rng.randint(-9, 9), rng.randint(1, 4))
                           for _ in range(10)))
    mu = fluid_decompose(P, dirs)
    from fourwave.exact import SYM2_ORDER
    recon = [sum(m * d[i] * d[j] for m, d in zip(mu, dirs))
             for (i, j) in SYM2_ORDER]
    assert tuple(recon) == P.data


def test_fluid_decompose_zero_and_single():
    dirs = _timelike_basis_dirs()
    assert fluid_decompose(RationalSym2.zero(), dirs) == [F(0)] * 10
    v = dirs[0]
    P = RationalSym2.from_matrix([[v[i] * v[j] for j in range(4)]
                                  for i in range(4)])
    mu = fluid_decompose(P, dirs)
    from fourwave.exact import SYM2_ORDER
    recon = [sum(m * d[i] * d[j] for m, d in zip(mu, dirs))
             for (i, j) in SYM2_ORDER]
    assert tuple(recon) == P.data


def test_fluid_decompose_errors():
    dirs = _timelike_basis_dirs()
    with pytest.raises(PreconditionError):
        fluid_decompose(RationalSym2.zero(), dirs[:9])
    with pytest.raises(PreconditionError):
        fluid_decompose(RationalSym2.zero(), dirs[:9] + [covec(1, 1, 0, 0)])
    degenerate = [dirs[0]] * 10
    with pytest.raises(RankDeficient):
        fluid_decompose(RationalSym2.zero(), degenerate)
