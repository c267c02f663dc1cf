"""Light directions, quadruple census, and the polarization algebra.

The census enumerates four-element subsets of the six integer null
covectors b = (1+m^2+n^2, 2m, 2n, 1-(m^2+n^2)), m=1,2,3, n=1,2, keeps
those that form a basis decomposing xi = (1,1,0,0) with all four
coefficients nonzero, and exposes the rank-6 polarization subspace
(the kernel of the divergence symbol) together with its right inverse
and the frame compatibility homomorphisms.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import NDViolation, NotABasis, PreconditionError, RankDeficient
from .exact import (CoVec4, RationalSym2, covec, involution, is_lightlike,
                    mink_pair, rank_nullspace, rat, solve_exact, SYM2_ORDER)

#: the distinguished lightlike covector all quadruples decompose
XI = covec(1, 1, 0, 0)


@dataclass(frozen=True)
class LightDirection:
    """Future-pointing integer null covector."""

    b: CoVec4

    def __post_init__(self):
        if self.b.is_zero():
            raise PreconditionError("zero covector is not a light direction")
        if any(c.denominator != 1 for c in self.b):
            raise PreconditionError("light directions have integer entries")
        if not is_lightlike(self.b):
            raise PreconditionError("light direction must be lightlike")
        if self.b[0] <= 0:
            raise PreconditionError("light direction must be future pointing")

    def ints(self) -> tuple[int, int, int, int]:
        return tuple(int(c) for c in self.b)


@dataclass(frozen=True)
class Quadruple:
    """Four light directions with the exact decomposition of XI.

    xi = sum_j r_j b_j holds exactly; ``valid`` means every r_j is
    nonzero, the condition under which the fourfold interaction makes
    sense.
    """

    directions: tuple[LightDirection, LightDirection, LightDirection, LightDirection]
    coefficients: tuple[Fraction, Fraction, Fraction, Fraction]

    @property
    def valid(self) -> bool:
        return all(r != 0 for r in self.coefficients)

    def xi_parts(self) -> list[CoVec4]:
        """The four summands xi_j = r_j b_j."""
        return [d.b.scale(r) for d, r in zip(self.directions, self.coefficients)]

    def eta(self, indices) -> CoVec4:
        """Partial sum of xi_j over a 0-based index set."""
        parts = self.xi_parts()
        out = parts[indices[0]]
        for i in indices[1:]:
            out = out + parts[i]
        return out


def pythagorean_directions() -> list[LightDirection]:
    """The six integer null covectors, in lexicographic (m, n) order."""
    out = []
    for m in (1, 2, 3):
        for n in (1, 2):
            p = 1
            out.append(LightDirection(
                covec(p * p + m * m + n * n, 2 * m * p, 2 * n * p,
                      p * p - (m * m + n * n))))
    return out


def decompose_xi(dirs) -> Quadruple:
    """Solve xi = sum_j r_j b_j exactly; NotABasis if the b_j are dependent.

    The solution is back-substituted into the defining equation before
    returning.
    """
    dirs = tuple(d if isinstance(d, LightDirection) else LightDirection(d)
                 for d in dirs)
    if len(dirs) != 4:
        raise PreconditionError("a quadruple needs exactly 4 directions")
    rows = [[dirs[j].b[i] for j in range(4)] for i in range(4)]
    rank, _ = rank_nullspace(rows)
    if rank < 4:
        raise NotABasis("directions do not span the fibre")
    r = solve_exact(rows, list(XI))
    # back-substitution check: the solve is exact by construction, but the
    # decomposition is load bearing downstream, so verify it outright
    for i in range(4):
        assert sum(r[j] * dirs[j].b[i] for j in range(4)) == XI[i]
    return Quadruple(dirs, tuple(r))


def enumerate_valid_quadruples(with_reasons: bool = False):
    """All size-4 subsets of the six directions, filtered to valid quadruples.

    Returns the 9 valid quadruples; with ``with_reasons`` also returns the
    per-subset census: (indices, status, detail) for each of the 15
    candidates, where status is 'valid', 'not_a_basis' or 'zero_coefficient'.
    """
    dirs = pythagorean_directions()
    quads = []
    census = []
    for idx in combinations(range(6), 4):
        subset = [dirs[i] for i in idx]
        try:
            q = decompose_xi(subset)
        except NotABasis:
            census.append((idx, "not_a_basis", None))
            continue
        if not q.valid:
            census.append((idx, "zero_coefficient", q.coefficients))
            continue
        census.append((idx, "valid", q.coefficients))
        quads.append(q)
    if with_reasons:
        return quads, census
    return quads


# ---------------------------------------------------------------------------
# polarization constraint and divergence symbol
# ---------------------------------------------------------------------------

def _constraint_rows(xi: CoVec4):
    """The 4x10 matrix of h -> (h xi*)_k - (tr h / 2) xi_k over SYM2_ORDER."""
    xs = xi.raise_index()
    rows = []
    for k in range(4):
        row = []
        for idx, (i, j) in enumerate(SYM2_ORDER):
            val = Fraction(0)
            # (h xi*)_k picks up h_{k i} xs_i; off-diagonal components sit
            # in two matrix slots
            if i == k:
                val += xs[j]
            if j == k and i != j:
                val += xs[i]
            # -(tr h / 2) xi_k with tr h = -h00 + h11 + h22 + h33
            if i == j:
                tr_coeff = -1 if i == 0 else 1
                val -= Fraction(tr_coeff, 2) * xi[k]
            row.append(val)
        rows.append(row)
    return rows


def constraint_membership(h: RationalSym2, xi: CoVec4) -> bool:
    """Exact test of h(xi*, v) = (tr h / 2) <xi, v> for all v."""
    if xi.is_zero():
        raise PreconditionError("constraint test needs a nonzero covector")
    resid = h.apply(xi.raise_index())
    tr = h.trace_mink()
    return all(resid[k] - tr * xi[k] / 2 == 0 for k in range(4))


@dataclass(frozen=True)
class ConstraintFibre:
    """Exact basis of the rank-6 polarization subspace at a null covector."""

    xi: CoVec4
    basis: tuple

    def contains(self, h: RationalSym2) -> bool:
        rows = [[b.data[c] for b in self.basis] for c in range(10)]
        return solve_exact(rows, list(h.data)) is not None


def constraint_fibre_basis(xi: CoVec4) -> ConstraintFibre:
    """Exact nullspace basis of the four constraint conditions.

    Works entirely over the rationals; the rotated-frame construction
    would need a Euclidean normalization that leaves the field.
    """
    if xi.is_zero():
        raise PreconditionError("need a nonzero covector")
    if not is_lightlike(xi):
        raise PreconditionError("constraint fibre basis is defined on the light cone")
    rank, null = rank_nullspace(_constraint_rows(xi))
    if len(null) != 6:
        raise RankDeficient(f"expected a 6-dimensional fibre, got {len(null)}")
    basis = tuple(RationalSym2(tuple(v)) for v in null)
    for h in basis:
        assert constraint_membership(h, xi)
    return ConstraintFibre(xi, basis)


def divergence_symbol_pair(xi: CoVec4):
    """The divergence symbol h -> (I h)(xi*, .) and a right inverse.

    Returns (iota, rho, iota_matrix): iota maps RationalSym2 to CoVec4,
    rho maps CoVec4 to RationalSym2 with iota(rho(v)) = v exactly.  The
    right inverse is the minimum-support solution under the fixed pivot
    order, so it is reproducible.
    """
    if xi.is_zero():
        raise PreconditionError("divergence symbol needs a nonzero covector")
    xs = xi.raise_index()

    def iota(h: RationalSym2) -> CoVec4:
        return involution(h).apply(xs)

    # iota as a 4x10 matrix over SYM2_ORDER (equals the constraint rows)
    mat = _constraint_rows(xi)
    cols = []
    for k in range(4):
        rhs = [Fraction(int(i == k)) for i in range(4)]
        sol = solve_exact(mat, rhs)
        if sol is None:
            raise RankDeficient("divergence symbol is not surjective")
        cols.append(sol)

    def rho(v: CoVec4) -> RationalSym2:
        data = [sum(v[k] * cols[k][c] for k in range(4)) for c in range(10)]
        return RationalSym2(tuple(data))

    return iota, rho, mat


# ---------------------------------------------------------------------------
# frame compatibility homomorphisms
# ---------------------------------------------------------------------------

def compat_maps(frame):
    """Homomorphisms (A1, A2) for a frame of L covectors d1..dL.

    The first four must be independent.  A1 sends a covector to the
    coefficient vector of its expansion in d1..d4 padded with zeros; A2
    kills e_1..e_4 and sends e_l (l > 4) to e_l minus the expansion
    coefficients of d_l.  Exactly:

        (i)   A1(v) . d = v
        (ii)  A2(w) . d = 0
        (iii) A1(w . d) + A2(w) = w
    """
    frame = [f if isinstance(f, CoVec4) else covec(*f) for f in frame]
    L = len(frame)
    if L < 4:
        raise NDViolation("need at least four frame covectors")
    rows = [[frame[j][i] for j in range(4)] for i in range(4)]
    rank, _ = rank_nullspace(rows)
    if rank < 4:
        raise NDViolation("first four frame covectors are dependent")
    # c[l] solves d_l = sum_j c[l][j] d_j for l >= 4
    coeffs = {}
    for l in range(4, L):
        coeffs[l] = solve_exact(rows, list(frame[l]))

    def a1(v: CoVec4) -> list[Fraction]:
        sol = solve_exact(rows, list(v))
        return sol + [Fraction(0)] * (L - 4)

    def a2(w) -> list[Fraction]:
        w = [rat(x) for x in w]
        out = [Fraction(0)] * L
        for l in range(4, L):
            if w[l] == 0:
                continue
            out[l] += w[l]
            for j in range(4):
                out[j] -= w[l] * coeffs[l][j]
        return out

    return a1, a2


# ---------------------------------------------------------------------------
# fluid decomposition of a symmetric source
# ---------------------------------------------------------------------------

def fluid_decompose(P: RationalSym2, dirs) -> list[Fraction]:
    """Exact weights mu with sum_k mu_k v^k (x) v^k = P.

    Needs at least 10 timelike covectors whose squares span the fibre;
    with more than 10 the solution is the deterministic minimum-support
    one.  The reconstruction is verified exactly before returning.
    """
    dirs = [d if isinstance(d, CoVec4) else covec(*d) for d in dirs]
    K = len(dirs)
    if K < 10:
        raise PreconditionError("need at least 10 fluid directions")
    for d in dirs:
        if mink_pair(d, d) >= 0:
            raise PreconditionError("fluid directions must be timelike")
    cols = [[d[i] * d[j] for (i, j) in SYM2_ORDER] for d in dirs]
    rows = [[cols[k][c] for k in range(K)] for c in range(10)]
    rank, _ = rank_nullspace(rows)
    if rank < 10:
        raise RankDeficient("fluid directions do not span the fibre")
    mu = solve_exact(rows, list(P.data))
    if mu is None:
        raise RankDeficient("no exact decomposition exists")
    recon = [sum(mu[k] * cols[k][c] for k in range(K)) for c in range(10)]
    assert tuple(recon) == P.data
    return mu
