"""Exact rational arithmetic on the Minkowski fibre.

Scalars are :class:`fractions.Fraction` (arbitrary precision, always in
lowest terms, positive denominator).  The module provides 4-covectors,
symmetric 2-tensors with a fixed 10-component serialization order, the
signature (-,+,+,+) pairing, and exact linear algebra (rank, nullspace,
deterministic solving).  Nothing here ever rounds.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import NullDenominator, SingularMetric

#: metric signature, also its own inverse
SIGNATURE = (-1, 1, 1, 1)

#: serialization order of the 10 independent Sym2 components
SYM2_ORDER = ((0, 0), (0, 1), (0, 2), (0, 3),
              (1, 1), (1, 2), (1, 3),
              (2, 2), (2, 3), (3, 3))


def rat(x) -> Fraction:
    """Coerce ints, strings like '3/2', and Fractions to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        raise TypeError("floats are not allowed in exact arithmetic")
    return Fraction(x)


def rat_str(x: Fraction) -> str:
    """Canonical 'num/den' form, denominator always explicit."""
    x = rat(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class CoVec4:
    """A 4-component object on the fibre, tagged covector or vector."""

    components: tuple[Fraction, Fraction, Fraction, Fraction]
    variance: str = "covector"  # or "vector"

    def __post_init__(self):
        if self.variance not in ("covector", "vector"):
            raise ValueError(f"bad variance {self.variance!r}")
        object.__setattr__(self, "components",
                           tuple(rat(c) for c in self.components))

    def __getitem__(self, i):
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def raise_index(self) -> "CoVec4":
        if self.variance != "covector":
            raise ValueError("raise_index expects a covector")
        return CoVec4(tuple(SIGNATURE[i] * self[i] for i in range(4)), "vector")

    def lower_index(self) -> "CoVec4":
        if self.variance != "vector":
            raise ValueError("lower_index expects a vector")
        return CoVec4(tuple(SIGNATURE[i] * self[i] for i in range(4)), "covector")

    def scale(self, k) -> "CoVec4":
        k = rat(k)
        return CoVec4(tuple(k * c for c in self.components), self.variance)

    def __add__(self, other: "CoVec4") -> "CoVec4":
        if self.variance != other.variance:
            raise ValueError("cannot add covector and vector")
        return CoVec4(tuple(a + b for a, b in zip(self, other)), self.variance)

    def __sub__(self, other: "CoVec4") -> "CoVec4":
        return self + other.scale(-1)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.components)


def covec(c0, c1, c2, c3) -> CoVec4:
    return CoVec4((rat(c0), rat(c1), rat(c2), rat(c3)))


def mink_pair(u: CoVec4, v: CoVec4) -> Fraction:
    """Minkowski pairing: inverse metric on covectors, metric on vectors.

    Both forms are diag(-1,1,1,1); mixed variance is rejected because the
    natural pairing there needs no metric at all.
    """
    if u.variance != v.variance:
        raise ValueError("mink_pair requires matching variance")
    return sum(SIGNATURE[i] * u[i] * v[i] for i in range(4))


def is_lightlike(u: CoVec4) -> bool:
    return mink_pair(u, u) == 0


def q_factor(eta: CoVec4) -> Fraction:
    """Reciprocal 1/<eta,eta>; errors on the light cone."""
    d = mink_pair(eta, eta)
    if d == 0:
        raise NullDenominator()
    return Fraction(1, 1) / d


@dataclass(frozen=True)
class RationalSym2:
    """Symmetric 2-tensor with exact entries, stored in SYM2_ORDER."""

    data: tuple

    def __post_init__(self):
        if len(self.data) != 10:
            raise ValueError("RationalSym2 needs 10 components")
        object.__setattr__(self, "data", tuple(rat(c) for c in self.data))

    @staticmethod
    def zero() -> "RationalSym2":
        return RationalSym2((0,) * 10)

    @staticmethod
    def from_matrix(m) -> "RationalSym2":
        for i in range(4):
            for j in range(4):
                if rat(m[i][j]) != rat(m[j][i]):
                    raise ValueError("matrix is not symmetric")
        return RationalSym2(tuple(rat(m[i][j]) for i, j in SYM2_ORDER))

    def entry(self, i: int, j: int) -> Fraction:
        if i > j:
            i, j = j, i
        return self.data[SYM2_ORDER.index((i, j))]

    def matrix(self):
        m = [[Fraction(0)] * 4 for _ in range(4)]
        for v, (i, j) in zip(self.data, SYM2_ORDER):
            m[i][j] = v
            m[j][i] = v
        return m

    def __add__(self, other: "RationalSym2") -> "RationalSym2":
        return RationalSym2(tuple(a + b for a, b in zip(self.data, other.data)))

    def __sub__(self, other: "RationalSym2") -> "RationalSym2":
        return self + other.scale(-1)

    def scale(self, k) -> "RationalSym2":
        k = rat(k)
        return RationalSym2(tuple(k * c for c in self.data))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.data)

    def apply(self, v: CoVec4) -> CoVec4:
        """Contract one slot with a vector: (h v)_k = h_{kj} v^j."""
        if v.variance != "vector":
            raise ValueError("apply expects a vector")
        m = self.matrix()
        return CoVec4(tuple(sum(m[k][j] * v[j] for j in range(4))
                            for k in range(4)))

    def trace_mink(self) -> Fraction:
        """tr with the Minkowski inverse metric: g^{jk} h_{jk}."""
        m = self.matrix()
        return sum(SIGNATURE[i] * m[i][i] for i in range(4))

    def contract_pair(self, eta: CoVec4) -> Fraction:
        """Scalar double contraction (g^-1 h g^-1)(eta, eta) = h(eta*, eta*)."""
        es = eta.raise_index()
        m = self.matrix()
        return sum(m[i][j] * es[i] * es[j] for i in range(4) for j in range(4))

    def serial(self) -> list[str]:
        return [rat_str(c) for c in self.data]


MINKOWSKI = RationalSym2((-1, 0, 0, 0, 1, 0, 0, 1, 0, 1))


def sym_outer(xi: CoVec4, eta: CoVec4) -> RationalSym2:
    """Symmetrized outer product xi (x) eta + eta (x) xi."""
    return RationalSym2.from_matrix(
        [[xi[i] * eta[j] + eta[i] * xi[j] for j in range(4)] for i in range(4)])


def _invert4(m):
    """Exact inverse of a 4x4 rational matrix; SingularMetric if singular."""
    a = [[rat(m[i][j]) for j in range(4)] + [Fraction(int(i == j)) for j in range(4)]
         for i in range(4)]
    for c in range(4):
        piv = next((r for r in range(c, 4) if a[r][c] != 0), None)
        if piv is None:
            raise SingularMetric("metric is not invertible")
        a[c], a[piv] = a[piv], a[c]
        pv = a[c][c]
        a[c] = [x / pv for x in a[c]]
        for r in range(4):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[4:] for row in a]


def involution(h: RationalSym2, g: RationalSym2 | None = None) -> RationalSym2:
    """Trace reversal h - (tr_g h / 2) g; an exact involution."""
    if g is None:
        g = MINKOWSKI
        tr = h.trace_mink()
    else:
        gi = _invert4(g.matrix())
        hm = h.matrix()
        tr = sum(gi[j][k] * hm[j][k] for j in range(4) for k in range(4))
    return h - g.scale(tr / 2)


# ---------------------------------------------------------------------------
# exact linear algebra
# ---------------------------------------------------------------------------

def _to_int_rows(rows):
    """Clear denominators row by row (rank preserving)."""
    out = []
    for row in rows:
        row = [rat(x) for x in row]
        den = 1
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
        out.append([int(x * den) for x in row])
    return out


def _bareiss_echelon(rows):
    """Fraction-free (Bareiss) row echelon over the integers.

    Pivots are chosen as the first nonzero entry in a row-major scan.
    Returns (echelon rows, pivot column list).
    """
    m = [list(r) for r in rows]
    nrows, ncols = len(m), (len(m[0]) if m else 0)
    piv_cols = []
    pr = 0
    prev = 1
    for pc in range(ncols):
        piv = next((r for r in range(pr, nrows) if m[r][pc] != 0), None)
        if piv is None:
            continue
        m[pr], m[piv] = m[piv], m[pr]
        for r in range(pr + 1, nrows):
            for c in range(pc + 1, ncols):
                m[r][c] = (m[pr][pc] * m[r][c] - m[r][pc] * m[pr][c]) // prev
            m[r][pc] = 0
        prev = m[pr][pc]
        piv_cols.append(pc)
        pr += 1
        if pr == nrows:
            break
    return m[:pr], piv_cols


def rank_nullspace(rows):
    """Exact rank and nullspace basis of a rational matrix.

    Elimination is fraction free (Bareiss) on the denominator-cleared
    matrix; the nullspace basis is produced by back substitution, one
    vector per free column, with the free variable set to 1.  The pivot
    order (first nonzero, row-major scan) makes the basis reproducible.
    """
    rows = [list(r) for r in rows]
    if not rows:
        return 0, []
    ncols = len(rows[0])
    ech, piv_cols = _bareiss_echelon(_to_int_rows(rows))
    rank = len(piv_cols)
    free_cols = [c for c in range(ncols) if c not in piv_cols]
    basis = []
    for fc in free_cols:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r in range(rank - 1, -1, -1):
            pc = piv_cols[r]
            s = sum(Fraction(ech[r][c]) * v[c] for c in range(pc + 1, ncols))
            v[pc] = -s / Fraction(ech[r][pc])
        basis.append(v)
    return rank, basis


def solve_exact(rows, rhs):
    """Deterministic exact solution of M x = b, or None if inconsistent.

    Free variables (under the fixed first-nonzero pivot order) are set to
    zero, giving the minimum-support representative used for right
    inverses and fluid decompositions.
    """
    rows = [list(map(rat, r)) for r in rows]
    rhs = [rat(b) for b in rhs]
    if not rows:
        return [] if all(b == 0 for b in rhs) else None
    ncols = len(rows[0])
    aug = [row + [b] for row, b in zip(rows, rhs)]
    nrows = len(aug)
    piv_cols = []
    pr = 0
    for pc in range(ncols):
        piv = next((r for r in range(pr, nrows) if aug[r][pc] != 0), None)
        if piv is None:
            continue
        aug[pr], aug[piv] = aug[piv], aug[pr]
        pv = aug[pr][pc]
        aug[pr] = [x / pv for x in aug[pr]]
        for r in range(nrows):
            if r != pr and aug[r][pc] != 0:
                f = aug[r][pc]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[pr])]
        piv_cols.append(pc)
        pr += 1
        if pr == nrows:
            break
    for r in range(pr, nrows):
        if aug[r][ncols] != 0:
            return None
    x = [Fraction(0)] * ncols
    for r, pc in enumerate(piv_cols):
        x[pc] = aug[r][ncols]
    return x
