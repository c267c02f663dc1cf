"""The wave-interaction symbol cascade and the fourfold source symbol.

Starting from four single waves with zero metric polarization and scalar
polarizations phi_(j), the quadratic coupling of the reduced field
equations produces pair symbols

    g_(jk) = -2 (phi_(j).phi_(k)) / <eta_jk, eta_jk> * (xi_j (x)^ xi_k),

triple scalar symbols

    phi_(jkl) = 1/<eta_jkl, eta_jkl> * sum over pairs {a,b} of {j,k,l}
                of p(g_(ab))(xi_c) phi_(c),    c the remaining index,

with p(g)(eta) the scalar double contraction g(eta*, eta*), and finally
the fourfold source symbol at xi = xi_1 + ... + xi_4

    S = -[p(g_12)(eta_34) g_34 + p(g_34)(eta_12) g_12]
        + 2 sum_d (phi_(T_d).phi_(d)) (eta_{T_d} (x)^ xi_d)
        - 2 Psi(g_12, eta_12; g_34, eta_34),

where T_d is the complementary triple of d and Psi is the double
metric-contraction of the six ordered products of first-order Christoffel
forms.  All of this was cross-checked term by term against a plane-wave
expansion of the full reduced system (see tests); the scalar block of S
vanishes identically for these polarizations.

A second assembly, ``interaction_symbol_unweighted``, drops the scalar
inner-product weights on the mixed terms and flips the overall sign; it
is kept because that variant circulates in closed form, and the span
certificate records how the two differ.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd

from .errors import NullDenominator, PreconditionError
from .exact import (CoVec4, RationalSym2, SIGNATURE, is_lightlike, mink_pair,
                    q_factor, rat, sym_outer)
from .symbols import Quadruple

#: default number of scalar field channels
DEFAULT_L = 4

#: canonical scalar polarizations: two pairs excited in orthogonal channels
CANONICAL_PHI = ((1, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (0, 1, 0, 0))


@dataclass(frozen=True)
class SymbolVector:
    """Element of the fibre Sym2 (+) R^L."""

    metric_part: RationalSym2
    scalar_part: tuple

    def __post_init__(self):
        object.__setattr__(self, "scalar_part",
                           tuple(rat(c) for c in self.scalar_part))
        if len(self.scalar_part) < 2:
            raise PreconditionError("interaction computations need L >= 2")

    def stacked(self) -> list[Fraction]:
        return list(self.metric_part.data) + list(self.scalar_part)


def christoffel_form(eta: CoVec4, g: RationalSym2):
    """First-order Christoffel form of a wave: T[a][c][b] =
    (eta_a g_{cb} + eta_b g_{ac} - eta_c g_{ab}) / 2.

    Linear in both arguments; the index pattern matches the symbol of the
    coordinate Christoffel bracket of a metric perturbation g e^{i<eta,x>}.
    """
    m = g.matrix()
    half = Fraction(1, 2)
    return [[[half * (eta[a] * m[c][b] + eta[b] * m[a][c] - eta[c] * m[a][b])
              for b in range(4)] for c in range(4)] for a in range(4)]


def _int_scaled(form):
    """Clear denominators of a nested Christoffel form; returns (den, ints)."""
    den = 1
    for plane in form:
        for row in plane:
            for v in row:
                d = v.denominator
                if den % d:
                    den = den * d // gcd(den, d)
    ints = [[[int(v * den) for v in row] for row in plane] for plane in form]
    return den, ints


def _psi(gA: RationalSym2, etaA: CoVec4, gB: RationalSym2, etaB: CoVec4) -> RationalSym2:
    """Double contraction of Christoffel forms:

    Psi_ab = g^{pq} g^{rs} [ GA_{pra} GB_{qsb} + GB_{pra} GA_{qsb}
                           + GA_{pra} GB_{qbs} + GB_{pra} GA_{qbs}
                           + GA_{prb} GB_{qas} + GB_{prb} GA_{qas} ].

    The contraction is bilinear, so both forms are rescaled to integers
    and the 4^4 loop runs in integer arithmetic; the denominators are
    divided back out once at the end.
    """
    dA, GA = _int_scaled(christoffel_form(etaA, gA))
    dB, GB = _int_scaled(christoffel_form(etaB, gB))
    scale = Fraction(1, dA * dB)
    out = [[Fraction(0)] * 4 for _ in range(4)]
    for a in range(4):
        for b in range(a, 4):
            s = 0
            for p in range(4):
                GAp, GBp = GA[p], GB[p]
                for r in range(4):
                    e = SIGNATURE[p] * SIGNATURE[r]
                    GApr, GBpr = GAp[r], GBp[r]
                    s += e * (GApr[a] * GBpr[b] + GBpr[a] * GApr[b]
                              + GApr[a] * GBp[b][r] + GBpr[a] * GAp[b][r]
                              + GApr[b] * GBp[a][r] + GBpr[b] * GAp[a][r])
            val = s * scale
            out[a][b] = val
            out[b][a] = val
    return RationalSym2.from_matrix(out)


def _q_or_raise(eta: CoVec4, indices) -> Fraction:
    try:
        return q_factor(eta)
    except NullDenominator:
        raise NullDenominator(indices=indices) from None


@dataclass(frozen=True)
class CascadeState:
    """All intermediate symbols of a quadruple's interaction cascade.

    Metric polarizations of the single waves are zero by construction;
    pair scalar symbols vanish; triple metric symbols vanish.  ``g_pair``
    maps the index pair (0-based, sorted) to its metric symbol, and
    ``phi_triple`` maps the sorted triple to its scalar symbol.
    """

    quadruple: Quadruple
    phi: tuple
    g_pair: dict
    phi_triple: dict

    @property
    def L(self) -> int:
        return len(self.phi[0])


def cascade_symbols(q: Quadruple, phi_choices=None, L: int = DEFAULT_L) -> CascadeState:
    """Run the pair and triple levels of the interaction cascade.

    ``phi_choices`` are the four scalar polarizations (default: the
    canonical two-channel choice).  Every pair sum eta_jk and triple sum
    eta_jkl is checked to be off the light cone; for a valid quadruple
    this holds automatically, so a failure signals bad input.
    """
    if not q.valid:
        raise PreconditionError("cascade needs a valid quadruple (all r_j nonzero)")
    if phi_choices is None:
        phi_choices = [list(p) + [0] * (L - 4) if L > 4 else list(p[:L])
                       for p in CANONICAL_PHI]
    phi = tuple(tuple(rat(c) for c in p) for p in phi_choices)
    if len(phi) != 4 or len({len(p) for p in phi}) != 1:
        raise PreconditionError("need four scalar polarizations of equal length")

    xis = q.xi_parts()
    for j, xj in enumerate(xis):
        if not is_lightlike(xj):
            raise PreconditionError(f"xi_{j + 1} is not lightlike")

    def dot(u, v):
        return sum(a * b for a, b in zip(u, v))

    g_pair = {}
    for a, b in combinations(range(4), 2):
        w = dot(phi[a], phi[b])
        if w == 0:
            g_pair[(a, b)] = RationalSym2.zero()
            continue
        eta = q.eta((a, b))
        qq = _q_or_raise(eta, (a + 1, b + 1))
        g_pair[(a, b)] = sym_outer(xis[a], xis[b]).scale(-2 * qq * w)

    phi_triple = {}
    Lc = len(phi[0])
    for tri in combinations(range(4), 3):
        eta = q.eta(tri)
        qq = _q_or_raise(eta, tuple(i + 1 for i in tri))
        acc = [Fraction(0)] * Lc
        for a, b in combinations(tri, 2):
            c = next(i for i in tri if i not in (a, b))
            gp = g_pair[(a, b)]
            if gp.is_zero():
                continue
            scal = qq * gp.contract_pair(xis[c])
            for l in range(Lc):
                acc[l] += scal * phi[c][l]
        phi_triple[tri] = tuple(acc)

    return CascadeState(q, phi, g_pair, phi_triple)


def _assemble(state: CascadeState, weighted: bool) -> RationalSym2:
    q = state.quadruple
    xis = q.xi_parts()

    def dot(u, v):
        return sum(a * b for a, b in zip(u, v))

    out = RationalSym2.zero()
    # scalar-weighted mixed terms: one wave against the complementary triple
    for d in range(4):
        tri = tuple(i for i in range(4) if i != d)
        eta_t = q.eta(tri)
        if weighted:
            w = dot(state.phi_triple[tri], state.phi[d])
            if w == 0:
                continue
            out = out + sym_outer(eta_t, xis[d]).scale(2 * w)
        else:
            out = out + sym_outer(eta_t, xis[d]).scale(-2)
    # pair against pair, through the principal part and the Christoffel square
    for pair in (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))):
        (A, B) = pair
        gA, gB = state.g_pair[A], state.g_pair[B]
        if gA.is_zero() and gB.is_zero():
            continue
        etaA, etaB = q.eta(A), q.eta(B)
        pT = gB.scale(gA.contract_pair(etaB)) + gA.scale(gB.contract_pair(etaA))
        psi = _psi(gA, etaA, gB, etaB)
        if weighted:
            out = out + pT.scale(-1) + psi.scale(-2)
        else:
            out = out + pT + psi.scale(2)
    return out


def interaction_symbol(q: Quadruple, cascade: CascadeState | None = None,
                       L: int = DEFAULT_L) -> SymbolVector:
    """Fourfold source symbol at xi, from the field-equation expansion.

    The scalar block vanishes identically for cascades with zero metric
    polarization at first order, which is asserted here by construction:
    the returned scalar part is the zero vector of length L.
    """
    if cascade is None:
        cascade = cascade_symbols(q, L=L)
    metric = _assemble(cascade, weighted=True)
    return SymbolVector(metric, (Fraction(0),) * cascade.L)


def interaction_symbol_unweighted(q: Quadruple, cascade: CascadeState | None = None,
                                  L: int = DEFAULT_L) -> SymbolVector:
    """The closed-form variant without scalar weights (opposite overall sign).

    Kept for comparison; the span certificate records its rank next to
    the weighted assembly's.
    """
    if cascade is None:
        cascade = cascade_symbols(q, L=L)
    metric = _assemble(cascade, weighted=False)
    return SymbolVector(metric, (Fraction(0),) * cascade.L)
