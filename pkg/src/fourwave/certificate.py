"""Span-rank certificate and genericity sampling.

The certificate stacks the fourfold interaction symbols of the nine
valid quadruples and computes their exact rank over the rationals.  The
weighted (field-equation) assembly is the authoritative one; the
unweighted closed-form variant is computed alongside and the difference
is recorded, because the two do not agree: the unweighted variant drops
the scalar inner-product weights on the mixed terms and its span leaves
the rank-6 polarization subspace.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .cascade import (cascade_symbols, interaction_symbol,
                      interaction_symbol_unweighted, DEFAULT_L)
from .errors import NotABasis
from .exact import covec, rank_nullspace, rat_str
from .symbols import (LightDirection, Quadruple, decompose_xi,
                      enumerate_valid_quadruples, pythagorean_directions)

PAIRING_NOTE = ("p(g) at a covector eta is the scalar double contraction "
                "g(eta*, eta*) with indices raised by the inverse metric; "
                "single-index arguments of p are the wave covectors xi_l.")
ASSEMBLY_NOTE = ("authoritative symbols come from the fourfold expansion of "
                 "the reduced field equations (mixed terms weighted by the "
                 "scalar cascade inner products); the unweighted closed-form "
                 "variant differs by those weights and an overall sign, and "
                 "its rank is recorded for comparison.")


def exact_rank(rows) -> int:
    rank, _ = rank_nullspace(rows)
    return rank


def _witness_rows(rows):
    """Greedy selection of row indices whose span has the full rank."""
    picked = []
    current = []
    r = 0
    for i, row in enumerate(rows):
        cand = current + [row]
        cr = exact_rank(cand)
        if cr > r:
            picked.append(i)
            current = cand
            r = cr
    return picked, r


def span_rank_certificate(quadruples, L: int = DEFAULT_L):
    """Exact rank of the stacked interaction symbols plus a witness.

    Returns a dict with the stacked vectors (exact strings), the rank,
    up to six witness quadruple indices, the unweighted comparison rank,
    and the interpretation notes.
    """
    symbols = []
    symbols_unweighted = []
    for q in quadruples:
        st = cascade_symbols(q, L=L)
        symbols.append(interaction_symbol(q, st))
        symbols_unweighted.append(interaction_symbol_unweighted(q, st))
    rows = [s.stacked() for s in symbols]
    rows_u = [s.stacked() for s in symbols_unweighted]
    rank = exact_rank(rows) if rows else 0
    rank_u = exact_rank(rows_u) if rows_u else 0
    witness, wr = _witness_rows(rows) if rows else ([], 0)
    scalar_zero = all(all(c == 0 for c in s.scalar_part) for s in symbols)
    return {
        "rank": rank,
        "witness": witness[:6] if wr == rank else witness,
        "scalar_parts_zero": scalar_zero,
        "symbols": [[rat_str(v) for v in row] for row in rows],
        "unweighted": {
            "rank": rank_u,
            "agrees": rank_u == rank,
        },
        "notes": {"pairing": PAIRING_NOTE, "assembly": ASSEMBLY_NOTE},
    }


def full_certificate(L: int = DEFAULT_L):
    """Census of the 15 candidate subsets plus the span-rank certificate."""
    quads, census = enumerate_valid_quadruples(with_reasons=True)
    cert = span_rank_certificate(quads, L=L)
    cert["directions"] = [d.ints() for d in pythagorean_directions()]
    cert["candidates"] = [
        {
            "indices": list(idx),
            "status": status,
            "coefficients": None if detail is None else [rat_str(c) for c in detail],
        }
        for idx, status, detail in census
    ]
    cert["valid_count"] = sum(1 for _, s, _ in census if s == "valid")
    cert["rejected_count"] = sum(1 for _, s, _ in census if s != "valid")
    return cert


# ---------------------------------------------------------------------------
# genericity sampling
# ---------------------------------------------------------------------------

def _random_direction(rng: random.Random) -> LightDirection | None:
    """Random integer null covector from the rational cone parametrization.

    Draw rational (m, n, s), form (s^2+m^2+n^2, 2ms, 2ns, s^2-m^2-n^2),
    and clear denominators; the overall scale of a direction is
    irrelevant downstream, so the integer representative keeps everything
    exact and fast.  Returns None for the degenerate all-zero draw or a
    past-pointing one (s = m = n = 0 cannot happen after the zero check).
    """
    def rq():
        return Fraction(rng.randint(-9, 9), rng.randint(1, 4))

    m, n, s = rq(), rq(), rq()
    if m == 0 and n == 0 and s == 0:
        return None
    b = (s * s + m * m + n * n, 2 * m * s, 2 * n * s, s * s - (m * m + n * n))
    den = 1
    for x in b:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in b]
    if ints[0] <= 0:
        return None
    return LightDirection(covec(*ints))


def _random_quadruple(rng: random.Random):
    """One attempted quadruple; returns (Quadruple or None, reason)."""
    dirs = []
    for _ in range(4):
        d = _random_direction(rng)
        if d is None:
            return None, "degenerate_direction"
        dirs.append(d)
    try:
        q = decompose_xi(dirs)
    except NotABasis:
        return None, "not_a_basis"
    if not q.valid:
        return None, "zero_coefficient"
    return q, "ok"


@dataclass
class GenericityStats:
    seed: int
    requested: int
    families_valid: int = 0
    families_filtered: int = 0
    rank6: int = 0
    rank_histogram: dict = field(default_factory=dict)
    filter_reasons: dict = field(default_factory=dict)

    @property
    def fraction_rank6(self) -> float:
        if self.families_valid == 0:
            return 0.0
        return self.rank6 / self.families_valid

    def as_dict(self):
        return {
            "seed": self.seed,
            "requested": self.requested,
            "families_valid": self.families_valid,
            "families_filtered": self.families_filtered,
            "rank6": self.rank6,
            "fraction_rank6": self.fraction_rank6,
            "rank_histogram": {str(k): v for k, v in sorted(self.rank_histogram.items())},
            "filter_reasons": dict(sorted(self.filter_reasons.items())),
        }


def genericity_sample(seed: int, count: int, family_size: int = 6,
                      L: int = DEFAULT_L) -> GenericityStats:
    """Draw random quadruple families and measure how often they span rank 6.

    A draw is a family of ``family_size`` quadruples (six suffice to span
    the full polarization subspace).  Families where any quadruple fails
    the basis or nonzero-coefficient filter are excluded from the rank
    statistics and counted with their reason.  Deterministic in the seed.
    """
    if count < 1:
        raise ValueError("count must be positive")
    rng = random.Random(seed)
    stats = GenericityStats(seed=seed, requested=count)
    for _ in range(count):
        family = []
        reason = None
        for _ in range(family_size):
            q, why = _random_quadruple(rng)
            if q is None:
                reason = why
                break
            family.append(q)
        if reason is not None:
            stats.families_filtered += 1
            stats.filter_reasons[reason] = stats.filter_reasons.get(reason, 0) + 1
            continue
        rows = [interaction_symbol(q, L=L).stacked() for q in family]
        r = exact_rank(rows)
        stats.families_valid += 1
        stats.rank_histogram[r] = stats.rank_histogram.get(r, 0) + 1
        if r == 6:
            stats.rank6 += 1
    return stats
