"""Exact analysis of four lightlike hyperplanes in Minkowski space.

The hyperplanes K_j = {x : <b_j, x> = c_j} carry the null conormals b_j.
Pairwise: the lightlike covectors in span{b_i, b_j} are exactly the two
generating lines (the restricted light-cone form factors as
2 a b <b_i, b_j>, and the cross pairing of non-proportional null
covectors never vanishes).  Triples: the lightlike covectors in the
three-dimensional span form a nondegenerate conic with rational points
off the generating lines; a witness is produced exactly.  The quadruple
meets in a single point whose conormal is the whole fibre.  For each
triple the intersection line and a sampled flowout surface (the
singular-support bound of the triple interaction) are reported.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import PreconditionError
from .exact import CoVec4, covec, is_lightlike, mink_pair, rank_nullspace, rat, solve_exact
from .symbols import LightDirection


def _as_direction(b) -> LightDirection:
    if isinstance(b, LightDirection):
        return b
    if isinstance(b, CoVec4):
        return LightDirection(b)
    return LightDirection(covec(*b))


@dataclass(frozen=True)
class PairReport:
    indices: tuple
    cross_pairing: Fraction
    #: lightlike covectors in the span are exactly the two generating lines
    only_generators_lightlike: bool


@dataclass(frozen=True)
class TripleReport:
    indices: tuple
    gram_off_diagonal: tuple
    conic_determinant: Fraction
    witness: tuple            # exact lightlike covector off the three lines
    line_point: tuple         # a point of K_i ^ K_j ^ K_k
    line_direction: tuple     # its direction


@dataclass(frozen=True)
class ArrangementReport:
    conormals: tuple
    offsets: tuple
    pairs: tuple
    triples: tuple
    vertex: tuple             # intersection point of all four planes
    vertex_conormal_rank: int  # 4: the conormal fibre is everything
    flowout_samples: dict      # triple indices -> float point cloud (n, 4)


def _conic_witness(b1: CoVec4, b2: CoVec4, b3: CoVec4):
    """Rational covector a*b1 + b*b2 + c*b3, lightlike, all coefficients
    nonzero.  With pairings c12, c13, c23 all nonzero, setting c = 1 and
    solving 2ab c12 + 2a c13 + 2b c23 = 0 gives b(a) = -a c13 / (a c12 + c23);
    any a with a c12 + c23 != 0 works."""
    c12 = mink_pair(b1, b2)
    c13 = mink_pair(b1, b3)
    c23 = mink_pair(b2, b3)
    a = Fraction(1)
    while a * c12 + c23 == 0:
        a += 1
    bcoef = -a * c13 / (a * c12 + c23)
    w = b1.scale(a) + b2.scale(bcoef) + b3.scale(1)
    assert is_lightlike(w) and bcoef != 0
    return (a, bcoef, Fraction(1)), w


def _conic_points(b1, b2, b3, n: int):
    """n exact lightlike covectors in the triple span (grid in the
    rational parametrization; includes the generators as limits)."""
    c12 = mink_pair(b1, b2)
    c13 = mink_pair(b1, b3)
    c23 = mink_pair(b2, b3)
    pts = []
    k = 0
    step = Fraction(1, 2)
    a = Fraction(-n) * step
    while len(pts) < n:
        if a * c12 + c23 != 0:
            bcoef = -a * c13 / (a * c12 + c23)
            w = b1.scale(a) + b2.scale(bcoef) + b3.scale(1)
            if not w.is_zero():
                pts.append(w)
        a += step
        k += 1
        if k > 8 * n:
            break
    return pts


def plane_arrangement_analysis(conormals, offsets, flowout_grid: int = 8,
                               flowout_span: float = 2.0) -> ArrangementReport:
    """Full exact arrangement report for four null hyperplanes.

    Raises on proportional conormals (degenerate arrangement); everything
    else is computed over the rationals, with only the flowout surface
    sampling emitted in floating point.
    """
    dirs = tuple(_as_direction(b) for b in conormals)
    if len(dirs) != 4 or len(offsets) != 4:
        raise PreconditionError("need four conormals and four offsets")
    offsets = tuple(rat(c) for c in offsets)

    for i, j in combinations(range(4), 2):
        if mink_pair(dirs[i].b, dirs[j].b) == 0:
            # distinct null covectors are orthogonal iff proportional
            raise PreconditionError(f"conormals {i} and {j} are proportional")

    pairs = []
    for i, j in combinations(range(4), 2):
        cp = mink_pair(dirs[i].b, dirs[j].b)
        # q(a b_i + b b_j) = 2 a b cp: zero iff a = 0 or b = 0, exactly
        pairs.append(PairReport((i, j), cp, cp != 0))

    triples = []
    clouds = {}
    for idx in combinations(range(4), 3):
        b1, b2, b3 = (dirs[i].b for i in idx)
        coeffs, w = _conic_witness(b1, b2, b3)
        c12 = mink_pair(b1, b2)
        c13 = mink_pair(b1, b3)
        c23 = mink_pair(b2, b3)
        det = 2 * c12 * c13 * c23  # det of the restricted cone form
        # intersection line of the three planes
        rows = [[dirs[i].b[k] for k in range(4)] for i in idx]
        point = solve_exact(rows, [offsets[i] for i in idx])
        _, null = rank_nullspace(rows)
        assert len(null) == 1
        direction = null[0]
        triples.append(TripleReport(
            idx, (c12, c13, c23), det,
            tuple(w), tuple(point), tuple(direction)))
        # sampled flowout: points line(t) + s * velocity(conic covector)
        cloud = []
        base = np.array([float(v) for v in point])
        ldir = np.array([float(v) for v in direction])
        svals = np.linspace(-flowout_span, flowout_span, flowout_grid)
        for cv in _conic_points(b1, b2, b3, flowout_grid):
            # the null velocity of a covector has the same components here
            vel = np.array([float(cv[0]), float(cv[1]), float(cv[2]), float(cv[3])])
            for t in np.linspace(-flowout_span, flowout_span, flowout_grid):
                for s in svals:
                    cloud.append(base + t * ldir + s * vel)
        clouds[idx] = np.array(cloud)

    rows = [[dirs[i].b[k] for k in range(4)] for i in range(4)]
    vrank, _ = rank_nullspace(rows)
    if vrank < 4:
        vertex = ()
    else:
        vertex = tuple(solve_exact(rows, list(offsets)))

    return ArrangementReport(
        conormals=tuple(d.ints() for d in dirs),
        offsets=offsets,
        pairs=tuple(pairs),
        triples=tuple(triples),
        vertex=vertex,
        vertex_conormal_rank=vrank,
        flowout_samples=clouds,
    )


def lightlike_in_pair_span(b1, b2, alpha, beta) -> bool:
    """Exact test: is alpha*b1 + beta*b2 lightlike?"""
    b1 = _as_direction(b1).b
    b2 = _as_direction(b2).b
    w = b1.scale(rat(alpha)) + b2.scale(rat(beta))
    return is_lightlike(w)
