"""Time separation, causal predicates, and cut values on the presets.

The time separation tau(p, q) is the supremal proper time of causal
curves from p to q, zero when q is not in the chronological future of p.
It is computed analytically on Minkowski space and by maximizing over
lattice translates on the flat torus; other presets raise Unsupported
(the causal predicates, being conformally invariant, work everywhere).
"""
from __future__ import annotations

import math

import numpy as np

from .errors import PreconditionError, Unsupported
from .flows import geodesic_point
from .spacetime import SpacetimeSpec, require_preset


def _torus_min_dist(spec: SpacetimeSpec, dy) -> float:
    """Shortest spatial displacement over lattice translates dy - k*L.

    The squared distance splits per axis, so the best translate is found
    by rounding each component; this equals the max over the bounded
    lattice search |k_i| <= ceil(dt/L_i)+1 used as the test oracle.
    """
    d2 = 0.0
    for i in range(3):
        L = spec.lengths[i]
        r = dy[i] - round(dy[i] / L) * L
        d2 += r * r
    return math.sqrt(d2)


def time_separation(spec: SpacetimeSpec, p, q) -> float:
    """tau(p, q): positive iff p strictly chronologically precedes q."""
    require_preset(spec, ("minkowski", "flat_torus"), "time_separation")
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    dt = q[0] - p[0]
    if dt <= 0:
        return 0.0
    dy = q[1:] - p[1:]
    if spec.kind == "minkowski":
        dist = float(np.sqrt(dy @ dy))
    else:
        dist = _torus_min_dist(spec, dy)
    # factored form avoids squaring cancellation near the light cone
    m2 = (dt - dist) * (dt + dist)
    return math.sqrt(m2) if m2 > 0 else 0.0


def causal_leq(spec: SpacetimeSpec, p, q) -> bool:
    """p <= q: q reachable from p by a future causal curve (or equal).

    Conformally invariant, so the Minkowski rule also serves the
    conformal preset.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    dt = q[0] - p[0]
    if dt < 0:
        return False
    dy = q[1:] - p[1:]
    if spec.kind == "flat_torus":
        dist = _torus_min_dist(spec, dy)
    else:
        dist = float(np.sqrt(dy @ dy))
    return dt >= dist


def chronological_relation(spec: SpacetimeSpec, p, q) -> str:
    """'before' (p << q), 'after' (q << p), or 'incomparable'."""
    if time_separation(spec, p, q) > 0:
        return "before"
    if time_separation(spec, q, p) > 0:
        return "after"
    return "incomparable"


def in_diamond(spec: SpacetimeSpec, y, p, q) -> bool:
    """Membership in the open chronological diamond between p and q."""
    return (time_separation(spec, p, y) > 0 and
            time_separation(spec, y, q) > 0)


def cut_value(spec: SpacetimeSpec, x, xi, s_max: float = 16.0,
              tol: float = 1e-6) -> float:
    """Last parameter before the geodesic enters the chronological future.

    Bisection on s with the predicate tau(x, gamma(s)) > 0, seeded by a
    forward scan; +inf when the predicate never fires before s_max.  The
    predicate carries a strict margin of 1e-7 because points exactly on
    the light cone produce rounding-level phantom separations; the bias
    this introduces in s is far below the bisection tolerance.
    """
    require_preset(spec, ("minkowski", "flat_torus"), "cut_value")
    x = np.asarray(x, dtype=float)
    if spec.kind == "minkowski":
        return math.inf  # straight null rays never re-enter the future

    def entered(s: float) -> bool:
        tau = time_separation(spec, x, geodesic_point(spec, x, xi, s))
        return tau > 1e-7 * (1.0 + abs(s))

    step = min(spec.lengths) / 8.0
    lo, hi = 0.0, None
    s = step
    while s <= s_max + 1e-12:
        if entered(s):
            hi = s
            break
        lo = s
        s += step
    if hi is None:
        return math.inf
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if entered(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def cut_point(spec: SpacetimeSpec, x, xi, s_max: float = 16.0,
              tol: float = 1e-6):
    """The geodesic point at the cut value, or None when there is none."""
    rho = cut_value(spec, x, xi, s_max=s_max, tol=tol)
    if math.isinf(rho):
        return None, rho
    return geodesic_point(spec, x, xi, rho), rho
