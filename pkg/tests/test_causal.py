"""Time separation, causal predicates, and cut values."""
import math
import random
from itertools import product

import numpy as np
import pytest

from fourwave.causal import (causal_leq, chronological_relation, cut_point,
                             cut_value, in_diamond, time_separation)
from fourwave.errors import Unsupported
from fourwave.spacetime import conformal_minkowski, flat_torus, minkowski

MINK = minkowski()
TORUS = flat_torus(1.0, 1.0, 1.0)


def _brute_force_torus_tau(spec, p, q):
    """Lattice enumeration oracle: |k_i| <= ceil(dt/L_i) + 1 around the
    nearest translate (the stated bound assumes fundamental-domain
    displacements, so the window is anchored at round(dy/L))."""
    dt = q[0] - p[0]
    if dt <= 0:
        return 0.0
    dy = np.asarray(q[1:]) - np.asarray(p[1:])
    best = 0.0
    rngs = []
    for i, L in enumerate(spec.lengths):
        c = round(dy[i] / L)
        w = math.ceil(dt / L) + 1
        rngs.append(range(c - w, c + w + 1))
    for k in product(*rngs):
        disp = dy - np.array(k) * np.array(spec.lengths)
        m2 = dt * dt - float(disp @ disp)
        if m2 > 0:
            best = max(best, math.sqrt(m2))
    return best


def test_tau_minkowski_examples():
    assert np.isclose(time_separation(MINK, (0, 0, 0, 0), (2, 1, 0, 0)),
                      math.sqrt(3))
    assert time_separation(MINK, (0, 0, 0, 0), (1, 2, 0, 0)) == 0.0  # spacelike
    assert time_separation(MINK, (0, 0, 0, 0), (-1, 0, 0, 0)) == 0.0  # past


def test_tau_torus_example():
    # best translate k = (1, 0, 0) beats the direct route
    tau = time_separation(TORUS, (0, 0, 0, 0), (1.2, 0.9, 0, 0))
    assert np.isclose(tau, math.sqrt(1.44 - 0.01))


def test_tau_torus_matches_brute_force_oracle():
    rng = random.Random(31)
    spec = flat_torus(1.0, 2.0, 0.5)
    for _ in range(200):
        p = [rng.uniform(-2, 2) for _ in range(4)]
        q = [rng.uniform(-2, 2) for _ in range(4)]
        assert np.isclose(time_separation(spec, p, q),
                          _brute_force_torus_tau(spec, p, q), atol=1e-12)


def test_tau_unsupported_on_conformal():
    spec = conformal_minkowski([(1.0, (0, 0, 0, 0))])
    with pytest.raises(Unsupported):
        time_separation(spec, (0, 0, 0, 0), (1, 0, 0, 0))


def test_tau_antisymmetry():
    rng = random.Random(13)
    for spec in (MINK, TORUS):
        for _ in range(100):
            p = [rng.uniform(-2, 2) for _ in range(4)]
            q = [rng.uniform(-2, 2) for _ in range(4)]
            if time_separation(spec, p, q) > 0:
                assert time_separation(spec, q, p) == 0.0


def test_chronological_relations():
    assert chronological_relation(MINK, (0, 0, 0, 0), (1, 0, 0, 0)) == "before"
    assert chronological_relation(MINK, (1, 0, 0, 0), (0, 0, 0, 0)) == "after"
    # lightlike separation is not chronological
    assert chronological_relation(MINK, (0, 0, 0, 0), (1, 1, 0, 0)) == \
        "incomparable"


def test_diamond_against_midpoint_curve_oracle():
    rng = random.Random(17)
    p = np.array([0.0, 0, 0, 0])
    r = np.array([2.0, 0, 0, 0])
    for _ in range(100):
        q = np.array([rng.uniform(-0.5, 2.5)] +
                     [rng.uniform(-1.5, 1.5) for _ in range(3)])
        # oracle: the broken curve p -> q -> r is future timelike iff both
        # straight legs are
        leg1 = q - p
        leg2 = r - q
        ok = (leg1[0] > np.linalg.norm(leg1[1:]) and
              leg2[0] > np.linalg.norm(leg2[1:]))
        assert in_diamond(MINK, q, p, r) == ok


def test_causal_leq():
    assert causal_leq(MINK, (0, 0, 0, 0), (1, 1, 0, 0))   # lightlike
    assert causal_leq(MINK, (0, 0, 0, 0), (0, 0, 0, 0))   # reflexive
    assert not causal_leq(MINK, (0, 0, 0, 0), (1, 2, 0, 0))
    # wrap-around reachability on the torus
    assert causal_leq(TORUS, (0, 0, 0, 0), (0.3, 0.9, 0, 0))
    # the conformal preset shares Minkowski's causal order
    conf = conformal_minkowski([(1.0, (0, 0, 0, 0)), (0.05, (2, 0, 0, 0))])
    assert causal_leq(conf, (0, 0, 0, 0), (1, 1, 0, 0))
    assert not causal_leq(conf, (0, 0, 0, 0), (1, 2, 0, 0))


def _brute_force_cut(spec, x, xi, s_max=4.0):
    """Dense-scan oracle built on the brute-force tau."""
    from fourwave.flows import geodesic_point
    lo = 0.0
    for s in np.arange(1e-4, s_max, 1e-4):
        if _brute_force_torus_tau(spec, x, geodesic_point(spec, x, xi, s)) > 0:
            return s
        lo = s
    return math.inf


def test_cut_value_examples():
    assert cut_value(MINK, (0, 0, 0, 0), (1, 1, 0, 0)) == math.inf
    rho = cut_value(TORUS, (0, 0, 0, 0), (1, 1, 0, 0))
    assert abs(rho - 0.5) <= 1e-6
    rho2 = cut_value(flat_torus(2, 1, 1), (0, 0, 0, 0), (1, 1, 0, 0))
    assert abs(rho2 - 1.0) <= 1e-6
    # brute-force scan oracle agrees to its own resolution
    assert abs(rho - _brute_force_cut(TORUS, (0, 0, 0, 0), (1, 1, 0, 0))) \
        <= 2e-4


def test_cut_point():
    pt, rho = cut_point(TORUS, (0, 0, 0, 0), (1, 1, 0, 0))
    assert abs(rho - 0.5) <= 1e-6
    assert np.allclose(pt, [rho, rho, 0, 0], atol=1e-6)
    pt, rho = cut_point(MINK, (0, 0, 0, 0), (1, 1, 0, 0))
    assert pt is None and math.isinf(rho)


def test_cut_value_lower_semicontinuity_probe():
    # directions converging to e1 on the torus: liminf rho >= rho(limit) - tol
    base = cut_value(TORUS, (0, 0, 0, 0), (1, 1, 0, 0))
    rhos = []
    for eps in (0.04, 0.02, 0.01, 0.005):
        n = np.array([1.0, eps, 0.0])
        n /= np.linalg.norm(n)
        xi = np.concatenate([[1.0], n])
        rhos.append(cut_value(TORUS, (0, 0, 0, 0), xi))
    assert min(rhos[-2:]) >= base - 1e-4
