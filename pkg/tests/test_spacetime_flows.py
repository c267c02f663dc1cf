"""Presets, Christoffels, geodesic flow, and fibre transport."""
import numpy as np
import pytest

from fourwave.errors import PreconditionError, Unsupported
from fourwave.exact import covec
from fourwave.flows import (BicharState, future_velocity, geodesic_flow,
                            geodesic_point, hamiltonian, null_project,
                            reverse_segment, symbol_transport)
from fourwave.spacetime import (christoffels, conformal_minkowski, flat_torus,
                                load_spec, minkowski, spec_from_dict)
from fourwave.symbols import constraint_fibre_basis

MINK = minkowski()
TORUS = flat_torus(1.0, 1.0, 1.0)
CONF = conformal_minkowski([(1.0, (0, 0, 0, 0)), (0.05, (2, 0, 0, 0)),
                            (0.03, (0, 2, 0, 0))])


def test_christoffels_zero_on_flat_and_constant_conformal():
    x = (0.3, 0.1, -0.2, 0.7)
    assert np.allclose(christoffels(MINK, x), 0)
    assert np.allclose(christoffels(TORUS, x), 0)
    const = conformal_minkowski([(1.0, (0, 0, 0, 0))])
    assert np.allclose(christoffels(const, x), 0)


def test_christoffels_analytic_vs_finite_difference():
    import dataclasses
    x = (0.2, 0.4, -0.1, 0.3)
    fd = dataclasses.replace(CONF, analytic_derivs=False)
    assert np.allclose(christoffels(CONF, x), christoffels(fd, x),
                       atol=1e-7)
    assert not np.allclose(christoffels(CONF, x), 0)


def test_minkowski_flow_is_straight_line():
    states = geodesic_flow(MINK, (0, 0, 0, 0), (1, 1, 0, 0), 2.0)
    for st in states:
        assert np.allclose(st.x, [st.s, st.s, 0, 0], atol=1e-12)
        assert np.allclose(st.xi, [1, 1, 0, 0], atol=1e-12)


def test_torus_wrap_bookkeeping():
    states = geodesic_flow(TORUS, (0, 0, 0, 0), (1, 1, 0, 0), 2.5)
    end = states[-1]
    # unwrapped coordinates keep growing; the wrapped ones stay in [0, L)
    assert end.x[1] > 2.0
    wrapped = TORUS.wrap(end.x)
    assert 0.0 <= wrapped[1] < 1.0
    assert np.isclose(wrapped[1], end.x[1] % 1.0)


def test_hamiltonian_conservation_and_reversal():
    null_dir = np.array([1.0, 0.6, 0.8, 0.0])
    causal_dir = np.array([1.0, 0.3, 0.4, 0.0])
    for spec in (MINK, CONF):
        for xi in (null_dir, causal_dir):
            states = geodesic_flow(spec, (0, 0.2, 0.1, 0), xi, 1.5, tol=1e-9)
            h0 = hamiltonian(spec, states[0].x, states[0].momentum())
            for st in states:
                assert abs(hamiltonian(spec, st.x, st.momentum()) - h0) \
                    <= 1e-9 * 10 * (1 + abs(h0))
            # reverse: flow the negated covector back for the same parameter
            end = states[-1]
            back = geodesic_flow(spec, end.x, -end.xi, abs(end.s), tol=1e-9)
            scale = 1 + float(np.max(np.abs(end.x)))
            assert np.allclose(back[-1].x, states[0].x, atol=1e-8 * scale)


def test_conformal_null_image_is_minkowski_line():
    # null geodesics of a conformal rescaling trace the same lines
    for spec in (CONF,
                 conformal_minkowski([(1.0, (0, 0, 0, 0)), (0.1, (1, 0, 0, 0))]),
                 conformal_minkowski([(2.0, (0, 0, 0, 0)), (0.02, (0, 0, 2, 0))])):
        xi = np.array([1.0, 0.6, 0.8, 0.0])
        states = geodesic_flow(spec, (0, 0, 0, 0), xi, 2.0, tol=1e-11)
        u = future_velocity(MINK, (0, 0, 0, 0), xi)
        u = u / np.linalg.norm(u)
        for st in states:
            # distance to the line through the origin with direction u
            proj = float(st.x @ u) * u
            assert np.linalg.norm(st.x - proj) <= 1e-6


def test_null_projection_and_future_velocity():
    xi = null_project(CONF, (0.1, 0.2, 0, 0), np.array([0.5, 1.0, 2.0, 0.0]))
    assert abs(hamiltonian(CONF, (0.1, 0.2, 0, 0),
                           np.array([-xi[0], xi[1], xi[2], xi[3]]))) < 1e-12
    u = future_velocity(MINK, (0, 0, 0, 0), (1, 1, 0, 0))
    assert np.allclose(u, [1, 1, 0, 0])
    with pytest.raises(PreconditionError):
        null_project(MINK, (0, 0, 0, 0), (1.0, 0, 0, 0))
    with pytest.raises(PreconditionError):
        geodesic_flow(MINK, (0, 0, 0, 0), (0, 0, 0, 0), 1.0)


def test_geodesic_point_matches_flow():
    p = geodesic_point(CONF, (0, 0, 0, 0), (1, 1, 0, 0), 1.3)
    states = geodesic_flow(CONF, (0, 0, 0, 0), (1, 1, 0, 0), 1.3)
    assert np.allclose(p, states[-1].x, atol=1e-9)


def test_symbol_transport_constant_for_flat_vacuum():
    states = geodesic_flow(MINK, (0, 0, 0, 0), (1, 1, 0, 0), 2.0)
    v = np.arange(10, dtype=float)
    assert np.allclose(symbol_transport(MINK, states, None, v), v)


def test_symbol_transport_roundtrip_inverse():
    rng = np.random.default_rng(7)
    states = geodesic_flow(MINK, (0, 0, 0, 0), (1, 1, 0, 0), 1.0)
    for _ in range(5):
        C = rng.normal(size=(6, 6))

        def c_field(x, xi):
            # smooth position-dependent endomorphism
            return C * (1.0 + 0.3 * float(np.sin(x[0] + x[1])))

        v = rng.normal(size=6)
        fwd = symbol_transport(MINK, states, c_field, v)
        back = symbol_transport(MINK, reverse_segment(states), c_field, fwd)
        assert np.max(np.abs(back - v)) <= 1e-8 * (1 + np.max(np.abs(v)))


def test_symbol_transport_preserves_constraint_fibre_flat():
    # along flat bicharacteristics the covector is constant, so a
    # polarization in the constraint fibre stays in it under c = 0
    xi = covec(1, 1, 0, 0)
    fibre = constraint_fibre_basis(xi)
    states = geodesic_flow(MINK, (0, 0, 0, 0), (1, 1, 0, 0), 3.0)
    h = fibre.basis[2]
    v = np.array([float(c) for c in h.data])
    out = symbol_transport(MINK, states, None, v)
    assert np.allclose(out.real, v) and np.allclose(out.imag, 0)
    assert np.allclose(states[-1].xi, states[0].xi)


def test_spec_files_roundtrip(tmp_path):
    for spec in (MINK, TORUS, CONF):
        doc = spec.to_dict()
        again = spec_from_dict(doc)
        assert again.kind == spec.kind
        path = tmp_path / "spec.json"
        import json
        path.write_text(json.dumps(doc))
        assert load_spec(path).to_dict() == doc
    with pytest.raises(PreconditionError):
        spec_from_dict({"type": "schwarzschild"})


def test_conformal_positive_factor_required():
    spec = conformal_minkowski([(1.0, (0, 0, 0, 0)), (-1.0, (2, 0, 0, 0))])
    with pytest.raises(PreconditionError):
        spec.metric((2.0, 0, 0, 0))  # 1 - 4 < 0
