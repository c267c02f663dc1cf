"""Geodesic and bicharacteristic flow, plus fibre transport along segments.

Covectors with positive time component are future pointing.  The flow
raises indices with the positive-definite block form (beta^-1, kappa^-1),
so a future-pointing covector generates a future-directed curve; on
Minkowski the covector (1, 1, 0, 0) flows along the line (s, s, 0, 0)
with the reported covector constant.  Internally the integrator works in
Hamiltonian form on the momentum (the lowered velocity); the reported
covector is the momentum with its time component flipped back.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IntegrationError, PreconditionError
from .spacetime import SpacetimeSpec

#: default local error target of the adaptive fourth-order stepper
LOCAL_ERROR = 1e-9


def flip_time(v) -> np.ndarray:
    out = np.array(v, dtype=float)
    out[0] = -out[0]
    return out


def hamiltonian(spec: SpacetimeSpec, x, lam) -> float:
    """g^{-1}(lam, lam) at x."""
    gi = spec.metric_inv(x)
    return float(lam @ gi @ lam)


def future_velocity(spec: SpacetimeSpec, x, xi) -> np.ndarray:
    """Raise a covector with the positive-definite block form.

    u^0 = xi_0 / beta, u^i = kappa^{ij} xi_j; null covectors give null
    vectors and positive time components stay positive.
    """
    gi = spec.metric_inv(x)
    u = gi @ np.asarray(xi, dtype=float)
    u[0] = -u[0]
    return u


def null_project(spec: SpacetimeSpec, x, xi) -> np.ndarray:
    """Rescale the time component so the covector is exactly lightlike."""
    xi = np.array(xi, dtype=float)
    gi = spec.metric_inv(x)
    spatial = float(xi[1:] @ gi[1:, 1:] @ xi[1:])
    if spatial <= 0:
        raise PreconditionError("cannot project a purely temporal covector")
    beta = -1.0 / gi[0, 0]
    xi[0] = np.sign(xi[0]) * np.sqrt(beta * spatial) if xi[0] != 0 \
        else np.sqrt(beta * spatial)
    return xi


@dataclass(frozen=True)
class BicharState:
    """Position, reported covector, and flow parameter of one sample."""

    x: np.ndarray
    xi: np.ndarray
    s: float

    def momentum(self) -> np.ndarray:
        return flip_time(self.xi)


def _rhs(spec: SpacetimeSpec, state: np.ndarray) -> np.ndarray:
    x, lam = state[:4], state[4:]
    gi = spec.metric_inv(x)
    dx = gi @ lam
    if spec.is_flat:
        dlam = np.zeros(4)
    else:
        # dlam_j = -1/2 d_j g^{pq} lam_p lam_q = +1/2 (dg_j)(u, u), u = g^-1 lam
        dg = spec.metric_deriv(x)
        dlam = 0.5 * np.einsum("kpq,p,q->k", dg, dx, dx)
    return np.concatenate([dx, dlam])


def adaptive_rk4(rhs, y0, s_end: float, tol: float = LOCAL_ERROR,
                 h0: float = 0.1):
    """Generic fourth-order integrator with step halving; returns the list
    of (s, state) samples including both endpoints.  s_end must be >= 0."""

    def step(y, h):
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * h * k1)
        k3 = rhs(y + 0.5 * h * k2)
        k4 = rhs(y + h * k3)
        return y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)

    y = np.array(y0, dtype=float)
    out = [(0.0, y.copy())]
    if s_end == 0:
        return out
    s = 0.0
    h = min(h0, s_end)
    min_step = s_end * 1e-14 + 1e-300
    while s < s_end:
        h = min(h, s_end - s)
        while True:
            full = step(y, h)
            half = step(step(y, h / 2), h / 2)
            err = float(np.max(np.abs(full - half))) / 15.0
            scale = 1.0 + float(np.max(np.abs(y)))
            if err <= tol * scale:
                break
            h *= 0.5
            if h <= min_step:
                raise IntegrationError("step underflow", last_state=out[-1])
        y = half + (half - full) / 15.0
        s += h
        out.append((s, y.copy()))
        if err > 0:
            h *= min(4.0, max(0.25, 0.9 * (tol * scale / err) ** 0.2))
        else:
            h *= 4.0
    return out


def _rk4(spec, y, h):
    k1 = _rhs(spec, y)
    k2 = _rhs(spec, y + 0.5 * h * k1)
    k3 = _rhs(spec, y + 0.5 * h * k2)
    k4 = _rhs(spec, y + h * k3)
    return y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def geodesic_flow(spec: SpacetimeSpec, x, xi, s_max: float,
                  tol: float = LOCAL_ERROR, lightlike: bool = True,
                  record_every: float = 0.0) -> list[BicharState]:
    """Integrate the flow to parameter s_max with adaptive step halving.

    A full step is compared against two half steps; the step is accepted
    when their difference (over 15, the fourth-order error estimate) is
    below ``tol``.  Lightlike flows are re-projected onto the null cone
    whenever the Hamiltonian drifts beyond tol/2.  ``record_every`` > 0
    records extra states at that parameter spacing.
    """
    xi0 = np.asarray(xi, dtype=float)
    if not np.any(xi0):
        raise PreconditionError("zero covector cannot be flowed")
    x0 = np.asarray(x, dtype=float)
    lam = flip_time(xi0)
    y = np.concatenate([x0, lam])
    h_target = hamiltonian(spec, x0, lam)
    # re-projection is a null-cone operation; leave causal flows alone
    lightlike = lightlike and abs(h_target) <= 1e3 * tol
    direction = 1.0 if s_max >= 0 else -1.0
    s_end = abs(float(s_max))

    states = [BicharState(x0.copy(), xi0.copy(), 0.0)]
    s = 0.0
    h = direction * min(s_end if s_end > 0 else 1.0, 0.1)
    next_record = record_every if record_every > 0 else np.inf
    min_step = s_end * 1e-14 + 1e-14
    while s < s_end:
        h = direction * min(abs(h), s_end - s)
        while True:
            full = _rk4(spec, y, h)
            half = _rk4(spec, _rk4(spec, y, h / 2), h / 2)
            err = float(np.max(np.abs(full - half))) / 15.0
            scale = 1.0 + float(np.max(np.abs(y)))
            if err <= tol * scale or abs(h) <= min_step:
                break
            h *= 0.5
            if abs(h) <= min_step:
                raise IntegrationError("step underflow", last_state=states[-1])
        y = half + (half - full) / 15.0  # local extrapolation
        s += abs(h)
        if err > 0:
            h *= min(4.0, max(0.25, 0.9 * (tol * scale / err) ** 0.2))
        else:
            h *= 4.0
        if lightlike:
            drift = hamiltonian(spec, y[:4], y[4:]) - h_target
            if abs(drift) > tol / 2:
                y[4:] = flip_time(null_project(spec, y[:4], flip_time(y[4:])))
        st = BicharState(y[:4].copy(), flip_time(y[4:]), direction * s)
        if s >= next_record or s >= s_end:
            states.append(st)
            while next_record <= s:
                next_record += record_every
        else:
            states.append(st)
    return states


def geodesic_point(spec: SpacetimeSpec, x, xi, s: float,
                   tol: float = LOCAL_ERROR) -> np.ndarray:
    """Position at parameter s; straight line on flat presets."""
    x = np.asarray(x, dtype=float)
    if spec.is_flat:
        return x + s * future_velocity(spec, x, xi)
    if s == 0:
        return x.copy()
    return geodesic_flow(spec, x, xi, s, tol=tol)[-1].x


def geodesic_states(spec: SpacetimeSpec, x, xi, s_values, tol: float = LOCAL_ERROR):
    """Positions at each parameter in ascending s_values (one integration)."""
    x = np.asarray(x, dtype=float)
    if spec.is_flat:
        u = future_velocity(spec, x, xi)
        return [x + s * u for s in s_values]
    out = []
    states = geodesic_flow(spec, x, xi, max(s_values), tol=tol)
    ss = np.array([st.s for st in states])
    xs = np.array([st.x for st in states])
    for s in s_values:
        i = int(np.searchsorted(ss, s))
        if i >= len(ss):
            out.append(xs[-1])
        elif ss[i] == s or i == 0:
            out.append(xs[i])
        else:
            t = (s - ss[i - 1]) / (ss[i] - ss[i - 1])
            out.append(xs[i - 1] * (1 - t) + xs[i] * t)
    return out


def vector_geodesic(spec: SpacetimeSpec, x, u, s_max: float,
                    tol: float = LOCAL_ERROR) -> list[BicharState]:
    """Geodesic with an initial velocity vector (used by charts and maps)."""
    g = spec.metric(np.asarray(x, dtype=float))
    lam = g @ np.asarray(u, dtype=float)
    return geodesic_flow(spec, x, flip_time(lam), s_max, tol=tol, lightlike=False)


def exp_map(spec: SpacetimeSpec, x, u, tol: float = LOCAL_ERROR) -> np.ndarray:
    """exp_x(u): geodesic from x with velocity u evaluated at parameter 1."""
    u = np.asarray(u, dtype=float)
    if spec.is_flat:
        return np.asarray(x, dtype=float) + u
    if not np.any(u):
        return np.asarray(x, dtype=float).copy()
    return vector_geodesic(spec, x, u, 1.0, tol=tol)[-1].x


def symbol_transport(spec: SpacetimeSpec, segment, c_field, value,
                     max_step: float = 0.002):
    """Transport a fibre value along a flowed segment: dq/ds = -i c(state) q.

    ``segment`` is a list of BicharState from :func:`geodesic_flow`;
    ``c_field`` maps (x, xi) to an endomorphism (matrix) or None for the
    flat vacuum default c = 0, which transports values unchanged.
    Traversing the reversed segment (decreasing parameter) integrates in
    the opposite direction and yields the inverse map.
    """
    value = np.asarray(value, dtype=complex)
    if c_field is None:
        return value.copy()

    def rhs(x, xi, q):
        return -1j * np.asarray(c_field(x, xi)) @ q

    q = value.copy()
    for a, b in zip(segment[:-1], segment[1:]):
        nsub = max(1, int(np.ceil(abs(b.s - a.s) / max_step)))
        ds = (b.s - a.s) / nsub
        for k in range(nsub):
            t0 = k / nsub
            tm = (k + 0.5) / nsub
            t1 = (k + 1) / nsub

            def at(t):
                return (a.x * (1 - t) + b.x * t, a.xi * (1 - t) + b.xi * t)

            k1 = rhs(*at(t0), q)
            k2 = rhs(*at(tm), q + 0.5 * ds * k1)
            k3 = rhs(*at(tm), q + 0.5 * ds * k2)
            k4 = rhs(*at(t1), q + ds * k3)
            q = q + (ds / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return q


def reverse_segment(segment):
    """The same path with decreasing parameter values.

    Transporting along it integrates the transport equation in the
    opposite direction (negative parameter increments), which yields the
    inverse of the forward transport map.
    """
    return list(reversed(segment))
