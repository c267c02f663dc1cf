"""Preset globally hyperbolic spacetimes -beta dt^2 + kappa.

Three presets are provided: Minkowski space, the flat spatial torus with
periods (L1, L2, L3), and conformally rescaled Minkowski space with
metric Omega(x)^2 eta for a polynomial Omega.  Metric derivatives are
analytic for every preset; a central-difference fallback (relative step
1e-5) exists for exercising the generic path.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError, Unsupported

ETA = np.diag([-1.0, 1.0, 1.0, 1.0])


def _poly_eval(monomials, x):
    total = 0.0
    for coeff, exps in monomials:
        term = coeff
        for xi, e in zip(x, exps):
            if e:
                term *= xi ** e
        total += term
    return total


def _poly_deriv(monomials, k):
    out = []
    for coeff, exps in monomials:
        if exps[k] == 0:
            continue
        d = list(exps)
        d[k] -= 1
        out.append((coeff * exps[k], tuple(d)))
    return out


@dataclass(frozen=True)
class SpacetimeSpec:
    """Immutable preset description; all flows are stateless given this."""

    kind: str
    lengths: tuple | None = None
    omega: tuple | None = None  # ((coeff, (e0,e1,e2,e3)), ...)
    analytic_derivs: bool = True
    fd_rel_step: float = 1e-5
    _omega_grad: tuple = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in ("minkowski", "flat_torus", "conformal_minkowski"):
            raise PreconditionError(f"unknown preset {self.kind!r}")
        if self.kind == "flat_torus":
            if not self.lengths or len(self.lengths) != 3 or min(self.lengths) <= 0:
                raise PreconditionError("flat_torus needs three positive lengths")
            object.__setattr__(self, "lengths", tuple(float(L) for L in self.lengths))
        if self.kind == "conformal_minkowski":
            if not self.omega:
                raise PreconditionError("conformal_minkowski needs Omega monomials")
            om = tuple((float(c), tuple(int(e) for e in exps))
                       for c, exps in self.omega)
            object.__setattr__(self, "omega", om)
            object.__setattr__(self, "_omega_grad",
                               tuple(tuple(_poly_deriv(om, k)) for k in range(4)))

    @property
    def is_flat(self) -> bool:
        return self.kind in ("minkowski", "flat_torus")

    def omega_at(self, x) -> float:
        w = _poly_eval(self.omega, x)
        if w <= 0:
            raise PreconditionError(f"conformal factor not positive at {tuple(x)}")
        return w

    def metric(self, x) -> np.ndarray:
        if self.is_flat:
            return ETA.copy()
        return self.omega_at(x) ** 2 * ETA

    def metric_inv(self, x) -> np.ndarray:
        if self.is_flat:
            return ETA.copy()
        return ETA / self.omega_at(x) ** 2

    def metric_deriv(self, x) -> np.ndarray:
        """d[k, i, j] = partial_k g_ij; analytic unless disabled."""
        if self.analytic_derivs:
            d = np.zeros((4, 4, 4))
            if self.kind == "conformal_minkowski":
                w = self.omega_at(x)
                for k in range(4):
                    wk = _poly_eval(self._omega_grad[k], x)
                    d[k] = 2.0 * w * wk * ETA
            return d
        h = np.array([self.fd_rel_step * max(1.0, abs(c)) for c in x])
        d = np.zeros((4, 4, 4))
        for k in range(4):
            xp = np.array(x, dtype=float)
            xm = np.array(x, dtype=float)
            xp[k] += h[k]
            xm[k] -= h[k]
            d[k] = (self.metric(xp) - self.metric(xm)) / (2 * h[k])
        return d

    def wrap(self, x) -> np.ndarray:
        """Spatial coordinates reduced to the fundamental domain (torus)."""
        x = np.array(x, dtype=float)
        if self.kind == "flat_torus":
            for i in range(3):
                x[i + 1] = x[i + 1] % self.lengths[i]
        return x

    def to_dict(self) -> dict:
        out = {"type": self.kind}
        if self.kind == "flat_torus":
            out["lengths"] = list(self.lengths)
        if self.kind == "conformal_minkowski":
            out["omega"] = [[c, list(e)] for c, e in self.omega]
        return out


def minkowski() -> SpacetimeSpec:
    return SpacetimeSpec("minkowski")


def flat_torus(l1: float, l2: float, l3: float) -> SpacetimeSpec:
    return SpacetimeSpec("flat_torus", lengths=(l1, l2, l3))


def conformal_minkowski(monomials) -> SpacetimeSpec:
    return SpacetimeSpec("conformal_minkowski", omega=tuple(
        (float(c), tuple(e)) for c, e in monomials))


def load_spec(path) -> SpacetimeSpec:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    return spec_from_dict(doc)


def spec_from_dict(doc: dict) -> SpacetimeSpec:
    kind = doc.get("type")
    if kind == "minkowski":
        return minkowski()
    if kind == "flat_torus":
        return flat_torus(*doc["lengths"])
    if kind == "conformal_minkowski":
        return conformal_minkowski(doc["omega"])
    raise PreconditionError(f"unknown spacetime type {kind!r}")


def christoffels(spec: SpacetimeSpec, x) -> np.ndarray:
    """Gamma^k_{ij} at x; symmetric in the lower indices."""
    if spec.is_flat:
        return np.zeros((4, 4, 4))
    dg = spec.metric_deriv(x)
    gi = spec.metric_inv(x)
    low = dg.transpose(1, 0, 2) + dg.transpose(2, 1, 0) - dg
    return 0.5 * np.einsum("kl,lij->kij", gi, low)


def require_preset(spec: SpacetimeSpec, kinds, what: str):
    if spec.kind not in kinds:
        raise Unsupported(f"{what} supports {kinds}, not {spec.kind!r}")
