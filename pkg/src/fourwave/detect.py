"""Geometric singularity-detection surrogate.

Four null geodesics are launched from causally independent sources; when
all four intersect at a point x strictly before their cut values, the
interaction acts like a point source at x, and a query point y is
"detected" (verdict 1) exactly when it lies on a null geodesic from x
before the cut value.  Query points inside the exclusion sets (the
causal future of the cut points, and the union of the geodesic images
with the triple-interaction flowout cones) are not decided.

The implementation is the geometric characterization, not a PDE solve.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .causal import causal_leq, cut_value, time_separation
from .errors import Ambiguous, ExcludedPoint, PreconditionError, Unsupported
from .flows import future_velocity, geodesic_point, null_project
from .observe import ObservationSet, Sample, Tube
from .spacetime import SpacetimeSpec, require_preset


@dataclass(frozen=True)
class Tolerances:
    eps_int: float = 1e-8    # intersection consensus
    eps_set: float = 1e-4    # exclusion-set membership threshold
    eps_tau: float = 1e-6    # chronological precedence threshold
    eps_sep: float = 1e-3    # observation-set separation threshold


@dataclass
class SourceConfig:
    """Four sources (z_j, zeta_j) with null future covectors, plus a tube.

    Sources must be pairwise causally independent: no z_j in the causal
    future of another.
    """

    spec: SpacetimeSpec
    sources: list            # [(z (4,), zeta (4,)), ...]
    tube: Tube
    tol: Tolerances = field(default_factory=Tolerances)
    s_max: float = 16.0

    def __post_init__(self):
        if len(self.sources) != 4:
            raise PreconditionError("need exactly four sources")
        fixed = []
        for z, zeta in self.sources:
            z = np.asarray(z, dtype=float)
            zeta = null_project(self.spec, z, np.asarray(zeta, dtype=float))
            if zeta[0] <= 0:
                raise PreconditionError("source covectors must be future pointing")
            fixed.append((z, zeta))
        self.sources = fixed
        for j in range(4):
            for k in range(4):
                if j != k and causal_leq(self.spec, self.sources[k][0],
                                         self.sources[j][0]):
                    raise PreconditionError(
                        f"source {j} lies in the causal future of source {k}")

    def rho(self, j: int) -> float:
        z, zeta = self.sources[j]
        if self.spec.kind == "conformal_minkowski":
            return math.inf
        return cut_value(self.spec, z, zeta, s_max=self.s_max)


def _line_closest(z1, u1, z2, u2):
    """Closest-approach parameters of two chart lines (Euclidean)."""
    d = z2 - z1
    a = float(u1 @ u1)
    b = float(u1 @ u2)
    c = float(u2 @ u2)
    den = a * c - b * b
    if abs(den) < 1e-14 * max(a * c, 1.0):
        return None
    t1 = (c * float(d @ u1) - b * float(d @ u2)) / den
    t2 = (b * float(d @ u1) - a * float(d @ u2)) / den
    return t1, t2


def four_geodesic_intersection(spec: SpacetimeSpec, config: SourceConfig):
    """Common point of the four geodesics strictly before every cut value.

    Minkowski: exact pairwise line intersections with a consensus check
    at eps_int; the torus works on a coarse closest-approach grid with
    local refinement.  Two separated candidate clusters within
    10*eps_int raise Ambiguous; otherwise disagreement means None.
    """
    require_preset(spec, ("minkowski", "flat_torus"), "four_geodesic_intersection")
    tol = config.tol
    zs = [z for z, _ in config.sources]
    us = [future_velocity(spec, z, zeta) for z, zeta in config.sources]

    if spec.kind == "minkowski":
        candidates = []
        params = {}
        for i in range(4):
            for j in range(i + 1, 4):
                sol = _line_closest(zs[i], us[i], zs[j], us[j])
                if sol is None:
                    return None
                t1, t2 = sol
                p1 = zs[i] + t1 * us[i]
                p2 = zs[j] + t2 * us[j]
                if float(np.linalg.norm(p1 - p2)) > tol.eps_int:
                    return None
                candidates.append(0.5 * (p1 + p2))
                params[i] = t1
                params[j] = t2
        spread = max(float(np.linalg.norm(a - b))
                     for a in candidates for b in candidates)
        if spread > 10 * tol.eps_int:
            return None
        if spread > tol.eps_int:
            raise Ambiguous(f"candidate intersections spread {spread:.3e}")
        x = np.mean(candidates, axis=0)
    else:
        x, params = _torus_intersection(spec, config, zs, us)
        if x is None:
            return None

    for j in range(4):
        rho = config.rho(j)
        if not (0.0 < params[j] < rho):
            return None
    return x

def _wrapped_gap(spec, p, q) -> float:
    dt = p[0] - q[0]
    d2 = dt * dt
    for i in range(3):
        L = spec.lengths[i]
        r = (p[i + 1] - q[i + 1]) - round((p[i + 1] - q[i + 1]) / L) * L
        d2 += r * r
    return math.sqrt(d2)


def _torus_intersection(spec, config, zs, us):
    """Coarse grid over pair parameters plus local quadratic refinement."""
    tol = config.tol
    smax = config.s_max
    grid = np.linspace(0.0, smax, int(smax / 0.02) + 1)
    # find candidates along geodesic 0 where all others come close
    best = None
    pts0 = [zs[0] + t * us[0] for t in grid]
    for t0, p0 in zip(grid, pts0):
        worst = 0.0
        pars = {0: t0}
        ok = True
        for j in range(1, 4):
            gaps = [_wrapped_gap(spec, p0, zs[j] + t * us[j]) for t in grid]
            k = int(np.argmin(gaps))
            worst = max(worst, gaps[k])
            pars[j] = float(grid[k])
            if gaps[k] > 0.05:
                ok = False
                break
        if ok and (best is None or worst < best[0]):
            best = (worst, pars, p0)
    if best is None:
        return None, None
    _, pars, _ = best

    def refine(j, t, p_ref):
        lo, hi = max(0.0, t - 0.05), t + 0.05
        for _ in range(60):
            m1 = lo + (hi - lo) / 3
            m2 = hi - (hi - lo) / 3
            if _wrapped_gap(spec, p_ref, zs[j] + m1 * us[j]) < \
               _wrapped_gap(spec, p_ref, zs[j] + m2 * us[j]):
                hi = m2
            else:
                lo = m1
        return 0.5 * (lo + hi)

    # alternate refinement passes
    for _ in range(4):
        p0 = zs[0] + pars[0] * us[0]
        for j in range(1, 4):
            pars[j] = refine(j, pars[j], p0)
        pmean = np.mean([zs[j] + pars[j] * us[j] for j in range(1, 4)], axis=0)
        pars[0] = refine(0, pars[0], pmean)
    pts = [zs[j] + pars[j] * us[j] for j in range(4)]
    spread = max(_wrapped_gap(spec, a, b) for a in pts for b in pts)
    if spread > 10 * tol.eps_int:
        return None, None
    if spread > tol.eps_int:
        raise Ambiguous(f"torus intersection spread {spread:.3e}")
    return spec.wrap(np.mean(pts, axis=0)), pars


# ---------------------------------------------------------------------------
# exclusion sets
# ---------------------------------------------------------------------------

def _point_to_ray_distance(spec, y, z, u, s_max) -> float:
    """Distance from y to the geodesic image {z + s u, s in (0, s_max)}."""
    y = np.asarray(y, dtype=float)
    if spec.kind == "minkowski":
        d = y - z
        t = float(d @ u) / float(u @ u)
        t = min(max(t, 0.0), s_max)
        return float(np.linalg.norm(d - t * u))
    gaps = [_wrapped_gap(spec, y, z + s * u)
            for s in np.linspace(0.0, s_max, int(s_max / 0.01) + 1)]
    return min(gaps)


@dataclass
class ExclusionSets:
    """Membership tests for the cut-future set and the small singular set."""

    spec: SpacetimeSpec
    config: SourceConfig
    cut_points: list          # per source: point or None
    triple_vertices: dict     # triple -> common point or None

    def in_cut_future(self, y) -> bool:
        for p in self.cut_points:
            if p is not None and causal_leq(self.spec, p, y):
                return True
        return False

    def in_small_set(self, y, provenance: list | None = None) -> bool:
        """Union of geodesic images and triple-interaction flowout cones."""
        tol = self.config.tol
        y = np.asarray(y, dtype=float)
        for j, (z, zeta) in enumerate(self.config.sources):
            u = future_velocity(self.spec, z, zeta)
            smax = min(self.config.rho(j), self.config.s_max)
            if _point_to_ray_distance(self.spec, y, z, u, smax) <= tol.eps_set:
                if provenance is not None:
                    provenance.append(f"geodesic_{j}")
                return True
        for tri, data in self.triple_vertices.items():
            if data is None:
                continue
            x_tri, spans = data
            if self._on_triple_cone(y, x_tri, spans, tol.eps_set):
                if provenance is not None:
                    provenance.append(f"triple_cone_{tri}")
                return True
        return False

    def _on_triple_cone(self, y, x_tri, spans, eps) -> bool:
        """y on a null ray from x_tri whose covector lies in the span of the
        three conormals: null residual and span residual both below eps."""
        d = np.asarray(y, dtype=float) - x_tri
        r = float(np.linalg.norm(d[1:]))
        if r < eps and abs(d[0]) < eps:
            return True
        null_res = abs(abs(d[0]) - r) / max(r, 1.0)
        if null_res > eps:
            return False
        cov = d.copy()  # covector of the ray through d (flip convention)
        cov[0] = d[0]
        cov = cov / max(float(np.linalg.norm(cov)), 1e-300)
        A = np.vstack(spans).T
        resid = cov - A @ np.linalg.lstsq(A, cov, rcond=None)[0]
        return float(np.linalg.norm(resid)) <= eps


def exclusion_sets(spec: SpacetimeSpec, config: SourceConfig) -> ExclusionSets:
    """Build the membership tests for C+ (cut futures) and the small set."""
    cut_points = []
    for j, (z, zeta) in enumerate(config.sources):
        rho = config.rho(j)
        if math.isinf(rho):
            cut_points.append(None)
        else:
            cut_points.append(geodesic_point(spec, z, zeta, rho))

    triple_vertices = {}
    zs = [z for z, _ in config.sources]
    us = [future_velocity(spec, z, zeta) for z, zeta in config.sources]
    for tri in ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)):
        pts = []
        ok = True
        for a, b in ((tri[0], tri[1]), (tri[0], tri[2]), (tri[1], tri[2])):
            sol = _line_closest(zs[a], us[a], zs[b], us[b]) \
                if spec.kind == "minkowski" else None
            if sol is None:
                ok = False
                break
            pa = zs[a] + sol[0] * us[a]
            pb = zs[b] + sol[1] * us[b]
            if float(np.linalg.norm(pa - pb)) > config.tol.eps_int:
                ok = False
                break
            pts.append(0.5 * (pa + pb))
        if not ok or not pts:
            triple_vertices[tri] = None
            continue
        spread = max(float(np.linalg.norm(a - b)) for a in pts for b in pts)
        if spread > config.tol.eps_int:
            triple_vertices[tri] = None
            continue
        x_tri = np.mean(pts, axis=0)
        spans = [config.sources[j][1] / np.linalg.norm(config.sources[j][1])
                 for j in tri]
        triple_vertices[tri] = (x_tri, spans)
    return ExclusionSets(spec, config, cut_points, triple_vertices)


# ---------------------------------------------------------------------------
# the detection verdict
# ---------------------------------------------------------------------------

def _on_future_cone(spec, x, y, eps, s_max) -> bool:
    """Is y on a null geodesic from x with parameter in (0, cut)?"""
    d = np.asarray(y, dtype=float) - np.asarray(x, dtype=float)
    if spec.kind == "minkowski":
        dt = d[0]
        r = float(np.linalg.norm(d[1:]))
        return dt > eps and abs(dt - r) <= eps
    # torus: try lattice representatives; the ray parameter equals dt and
    # must stay below the cut value of its own direction
    dt = d[0]
    if dt <= eps:
        return False
    from itertools import product as _prod
    ranges = [range(-int(dt / L) - 1, int(dt / L) + 2) for L in spec.lengths]
    for k in _prod(*ranges):
        dy = d[1:] - np.array(k, dtype=float) * np.array(spec.lengths)
        r = float(np.linalg.norm(dy))
        if abs(dt - r) <= eps and r > eps:
            v = dy / r
            xi = null_project(spec, x, np.concatenate([[1.0], v]))
            rho = cut_value(spec, x, xi, s_max=s_max)
            if dt < rho:
                return True
    return False


def detection_surrogate(spec: SpacetimeSpec, config: SourceConfig, y,
                        excl: ExclusionSets | None = None,
                        x_int=None, x_known: bool = False) -> int:
    """Verdict for a query point: 1 iff the four geodesics meet at some x
    before their cuts and y lies on the forward light cone of x before
    the cut value.  Query points in the exclusion sets raise
    ExcludedPoint; pass precomputed exclusion sets / intersection to
    amortize repeated queries."""
    y = np.asarray(y, dtype=float)
    if not config.tube.contains(spec, y):
        raise PreconditionError("query point must lie in the observation tube")
    if excl is None:
        excl = exclusion_sets(spec, config)
    if excl.in_cut_future(y) or excl.in_small_set(y):
        raise ExcludedPoint("query point lies in the exclusion sets")
    if not x_known:
        x_int = four_geodesic_intersection(spec, config)
    if x_int is None:
        return 0
    return 1 if _on_future_cone(spec, x_int, y, config.tol.eps_int,
                                config.s_max) else 0


# ---------------------------------------------------------------------------
# earliest points and injectivity
# ---------------------------------------------------------------------------

def earliest_points(spec: SpacetimeSpec, obs: ObservationSet,
                    eps_tau: float = 1e-6) -> ObservationSet:
    """Samples not chronologically preceded by any other sample.

    A sample is dropped when some other sample (kept or dropped) precedes
    it by more than eps_tau in time separation.  Idempotent; processing
    order fixed by (direction index, parameter).
    """
    rows = sorted(obs.samples, key=lambda smp: (smp.dir_index, smp.s))
    kept = []
    for i, smp in enumerate(rows):
        preceded = False
        for j, other in enumerate(rows):
            if j == i:
                continue
            if time_separation(spec, other.point, smp.point) > eps_tau:
                preceded = True
                break
        if not preceded:
            kept.append(smp)
    out = ObservationSet(source=obs.source)
    out.samples = kept
    return out


def injectivity_report(spec: SpacetimeSpec, sources, tube: Tube,
                       n_dirs: int = 128, s_resolution: float = 0.02,
                       s_max: float = 8.0, eps_sep: float = 1e-3) -> dict:
    """Pairwise separation of earliest observation sets, plus a heuristic
    chronological ordering recovered from shared-direction arrival times."""
    from .observe import observation_set

    clouds = []
    report = {"sources": [], "pairs": []}
    for x in sources:
        x = np.asarray(x, dtype=float)
        obs = observation_set(spec, x, tube, n_dirs=n_dirs,
                              s_resolution=s_resolution, s_max=s_max)
        obs = earliest_points(spec, obs)
        observable = len(obs.samples) > 0
        report["sources"].append({
            "point": [float(v) for v in x],
            "observable": observable,
            "n_samples": len(obs.samples),
        })
        clouds.append(obs)

    def hausdorff(A, B) -> float:
        if not A or not B:
            return math.inf
        PA = np.array([s.point for s in A])
        PB = np.array([s.point for s in B])
        d_ab = max(float(np.min(np.linalg.norm(PB - a, axis=1))) for a in PA)
        d_ba = max(float(np.min(np.linalg.norm(PA - b, axis=1))) for b in PB)
        return max(d_ab, d_ba)

    for i in range(len(sources)):
        for j in range(i + 1, len(sources)):
            A, B = clouds[i], clouds[j]
            if not A.samples or not B.samples:
                report["pairs"].append({
                    "indices": [i, j], "separated": None,
                    "note": "at least one source unobservable"})
                continue
            dist = hausdorff(A.samples, B.samples)
            entry = {"indices": [i, j], "distance": dist,
                     "separated": bool(dist > eps_sep)}
            tau_ij = time_separation(spec, A.source, B.source)
            tau_ji = time_separation(spec, B.source, A.source)
            if tau_ij > 0 or tau_ji > 0:
                # heuristic: along shared direction indices, the earlier
                # source's wavefront reaches the tube at earlier times
                at_i = {s.dir_index: s.point[0] for s in A.samples if s.earliest}
                at_j = {s.dir_index: s.point[0] for s in B.samples if s.earliest}
                shared = sorted(set(at_i) & set(at_j))
                if shared:
                    votes = sum(1 if at_i[d] < at_j[d] else -1 for d in shared)
                    entry["recovered_order"] = (
                        "first_before_second" if votes > 0 else
                        "second_before_first" if votes < 0 else "tie")
                    entry["order_heuristic"] = True
                    entry["true_order"] = ("first_before_second" if tau_ij > 0
                                           else "second_before_first")
            report["pairs"].append(entry)
    return report
