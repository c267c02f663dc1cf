"""Observation tubes, light observation sets, and flowout sets.

An observation set samples the future light cone of a source point up to
the cut value in every direction and keeps the samples falling inside an
observation tube; the first sample per direction carries the earliest
flag.  A flowout set samples a covector ball around one lightlike
direction (chart-Euclidean ball, the fixed auxiliary metric), projects
each sample onto the null cone, and flows it both ways, removing the
causal past of the base point.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .causal import causal_leq, cut_value
from .errors import PreconditionError
from .flows import geodesic_states, null_project
from .spacetime import SpacetimeSpec


@dataclass(frozen=True)
class Tube:
    """Cylinder around a vertical (constant-y) axis line.

    Membership: r_min < |y - axis| < r_max and t inside the window.  On
    the torus the spatial distance is the wrapped one.
    """

    axis: tuple = (0.0, 0.0, 0.0)
    r_min: float = 0.0
    r_max: float = math.inf
    t_min: float = -math.inf
    t_max: float = math.inf

    def contains(self, spec: SpacetimeSpec, point) -> bool:
        t = float(point[0])
        if not (self.t_min < t < self.t_max):
            return False
        dy = np.asarray(point[1:], dtype=float) - np.asarray(self.axis)
        if spec.kind == "flat_torus":
            d2 = 0.0
            for i in range(3):
                L = spec.lengths[i]
                r = dy[i] - round(dy[i] / L) * L
                d2 += r * r
            dist = math.sqrt(d2)
        else:
            dist = float(np.sqrt(dy @ dy))
        return self.r_min < dist < self.r_max


@dataclass(frozen=True)
class Sample:
    dir_index: int
    s: float
    point: np.ndarray
    xi: np.ndarray | None = None
    earliest: bool = False


@dataclass
class ObservationSet:
    source: np.ndarray
    samples: list = field(default_factory=list)

    def csv_rows(self):
        for smp in self.samples:
            yield (smp.dir_index, smp.s, smp.point[0], smp.point[1],
                   smp.point[2], smp.point[3], int(smp.earliest))

    def write_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["dir_index", "s", "t", "y1", "y2", "y3", "earliest"])
            for row in self.csv_rows():
                w.writerow([row[0]] + [format(v, ".17g") for v in row[1:6]]
                           + [row[6]])

    def as_dict(self):
        return {
            "source": [float(v) for v in self.source],
            "samples": [
                {"dir_index": smp.dir_index, "s": float(smp.s),
                 "t": float(smp.point[0]), "y1": float(smp.point[1]),
                 "y2": float(smp.point[2]), "y3": float(smp.point[3]),
                 "earliest": bool(smp.earliest)}
                for smp in self.samples
            ],
        }


def fibonacci_sphere(n: int) -> np.ndarray:
    """n deterministic unit vectors, ordered by index."""
    if n < 1:
        raise PreconditionError("need at least one direction")
    golden = math.pi * (3.0 - math.sqrt(5.0))
    pts = np.empty((n, 3))
    for i in range(n):
        z = 1.0 - 2.0 * (i + 0.5) / n
        r = math.sqrt(max(0.0, 1.0 - z * z))
        th = golden * i
        pts[i] = (r * math.cos(th), r * math.sin(th), z)
    return pts


def null_covector(spec: SpacetimeSpec, x, direction) -> np.ndarray:
    """Future null covector with the given spatial direction."""
    xi = np.concatenate([[1.0], np.asarray(direction, dtype=float)])
    return null_project(spec, x, xi)


def cut_bound(spec: SpacetimeSpec, x, xi, s_max: float) -> float:
    """min(cut value, s_max); the conformal preset has no null cut points
    on its chart (its causal structure is Minkowski's)."""
    if spec.kind == "conformal_minkowski":
        return s_max
    rho = cut_value(spec, x, xi, s_max=s_max)
    return min(rho, s_max)


def observation_set(spec: SpacetimeSpec, x, tube: Tube, n_dirs: int = 64,
                    s_resolution: float = 0.05, s_max: float = 8.0) -> ObservationSet:
    """Sample the earliest light observation set of x inside the tube.

    Directions are the Fibonacci-sphere family over the future null cone;
    each ray is sampled on a parameter grid up to min(cut value, s_max),
    and the first in-tube sample per direction is flagged earliest.
    """
    x = np.asarray(x, dtype=float)
    out = ObservationSet(source=x)
    for i, v in enumerate(fibonacci_sphere(n_dirs)):
        xi = null_covector(spec, x, v)
        rho = cut_bound(spec, x, xi, s_max)
        if rho <= 0:
            continue
        svals = np.arange(s_resolution, rho + 1e-12, s_resolution)
        if len(svals) == 0:
            continue
        pts = geodesic_states(spec, x, xi, list(svals))
        first = True
        for s, p in zip(svals, pts):
            pw = spec.wrap(p)
            if tube.contains(spec, pw):
                out.samples.append(Sample(i, float(s), pw, xi, first))
                first = False
    return out


def _halton(index: int, base: int) -> float:
    f, r = 1.0, 0.0
    i = index
    while i > 0:
        f /= base
        r += f * (i % base)
        i //= base
    return r


def ball_samples(center, delta: float, n: int) -> list[np.ndarray]:
    """Deterministic low-discrepancy points of the 4-ball around center."""
    center = np.asarray(center, dtype=float)
    out = []
    idx = 1
    bases = (2, 3, 5, 7)
    while len(out) < n:
        p = np.array([2.0 * _halton(idx, b) - 1.0 for b in bases])
        idx += 1
        if float(p @ p) <= 1.0:
            out.append(center + delta * p)
    return out


def flowout_set(spec: SpacetimeSpec, x, xi, delta: float, n_samples: int = 32,
                s_max: float = 4.0, s_resolution: float = 0.05) -> ObservationSet:
    """Sample the flowout of a covector ball minus the causal past of x.

    Each ball point is projected onto the null cone (time-component
    rescaling) and flowed over [-s_max, s_max]; samples in J^-(x) are
    dropped.  Per projected covector the retained sample of smallest
    positive parameter carries the earliest flag.
    """
    if delta <= 0:
        raise PreconditionError("delta must be positive")
    x = np.asarray(x, dtype=float)
    xi = null_project(spec, x, np.asarray(xi, dtype=float))
    out = ObservationSet(source=x)
    grid = np.arange(-s_max, s_max + 1e-12, s_resolution)
    grid = grid[np.abs(grid) > 1e-12]
    for i, pert in enumerate(ball_samples(xi, delta, n_samples)):
        try:
            eta = null_project(spec, x, pert)
        except PreconditionError:
            continue
        fwd = [s for s in grid if s > 0]
        bwd = sorted(abs(s) for s in grid if s < 0)
        pts_f = geodesic_states(spec, x, eta, fwd)
        pts_b = geodesic_states(spec, x, -eta, bwd)
        rows = [(s, p) for s, p in zip(fwd, pts_f)]
        rows += [(-s, p) for s, p in zip(bwd, pts_b)]
        rows.sort(key=lambda sp: sp[0])
        first_pos = None
        kept = []
        for s, p in rows:
            if causal_leq(spec, p, x):
                continue
            kept.append((s, p))
            if s > 0 and (first_pos is None or s < first_pos):
                first_pos = s
        for s, p in kept:
            out.samples.append(Sample(i, float(s), spec.wrap(p), eta,
                                      s == first_pos))
    return out
