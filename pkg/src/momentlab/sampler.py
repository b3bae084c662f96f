"""Seeded Monte Carlo engine for moment images of curve slices: nonconvexity
defects, deformation families and contact cones.

Everything here is floating point; the exact engine owns the polyhedral
geometry.  Sampling is uniform in the curve parameter (not arclength), which
is a documented bias that none of the defect metrics are sensitive to at the
sample sizes used.  Clouds are reproducible from (spec, n, seed) and
independent of any chunking.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

RADIAL_TOL = 1e-6


class SamplerError(ValueError):
    pass


@dataclass(frozen=True)
class CurveSpec:
    """A parametrized curve (or affine piece) in the moment codomain."""

    kind: str
    ambient_dim: int
    params: dict

    def __post_init__(self):
        if self.kind not in ("affine", "circle", "ellipse", "trig-graph"):
            raise SamplerError(f"unknown curve kind {self.kind!r}")


def affine_spec(
    basepoint: Sequence[float],
    direction: Sequence[float],
    param_range: tuple[float, float] | None = None,
) -> CurveSpec:
    b = np.asarray(basepoint, dtype=float)
    u = np.asarray(direction, dtype=float)
    if b.shape != u.shape or b.ndim != 1:
        raise SamplerError("basepoint and direction must be equal-length vectors")
    return CurveSpec(
        "affine",
        len(b),
        {"basepoint": tuple(b), "direction": tuple(u),
         "param_range": tuple(param_range) if param_range else None},
    )


def circle_spec(center: Sequence[float], radius: float) -> CurveSpec:
    if radius <= 0:
        raise SamplerError("radius must be positive")
    return CurveSpec("circle", 2, {"center": tuple(center), "radius": float(radius)})


def ellipse_spec(
    center: Sequence[float], semi_x: float, semi_y: float, angle: float = 0.0
) -> CurveSpec:
    if semi_x <= 0 or semi_y <= 0:
        raise SamplerError("semi-axes must be positive")
    return CurveSpec(
        "ellipse",
        2,
        {"center": tuple(center), "semi_x": float(semi_x), "semi_y": float(semi_y),
         "angle": float(angle)},
    )


def trig_graph_spec(
    x_range: tuple[float, float],
    offset: float,
    amplitude: float,
    frequency: float = 1.0,
    phase: float = 0.0,
) -> CurveSpec:
    return CurveSpec(
        "trig-graph",
        2,
        {"x_range": (float(x_range[0]), float(x_range[1])), "offset": float(offset),
         "amplitude": float(amplitude), "frequency": float(frequency),
         "phase": float(phase)},
    )


@dataclass(frozen=True, eq=False)
class PointCloud:
    points: np.ndarray
    params: np.ndarray
    seed: int
    count: int = field(default=0)

    def __post_init__(self):
        object.__setattr__(self, "count", len(self.points))


def evaluate(spec: CurveSpec, t: np.ndarray) -> np.ndarray:
    p = spec.params
    t = np.asarray(t, dtype=float)
    if spec.kind == "affine":
        b = np.asarray(p["basepoint"])
        u = np.asarray(p["direction"])
        return b[None, :] + t[:, None] * u[None, :]
    if spec.kind == "circle":
        c = np.asarray(p["center"])
        r = p["radius"]
        return np.stack([c[0] + r * np.cos(t), c[1] + r * np.sin(t)], axis=1)
    if spec.kind == "ellipse":
        c = np.asarray(p["center"])
        a, b_, ang = p["semi_x"], p["semi_y"], p["angle"]
        x, y = a * np.cos(t), b_ * np.sin(t)
        ca, sa = np.cos(ang), np.sin(ang)
        return np.stack(
            [c[0] + ca * x - sa * y, c[1] + sa * x + ca * y], axis=1
        )
    x = t
    y = p["offset"] + p["amplitude"] * np.sin(p["frequency"] * x + p["phase"])
    return np.stack([x, y], axis=1)


def tangent(spec: CurveSpec, t: np.ndarray) -> np.ndarray:
    p = spec.params
    t = np.asarray(t, dtype=float)
    if spec.kind == "affine":
        u = np.asarray(p["direction"])
        return np.broadcast_to(u, (len(t), len(u))).copy()
    if spec.kind == "circle":
        r = p["radius"]
        return np.stack([-r * np.sin(t), r * np.cos(t)], axis=1)
    if spec.kind == "ellipse":
        a, b_, ang = p["semi_x"], p["semi_y"], p["angle"]
        dx, dy = -a * np.sin(t), b_ * np.cos(t)
        ca, sa = np.cos(ang), np.sin(ang)
        return np.stack([ca * dx - sa * dy, sa * dx + ca * dy], axis=1)
    dy = p["amplitude"] * p["frequency"] * np.cos(p["frequency"] * t + p["phase"])
    return np.stack([np.ones_like(t), dy], axis=1)


def _param_domain(spec: CurveSpec) -> tuple[float, float]:
    p = spec.params
    if spec.kind == "affine":
        rng = p.get("param_range")
        if rng is not None:
            return rng
        # exact feasible interval of the orthant filter
        b = np.asarray(p["basepoint"])
        u = np.asarray(p["direction"])
        lo, hi = -np.inf, np.inf
        for bi, ui in zip(b, u):
            if ui > 0:
                lo = max(lo, -bi / ui)
            elif ui < 0:
                hi = min(hi, -bi / ui)
            elif bi < 0:
                raise SamplerError("curve misses the orthant")
        if not np.isfinite(lo) or not np.isfinite(hi):
            raise SamplerError(
                "affine piece is unbounded in the orthant; give param_range"
            )
        if lo > hi:
            raise SamplerError("curve misses the orthant")
        return lo, hi
    if spec.kind in ("circle", "ellipse"):
        return 0.0, 2.0 * np.pi
    return p["x_range"]


def sample_image(spec: CurveSpec, n: int, seed: int) -> PointCloud:
    """n parameter-uniform points of the curve inside the orthant.

    Affine pieces use an inclusive grid over the exact feasible interval so
    the endpoints are hit; periodic and graph curves draw up to 100 n
    parameters and keep the first n orthant hits.
    """
    if n < 1:
        raise SamplerError("n must be at least 1")
    lo, hi = _param_domain(spec)
    if spec.kind == "affine":
        t = np.linspace(lo, hi, n) if n > 1 else np.array([(lo + hi) / 2.0])
        pts = evaluate(spec, t)
        keep = np.all(pts >= -1e-12, axis=1)
        t, pts = t[keep], pts[keep]
        if len(pts) == 0:
            raise SamplerError("curve misses the orthant")
        return PointCloud(pts, t, seed)
    rng = np.random.default_rng(seed)
    t = rng.uniform(lo, hi, 100 * n)
    pts = evaluate(spec, t)
    keep = np.all(pts >= 0.0, axis=1)
    t, pts = t[keep][:n], pts[keep][:n]
    if len(pts) == 0:
        raise SamplerError("curve misses the orthant")
    order = np.argsort(t, kind="stable")
    return PointCloud(pts[order], t[order], seed)


def lift_to_slice(spec: CurveSpec, y: Sequence[float], angles: int) -> np.ndarray:
    """A point upstairs with |x_j|^2 / 2 = y_j and seeded phases."""
    y = np.asarray(y, dtype=float)
    if np.any(y < 0):
        raise SamplerError("cannot lift a point with a negative coordinate")
    rng = np.random.default_rng(angles)
    theta = rng.uniform(0.0, 2.0 * np.pi, len(y))
    return np.sqrt(2.0 * y) * np.exp(1j * theta)


def lift_cloud(cloud: PointCloud, angles: int) -> np.ndarray:
    y = cloud.points
    if np.any(y < -1e-12):
        raise SamplerError("cannot lift a cloud with negative coordinates")
    rng = np.random.default_rng(angles)
    theta = rng.uniform(0.0, 2.0 * np.pi, y.shape)
    return np.sqrt(2.0 * np.clip(y, 0.0, None)) * np.exp(1j * theta)


def moment_of_lift(x: np.ndarray) -> np.ndarray:
    return 0.5 * (np.abs(x) ** 2)


# -- distance oracles ---------------------------------------------------------


def distance_to_image(spec: CurveSpec, n_dense: int = 20000) -> Callable:
    """Distance function to (curve intersect orthant): exact projection for
    affine pieces and circles (with a dense fallback near the arc ends),
    dense polyline for the other kinds."""
    if spec.kind == "affine":
        lo, hi = _param_domain(spec)
        b = np.asarray(spec.params["basepoint"])
        u = np.asarray(spec.params["direction"])
        uu = float(u @ u)

        def dist_affine(pts: np.ndarray) -> np.ndarray:
            pts = np.atleast_2d(pts)
            t = ((pts - b) @ u) / uu
            t = np.clip(t, lo, hi)
            proj = b[None, :] + t[:, None] * u[None, :]
            return np.linalg.norm(pts - proj, axis=1)

        return dist_affine
    dense_t = np.linspace(*_param_domain(spec), n_dense)
    dense = evaluate(spec, dense_t)
    dense = dense[np.all(dense >= 0.0, axis=1)]
    if len(dense) == 0:
        raise SamplerError("curve misses the orthant")
    if spec.kind == "circle":
        c = np.asarray(spec.params["center"])
        r = spec.params["radius"]
        # axis crossings bound the arc components inside the orthant; when
        # the radial projection leaves the orthant the nearest arc point is
        # one of them
        ends = []
        for axis in (0, 1):
            disc = r * r - c[axis] ** 2
            if disc >= 0:
                for sign in (1.0, -1.0):
                    q = np.zeros(2)
                    q[axis] = 0.0
                    q[1 - axis] = c[1 - axis] + sign * np.sqrt(disc)
                    if np.all(q >= -1e-12):
                        ends.append(q)
        endpoints = np.array(ends) if ends else dense[:1]

        def dist_circle(pts: np.ndarray) -> np.ndarray:
            pts = np.atleast_2d(pts)
            delta = pts - c
            norms = np.linalg.norm(delta, axis=1)
            safe = norms > 1e-15
            proj = np.where(
                safe[:, None], c + r * delta / np.where(safe, norms, 1.0)[:, None],
                c + np.array([r, 0.0]),
            )
            radial = np.abs(norms - r)
            inside = np.all(proj >= -1e-12, axis=1)
            to_ends = np.linalg.norm(
                pts[:, None, :] - endpoints[None, :, :], axis=2
            ).min(axis=1)
            return np.where(inside, np.minimum(radial, to_ends), to_ends)

        return dist_circle

    def dist_dense(pts: np.ndarray) -> np.ndarray:
        return _min_dist_chunked(np.atleast_2d(pts), dense)

    return dist_dense


def _min_dist_chunked(pts: np.ndarray, ref: np.ndarray, chunk: int = 512) -> np.ndarray:
    out = np.empty(len(pts))
    for i in range(0, len(pts), chunk):
        block = pts[i : i + chunk]
        d2 = ((block[:, None, :] - ref[None, :, :]) ** 2).sum(axis=2)
        out[i : i + chunk] = np.sqrt(d2.min(axis=1))
    return out


def convexity_defect(
    cloud: PointCloud,
    membership: Callable,
    n_pairs: int = 50000,
    seed: int | None = None,
) -> float:
    """Largest distance from a sampled chord midpoint to the image set; zero
    in the limit exactly for convex images."""
    if cloud.count == 0:
        raise SamplerError("empty cloud")
    if cloud.count == 1:
        return 0.0
    rng = np.random.default_rng(cloud.seed if seed is None else seed)
    i = rng.integers(0, cloud.count, n_pairs)
    j = rng.integers(0, cloud.count, n_pairs)
    mid = 0.5 * (cloud.points[i] + cloud.points[j])
    return float(np.max(membership(mid)))


# -- deformation families --------------------------------------------------------


@dataclass(frozen=True)
class PairVerdict:
    first: int
    second: int
    translate_equivalent: bool
    hausdorff_after_shift: float


@dataclass(frozen=True)
class DeformationReport:
    clouds: tuple[PointCloud, ...]
    pairs: tuple[PairVerdict, ...]

    @property
    def presymplectically_nontrivial(self) -> bool:
        return any(not p.translate_equivalent for p in self.pairs)


def _hausdorff(A: np.ndarray, B: np.ndarray) -> float:
    return float(
        max(_min_dist_chunked(A, B).max(), _min_dist_chunked(B, A).max())
    )


def deformation_scan(
    family: Sequence[CurveSpec],
    n: int,
    seed: int,
    tolerance: float = 1e-3,
) -> DeformationReport:
    """Samples each member with the same seed and tests every pair of images
    for translate equivalence (centroid-aligned Hausdorff distance within the
    tolerance)."""
    clouds = tuple(sample_image(spec, n, seed) for spec in family)
    pairs = []
    for a in range(len(clouds)):
        for b in range(a + 1, len(clouds)):
            A, B = clouds[a].points, clouds[b].points
            shift = B.mean(axis=0) - A.mean(axis=0)
            h = _hausdorff(A + shift, B)
            pairs.append(PairVerdict(a, b, h <= tolerance, h))
    return DeformationReport(clouds, tuple(pairs))


# -- contact cones -----------------------------------------------------------------


def _unit_normals(spec: CurveSpec, t: np.ndarray) -> np.ndarray:
    tan = tangent(spec, t)
    normals = np.stack([-tan[:, 1], tan[:, 0]], axis=1)
    return normals / np.linalg.norm(normals, axis=1)[:, None]


def contact_cone_sample(
    spec: CurveSpec, n: int, t_max: float, seed: int
) -> PointCloud:
    """Points (t y, t) over the sampled image, after checking that the curve
    is nowhere radially tangent (contact-type condition)."""
    if spec.ambient_dim != 2:
        raise SamplerError("contact sampling is implemented for plane curves")
    base = sample_image(spec, n, seed)
    radial = np.sum(base.points * _unit_normals(spec, base.params), axis=1)
    # a sign change along the parameter is a zero crossing the sample grid
    # may have stepped over, so it counts as a tangency too
    crosses = bool(len(radial) > 1 and np.any(radial[:-1] * radial[1:] < 0))
    if crosses or float(np.abs(radial).min(initial=np.inf)) < RADIAL_TOL:
        raise SamplerError("not of contact type: radial tangency detected")
    rng = np.random.default_rng(seed + 1)
    t = rng.uniform(0.0, t_max, len(base.points)) if t_max > 0 else np.zeros(
        len(base.points)
    )
    pts = np.concatenate([t[:, None] * base.points, t[:, None]], axis=1)
    return PointCloud(pts, base.params, seed)
