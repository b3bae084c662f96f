"""Exact convex polyhedra over the extended scalars.

H-representations are canonicalized through a double-description round trip:
constraints -> generators -> irredundant facets.  Everything is exact; sign
decisions reduce to ExtScalar.sign().  Sizes are capped at desk scale, where
the double description method is entirely adequate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import lattice, linalg
from .linalg import Vector
from .presymlin import Subspace
from .scalars import ConstantBasis, ExtScalar, ScalarError, parse_scalar

MAX_DIM = 7
MAX_CONSTRAINTS = 96


class PolyhedronError(ScalarError):
    pass


class DeskScaleError(PolyhedronError):
    """Input exceeds the documented desk-scale limits."""


class EmptyPolyhedronError(PolyhedronError):
    pass


@dataclass(frozen=True)
class HalfSpace:
    """The constraint <normal, x> >= offset (or = offset as an equality)."""

    normal: Vector
    offset: ExtScalar


@dataclass(frozen=True)
class VRep:
    vertices: tuple[Vector, ...]
    rays: tuple[Vector, ...]
    lines: tuple[Vector, ...]

    @property
    def rays_with_lines(self) -> tuple[Vector, ...]:
        out = list(self.rays)
        for l in self.lines:
            out.append(l)
            out.append(linalg.vec_neg(l))
        return tuple(out)


@dataclass(frozen=True)
class Polyhedron:
    scalar_basis: ConstantBasis
    dim: int
    halfspaces: tuple[HalfSpace, ...]
    equalities: tuple[HalfSpace, ...]
    vrep: VRep | None = field(default=None, compare=False)

    @property
    def is_empty(self) -> bool:
        return self.vrep is not None and not self.vrep.vertices

    def contains(self, point: Sequence) -> bool:
        v = linalg.as_vector(self.scalar_basis, point)
        if self.is_empty:
            return False
        for hs in self.equalities:
            if not (linalg.dot(hs.normal, v) - hs.offset).is_zero():
                return False
        for hs in self.halfspaces:
            if (linalg.dot(hs.normal, v) - hs.offset).sign() < 0:
                return False
        return True

    def to_json_dict(self) -> dict:
        def enc(hs: HalfSpace) -> dict:
            return {
                "normal": [str(e) for e in hs.normal],
                "offset": str(hs.offset),
            }

        return {
            "dim": self.dim,
            "halfspaces": [enc(h) for h in self.halfspaces],
            "equalities": [enc(h) for h in self.equalities],
        }

    @staticmethod
    def from_json_dict(data: dict, basis: ConstantBasis) -> "Polyhedron":
        def dec(items):
            return [
                ([parse_scalar(e, basis) for e in h["normal"]],
                 parse_scalar(h.get("offset", 0), basis))
                for h in items
            ]

        return intersect_halfspaces(
            basis,
            data["dim"],
            dec(data.get("halfspaces", [])),
            dec(data.get("equalities", [])),
        )


# -- double description ---------------------------------------------------------


def _normalize_ray(r: Vector) -> Vector:
    for e in r:
        s = e.sign()
        if s != 0:
            scale = e if s > 0 else -e
            return tuple(x / scale for x in r)
    return r


def _normalize_line(l: Vector) -> Vector:
    for e in l:
        s = e.sign()
        if s != 0:
            return tuple(x / e for x in l)
    return l


def _sort_key(v: Vector):
    return tuple(e.coeffs for e in v)


def cone_double_description(
    basis: ConstantBasis, dim: int, rows: Sequence[Vector]
) -> tuple[list[Vector], list[Vector]]:
    """Generators (lines, rays) of the cone {x : <row, x> >= 0 for all rows}."""
    lines: list[Vector] = [linalg.unit(basis, dim, i) for i in range(dim)]
    rays: list[Vector] = []
    zsets: list[frozenset[int]] = []
    for idx, a in enumerate(rows):
        vals = [linalg.dot(a, l) for l in lines]
        signs = [v.sign() for v in vals]
        pivot = next((j for j, s in enumerate(signs) if s != 0), None)
        if pivot is not None:
            l0, v0 = lines[pivot], vals[pivot]
            new_lines = []
            for j, l in enumerate(lines):
                if j == pivot:
                    continue
                new_lines.append(
                    linalg.vec_sub(l, linalg.vec_scale(l0, vals[j] / v0))
                )
            new_rays = []
            new_zsets = []
            for r, z in zip(rays, zsets):
                t = linalg.dot(a, r)
                new_rays.append(linalg.vec_sub(r, linalg.vec_scale(l0, t / v0)))
                new_zsets.append(z | {idx})
            r0 = l0 if signs[pivot] > 0 else linalg.vec_neg(l0)
            lines = new_lines
            rays = new_rays + [_normalize_ray(r0)]
            # the promoted lineality vector vanishes on every earlier row
            zsets = new_zsets + [frozenset(range(idx))]
            continue
        # the constraint vanishes on the lineality; split the rays
        plus, zero, minus = [], [], []
        for k, r in enumerate(rays):
            s = linalg.dot(a, r).sign()
            (plus if s > 0 else zero if s == 0 else minus).append(k)
        new_rays = [rays[k] for k in plus] + [rays[k] for k in zero]
        new_zsets = [zsets[k] for k in plus] + [zsets[k] | {idx} for k in zero]
        for kp in plus:
            for km in minus:
                common = zsets[kp] & zsets[km]
                adjacent = not any(
                    ko not in (kp, km) and common <= zsets[ko]
                    for ko in range(len(rays))
                )
                if not adjacent:
                    continue
                sp = linalg.dot(a, rays[kp])
                sm = linalg.dot(a, rays[km])
                w = linalg.vec_sub(
                    linalg.vec_scale(rays[km], sp), linalg.vec_scale(rays[kp], sm)
                )
                new_rays.append(_normalize_ray(w))
                new_zsets.append(common | {idx})
        # deduplicate normalized rays
        seen: dict = {}
        rays, zsets = [], []
        for r, z in zip(new_rays, new_zsets):
            key = _sort_key(r)
            if key not in seen:
                seen[key] = True
                rays.append(r)
                zsets.append(z)
    return [_normalize_line(l) for l in lines], rays


def _check_scale(dim: int, n_constraints: int) -> None:
    if dim > MAX_DIM:
        raise DeskScaleError(
            f"ambient dimension {dim} exceeds the supported limit {MAX_DIM}"
        )
    if n_constraints > MAX_CONSTRAINTS:
        raise DeskScaleError(
            f"{n_constraints} constraints exceed the supported limit {MAX_CONSTRAINTS}"
        )


def intersect_halfspaces(
    basis: ConstantBasis,
    dim: int,
    halfspaces: Sequence[tuple[Sequence, object]] = (),
    equalities: Sequence[tuple[Sequence, object]] = (),
) -> Polyhedron:
    """Canonical polyhedron {x : <n_i, x> >= b_i, <m_j, x> = c_j}.

    Redundant constraints are removed by converting to generators and back;
    emptiness is detected exactly.
    """
    hs = [(linalg.as_vector(basis, n), _as_scalar(basis, b)) for n, b in halfspaces]
    eqs = [(linalg.as_vector(basis, n), _as_scalar(basis, b)) for n, b in equalities]
    for n, _ in hs + eqs:
        if len(n) != dim:
            raise PolyhedronError("constraint normal has wrong dimension")
    _check_scale(dim + 1, 2 * len(eqs) + len(hs) + 1)
    zero = basis.zero()
    rows: list[Vector] = [linalg.unit(basis, dim + 1, dim)]  # t >= 0 first
    for n, b in eqs:
        row = tuple(n) + (-b,)
        rows.append(row)
        rows.append(linalg.vec_neg(row))
    for n, b in hs:
        rows.append(tuple(n) + (-b,))
    lines, rays = cone_double_description(basis, dim + 1, rows)
    vertices, recession = [], []
    for l in lines:
        if not l[dim].is_zero():
            raise PolyhedronError("internal error: lineality escaped t >= 0")
    for r in rays:
        t = r[dim]
        s = t.sign()
        if s > 0:
            vertices.append(tuple(e / t for e in r[:dim]))
        else:
            recession.append(_normalize_ray(r[:dim]))
    vrep = VRep(
        vertices=tuple(sorted(vertices, key=_sort_key)),
        rays=tuple(sorted(recession, key=_sort_key)),
        lines=tuple(sorted((l[:dim] for l in lines), key=_sort_key)),
    )
    if not vertices:
        return Polyhedron(basis, dim, (), (), VRep((), (), ()))
    return _from_vrep_with_cache(basis, dim, vrep)


def _as_scalar(basis: ConstantBasis, value) -> ExtScalar:
    if isinstance(value, ExtScalar):
        return value
    if isinstance(value, str):
        return parse_scalar(value, basis)
    return basis.from_rational(Fraction(value))


def _from_vrep_with_cache(basis: ConstantBasis, dim: int, vrep: VRep) -> Polyhedron:
    # dual double description: generators become constraints on (normal, c)
    rows: list[Vector] = []
    for v in vrep.vertices:
        rows.append(tuple(v) + (basis.one(),))
    for r in vrep.rays:
        rows.append(tuple(r) + (basis.zero(),))
    for l in vrep.lines:
        row = tuple(l) + (basis.zero(),)
        rows.append(row)
        rows.append(linalg.vec_neg(row))
    _check_scale(dim + 1, len(rows))
    dual_lines, dual_rays = cone_double_description(basis, dim + 1, rows)
    eq_space, _ = linalg.rref(dual_lines)
    equalities = []
    for l in eq_space:
        l = _normalize_line(tuple(l))
        normal, c = l[:dim], l[dim]
        if linalg.vec_is_zero(normal):
            raise PolyhedronError("internal error: trivial equality produced")
        equalities.append(HalfSpace(normal, -c))
    halfspaces = []
    seen = set()
    for r in dual_rays:
        reduced = list(r)
        for row in eq_space:
            p = next(i for i, e in enumerate(row) if not e.is_zero())
            if not reduced[p].is_zero():
                f = reduced[p]
                reduced = [e - f * w for e, w in zip(reduced, row)]
        normal, c = tuple(reduced[:dim]), reduced[dim]
        if linalg.vec_is_zero(normal):
            continue  # the trivial t >= 0 direction
        nr = _normalize_ray(tuple(normal) + (c,))
        key = _sort_key(nr)
        if key not in seen:
            seen.add(key)
            halfspaces.append(HalfSpace(nr[:dim], -nr[dim]))
    halfspaces.sort(key=lambda h: _sort_key(h.normal + (h.offset,)))
    equalities.sort(key=lambda h: _sort_key(h.normal + (h.offset,)))
    return Polyhedron(basis, dim, tuple(halfspaces), tuple(equalities), vrep)


def from_generators(
    basis: ConstantBasis,
    dim: int,
    vertices: Sequence[Sequence],
    rays: Sequence[Sequence] = (),
    lines: Sequence[Sequence] = (),
) -> Polyhedron:
    """Polyhedron conv(vertices) + cone(rays) + span(lines)."""
    if not vertices:
        return Polyhedron(basis, dim, (), (), VRep((), (), ()))
    vrep = VRep(
        tuple(sorted((linalg.as_vector(basis, v) for v in vertices), key=_sort_key)),
        tuple(sorted((linalg.as_vector(basis, r) for r in rays), key=_sort_key)),
        tuple(sorted((linalg.as_vector(basis, l) for l in lines), key=_sort_key)),
    )
    poly = _from_vrep_with_cache(basis, dim, vrep)
    # re-enumerate so cached generators are irredundant (inputs may not be)
    return intersect_halfspaces(
        basis,
        dim,
        [(h.normal, h.offset) for h in poly.halfspaces],
        [(h.normal, h.offset) for h in poly.equalities],
    )


# -- public operations -----------------------------------------------------------


def enumerate_vertices(P: Polyhedron) -> tuple[tuple[Vector, ...], tuple[Vector, ...]]:
    """Exact vertices and recession rays (lines appear as opposite ray pairs)."""
    if P.is_empty or P.vrep is None:
        raise EmptyPolyhedronError("empty polyhedron has no vertices")
    return P.vrep.vertices, P.vrep.rays_with_lines


def affine_span(P: Polyhedron) -> tuple[Vector, Subspace]:
    """Basepoint and direction space of the affine hull."""
    if P.is_empty or P.vrep is None:
        raise EmptyPolyhedronError("empty polyhedron has no affine span")
    base = P.vrep.vertices[0]
    directions = [linalg.vec_sub(v, base) for v in P.vrep.vertices[1:]]
    directions += list(P.vrep.rays) + list(P.vrep.lines)
    return base, Subspace.from_vectors(P.scalar_basis, P.dim, directions)


def is_rational_polyhedral(P: Polyhedron) -> bool:
    """Whether the normal fan is rational: the affine hull must be cut out by
    a rational subspace and every facet normal must admit a rational
    representative in the quotient by that subspace (offsets are free)."""
    if P.is_empty:
        raise EmptyPolyhedronError("empty polyhedron has no rationality verdict")
    _, direction = affine_span(P)
    cutting = direction.annihilator()
    if not lattice.is_rational_subspace(cutting):
        return False
    if direction.dim == 0:
        return True
    gens = lattice.quasilattice(cutting)
    for hs in P.halfspaces:
        coords = tuple(linalg.dot(hs.normal, d) for d in direction.rows)
        if all(e.is_zero() for e in coords):
            continue
        if not lattice.ray_meets_rational_span(coords, gens.generators):
            return False
    return True


def homogenize(P: Polyhedron) -> Polyhedron:
    """Cone over P: the closure of {(t v, t) : v in P, t >= 0}."""
    if P.is_empty:
        raise EmptyPolyhedronError("cannot homogenize an empty polyhedron")
    basis = P.scalar_basis
    zero = basis.zero()
    hs = [(tuple(h.normal) + (-h.offset,), zero) for h in P.halfspaces]
    hs.append((linalg.unit(basis, P.dim + 1, P.dim), zero))
    eqs = [(tuple(h.normal) + (-h.offset,), zero) for h in P.equalities]
    return intersect_halfspaces(basis, P.dim + 1, hs, eqs)


def slice_at_level(P: Polyhedron, coord: int, level) -> Polyhedron:
    """Intersect with {x_coord = level} and drop that coordinate."""
    basis = P.scalar_basis
    extra = [(linalg.unit(basis, P.dim, coord), _as_scalar(basis, level))]
    sliced = intersect_halfspaces(
        basis,
        P.dim,
        [(h.normal, h.offset) for h in P.halfspaces],
        [(h.normal, h.offset) for h in P.equalities] + extra,
    )
    keep = [i for i in range(P.dim) if i != coord]
    return project(sliced, keep)


def project(P: Polyhedron, keep: Sequence[int]) -> Polyhedron:
    """Exact orthogonal projection onto the kept coordinates, by
    Fourier-Motzkin elimination of the others (equalities are substituted
    first whenever they involve an eliminated coordinate)."""
    keep = list(keep)
    if sorted(set(keep)) != sorted(keep):
        raise PolyhedronError("keep must be a list of distinct coordinates")
    basis = P.scalar_basis
    if P.is_empty:
        return Polyhedron(basis, len(keep), (), (), VRep((), (), ()))
    drop = [i for i in range(P.dim) if i not in keep]
    hs = [(list(h.normal), h.offset) for h in P.halfspaces]
    eqs = [(list(h.normal), h.offset) for h in P.equalities]
    live = list(range(P.dim))
    for col in drop:
        j = live.index(col)
        pivot_eq = next((k for k, (n, _) in enumerate(eqs) if not n[j].is_zero()), None)
        if pivot_eq is not None:
            n0, b0 = eqs.pop(pivot_eq)
            p = n0[j]
            for group in (hs, eqs):
                for k, (n, b) in enumerate(group):
                    if n[j].is_zero():
                        continue
                    f = n[j] / p
                    group[k] = (
                        [a - f * c for a, c in zip(n, n0)],
                        b - f * b0,
                    )
        else:
            plus = [(n, b) for n, b in hs if n[j].sign() > 0]
            minus = [(n, b) for n, b in hs if n[j].sign() < 0]
            stay = [(n, b) for n, b in hs if n[j].is_zero()]
            combined = []
            for np_, bp in plus:
                for nm, bm in minus:
                    # eliminate x_j between <np,x> >= bp and <nm,x> >= bm
                    fp, fm = np_[j], -nm[j]
                    n = [fm * a + fp * c for a, c in zip(np_, nm)]
                    combined.append((n, fm * bp + fp * bm))
            hs = stay + combined
        for group in (hs, eqs):
            for k, (n, b) in enumerate(group):
                del n[j]
        live.pop(j)
        if len(hs) + 2 * len(eqs) + 1 > MAX_CONSTRAINTS:
            interim = intersect_halfspaces(
                basis, len(live), [(tuple(n), b) for n, b in hs],
                [(tuple(n), b) for n, b in eqs],
            )
            hs = [(list(h.normal), h.offset) for h in interim.halfspaces]
            eqs = [(list(h.normal), h.offset) for h in interim.equalities]
            if interim.is_empty:
                return Polyhedron(basis, len(keep), (), (), VRep((), (), ()))
    # reorder the surviving coordinates to match `keep`
    perm = [live.index(c) for c in keep]
    reorder = lambda n: tuple(n[i] for i in perm)
    return intersect_halfspaces(
        basis,
        len(keep),
        [(reorder(n), b) for n, b in hs],
        [(reorder(n), b) for n, b in eqs],
    )


def poly_equal(P: Polyhedron, Q: Polyhedron) -> bool:
    """Exact set equality via mutual containment of generators."""
    if P.dim != Q.dim:
        raise PolyhedronError("polyhedra live in different dimensions")
    if P.is_empty or Q.is_empty:
        return P.is_empty and Q.is_empty
    return _generators_inside(P, Q) and _generators_inside(Q, P)


def _generators_inside(P: Polyhedron, Q: Polyhedron) -> bool:
    for v in P.vrep.vertices:
        if not Q.contains(v):
            return False
    for r in P.vrep.rays_with_lines:
        for hs in Q.equalities:
            if not linalg.dot(hs.normal, r).is_zero():
                return False
        for hs in Q.halfspaces:
            if linalg.dot(hs.normal, r).sign() < 0:
                return False
    return True


def intersect(P: Polyhedron, Q: Polyhedron) -> Polyhedron:
    if P.dim != Q.dim:
        raise PolyhedronError("polyhedra live in different dimensions")
    if P.is_empty or Q.is_empty:
        return Polyhedron(P.scalar_basis, P.dim, (), (), VRep((), (), ()))
    return intersect_halfspaces(
        P.scalar_basis,
        P.dim,
        [(h.normal, h.offset) for h in P.halfspaces]
        + [(h.normal, h.offset) for h in Q.halfspaces],
        [(h.normal, h.offset) for h in P.equalities]
        + [(h.normal, h.offset) for h in Q.equalities],
    )


def translate(P: Polyhedron, shift: Sequence) -> Polyhedron:
    v = linalg.as_vector(P.scalar_basis, shift)
    if P.is_empty:
        return P
    move = lambda h: (h.normal, h.offset + linalg.dot(h.normal, v))
    return intersect_halfspaces(
        P.scalar_basis,
        P.dim,
        [move(h) for h in P.halfspaces],
        [move(h) for h in P.equalities],
    )


def is_bounded(P: Polyhedron) -> bool:
    if P.is_empty:
        return True
    return not P.vrep.rays and not P.vrep.lines
