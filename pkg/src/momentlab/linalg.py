"""Exact vector and matrix helpers over the extended scalar domain.

Row reduction divides by pivots, so matrices with irrational entries are
reducible exactly when the constant basis declares the needed products
(quadratic surds such as sqrt2 do).  Purely rational questions about
coefficient expansions live in the rat_* helpers, which never multiply
constants at all.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .scalars import ConstantBasis, ExtScalar, RationalLike, ScalarError

Vector = tuple[ExtScalar, ...]
Matrix = list[Vector]


def zeros(basis: ConstantBasis, n: int) -> Vector:
    return tuple(basis.zero() for _ in range(n))


def unit(basis: ConstantBasis, n: int, i: int) -> Vector:
    return tuple(basis.one() if j == i else basis.zero() for j in range(n))


def as_vector(basis: ConstantBasis, entries: Sequence) -> Vector:
    from .scalars import parse_scalar

    out = []
    for e in entries:
        if isinstance(e, ExtScalar):
            out.append(e)
        elif isinstance(e, str):
            out.append(parse_scalar(e, basis))
        else:
            out.append(basis.from_rational(Fraction(e)))
    return tuple(out)


def vec_add(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(u: Vector, s: ExtScalar | RationalLike) -> Vector:
    return tuple(a * s if isinstance(s, ExtScalar) else a.scale(s) for a in u)


def vec_neg(u: Vector) -> Vector:
    return tuple(-a for a in u)


def vec_is_zero(u: Vector) -> bool:
    return all(a.is_zero() for a in u)


def dot(u: Vector, v: Vector) -> ExtScalar:
    if len(u) != len(v):
        raise ScalarError("dimension mismatch in dot product")
    acc = u[0].basis.zero() if u else None
    if acc is None:
        raise ScalarError("empty vectors have no dot product")
    for a, b in zip(u, v):
        acc = acc + a * b
    return acc


def mat_vec(m: Sequence[Vector], v: Vector) -> Vector:
    return tuple(dot(row, v) for row in m)


def format_matrix(rows: Iterable[Vector]) -> str:
    return "\n".join("[" + ", ".join(str(e) for e in row) + "]" for row in rows)


def rref(rows: Sequence[Vector]) -> tuple[Matrix, list[int]]:
    """Reduced row-echelon form with pivots normalized to 1.

    Returns the nonzero rows and their pivot columns.
    """
    work = [list(r) for r in rows]
    if not work:
        return [], []
    ncols = len(work[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(work)) if not work[i][c].is_zero()), None)
        if pr is None:
            continue
        work[r], work[pr] = work[pr], work[r]
        pivot = work[r][c]
        work[r] = [e / pivot for e in work[r]]
        for i in range(len(work)):
            if i != r and not work[i][c].is_zero():
                f = work[i][c]
                work[i] = [e - f * p for e, p in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    out = [tuple(work[i]) for i in range(r)]
    return out, pivots


def rank(rows: Sequence[Vector]) -> int:
    return len(rref(rows)[0])


def kernel(rows: Sequence[Vector], basis: ConstantBasis, ncols: int) -> Matrix:
    """Basis of the right kernel {v : A v = 0}."""
    reduced, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for f in free:
        v = [basis.zero()] * ncols
        v[f] = basis.one()
        for i, p in enumerate(pivots):
            v[p] = -reduced[i][f]
        out.append(tuple(v))
    return out


def solve(columns: Sequence[Vector], target: Vector, basis: ConstantBasis):
    """Coefficients x with sum(x_i * columns_i) = target, or None."""
    if not columns:
        return [] if vec_is_zero(target) else None
    n = len(target)
    rows_t = list(zip(*columns))
    # aug rows: [col_1[i], ..., col_k[i], target[i]]
    aug = [tuple(rows_t[i]) + (target[i],) for i in range(n)]
    reduced, pivots = rref(aug)
    k = len(columns)
    if k in pivots:
        return None
    x = [basis.zero()] * k
    for i, p in enumerate(pivots):
        x[p] = reduced[i][k]
    return x


# -- purely rational helpers on coefficient expansions -------------------------


def rat_rref(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    work = [list(map(Fraction, r)) for r in rows]
    if not work:
        return [], []
    ncols = len(work[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(work)) if work[i][c] != 0), None)
        if pr is None:
            continue
        work[r], work[pr] = work[pr], work[r]
        pv = work[r][c]
        work[r] = [e / pv for e in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [e - f * p for e, p in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return work[:r], pivots


def rat_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rat_rref(rows)[0])


def rat_kernel(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    reduced, pivots = rat_rref(rows)
    out = []
    for f in range(ncols):
        if f in pivots:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -reduced[i][f]
        out.append(v)
    return out


def flatten_coeffs(v: Vector) -> list[list[Fraction]]:
    """Per-constant rational coefficient rows of a vector of scalars.

    Row t is the rational vector of coefficients of constant t across the
    entries of v.
    """
    if not v:
        return []
    size = v[0].basis.size
    return [[e.coeffs[t] for e in v] for t in range(size)]
