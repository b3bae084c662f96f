"""Exact scalars in the rational span of declared real constants.

The scalar domain is a finite-dimensional vector space over the rationals
spanned by named constants, the first of which is always 1.  Declaring the
constants linearly independent over the rationals is a trusted input: it
cannot be verified for arbitrary reals, so the library documents the
contract instead of checking it.

The domain is a vector space, not a ring.  Products exist only when one
factor is rational or when the product of two constants has been declared
(e.g. sqrt2 * sqrt2 = 2); anything else raises UnsupportedScalarOperation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

RationalLike = int | Fraction


class ScalarError(ValueError):
    pass


class BasisMismatchError(ScalarError):
    """Two scalars from different constant bases were combined."""


class UnsupportedScalarOperation(ScalarError):
    """The requested operation leaves the declared rational span."""


class SignUndecidableError(ScalarError):
    """Interval arithmetic straddles zero and no symbolic rule applies."""


# Error radius assumed for a declared double: a few ulp, to absorb both the
# representation error of the double and the user's rounding of the constant.
_FLOAT_SLACK = Fraction(1, 2**48)


class ConstantBasis:
    """Named real constants spanning the scalar domain over the rationals.

    The first constant is always ``one`` with value 1.  Optional product
    declarations record that the real product of two non-unit constants is a
    known element of the span; they are what make division by quadratic
    surds such as sqrt2 possible.
    """

    __slots__ = ("names", "float_values", "_index", "_products")

    def __init__(
        self,
        names: Sequence[str] = ("one",),
        float_values: Sequence[float] = (1.0,),
    ):
        names = tuple(names)
        float_values = tuple(float(v) for v in float_values)
        if len(names) != len(float_values):
            raise ScalarError("names and float_values must have equal length")
        if not names or names[0] != "one" or float_values[0] != 1.0:
            raise ScalarError('first constant must be "one" with value 1.0')
        if len(set(names)) != len(names):
            raise ScalarError("constant names must be distinct")
        self.names = names
        self.float_values = float_values
        self._index = {n: i for i, n in enumerate(names)}
        self._products: dict[tuple[int, int], tuple[Fraction, ...]] = {}

    @property
    def size(self) -> int:
        return len(self.names)

    def index_of(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ScalarError(f"unknown constant {name!r}") from None

    def declare_product(self, a: str, b: str, coeffs: Sequence[RationalLike]) -> None:
        """Record that the real product a*b equals the span element `coeffs`."""
        i, j = self.index_of(a), self.index_of(b)
        if i == 0 or j == 0:
            raise ScalarError("products with the unit need no declaration")
        value = _canon(coeffs, self.size)
        self._products[(i, j)] = value
        self._products[(j, i)] = value

    def product(self, i: int, j: int) -> tuple[Fraction, ...] | None:
        return self._products.get((i, j))

    def with_constant(
        self, name: str, float_value: float, square: RationalLike | None = None
    ) -> "ConstantBasis":
        """Return a new basis extended by one constant, optionally with a
        declared square (making it behave as a quadratic surd)."""
        basis = ConstantBasis(self.names + (name,), self.float_values + (float_value,))
        basis._products.update(self._products)
        if square is not None:
            sq = [Fraction(0)] * basis.size
            sq[0] = Fraction(square)
            basis.declare_product(name, name, sq)
        return basis

    @staticmethod
    def rationals() -> "ConstantBasis":
        return ConstantBasis()

    @staticmethod
    def with_sqrt(name: str = "sqrt2", radicand: RationalLike = 2) -> "ConstantBasis":
        radicand = Fraction(radicand)
        if radicand <= 0:
            raise ScalarError("radicand must be positive")
        value = float(radicand) ** 0.5
        return ConstantBasis().with_constant(name, value, square=radicand)

    def zero(self) -> "ExtScalar":
        return ExtScalar(self, (Fraction(0),) * self.size)

    def one(self) -> "ExtScalar":
        return self.from_rational(1)

    def from_rational(self, q: RationalLike) -> "ExtScalar":
        coeffs = [Fraction(0)] * self.size
        coeffs[0] = Fraction(q)
        return ExtScalar(self, tuple(coeffs))

    def constant(self, name: str) -> "ExtScalar":
        coeffs = [Fraction(0)] * self.size
        coeffs[self.index_of(name)] = Fraction(1)
        return ExtScalar(self, tuple(coeffs))

    def scalar(self, coeffs: Sequence[RationalLike]) -> "ExtScalar":
        return ExtScalar(self, _canon(coeffs, self.size))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConstantBasis):
            return NotImplemented
        return (
            self.names == other.names
            and self.float_values == other.float_values
            and self._products == other._products
        )

    def __hash__(self):
        return hash((self.names, self.float_values))

    def __repr__(self):
        return f"ConstantBasis({list(self.names)!r})"


def _canon(coeffs: Iterable[RationalLike], size: int) -> tuple[Fraction, ...]:
    out = tuple(Fraction(c) for c in coeffs)
    if len(out) != size:
        raise ScalarError(f"expected {size} coefficients, got {len(out)}")
    return out


@dataclass(frozen=True)
class ExtScalar:
    """Immutable exact number sum(coeffs[i] * constant[i])."""

    basis: ConstantBasis
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.basis.size:
            raise ScalarError("coefficient count does not match basis")

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise UnsupportedScalarOperation(f"{self} is not rational")
        return self.coeffs[0]

    # -- vector-space arithmetic -------------------------------------------

    def _check(self, other: "ExtScalar") -> None:
        if self.basis is not other.basis and self.basis != other.basis:
            raise BasisMismatchError("scalars use different constant bases")

    def __add__(self, other):
        other = self._coerce(other)
        self._check(other)
        return ExtScalar(
            self.basis, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other):
        other = self._coerce(other)
        self._check(other)
        return ExtScalar(
            self.basis, tuple(a - b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __neg__(self):
        return ExtScalar(self.basis, tuple(-a for a in self.coeffs))

    def scale(self, q: RationalLike) -> "ExtScalar":
        q = Fraction(q)
        return ExtScalar(self.basis, tuple(q * a for a in self.coeffs))

    def _coerce(self, other) -> "ExtScalar":
        if isinstance(other, ExtScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return self.basis.from_rational(other)
        raise TypeError(f"cannot combine ExtScalar with {type(other).__name__}")

    __radd__ = __add__

    def __rsub__(self, other):
        return self._coerce(other) - self

    # -- partial products ----------------------------------------------------

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, ExtScalar):
            return NotImplemented
        self._check(other)
        if self.is_rational():
            return other.scale(self.coeffs[0])
        if other.is_rational():
            return self.scale(other.coeffs[0])
        return self._mul_irrational(other)

    __rmul__ = __mul__

    def _mul_irrational(self, other: "ExtScalar") -> "ExtScalar":
        size = self.basis.size
        acc = [Fraction(0)] * size
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b == 0:
                    continue
                ab = a * b
                if i == 0:
                    acc[j] += ab
                elif j == 0:
                    acc[i] += ab
                else:
                    prod = self.basis.product(i, j)
                    if prod is None:
                        raise UnsupportedScalarOperation(
                            f"product {self.basis.names[i]}*{self.basis.names[j]} "
                            "is not declared; the scalar domain is not a ring"
                        )
                    for t, p in enumerate(prod):
                        acc[t] += ab * p
        return ExtScalar(self.basis, tuple(acc))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if q == 0:
                raise ZeroDivisionError("division by zero")
            return self.scale(Fraction(1, 1) / q)
        if not isinstance(other, ExtScalar):
            return NotImplemented
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero scalar")
        if other.is_rational():
            return self.scale(Fraction(1) / other.coeffs[0])
        return _divide(self, other)

    # -- evaluation and ordering ---------------------------------------------

    def to_float(self) -> float:
        return float(
            sum(float(c) * v for c, v in zip(self.coeffs, self.basis.float_values))
        )

    def sign(self) -> int:
        """Exact sign where decidable; raises SignUndecidableError otherwise."""
        nonzero = [i for i, c in enumerate(self.coeffs) if c != 0]
        if not nonzero:
            return 0
        if nonzero == [0]:
            return 1 if self.coeffs[0] > 0 else -1
        if len(nonzero) == 1:
            # single declared constant with a known (positive) float value
            i = nonzero[0]
            const_sign = 1 if self.basis.float_values[i] > 0 else -1
            return const_sign if self.coeffs[i] > 0 else -const_sign
        if len(nonzero) == 2 and nonzero[0] == 0:
            i = nonzero[1]
            sq = self.basis.product(i, i)
            if sq is not None and all(c == 0 for c in sq[1:]):
                return _sign_quadratic(
                    self.coeffs[0], self.coeffs[i], sq[0], self.basis.float_values[i]
                )
        return self._sign_interval()

    def _sign_interval(self) -> int:
        value = Fraction(0)
        radius = Fraction(0)
        for c, v in zip(self.coeffs, self.basis.float_values):
            if c == 0:
                continue
            fv = Fraction(v)
            value += c * fv
            radius += abs(c) * abs(fv) * _FLOAT_SLACK
        if value > radius:
            return 1
        if value < -radius:
            return -1
        raise SignUndecidableError(
            f"sign of {self} cannot be certified from declared float values"
        )

    def __lt__(self, other):
        return (self - self._coerce(other)).sign() < 0

    def __le__(self, other):
        return (self - self._coerce(other)).sign() <= 0

    def __gt__(self, other):
        return (self - self._coerce(other)).sign() > 0

    def __ge__(self, other):
        return (self - self._coerce(other)).sign() >= 0

    # -- text form -------------------------------------------------------------

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif abs(c) == 1:
                sign = "-" if c < 0 else ""
                terms.append(f"{sign}{self.basis.names[i]}")
            else:
                terms.append(f"{c}*{self.basis.names[i]}")
        if not terms:
            return "0"
        out = terms[0]
        for t in terms[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out

    def __repr__(self):
        return f"ExtScalar({self})"


def _sign_quadratic(a: Fraction, b: Fraction, q: Fraction, cval: float) -> int:
    # sign of a + b*c with c = sqrt(q) > 0, decided from a^2 vs b^2 q
    if cval <= 0:
        raise SignUndecidableError("declared square with non-positive constant")
    if a >= 0 and b >= 0:
        return 1
    if a <= 0 and b <= 0:
        return -1
    lhs, rhs = a * a, b * b * q
    if lhs == rhs:
        return 0
    bigger_is_a = lhs > rhs
    if a > 0:
        return 1 if bigger_is_a else -1
    return -1 if bigger_is_a else 1


def _divide(num: ExtScalar, den: ExtScalar) -> ExtScalar:
    """Solve x*den = num over the rational span, if the products allow it."""
    basis = num.basis
    size = basis.size
    # column t of M = coefficients of constant[t] * den
    columns = []
    for t in range(size):
        unit = [Fraction(0)] * size
        unit[t] = Fraction(1)
        col = ExtScalar(basis, tuple(unit)) * den
        columns.append(col.coeffs)
    x = _solve_rational([[columns[t][r] for t in range(size)] for r in range(size)],
                        list(num.coeffs))
    if x is None:
        raise UnsupportedScalarOperation(
            f"cannot divide {num} by {den} within the declared span"
        )
    return ExtScalar(basis, tuple(x))


def _solve_rational(
    matrix: list[list[Fraction]], rhs: list[Fraction]
) -> list[Fraction] | None:
    n = len(matrix)
    m = len(matrix[0]) if matrix else 0
    aug = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    pivots = []
    r = 0
    for c in range(m):
        pr = next((i for i in range(r, n) if aug[i][c] != 0), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        pv = aug[r][c]
        aug[r] = [v / pv for v in aug[r]]
        for i in range(n):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [v - f * w for v, w in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == n:
            break
    for i in range(r, n):
        if aug[i][m] != 0:
            return None
    x = [Fraction(0)] * m
    for i, c in enumerate(pivots):
        x[c] = aug[i][m]
    return x


# -- whole-vector utilities ----------------------------------------------------


def is_rational_direction(v: Sequence[ExtScalar]) -> bool:
    """True iff some nonzero real multiple of v has all entries rational.

    Equivalent to the rational coefficient matrix (entries x constants)
    having rank at most 1: all entries must lie on a single rational line
    through one common factor.
    """
    rows = [x.coeffs for x in v if not x.is_zero()]
    if not rows:
        raise ScalarError("zero vector has no direction")
    first = rows[0]
    for row in rows[1:]:
        # all 2x2 minors against the first nonzero row must vanish
        for i in range(len(first)):
            for j in range(i + 1, len(first)):
                if first[i] * row[j] - first[j] * row[i] != 0:
                    return False
    # remaining rows are automatically proportional to the first
    return True


def float_eval(x: ExtScalar) -> float:
    return x.to_float()


# -- parsing ---------------------------------------------------------------------

_TERM = re.compile(
    r"^(?P<coef>\d+(?:/\d+)?)?\s*\*?\s*(?P<name>[A-Za-z_]\w*)?$"
)


def parse_scalar(text: str | int | float, basis: ConstantBasis) -> ExtScalar:
    """Parse text like ``"1 + 1/2*sqrt2"`` or ``"-3/2"`` into a scalar."""
    if isinstance(text, (int, float)):
        return _from_number(text, basis)
    s = text.strip()
    if not s:
        raise ScalarError("empty scalar")
    coeffs = [Fraction(0)] * basis.size
    for i, term in enumerate(s.replace("-", "+-").split("+")):
        term = term.strip()
        if not term:
            if i == 0:
                continue
            raise ScalarError(f"dangling operator in scalar {text!r}")
        negative = term.startswith("-")
        if negative:
            term = term[1:].strip()
        m = _TERM.match(term)
        if not m or (m.group("coef") is None and m.group("name") is None):
            raise ScalarError(f"cannot parse scalar term {term!r} in {text!r}")
        coef = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
        if negative:
            coef = -coef
        idx = basis.index_of(m.group("name")) if m.group("name") else 0
        coeffs[idx] += coef
    return ExtScalar(basis, tuple(coeffs))


def _from_number(value, basis: ConstantBasis) -> ExtScalar:
    if isinstance(value, int):
        return basis.from_rational(value)
    frac = Fraction(value)
    if frac.denominator > 10**6:
        raise ScalarError(
            f"float {value!r} is not an exact small rational; write it as 'p/q'"
        )
    return basis.from_rational(frac)
