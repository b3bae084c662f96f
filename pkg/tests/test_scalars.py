import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from momentlab.scalars import (
    BasisMismatchError,
    ConstantBasis,
    SignUndecidableError,
    UnsupportedScalarOperation,
    float_eval,
    is_rational_direction,
    parse_scalar,
)

from conftest import random_fraction

fractions = st.fractions(max_denominator=50)


def pair(basis, a, b):
    return basis.scalar([Fraction(a), Fraction(b)])


def test_addition_is_componentwise(sqrt2_basis):
    one = sqrt2_basis.one()
    s2 = sqrt2_basis.constant("sqrt2")
    assert one + s2 == pair(sqrt2_basis, 1, 1)


def test_scale_by_rational(sqrt2_basis):
    s2 = sqrt2_basis.constant("sqrt2")
    assert s2.scale(Fraction(1, 2)) == pair(sqrt2_basis, 0, Fraction(1, 2))


def test_negation(sqrt2_basis):
    x = pair(sqrt2_basis, Fraction(3, 2), 0)
    assert -x == pair(sqrt2_basis, Fraction(-3, 2), 0)


def test_basis_mismatch_raises(sqrt2_basis, rat_basis):
    with pytest.raises(BasisMismatchError):
        sqrt2_basis.one() + rat_basis.one()


def test_declared_square_product(sqrt2_basis):
    s2 = sqrt2_basis.constant("sqrt2")
    assert (s2 * s2).rational_value() == 2
    x = pair(sqrt2_basis, 1, 1)
    # (1 + sqrt2)^2 = 3 + 2 sqrt2
    assert x * x == pair(sqrt2_basis, 3, 2)


def test_undeclared_product_raises():
    basis = ConstantBasis.rationals().with_constant("tau", 6.2831853)
    t = basis.constant("tau")
    with pytest.raises(UnsupportedScalarOperation):
        _ = t * t


def test_division_by_surd(sqrt2_basis):
    s2 = sqrt2_basis.constant("sqrt2")
    assert sqrt2_basis.one() / s2 == pair(sqrt2_basis, 0, Fraction(1, 2))
    x = pair(sqrt2_basis, 1, 1)
    assert (x / s2) * s2 == x


def test_division_undeclared_raises():
    basis = ConstantBasis.rationals().with_constant("tau", 6.2831853)
    with pytest.raises(UnsupportedScalarOperation):
        basis.one() / basis.constant("tau")


def test_float_eval_examples(sqrt2_basis):
    assert abs(float_eval(pair(sqrt2_basis, 1, 1)) - 2.414213562373095) < 1e-12
    assert float_eval(sqrt2_basis.zero()) == 0.0
    assert float_eval(pair(sqrt2_basis, Fraction(-3, 2), 0)) == -1.5


def test_sign_rational(sqrt2_basis):
    assert pair(sqrt2_basis, Fraction(-1, 7), 0).sign() == -1
    assert sqrt2_basis.zero().sign() == 0


def test_sign_quadratic_cases(sqrt2_basis):
    # 1 - sqrt2 < 0 < 3 - 2 sqrt2, and 2 - sqrt2*sqrt2 = 0 via products
    assert pair(sqrt2_basis, 1, -1).sign() < 0
    assert pair(sqrt2_basis, 3, -2).sign() > 0
    assert pair(sqrt2_basis, -1, 1).sign() > 0
    s2 = sqrt2_basis.constant("sqrt2")
    assert (s2 * s2 - 2).sign() == 0


def test_sign_single_opaque_constant():
    basis = ConstantBasis.rationals().with_constant("tau", 6.2831853)
    assert basis.constant("tau").scale(-3).sign() == -1


def test_sign_interval_and_undecidable():
    basis = ConstantBasis.rationals().with_constant("tau", 6.2831853)
    t = basis.constant("tau")
    assert (t - 6).sign() > 0
    assert (t - 7).sign() < 0
    exact = basis.scalar([Fraction(6.2831853), Fraction(-1)])
    with pytest.raises(SignUndecidableError):
        exact.sign()


def test_parse_and_format_round_trip(sqrt2_basis):
    for text in ["0", "1", "-3/2", "sqrt2", "1 + 1/2*sqrt2", "2 - sqrt2"]:
        x = parse_scalar(text, sqrt2_basis)
        assert parse_scalar(str(x), sqrt2_basis) == x
    assert parse_scalar(3, sqrt2_basis) == sqrt2_basis.from_rational(3)
    assert parse_scalar(0.5, sqrt2_basis) == sqrt2_basis.from_rational(Fraction(1, 2))


def test_parse_rejects_garbage(sqrt2_basis):
    for text in ["", "1 +", "sqrt3", "1**2"]:
        with pytest.raises(Exception):
            parse_scalar(text, sqrt2_basis)


@given(a=fractions, b=fractions, c=fractions, d=fractions, e=fractions, f=fractions)
@settings(deadline=None, max_examples=100)
def test_add_associative_commutative(a, b, c, d, e, f):
    basis = ConstantBasis.with_sqrt("sqrt2", 2)
    x, y, z = basis.scalar([a, b]), basis.scalar([c, d]), basis.scalar([e, f])
    assert (x + y) + z == x + (y + z)
    assert x + y == y + x


@given(a=fractions, b=fractions, c=fractions, d=fractions, q=fractions)
@settings(deadline=None, max_examples=100)
def test_float_eval_is_additive_and_homogeneous(a, b, c, d, q):
    basis = ConstantBasis.with_sqrt("sqrt2", 2)
    x, y = basis.scalar([a, b]), basis.scalar([c, d])
    lhs = float_eval(x + y)
    rhs = float_eval(x) + float_eval(y)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs), abs(rhs))
    lhs = float_eval(x.scale(q))
    rhs = float(q) * float_eval(x)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs), abs(rhs))


# -- rational directions -------------------------------------------------------


def brute_force_rational_direction(v, basis):
    """Oracle: over Q(sqrt2) every nonzero entry is invertible, so v is a
    rational direction iff dividing by some nonzero entry makes all entries
    rational."""
    nonzero = [x for x in v if not x.is_zero()]
    for pivot in nonzero:
        if all((x / pivot).is_rational() for x in v):
            return True
    return False


def test_rational_direction_examples(sqrt2_basis):
    s2 = sqrt2_basis.constant("sqrt2")
    two, three = sqrt2_basis.from_rational(2), sqrt2_basis.from_rational(3)
    assert is_rational_direction([two, three])
    assert is_rational_direction([s2, s2.scale(2)])
    assert not is_rational_direction([sqrt2_basis.one(), s2])
    with pytest.raises(Exception):
        is_rational_direction([sqrt2_basis.zero()])


def test_rational_direction_matches_brute_force(sqrt2_basis):
    rng = random.Random(20240811)
    for _ in range(300):
        n = rng.randint(1, 4)
        v = []
        for _ in range(n):
            a = random_fraction(rng, 3)
            b = random_fraction(rng, 3) if rng.random() < 0.5 else Fraction(0)
            v.append(sqrt2_basis.scalar([a, b]))
        if all(x.is_zero() for x in v):
            continue
        assert is_rational_direction(v) == brute_force_rational_direction(
            v, sqrt2_basis
        )


def test_rational_direction_scaling_invariance(sqrt2_basis):
    rng = random.Random(7)
    for _ in range(50):
        v = [
            sqrt2_basis.scalar([random_fraction(rng), random_fraction(rng)])
            for _ in range(3)
        ]
        if all(x.is_zero() for x in v):
            continue
        c = Fraction(0)
        while c == 0:
            c = random_fraction(rng)
        scaled = [x.scale(c) for x in v]
        assert is_rational_direction(v) == is_rational_direction(scaled)
