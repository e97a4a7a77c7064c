"""Exact number field tower: arithmetic, square roots, field registry."""

import pytest
from gmpy2 import mpq

from k3m20.numberfield import (
    AlreadySquareError,
    DegreeOverflowError,
    NumberFieldError,
    adjoin_sqrt,
    big_tower_field,
    field_by_name,
    gauss_sqrt5_field,
    gauss_sqrt10_field,
    gaussian_field,
    golden_tower_field,
    is_square,
    known_field_names,
    rational_field,
    sqrt5_field,
    zeta8_field,
)


def test_rational_field_basics():
    Q = rational_field()
    assert Q.degree == 1
    x = Q(mpq(3, 7))
    assert (x + x).rational_value() == mpq(6, 7)
    assert (x * Q(7)).rational_value() == 3
    assert x.inverse().rational_value() == mpq(7, 3)


def test_gaussian_arithmetic():
    F = gaussian_field()
    i = F.named["i"]
    assert i * i == F(-1)
    assert (F(1) + i) * (F(1) - i) == F(2)
    # inverse of 3 + 4i is (3 - 4i)/25
    z = F(3) + F(4) * i
    w = z.inverse()
    assert w * z == F.one
    assert w == (F(3) - F(4) * i) * F(mpq(1, 25))


def test_sqrt5_and_golden_ratio():
    F = sqrt5_field()
    s5 = F.named["sqrt5"]
    phi = F.named["phi"]
    assert s5 * s5 == F(5)
    assert phi * phi == phi + F.one
    assert phi == (F.one + s5) * F(mpq(1, 2))


def test_golden_tower_relations():
    F = golden_tower_field()
    sphi = F.named["sqrtphi"]
    phi = F.named["phi"]
    assert sphi * sphi == phi
    assert phi * phi - phi - F.one == F.zero
    # minimal polynomial x^4 - x^2 - 1 kills the generator
    g = F.gen
    assert g ** 4 - g ** 2 - F.one == F.zero


def test_zeta8_relations():
    F = zeta8_field()
    z = F.named["zeta8"]
    i = F.named["i"]
    s2 = F.named["sqrt2"]
    assert z ** 2 == i
    assert z ** 4 == F(-1)
    assert z ** 8 == F.one
    assert s2 * s2 == F(2)
    assert z == (F.one + i) * s2 * F(mpq(1, 2))


def test_degree8_tower_contains_everything():
    F = big_tower_field()
    assert F.degree == 8
    i = F.named["i"]
    s5 = F.named["sqrt5"]
    sphi = F.named["sqrtphi"]
    assert i * i == F(-1)
    assert s5 * s5 == F(5)
    assert sphi ** 4 == sphi ** 2 + F.one


def test_is_square_positive_cases():
    F = sqrt5_field()
    r = is_square(F(5))
    assert r is not None and r * r == F(5)
    B = big_tower_field()
    r = is_square(B(-4))
    assert r is not None and r * r == B(-4)
    # phi is a square in the degree-8 tower, up to sign normalization
    r = is_square(B.named["phi"])
    assert r is not None and r * r == B.named["phi"]


def test_is_square_negative_cases():
    Q = rational_field()
    assert is_square(Q(2)) is None
    F = sqrt5_field()
    assert is_square(F(2)) is None
    assert is_square(F(-1)) is None
    B = big_tower_field()
    assert is_square(B(2)) is None


def test_adjoin_sqrt_rejects_existing_square():
    F = sqrt5_field()
    with pytest.raises(AlreadySquareError) as exc:
        adjoin_sqrt(F, F(5), "x")
    w = exc.value.witness
    assert w * w == F(5)


def test_adjoin_sqrt_degree_cap():
    F = big_tower_field()
    ext = adjoin_sqrt(F, F(2), "sqrt2")
    assert ext.field.degree == 16
    with pytest.raises(DegreeOverflowError):
        adjoin_sqrt(ext.field, ext.field(3), "sqrt3", max_degree=16)


def test_adjoin_sqrt_embedding_is_homomorphism():
    F = gaussian_field()
    ext = adjoin_sqrt(F, F(5), "sqrt5")
    i = F.named["i"]
    a, b = F(3) + i, F(1) - F(2) * i
    assert ext.embed(a * b) == ext.embed(a) * ext.embed(b)
    assert ext.embed(a + b) == ext.embed(a) + ext.embed(b)
    assert ext.sqrt * ext.sqrt == ext.embed(F(5))


def test_field_registry():
    names = known_field_names()
    assert "rationals" in names and "tower8" in names
    for name in names:
        f = field_by_name(name)
        assert f.degree >= 1
    with pytest.raises(NumberFieldError):
        field_by_name("nope")


def test_gauss_sqrt5_field_relations():
    F = gauss_sqrt5_field()
    i = F.named["i"]
    s5 = F.named["sqrt5"]
    assert i * i == F(-1)
    assert s5 * s5 == F(5)
    assert (i * s5) ** 2 == F(-5)


def test_gauss_sqrt10_field_relations():
    F = gauss_sqrt10_field()
    r = F.named["sqrt10"]
    i = F.named["i"]
    assert r * r == F(10)
    assert (i * r) ** 2 == F(-10)


def test_element_ordering_and_hash():
    F = gaussian_field()
    i = F.named["i"]
    s = {F.one, F.one, i, -i}
    assert len(s) == 3
    assert sorted([i, F.one], key=lambda e: e.sort_key()) is not None


def test_pow_negative_exponent():
    F = sqrt5_field()
    phi = F.named["phi"]
    assert phi ** -1 == phi.inverse()
    assert phi ** -2 == (phi * phi).inverse()
    assert phi ** 0 == F.one
