import random
from fractions import Fraction

import pytest

from errors import DivisionByZero, NonMonic, NotAnNthPower, PolynomialSyntaxError, ReduciblePolynomial
from nf_core import field_from_text, make_field, parse_polynomial, roots_of_unity, signature


class TestParsePolynomial:
    def test_basic(self):
        assert parse_polynomial("x^2+5") == [1, 0, 5]
        assert parse_polynomial("x^3-x-1") == [1, 0, -1, -1]
        assert parse_polynomial("2x^2 + 3x - 7") == [2, 3, -7]

    def test_rational_elements(self):
        assert parse_polynomial("1/2x+1/2", allow_rational=True) == [Fraction(1, 2), Fraction(1, 2)]

    @pytest.mark.parametrize("text", ["", "x^^2", "x2+", "3x^", "1/2x"])
    def test_syntax_errors(self, text):
        with pytest.raises(PolynomialSyntaxError):
            parse_polynomial(text)


class TestMakeField:
    def test_sqrt_m5(self, qsqrt_m5):
        assert qsqrt_m5.degree == 2
        assert qsqrt_m5.discriminant == -20
        assert [w.power_basis() for w in qsqrt_m5.basis_elements()] == [[1, 0], [0, 1]]

    def test_sqrt_m3_half_integral_basis(self, qsqrt_m3):
        assert qsqrt_m3.discriminant == -3
        assert qsqrt_m3.from_power_basis([Fraction(1, 2), Fraction(1, 2)]).is_integral()

    def test_reducible(self):
        with pytest.raises(ReduciblePolynomial):
            make_field([1, 2, 1])

    def test_non_monic(self):
        with pytest.raises(NonMonic):
            make_field([2, 0, 1])

    def test_trace_form_matches_discriminant(self):
        for coeffs in ([1, 0, 5], [1, -1, 6], [1, 0, 0, -2], [1, 0, 0, 0, 1]):
            K = make_field(coeffs)
            assert K.trace_form_determinant() == K.discriminant

    def test_discriminant_sign(self):
        for text in ("x^2+5", "x^3-2", "x^4+1"):
            K = field_from_text(text)
            r1, r2 = K.signature
            assert (K.discriminant < 0) == (r2 % 2 == 1)

    def test_supplied_integral_basis(self):
        K = make_field([1, 0, 3], integral_basis=[[1, 0], [Fraction(1, 2), Fraction(1, 2)]])
        assert K.discriminant == -3


class TestSignature:
    @pytest.mark.parametrize("text,expected", [
        ("x^2+5", (0, 1)), ("x^3-2", (1, 1)), ("x-3", (1, 0)), ("x^4-2", (2, 1)), ("x^4+1", (0, 2)), ("x^4-10x^2+1", (4, 0)),
    ])
    def test_signature(self, text, expected):
        assert signature(field_from_text(text)) == expected


class TestArithmetic:
    def test_conjugate_product(self, qsqrt_m5):
        t = qsqrt_m5.generator()
        assert (1 + t) * (1 - t) == 6

    def test_inverse(self, qsqrt_m5):
        assert qsqrt_m5.from_rational(2).inverse() == Fraction(1, 2)
        with pytest.raises(DivisionByZero):
            qsqrt_m5.zero().inverse()

    def test_norm(self, qsqrt_m5):
        assert (1 + qsqrt_m5.generator()).norm() == 6

    def test_random_identities(self):
        K = make_field([1, 0, 0, 0, 1])
        rng = random.Random(7)
        for _ in range(20):
            a = K.random_element(rng, bound=4, integral=False)
            b = K.random_element(rng, bound=4)
            if a.is_zero() or b.is_zero():
                continue
            assert a * a.inverse() == 1
            assert a.norm() == a.resultant_norm()
            assert (a * b).norm() == a.norm() * b.norm()
            assert a ** -2 * a ** 2 == 1

    def test_characteristic_polynomial(self, qsqrt_m5):
        assert qsqrt_m5.generator().characteristic_polynomial() == [1, 0, 5]


class TestRootsOfUnity:
    def test_gaussian(self, qi):
        mu = roots_of_unity(qi, 4)
        assert mu.order == 4
        assert mu.generator ** 2 == -1

    def test_sqrt_m5(self, qsqrt_m5):
        assert roots_of_unity(qsqrt_m5, 2).order == 2
        assert roots_of_unity(qsqrt_m5, 3).order == 1

    def test_eisenstein(self, qsqrt_m3):
        assert qsqrt_m3.torsion.order == 6
        mu = roots_of_unity(qsqrt_m3, 3)
        assert mu.order == 3
        assert mu.generator ** 3 == 1 and not mu.generator.is_one()

    def test_discrete_log(self, qi):
        mu = roots_of_unity(qi, 4)
        assert mu.discrete_log(mu.generator ** 3) == 3
        with pytest.raises(ValueError):
            mu.discrete_log(qi.from_rational(2))


class TestRoots:
    def test_nth_root(self, qsqrt_m5):
        r = qsqrt_m5.nth_root(qsqrt_m5.from_rational(-5), 2)
        assert r ** 2 == -5

    def test_not_a_power(self, qsqrt_m5):
        assert not qsqrt_m5.is_nth_power(qsqrt_m5.from_rational(-1), 2)
        with pytest.raises(NotAnNthPower):
            qsqrt_m5.nth_root(qsqrt_m5.from_rational(2), 2)
