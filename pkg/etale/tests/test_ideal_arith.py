from fractions import Fraction

import pytest

from errors import InvalidIdealSpec, NotAnNthPower, ZeroElement, ZeroIdeal
from ideal_arith import (
    element_valuation, factor_ideal, factor_rational_prime, ideal_from_factors, ideal_from_generators, ideal_from_json,
    ideal_sum, nth_root_ideal, primes_above, principal_divisor, small_elements, unit_ideal, valuation,
)


@pytest.fixture(scope="module")
def p2(qsqrt_m5):
    """(2, 1 + sqrt -5): the non-principal prime above 2."""
    (P, e), = factor_rational_prime(qsqrt_m5, 2)
    return P


class TestIdealBasics:
    def test_unit_ideal(self, qsqrt_m5):
        O = unit_ideal(qsqrt_m5)
        assert O.is_one() and O.norm() == 1

    def test_principal_norm(self, qsqrt_m5):
        t = qsqrt_m5.generator()
        assert principal_divisor(1 + t).norm() == 6
        assert principal_divisor(qsqrt_m5.from_rational(Fraction(1, 3))).norm() == Fraction(1, 9)

    def test_zero(self, qsqrt_m5):
        with pytest.raises(ZeroElement):
            principal_divisor(qsqrt_m5.zero())
        with pytest.raises(ZeroIdeal):
            ideal_from_generators(qsqrt_m5, [qsqrt_m5.zero()])

    def test_inverse(self, qsqrt_m5, p2):
        assert (p2.ideal * p2.ideal.inverse()).is_one()
        assert (p2.ideal / p2.ideal).is_one()

    def test_contains(self, qsqrt_m5, p2):
        t = qsqrt_m5.generator()
        assert p2.ideal.contains(1 + t)
        assert p2.ideal.contains(qsqrt_m5.from_rational(2))
        assert not p2.ideal.contains(t)
        assert p2.ideal.is_module()

    def test_sum_is_gcd(self, qsqrt_m5, p2):
        t = qsqrt_m5.generator()
        assert ideal_sum(principal_divisor(qsqrt_m5.from_rational(2)), principal_divisor(1 + t)) == p2.ideal


class TestPrimes:
    def test_ramified_two(self, qsqrt_m5, p2):
        assert p2.e == 2 and p2.f == 1 and p2.norm() == 2
        assert p2.ideal ** 2 == principal_divisor(qsqrt_m5.from_rational(2))

    @pytest.mark.parametrize("p,shape", [(3, [(1, 1), (1, 1)]), (7, [(1, 1), (1, 1)]),
                                         (11, [(1, 2)]), (5, [(2, 1)])])
    def test_splitting(self, qsqrt_m5, p, shape):
        assert sorted((P.e, P.f) for P in primes_above(qsqrt_m5, p)) == shape

    def test_gamma(self, qsqrt_m5, p2):
        assert element_valuation(p2.gamma, p2) == -1

    def test_valuations(self, qsqrt_m5, p2):
        t = qsqrt_m5.generator()
        assert element_valuation(qsqrt_m5.from_rational(4), p2) == 4
        assert element_valuation(1 + t, p2) == 1
        assert element_valuation(qsqrt_m5.from_rational(Fraction(1, 2)), p2) == -2
        assert valuation(p2.ideal ** -3, p2) == -3


class TestFactorization:
    def test_factor_six(self, qsqrt_m5):
        t = qsqrt_m5.generator()
        I = principal_divisor(1 + t)
        factors = factor_ideal(I)
        assert sorted(P.p for P, _ in factors) == [2, 3]
        assert all(k == 1 for _, k in factors)
        assert ideal_from_factors(qsqrt_m5, factors) == I

    def test_factor_fractional(self, qsqrt_m5):
        I = principal_divisor(qsqrt_m5.from_rational(Fraction(9, 22)))
        assert ideal_from_factors(qsqrt_m5, factor_ideal(I)) == I

    def test_nth_root(self, qsqrt_m5, p2):
        assert nth_root_ideal(principal_divisor(qsqrt_m5.from_rational(2)), 2) == p2.ideal
        with pytest.raises(NotAnNthPower):
            nth_root_ideal(p2.ideal, 2)


def test_small_elements(qsqrt_m5, p2):
    # T2(x) = 2 N(x) in an imaginary quadratic field; p2 holds nothing of norm 2
    found = [x for x, _ in small_elements(p2.ideal, 12.5)]
    assert all(p2.ideal.contains(x) for x in found)
    assert sorted(abs(x.norm()) for x in found) == [4, 6, 6]
    assert list(small_elements(p2.ideal, 6.5)) == []


class TestIdealJson:
    @pytest.fixture
    def ideals(self, qsqrt_m5, p2):
        t = qsqrt_m5.generator()
        return [p2.ideal, p2.ideal.inverse(), principal_divisor(1 + t), unit_ideal(qsqrt_m5)]

    def test_hnf_round_trip(self, qsqrt_m5, ideals):
        for I in ideals:
            assert ideal_from_json(qsqrt_m5, I.to_json()) == I

    def test_two_generator_round_trip(self, qsqrt_m5, ideals):
        for I in ideals:
            data = I.two_gens_json()
            assert set(data) == {"two_gens", "den"}
            assert ideal_from_json(qsqrt_m5, data) == I

    def test_two_element_generates(self, qsqrt_m5, p2):
        a, alpha = p2.ideal.two_element()
        assert ideal_from_generators(qsqrt_m5, [qsqrt_m5.from_rational(a), alpha]) == p2.ideal

    def test_generators_as_polynomials(self, qsqrt_m5, p2):
        assert ideal_from_json(qsqrt_m5, {"two_gens": ["2", "x+1"]}) == p2.ideal
        half = ideal_from_json(qsqrt_m5, {"two_gens": ["2", "x+1"], "den": "2"})
        assert half == p2.ideal.scale(qsqrt_m5.from_rational(Fraction(1, 2)))

    @pytest.mark.parametrize("data", [
        [1, 2],
        {"den": "1"},
        {"two_gens": ["2"]},
        {"two_gens": ["0", "0"]},
        {"two_gens": ["2", ["1"]]},
        {"two_gens": ["2", "x+1"], "den": "0"},
        {"two_gens": ["2", "x+1"], "den": "half"},
        {"hnf": [["1", "0"]], "den": "1"},
        {"hnf": [["2", "0"], ["0", "1"]], "den": "1"},
        {"hnf": [["1", "0"], ["0", "z"]], "den": "1"},
    ])
    def test_malformed(self, qsqrt_m5, data):
        with pytest.raises(InvalidIdealSpec):
            ideal_from_json(qsqrt_m5, data)
