from math import gcd

import pytest

from class_unit import (
    class_group, class_group_mod_n, class_group_n_torsion, find_generator, in_subgroup, is_principal,
    class_discrete_log, norm_image_classes, norm_image_subgroup, unit_group, units_mod_nth_powers,
)
from forms import (
    BinaryQF, class_number, form_power, fundamental_discriminants, principal_form, quadratic_polynomial,
    reduced_forms, torsion_count,
)
from ideal_arith import factor_rational_prime, primes_above, principal_divisor
from nf_core import make_field


class TestForms:
    @pytest.mark.parametrize("D,h", [(-3, 1), (-4, 1), (-15, 2), (-20, 2), (-23, 3), (-47, 5), (-56, 4), (-84, 4)])
    def test_class_numbers(self, D, h):
        assert class_number(D) == h

    def test_composition(self):
        f = BinaryQF(2, 2, 3)
        assert f.discriminant() == -20
        assert form_power(f, 2) == principal_form(-20)
        assert f * principal_form(-20) == f

    def test_reduced_forms_are_reduced(self):
        assert all(f.is_reduced() for f in reduced_forms(-84))

    def test_two_torsion(self):
        assert torsion_count(-84, 2) == 4
        assert torsion_count(-56, 2) == 2
        assert torsion_count(-23, 3) == 3

    def test_fundamental_discriminants(self):
        assert list(fundamental_discriminants(-24, -3)) == [-3, -4, -7, -8, -11, -15, -19, -20, -23, -24]
        assert quadratic_polynomial(-20) == [1, 0, 5]
        assert quadratic_polynomial(-23) == [1, -1, 6]


class TestUnits:
    def test_imaginary_quadratic(self, qsqrt_m5, qi):
        assert unit_group(qsqrt_m5).rank == 0
        assert unit_group(qi).torsion.order == 4

    def test_real_quadratic(self):
        K = make_field([1, 0, -2])
        units = unit_group(K)
        assert units.rank == 1
        eps = units.fundamental_units[0]
        assert abs(eps.norm()) == 1
        t, exps = units.discrete_log(-eps ** 3)
        assert abs(exps[0]) == 3
        assert units.torsion.elements()[t] * eps ** exps[0] == -eps ** 3

    def test_units_mod_powers(self, qsqrt_m5, qi):
        assert units_mod_nth_powers(qsqrt_m5, 2).orders == [2]
        assert units_mod_nth_powers(qsqrt_m5, 3).orders == []
        assert units_mod_nth_powers(qi, 4).orders == [4]
        assert units_mod_nth_powers(make_field([1, 0, -2]), 2).orders == [2, 2]

    def test_units_mod_powers_discrete_log(self, qi):
        U = units_mod_nth_powers(qi, 4)
        assert U.discrete_log(qi.generator()) in ([1], [3])
        assert U.discrete_log(qi.from_rational(-1)) == [2]


class TestClassGroup:
    @pytest.mark.parametrize("coeffs,snf", [([1, 0, 5], [2]), ([1, 0, 1], []), ([1, -1, 6], [3]),
                                            ([1, 0, 21], [2, 2]), ([1, 0, 14], [4])])
    def test_structure(self, coeffs, snf):
        assert class_group(make_field(coeffs)).snf_orders == snf

    def test_principal_ideal_test(self, qsqrt_m5):
        (P, _), = factor_rational_prime(qsqrt_m5, 2)
        assert is_principal(P.ideal) is None
        g = is_principal(P.ideal ** 2)
        assert principal_divisor(g) == P.ideal ** 2
        assert find_generator(P.ideal) is None

    def test_discrete_log_is_a_homomorphism(self, qsqrt_m5):
        group = class_group(qsqrt_m5)
        P3, Q3 = primes_above(qsqrt_m5, 3)
        (P2, _), = factor_rational_prime(qsqrt_m5, 2)
        assert group.discrete_log(P3.ideal) == [1]
        assert group.discrete_log(P3.ideal * Q3.ideal) == [0]
        assert group.discrete_log(P2.ideal * P3.ideal) == [0]

    def test_ideal_of(self, qsqrt_m23):
        group = class_group(qsqrt_m23)
        for c in range(3):
            assert group.discrete_log(group.ideal_of([c])) == [c]

    def test_mod_n_and_torsion(self, qsqrt_m5):
        assert class_group_mod_n(qsqrt_m5, 2) == [2]
        assert class_group_mod_n(qsqrt_m5, 3) == []
        (t,) = class_group_n_torsion(qsqrt_m5, 2)
        assert t.order == 2
        assert principal_divisor(t.gamma) == t.ideal ** 2

    def test_in_subgroup(self):
        assert in_subgroup([2], [[2]], [4])
        assert not in_subgroup([1], [[2]], [4])
        assert in_subgroup([0, 0], [], [2, 2])
        assert not in_subgroup([1, 0], [], [2, 2])

    def test_hilbert_class_field_norm_image(self, qsqrt_m5_i):
        assert norm_image_classes(qsqrt_m5_i) == {(0,)}

    def test_norm_image_subgroup(self, qsqrt_m5_i):
        # Cl L is trivial: the image is the zero subgroup
        gens = norm_image_subgroup(qsqrt_m5_i)
        assert not in_subgroup([1], gens, [2])
        assert in_subgroup([0], gens, [2])

    def test_class_discrete_log(self, qsqrt_m5):
        P3, _ = primes_above(qsqrt_m5, 3)
        assert class_discrete_log(P3.ideal) == [1]
        assert class_discrete_log(P3.ideal ** 2) == [0]


@pytest.mark.slow
def test_class_numbers_against_forms():
    for D in fundamental_discriminants(-300, -3):
        K = make_field(quadratic_polynomial(D))
        group = class_group(K)
        assert group.order == class_number(D), D
        two_rank = 1
        for d in group.snf_orders:
            two_rank *= gcd(d, 2)
        assert two_rank == torsion_count(D, 2), D


def non_maximal_polynomials(D):
    """x^2 - 4m, and x^2 - m when D = m = 1 mod 4: orders of index 2 in Q(sqrt m)."""
    m = D if D % 4 == 1 else D // 4
    polys = [[1, 0, -4 * m]]
    if D % 4 == 1:
        polys.append([1, 0, -m])
    return polys


@pytest.mark.parametrize("coefficients,D", [
    ([1, 0, 3], -3), ([1, 0, 7], -7), ([1, 0, 11], -11), ([1, 0, 15], -15),
    ([1, 0, 12], -3), ([1, 0, 60], -15), ([1, 0, 20], -20),
])
def test_polynomial_discriminant_is_not_field_discriminant(coefficients, D):
    K = make_field(coefficients)
    assert K.discriminant == D
    assert class_group(K).order == class_number(D)


@pytest.mark.slow
def test_class_numbers_against_forms_from_non_maximal_orders():
    for D in fundamental_discriminants(-200, -3):
        for coefficients in non_maximal_polynomials(D):
            K = make_field(coefficients)
            assert K.discriminant == D, (coefficients, D)
            assert class_group(K).order == class_number(D), (coefficients, D)
