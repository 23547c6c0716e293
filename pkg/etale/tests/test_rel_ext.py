import pytest

from errors import DescentFailure, InvalidExtensionSpec, NotGaloisCyclic, RamifiedExtension, RootOfUnityMissing
from ideal_arith import factor_rational_prime, primes_above, principal_divisor, unit_ideal
from nf_core import make_field
from rel_ext import (
    INFINITE_PLACE_UNSUPPORTED, H1Class, H1Registry, build_kummer, cyclic_extension, extend_ideal, extension_by_polynomial,
    extension_from_spec, relative_norm, relative_norm_ideal, sigma_on_ideal, unramified_report, validate_ext_spec,
)


@pytest.fixture(scope="module")
def p2(qsqrt_m5):
    (P, _), = factor_rational_prime(qsqrt_m5, 2)
    return P


class TestKummer:
    def test_degree_and_data(self, qsqrt_m5_i):
        ext = qsqrt_m5_i
        assert ext.degree == 2 and ext.top.degree == 4
        beta = ext.kummer.beta
        assert beta ** 2 == -1
        assert ext.sigma(beta) == -beta

    def test_trivial_when_radicand_is_a_power(self, qsqrt_m5):
        ext = build_kummer(qsqrt_m5, 2, qsqrt_m5.from_rational(-5))
        assert ext.is_trivial
        assert ext.kummer.beta ** 2 == -5

    def test_missing_roots_of_unity(self, qsqrt_m5):
        with pytest.raises(RootOfUnityMissing):
            build_kummer(qsqrt_m5, 3, qsqrt_m5.from_rational(2))

    def test_radicand_reduction(self, qi):
        # 4 = 2^2, so K(4^(1/4)) = K(2^(1/2))
        ext = build_kummer(qi, 4, qi.from_rational(4))
        assert ext.degree == 2
        assert ext.kummer.beta ** 4 == 4

    def test_ramified(self, qsqrt_m3):
        ext = build_kummer(qsqrt_m3, 3, qsqrt_m3.from_rational(2))
        assert ext.degree == 3
        assert not ext.is_unramified_everywhere
        assert ext.ramified_primes()
        with pytest.raises(RamifiedExtension):
            H1Class(ext, 3)

    def test_real_place(self):
        K = make_field([1, 0, -2])
        ext = build_kummer(K, 2, K.from_rational(-1))
        assert ext.report.reason == INFINITE_PLACE_UNSUPPORTED
        assert not ext.is_unramified_everywhere

    def test_report_depends_on_modulus(self, qsqrt_m5_i):
        assert unramified_report(qsqrt_m5_i) == qsqrt_m5_i.report
        assert unramified_report(qsqrt_m5_i, 4).unramified
        K = make_field([1, 0, -2])
        ext = build_kummer(K, 2, K.from_rational(-1))
        assert unramified_report(ext, 2).reason == INFINITE_PLACE_UNSUPPORTED

    @pytest.mark.slow
    def test_real_base_with_odd_modulus(self):
        # Hilbert class field of Q(sqrt 229), h = 3
        K = make_field([1, 0, -229])
        ext = extension_by_polynomial(K, [1, 0, -4, 1])
        assert ext.degree == 3
        assert unramified_report(ext, 3).unramified
        assert unramified_report(ext, 6).reason == INFINITE_PLACE_UNSUPPORTED
        H1Class(ext, 3)
        with pytest.raises(RamifiedExtension):
            H1Class(ext, 6)


class TestElements:
    def test_relative_norm(self, qsqrt_m5_i):
        ext = qsqrt_m5_i
        beta = ext.kummer.beta
        assert ext.norm(beta) == 1
        assert ext.norm(1 + beta) == 2
        assert ext.norm(ext.embed(ext.base.generator())) == -5

    def test_embed_restrict(self, qsqrt_m5_i):
        ext = qsqrt_m5_i
        t = ext.base.generator()
        x = 3 + 2 * t
        assert ext.restrict(ext.embed(x)) == x
        assert ext.embed(t) ** 2 == -5
        with pytest.raises(DescentFailure):
            ext.restrict(ext.kummer.beta)

    def test_sigma_is_an_automorphism(self, qsqrt_m23_hilbert):
        ext = qsqrt_m23_hilbert
        a = ext.top.generator()
        b = a * a + 3
        assert ext.sigma(a * b) == ext.sigma(a) * ext.sigma(b)
        assert ext.sigma(a, 3) == a
        assert ext.sigma(ext.theta_image) == ext.theta_image


class TestIdeals:
    def test_norm_of_extended_ideal(self, qsqrt_m5_i, p2):
        ext = qsqrt_m5_i
        assert ext.norm_ideal(ext.extend_ideal(p2.ideal)) == p2.ideal ** 2

    def test_sigma_ideal(self, qsqrt_m5_i):
        ext = qsqrt_m5_i
        beta = ext.kummer.beta
        I = principal_divisor(1 + beta)
        assert ext.sigma_ideal(I) == principal_divisor(1 - beta)
        assert ext.sigma_ideal(I, 2) == I

    def test_module_level_helpers(self, qsqrt_m5_i, p2):
        ext = qsqrt_m5_i
        beta = ext.kummer.beta
        J = principal_divisor(2 + beta)
        assert relative_norm(ext, 2 + beta) == 5
        assert relative_norm_ideal(ext, J) == principal_divisor(ext.base.from_rational(5))
        assert sigma_on_ideal(ext, J) == principal_divisor(2 - beta)
        assert relative_norm_ideal(ext, extend_ideal(ext, p2.ideal)) == p2.ideal ** 2

    def test_inert_prime(self, qsqrt_m5_i, p2):
        (P, e), = qsqrt_m5_i.primes_over(p2)
        assert e == 1
        assert qsqrt_m5_i.prime_below(P) == (p2, 2)


class TestArtin:
    def test_hilbert_class_field_of_sqrt_m5(self, qsqrt_m5, qsqrt_m5_i, p2):
        ext = qsqrt_m5_i
        assert ext.is_unramified_everywhere
        assert ext.artin_symbol(p2.ideal) == 1
        assert ext.artin_symbol(p2.ideal ** 2) == 0
        for P in primes_above(qsqrt_m5, 3):
            assert ext.artin_symbol(P.ideal) == 1
        t = qsqrt_m5.generator()
        assert ext.artin_symbol(principal_divisor(1 + t)) == 0
        assert ext.artin_symbol(unit_ideal(qsqrt_m5)) == 0

    def test_hilbert_class_field_of_sqrt_m23(self, qsqrt_m23, qsqrt_m23_hilbert):
        ext = qsqrt_m23_hilbert
        assert ext.degree == 3 and ext.is_unramified_everywhere
        P, Q = primes_above(qsqrt_m23, 2)
        assert ext.artin_symbol(P.ideal) != 0
        assert (ext.artin_symbol(P.ideal) + ext.artin_symbol(Q.ideal)) % 3 == 0
        assert ext.artin_symbol(P.ideal ** 3) == 0

    def test_explicit_extension_matches_kummer(self, qsqrt_m5, p2):
        # alpha = sqrt 5 + i
        ext = cyclic_extension(qsqrt_m5, [1, 0, -8, 0, 36])
        assert ext.degree == 2
        assert ext.is_unramified_everywhere
        assert ext.artin_symbol(p2.ideal) == 1

    def test_explicit_extension_rejects_bad_degree(self, qsqrt_m5):
        with pytest.raises(NotGaloisCyclic):
            cyclic_extension(qsqrt_m5, [1, 0, 0, -2])


class TestH1:
    def test_character(self, qsqrt_m5_i, p2):
        x = H1Class(qsqrt_m5_i, 2)
        assert x.chi(p2.ideal) == 1
        assert x.character_values() == (1,)
        y = H1Class(qsqrt_m5_i, 4)
        assert y.scale == 2 and y.chi(p2.ideal) == 2

    def test_degree_must_divide_n(self, qsqrt_m5_i):
        with pytest.raises(InvalidExtensionSpec):
            H1Class(qsqrt_m5_i, 3)

    def test_registry(self, qsqrt_m23, qsqrt_m23_hilbert):
        registry = H1Registry(qsqrt_m23, 3)
        x = H1Class(qsqrt_m23_hilbert, 3)
        key = registry.register(x)
        assert len(key) == 1 and key[0] != 0
        assert registry.add(x, registry.zero()) is x
        with pytest.raises(InvalidExtensionSpec):
            registry.add(x, x)
        assert registry.negate(registry.zero()).ext.is_trivial


class TestSpecs:
    @pytest.mark.parametrize("spec,expected", [
        ({"base_poly": "x^2+5", "n": 2, "v": "-1"}, (True, "kummer")),
        ({"base_poly": "x^2+5", "top_poly": "x^4-8x^2+36"}, (True, "explicit")),
        ({"base_poly": "x^2-x+6", "polynomial": "x^3-x-1"}, (True, "polynomial")),
        ({"n": 2, "v": "-1"}, (False, "Missing required field: base_poly")),
        ({"base_poly": "x^2+5", "n": 0, "v": "-1"}, (False, "n must be a positive integer")),
        ([], (False, "Extension spec must be a JSON object")),
    ])
    def test_validate(self, spec, expected):
        assert validate_ext_spec(spec) == expected

    def test_from_json(self):
        ext = extension_from_spec('{"base_poly": "x^2+5", "n": 2, "v": "-1"}')
        assert ext.degree == 2 and ext.is_unramified_everywhere

    def test_bad_json(self):
        with pytest.raises(InvalidExtensionSpec):
            extension_from_spec("{not json")
        with pytest.raises(InvalidExtensionSpec):
            extension_from_spec({"base_poly": "x^2+5"})
