"""
Relative Cyclic Extensions

L/K cyclic of degree d with a fixed generator sigma of Gal(L/K). L is kept
as an absolute field over Q together with the image of K's generator, so every
relative operation reduces to absolute arithmetic:

- Kummer extensions K(v^(1/n)) and explicit cyclic extensions
- embedding, restriction, relative norms of elements and ideals
- sigma on elements and ideals
- unramifiedness and Artin symbols via Frobenius at each prime
"""

import json
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple
import logging

from sympy import Poly, Symbol, factorint, resultant
from sympy.polys.domains import QQ

from config import SolverConfig
from errors import (
    DescentFailure, InvalidExtensionSpec, NotGaloisCyclic, RamifiedExtension, RootOfUnityMissing,
)
from ideal_arith import (
    FractionalIdeal, PrimeIdeal, factor_ideal, ideal_from_generators, primes_above, unit_ideal, valuation,
)
from nf_core import (
    FieldElement, NumberField, solve_rational, field_from_text, make_field, parse_polynomial, roots_of_unity,
)

logger = logging.getLogger(__name__)

INFINITE_PLACE_UNSUPPORTED = "InfinitePlaceUnsupported"

_x, _z = Symbol('x'), Symbol('z')


def _evaluate(pb: Sequence[Fraction], t: FieldElement) -> FieldElement:
    """sum pb[i] t^i (Horner)."""
    result = t.field.zero()
    for c in reversed(list(pb)):
        result = result * t + c
    return result


def _horner(coefficients: Sequence, t: FieldElement) -> FieldElement:
    """Polynomial with coefficients highest first, evaluated at t."""
    result = t.field.zero()
    for c in coefficients:
        result = result * t + c
    return result


@dataclass(frozen=True)
class KummerData:
    """L = K(beta) with beta^n = v and sigma(beta) = zeta^(n/d) beta."""
    n: int
    v: FieldElement
    beta: FieldElement
    zeta: FieldElement


class CyclicExtension:
    """
    L/K cyclic of degree d with generator sigma.

    Args:
        base: K
        top: absolute model of L (K itself when d = 1)
        degree: d
        theta_image: image of K's generator in L
        sigma_image: sigma(alpha) for L's generator alpha
        kummer: Kummer data when built from (n, v)
    """

    def __init__(self, base: NumberField, top: NumberField, degree: int, theta_image: FieldElement,
                 sigma_image: FieldElement, kummer: Optional[KummerData] = None):
        self.base = base
        self.top = top
        self.degree = degree
        self.theta_image = theta_image
        self.sigma_image = sigma_image
        self.kummer = kummer
        self._lock = threading.Lock()
        self._below: Dict[PrimeIdeal, Tuple[PrimeIdeal, int]] = {}
        self._frobenius: Dict[PrimeIdeal, int] = {}

        m = top.degree
        alpha_images = [top.one()]
        for _ in range(m - 1):
            alpha_images.append(alpha_images[-1] * sigma_image)
        self._sigma_matrix = self._images_matrix(alpha_images)
        self._embed_columns = [
            _evaluate(w.power_basis(), theta_image) if base.degree > 1 else top.from_rational(w.rational_value())
            for w in base.basis_elements()
        ]
        self._check_automorphism()

    def _images_matrix(self, alpha_powers: List[FieldElement]) -> List[List[int]]:
        """Integer matrix of sigma on L's integral basis; column j = sigma(w_j)."""
        L = self.top
        m = L.degree
        M = [[0] * m for _ in range(m)]
        for j, w in enumerate(L.basis_elements()):
            pb = w.power_basis()
            image = L.zero()
            for c, a in zip(pb, alpha_powers):
                if c:
                    image = image + a * c
            if not image.is_integral():
                raise NotGaloisCyclic("sigma does not preserve the maximal order")
            for i, c in enumerate(image.coeffs):
                M[i][j] = c
        return M

    def _check_automorphism(self):
        L = self.top
        alpha = L.generator()
        if self.sigma(self.theta_image) != self.theta_image:
            raise NotGaloisCyclic("sigma does not fix the embedded base field")
        x = alpha
        for k in range(1, self.degree + 1):
            x = self.sigma(x)
            if (x == alpha) != (k == self.degree):
                raise NotGaloisCyclic(f"sigma does not have order {self.degree}")

    # --- properties ------------------------------------------------------------

    @property
    def is_trivial(self) -> bool:
        return self.degree == 1

    def __repr__(self) -> str:
        return f"CyclicExtension({self.top} / {self.base}, d={self.degree})"

    # --- elements -----------------------------------------------------------------

    def embed(self, e: FieldElement) -> FieldElement:
        """K -> L."""
        if self.is_trivial:
            return e
        out = self.top.zero()
        for c, img in zip(e.coordinates, self._embed_columns):
            if c:
                out = out + img * c
        return out

    def restrict(self, e: FieldElement) -> FieldElement:
        """L -> K on elements fixed by sigma; DescentFailure otherwise."""
        if self.is_trivial:
            return e
        mK = self.base.degree
        cols = [img.coordinates for img in self._embed_columns]
        target = e.coordinates
        # normal equations A^T A y = A^T b; A has full column rank
        gram = [[sum(a * b for a, b in zip(cols[i], cols[j])) for j in range(mK)] for i in range(mK)]
        rhs = [sum(a * b for a, b in zip(cols[i], target)) for i in range(mK)]
        candidate = self.base.element(solve_rational(gram, rhs))
        if self.embed(candidate) != e:
            raise DescentFailure("element does not lie in the base field")
        return candidate

    def sigma(self, e: FieldElement, k: int = 1) -> FieldElement:
        k %= self.degree
        if k == 0:
            return e
        M = self._sigma_matrix
        coeffs = list(e.coeffs)
        for _ in range(k):
            coeffs = [sum(M[i][j] * coeffs[j] for j in range(len(coeffs))) for i in range(len(coeffs))]
        return FieldElement(self.top, coeffs, e.denom)

    def norm(self, e: FieldElement) -> FieldElement:
        """N_{L|K}(e) = prod sigma^i(e), restricted to K."""
        result = e
        for i in range(1, self.degree):
            result = result * self.sigma(e, i)
        return self.restrict(result)

    # --- ideals -----------------------------------------------------------------------

    def extend_ideal(self, a: FractionalIdeal) -> FractionalIdeal:
        if self.is_trivial:
            return a
        return ideal_from_generators(self.top, [self.embed(b) for b in a.basis_elements()])

    def sigma_ideal(self, I: FractionalIdeal, k: int = 1) -> FractionalIdeal:
        k %= self.degree
        if k == 0:
            return I
        images = [self.sigma(FieldElement(self.top, col, 1), k).coeffs for col in I.basis]
        return FractionalIdeal(self.top, images, I.den, modulus=I.numerator_index)

    def prime_below(self, P: PrimeIdeal) -> Tuple[PrimeIdeal, int]:
        """(p, f(P|p)) for a prime P of L."""
        with self._lock:
            cached = self._below.get(P)
        if cached is not None:
            return cached
        for p in primes_above(self.base, P.p):
            if valuation(self.extend_ideal(p.ideal), P) > 0:
                result = (p, P.f // p.f)
                with self._lock:
                    self._below[P] = result
                return result
        raise ValueError(f"no prime of the base below {P}")

    def primes_over(self, p: PrimeIdeal) -> List[Tuple[PrimeIdeal, int]]:
        """Primes of L above p with relative ramification indices."""
        return factor_ideal(self.extend_ideal(p.ideal))

    def norm_ideal(self, I: FractionalIdeal) -> FractionalIdeal:
        """N_{L|K}(I), prime by prime."""
        if self.is_trivial:
            return I
        result = unit_ideal(self.base)
        for P, k in factor_ideal(I):
            p, f = self.prime_below(P)
            result = result * p.ideal ** (f * k)
        return result

    # --- ramification and Artin symbols --------------------------------------------------

    @cached_property
    def discriminant_ratio(self) -> Fraction:
        return Fraction(abs(self.top.discriminant), abs(self.base.discriminant) ** self.degree)

    def ramified_primes(self) -> List[PrimeIdeal]:
        if self.is_trivial or self.discriminant_ratio == 1:
            return []
        out = []
        for p in sorted(factorint(self.discriminant_ratio.numerator)):
            for q in primes_above(self.base, p):
                if any(e > 1 for _, e in self.primes_over(q)):
                    out.append(q)
        return out

    def unramified_report(self, n: Optional[int] = None) -> "UnramifiedReport":
        """
        Unramified at every finite place, with real places of K admitted only for odd n.

        Args:
            n: coefficient modulus the extension is used with; defaults to the degree
        """
        n = self.degree if n is None else n
        if self.is_trivial:
            return UnramifiedReport(True, "trivial extension")
        if not self.base.is_totally_imaginary and n % 2 == 0:
            return UnramifiedReport(False, INFINITE_PLACE_UNSUPPORTED)
        if self.discriminant_ratio != 1:
            return UnramifiedReport(False, f"relative discriminant has norm {self.discriminant_ratio}")
        return UnramifiedReport(True, "relative discriminant is (1)")

    @cached_property
    def report(self) -> "UnramifiedReport":
        return self.unramified_report()

    @property
    def is_unramified_everywhere(self) -> bool:
        return self.report.unramified

    def frobenius(self, p: PrimeIdeal) -> int:
        """k with sigma^k(w) = w^N(p) mod P for every w in O_L, P any prime above p."""
        with self._lock:
            cached = self._frobenius.get(p)
        if cached is not None:
            return cached
        L = self.top
        P, e = self.primes_over(p)[0]
        if e > 1:
            raise RamifiedExtension(f"{p} ramifies in {self}")
        q = p.norm()
        basis = L.basis_elements()
        powers = [w.pow_mod(q, p.p) for w in basis]
        result = None
        for k in range(self.degree):
            if all(P.ideal.contains(self.sigma(w, k) - wq) for w, wq in zip(basis, powers)):
                result = k
                break
        if result is None:
            raise RamifiedExtension(f"no Frobenius found at {p}")
        with self._lock:
            self._frobenius[p] = result
        return result

    def artin_symbol(self, a: FractionalIdeal) -> int:
        """Art_{L|K}(a) in Z/d, additive over the factorization of a."""
        if self.is_trivial or a.is_one():
            return 0
        if not self.is_unramified_everywhere:
            raise RamifiedExtension(f"{self} is not unramified everywhere: {self.report.reason}")
        total = 0
        for p, k in factor_ideal(a):
            total += k * self.frobenius(p)
        return total % self.degree

    def to_json(self) -> Dict:
        out = {
            "base_poly": self.base.poly_text,
            "top_poly": self.top.poly_text,
            "degree": str(self.degree),
            "theta_image": self.theta_image.to_json(),
            "sigma_image": self.sigma_image.to_json(),
            "unramified": self.is_unramified_everywhere,
        }
        if self.kummer is not None:
            out["n"] = str(self.kummer.n)
            out["v"] = self.kummer.v.to_json()
        return out


@dataclass(frozen=True)
class UnramifiedReport:
    unramified: bool
    reason: str


# --- construction -------------------------------------------------------------------

def _absolute_polynomial(K: NumberField, g: Sequence[FieldElement], shift: int) -> List[int]:
    """F(z) = Res_x(f(x), g_x(z - shift*x)) for g with coefficients in K (highest first)."""
    f_expr = sum(c * _x ** k for k, c in enumerate(reversed(K.coefficients)))
    d = len(g) - 1
    G = 0
    for k, coeff in enumerate(g):
        pb = coeff.power_basis()
        c_expr = sum(QQ.to_sympy(QQ(c.numerator, c.denominator)) * _x ** i for i, c in enumerate(pb))
        G += c_expr * (_z - shift * _x) ** (d - k)
    F = Poly(resultant(f_expr, G, _x), _z, domain=QQ)
    coeffs = [Fraction(int(c.numerator), int(c.denominator)) for c in F.rep.to_list()]
    coeffs = [c / coeffs[0] for c in coeffs]
    if any(c.denominator != 1 for c in coeffs):
        raise ValueError("relative polynomial must have integral coefficients")
    return [int(c) for c in coeffs]


def _is_squarefree(coefficients: Sequence[int]) -> bool:
    return Poly(list(coefficients), _z, domain=QQ).is_sqf


def absolute_model(K: NumberField, g: Sequence[FieldElement]) -> Tuple[NumberField, FieldElement, FieldElement, int]:
    """
    L = K[y]/(g) as an absolute field.

    Returns:
        (L, image of theta_K, image of y, shift) with L's generator alpha = y + shift*theta_K
    """
    for shift in (0, 1, -1, 2, -2, 3, -3, 4, -4, 5, -5):
        F = _absolute_polynomial(K, g, shift)
        if _is_squarefree(F):
            break
    else:
        raise ValueError("no primitive element found for the relative polynomial")
    L = make_field(F)
    alpha = L.generator()
    for t in sorted(L.roots_of_integer_poly(list(K.coefficients)), key=lambda e: (e.coeffs, e.denom)):
        y = alpha - t * shift
        value = _horner([_evaluate(c.power_basis(), t) for c in g], y)
        if value.is_zero():
            return L, t, y, shift
    raise ValueError("base field does not embed compatibly")


def trivial_extension(K: NumberField, kummer: Optional[KummerData] = None) -> CyclicExtension:
    return CyclicExtension(K, K, 1, K.generator(), K.generator(), kummer)


def _reduce_kummer_radicand(K: NumberField, v: FieldElement, n: int) -> Tuple[FieldElement, int]:
    """(c, d) with K(v^(1/n)) = K(c^(1/d)), c^(n/d) = v and x^d - c irreducible."""
    c, d = v, n
    changed = True
    while changed and d > 1:
        changed = False
        for l in sorted(factorint(d)):
            if K.is_nth_power(c, l):
                c, d = K.nth_root(c, l), d // l
                changed = True
                break
    return c, d


def build_kummer(K: NumberField, n: int, v: FieldElement) -> CyclicExtension:
    """
    L = K(v^(1/n)) with sigma(v^(1/d)) = zeta^(n/d) v^(1/d).

    Raises:
        RootOfUnityMissing: mu_n(K) has order below n
    """
    if v.is_zero():
        raise ValueError("Kummer radicand must be nonzero")
    mu = roots_of_unity(K, n)
    if mu.order != n:
        raise RootOfUnityMissing(f"{K} contains only {mu.order} of the {n}-th roots of unity")
    zeta = mu.generator
    c, d = _reduce_kummer_radicand(K, v, n)
    if d == 1:
        logger.info(f"Kummer extension of {K} by {v} is trivial")
        return trivial_extension(K, KummerData(n, v, c, zeta))

    s = c.denom
    radicand = c * s ** d
    g = [K.one()] + [K.zero()] * (d - 1) + [-radicand]
    L, theta_L, y, shift = absolute_model(K, g)
    zeta_d = zeta ** (n // d)
    ext_zeta = _evaluate(zeta_d.power_basis(), theta_L)
    sigma_image = ext_zeta * y + theta_L * shift
    beta = y / s
    ext = CyclicExtension(K, L, d, theta_L, sigma_image, KummerData(n, v, beta, zeta))
    logger.info(f"Built Kummer extension {ext} for v = {v}")
    return ext


def _automorphism_candidates(K: NumberField, L: NumberField, theta_L: FieldElement) -> List[FieldElement]:
    """Roots of L's polynomial in L whose substitution fixes theta_L."""
    out = []
    for r in L.roots_of_integer_poly(list(L.coefficients)):
        if _evaluate(theta_L.power_basis(), r) == theta_L:
            out.append(r)
    return sorted(out, key=lambda e: (e.coeffs, e.denom))


def _choose_sigma(K: NumberField, L: NumberField, theta_L: FieldElement, d: int) -> FieldElement:
    candidates = _automorphism_candidates(K, L, theta_L)
    if len(candidates) != d:
        raise NotGaloisCyclic(f"{L} has {len(candidates)} automorphisms over the base, expected {d}")
    alpha = L.generator()
    for r in candidates:
        x, order = alpha, 0
        while True:
            x = _evaluate(x.power_basis(), r)
            order += 1
            if x == alpha or order > d:
                break
        if order == d:
            return r
    raise NotGaloisCyclic(f"Gal({L}/{K}) is not cyclic")


def cyclic_extension(K: NumberField, top_poly: Sequence[int], sigma_image: Optional[FieldElement] = None) -> CyclicExtension:
    """
    Explicit cyclic extension from an absolute polynomial of L.

    K embeds through the first root of K's polynomial in L (deterministic order). Without a
    sigma image, the generator of Gal(L/K) is chosen among the roots of L's polynomial.
    """
    L = make_field(top_poly)
    if L.degree % K.degree:
        raise NotGaloisCyclic(f"degree {L.degree} is not a multiple of {K.degree}")
    d = L.degree // K.degree
    roots = sorted(L.roots_of_integer_poly(list(K.coefficients)), key=lambda e: (e.coeffs, e.denom))
    if not roots:
        raise NotGaloisCyclic(f"{K} does not embed in {L}")
    theta_L = roots[0]
    if d == 1:
        return trivial_extension(K)
    if sigma_image is None:
        sigma_image = _choose_sigma(K, L, theta_L, d)
    elif not _horner([L.from_rational(c) for c in L.coefficients], sigma_image).is_zero():
        raise NotGaloisCyclic("sigma image is not a root of the defining polynomial")
    return CyclicExtension(K, L, d, theta_L, sigma_image)


def extension_by_polynomial(K: NumberField, coefficients: Sequence[int]) -> CyclicExtension:
    """K(beta) for a root beta of an integer polynomial irreducible over K."""
    g = [K.from_rational(c) for c in coefficients]
    L, theta_L, _, _ = absolute_model(K, g)
    d = len(coefficients) - 1
    return CyclicExtension(K, L, d, theta_L, _choose_sigma(K, L, theta_L, d))


# --- functional surface -------------------------------------------------------------

def relative_norm(ext: CyclicExtension, e: FieldElement) -> FieldElement:
    return ext.norm(e)


def relative_norm_ideal(ext: CyclicExtension, I: FractionalIdeal) -> FractionalIdeal:
    return ext.norm_ideal(I)


def sigma_on_ideal(ext: CyclicExtension, I: FractionalIdeal) -> FractionalIdeal:
    return ext.sigma_ideal(I)


def extend_ideal(ext: CyclicExtension, a: FractionalIdeal) -> FractionalIdeal:
    return ext.extend_ideal(a)


def embed(ext: CyclicExtension, e: FieldElement) -> FieldElement:
    return ext.embed(e)


def restrict(ext: CyclicExtension, e: FieldElement) -> FieldElement:
    return ext.restrict(e)


def ramified_primes(ext: CyclicExtension) -> List[PrimeIdeal]:
    return ext.ramified_primes()


def unramified_report(ext: CyclicExtension, n: Optional[int] = None) -> UnramifiedReport:
    return ext.report if n is None else ext.unramified_report(n)


def is_unramified_everywhere(ext: CyclicExtension) -> bool:
    return ext.is_unramified_everywhere


def artin_symbol(ext: CyclicExtension, a: FractionalIdeal) -> int:
    return ext.artin_symbol(a)


# --- H^1 classes -------------------------------------------------------------------------

class H1Class:
    """The class of an unramified cyclic L/K with d | n; chi = (n/d) Art_{L|K} into Z/n."""

    def __init__(self, ext: CyclicExtension, n: int):
        if n % ext.degree:
            raise InvalidExtensionSpec(f"extension degree {ext.degree} does not divide {n}")
        report = unramified_report(ext, n)
        if not report.unramified:
            raise RamifiedExtension(f"{ext} is ramified: {report.reason}")
        self.ext = ext
        self.n = n

    @property
    def base(self) -> NumberField:
        return self.ext.base

    @property
    def scale(self) -> int:
        return self.n // self.ext.degree

    def chi(self, a: FractionalIdeal) -> int:
        return self.scale * self.ext.artin_symbol(a) % self.n

    def character_values(self, config: Optional[SolverConfig] = None) -> Tuple[int, ...]:
        """chi on the SNF generators of Cl K."""
        from class_unit import class_group
        group = class_group(self.base, config)
        return tuple(self.chi(G) for G in group.generators)

    def __repr__(self) -> str:
        return f"H1Class({self.ext}, n={self.n})"


class H1Registry:
    """Extensions realizing characters, so that H1Class sums can be formed."""

    def __init__(self, K: NumberField, n: int, config: Optional[SolverConfig] = None):
        self.base = K
        self.n = n
        self.config = config
        self._classes: Dict[Tuple[int, ...], H1Class] = {}

    def register(self, x: H1Class) -> Tuple[int, ...]:
        key = x.character_values(self.config)
        self._classes.setdefault(key, x)
        return key

    def zero(self) -> H1Class:
        return H1Class(trivial_extension(self.base), self.n)

    def add(self, x: H1Class, y: H1Class) -> H1Class:
        key = tuple((a + b) % self.n for a, b in zip(x.character_values(self.config), y.character_values(self.config)))
        if not any(key):
            return self.zero()
        if key not in self._classes:
            raise InvalidExtensionSpec(f"no registered extension realizes the character {key}")
        return self._classes[key]

    def negate(self, x: H1Class) -> H1Class:
        key = tuple((-a) % self.n for a in x.character_values(self.config))
        if not any(key):
            return self.zero()
        if key not in self._classes:
            raise InvalidExtensionSpec(f"no registered extension realizes the character {key}")
        return self._classes[key]


# --- extension specs ----------------------------------------------------------------------

def validate_ext_spec(spec: Dict) -> Tuple[bool, str]:
    """Validate a Kummer or explicit extension spec"""
    if not isinstance(spec, dict):
        return False, "Extension spec must be a JSON object"
    if "base_poly" not in spec:
        return False, "Missing required field: base_poly"
    if "top_poly" in spec:
        return True, "explicit"
    if "v" in spec and "n" in spec:
        try:
            if int(spec["n"]) < 1:
                return False, "n must be a positive integer"
        except (TypeError, ValueError):
            return False, "n must be a positive integer"
        return True, "kummer"
    if "polynomial" in spec:
        return True, "polynomial"
    return False, "Spec needs either top_poly, (n, v) or polynomial"


def extension_from_spec(spec, K: Optional[NumberField] = None) -> CyclicExtension:
    """Build an extension from a spec dict or JSON string."""
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as e:
            raise InvalidExtensionSpec(f"extension spec is not valid JSON: {e}")
    ok, kind = validate_ext_spec(spec)
    if not ok:
        raise InvalidExtensionSpec(kind)
    K = K or field_from_text(spec["base_poly"])
    if kind == "kummer":
        return build_kummer(K, int(spec["n"]), K.parse_element(str(spec["v"])))
    if kind == "polynomial":
        return extension_by_polynomial(K, parse_polynomial(spec["polynomial"]))
    top = parse_polynomial(spec["top_poly"])
    sigma = None
    if spec.get("sigma_image"):
        L = make_field(top)
        sigma = L.parse_element(str(spec["sigma_image"]))
    return cyclic_extension(K, top, sigma)
