"""
Fractional Ideals

Fractional ideals of O_K as full-rank lattices: a canonical (Hermite normal
form) basis over the integral basis divided by a positive denominator.
Products, inverses, sums, norms, prime factorization, valuations and
principal divisors are all exact.

Additive divisor notation maps onto this API as
    A + B  ->  A * B
    -A     ->  A.inverse()
    k A    ->  A ** k
"""

import random
import threading
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Dict, Iterator, List, Optional, Sequence, Tuple
import logging

from sympy import factorint
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.numberfields.primes import prime_decomp

from config import resolve_config
from errors import InvalidIdealSpec, NotAnNthPower, ZeroElement, ZeroIdeal
from lattice import ShortVectorEnumerator, T2Geometry, determinant, hnf_basis, smith_form
from nf_core import FieldElement, NumberField

logger = logging.getLogger(__name__)

_geometry_cache: Dict[Tuple[int, ...], T2Geometry] = {}
_geometry_lock = threading.Lock()
_prime_lock = threading.Lock()


def field_geometry(K: NumberField, config=None) -> T2Geometry:
    """Shared T2 geometry of K (numeric, search guidance only)."""
    with _geometry_lock:
        geo = _geometry_cache.get(K.coefficients)
        if geo is None:
            digits = int(resolve_config(config).get("numerics", "precision_digits"))
            geo = T2Geometry(K, digits)
            _geometry_cache[K.coefficients] = geo
        return geo


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class FractionalIdeal:
    """(1/den) * Z-span(basis) with basis in Hermite normal form over the integral basis of K."""

    def __init__(self, field: NumberField, vectors: Sequence[Sequence[int]], den: int = 1,
                 modulus: Optional[int] = None):
        if den <= 0:
            raise ValueError("ideal denominator must be positive")
        m = field.degree
        basis = hnf_basis(vectors, m, modulus)
        if len(basis) != m:
            raise ZeroIdeal("lattice is not of full rank")
        g = den
        for col in basis:
            for c in col:
                g = gcd(g, c)
        self.field = field
        self.basis: Tuple[Tuple[int, ...], ...] = tuple(tuple(c // g for c in col) for col in basis)
        self.den = den // g

    # --- identity -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (isinstance(other, FractionalIdeal) and self.field == other.field
                and self.basis == other.basis and self.den == other.den)

    def __hash__(self) -> int:
        return hash((self.field.coefficients, self.basis, self.den))

    def __repr__(self) -> str:
        return f"FractionalIdeal(norm={self.norm()}, hnf={[list(c) for c in self.basis]}, den={self.den})"

    # --- basic invariants ---------------------------------------------------

    @cached_property
    def numerator_index(self) -> int:
        """[O_K : den*I] for the integral numerator lattice."""
        return abs(determinant([list(col) for col in self.basis]))

    def norm(self) -> Fraction:
        return Fraction(self.numerator_index, self.den ** self.field.degree)

    def is_integral(self) -> bool:
        return self.den == 1

    def is_one(self) -> bool:
        return self.den == 1 and self.numerator_index == 1

    def basis_elements(self) -> List[FieldElement]:
        return [self.field.element(col, self.den) for col in self.basis]

    def is_module(self) -> bool:
        """Closure under multiplication by the integral basis."""
        return all(self.contains(b * w) for b in self.basis_elements() for w in self.field.basis_elements())

    def contains(self, x: FieldElement) -> bool:
        if x.is_zero():
            return True
        m = self.field.degree
        target = [c * self.den for c in x.coordinates]
        A = DomainMatrix([[QQ(self.basis[j][i]) for j in range(m)] for i in range(m)], (m, m), QQ)
        b = DomainMatrix([[QQ(t.numerator, t.denominator)] for t in target], (m, 1), QQ)
        y = A.lu_solve(b)
        return all(y[i, 0].element.denominator == 1 for i in range(m))

    # --- arithmetic -----------------------------------------------------------

    def __mul__(self, other) -> "FractionalIdeal":
        if isinstance(other, FieldElement):
            return self.scale(other)
        K = self.field
        left = [K.element(b) for b in self.basis]
        right = [K.element(c) for c in other.basis]
        vectors = [(x * y).coeffs for x in left for y in right]
        return FractionalIdeal(K, vectors, self.den * other.den,
                               modulus=self.numerator_index * other.numerator_index)

    def scale(self, x: FieldElement) -> "FractionalIdeal":
        """x * I."""
        if x.is_zero():
            raise ZeroElement("scaling an ideal by zero")
        K = self.field
        num = FieldElement(K, x.coeffs, 1)
        vectors = [(num * K.element(b)).coeffs for b in self.basis]
        modulus = abs(int(num.norm())) * self.numerator_index
        return FractionalIdeal(K, vectors, self.den * x.denom, modulus=modulus)

    def inverse(self) -> "FractionalIdeal":
        """
        I^-1 = {x : x I in O_K}.

        For the integral numerator J with N = [O_K : J], J^-1 = {y/N : M_b y = 0 mod N for b in J}.
        """
        K = self.field
        m = K.degree
        N = self.numerator_index
        rows: List[List[int]] = []
        for b in self.basis:
            rows.extend(K.element(b).multiplication_matrix())
        diag, _, V = smith_form(rows, m)
        vectors = []
        for k in range(m):
            factor = N // gcd(N, diag[k]) if k < len(diag) else 1
            vectors.append([V[i][k] * factor * self.den for i in range(m)])
        return FractionalIdeal(K, vectors, N, modulus=(N * self.den) ** m)

    def __truediv__(self, other) -> "FractionalIdeal":
        if isinstance(other, FieldElement):
            return self.scale(other.inverse())
        return self * other.inverse()

    def __pow__(self, k: int) -> "FractionalIdeal":
        if k < 0:
            return self.inverse() ** (-k)
        result = unit_ideal(self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # --- reductions -----------------------------------------------------------

    def minimum(self) -> int:
        """Smallest positive integer in the numerator lattice."""
        n = self.numerator_index
        one = self.field.one()
        for d in sorted(_divisors(n)):
            if self.contains(one * Fraction(d, self.den)):
                return d
        return n

    def two_element(self, seed: int = 0) -> Tuple[int, FieldElement]:
        """(a, alpha) with I = a O_K + alpha O_K for integral I."""
        if not self.is_integral():
            raise ValueError("two-element form requires an integral ideal")
        K = self.field
        a = self.minimum()
        if self.numerator_index == a ** K.degree:
            return a, K.zero()
        rng = random.Random(seed)
        basis = self.basis_elements()
        candidates = list(basis)
        for _ in range(200):
            candidates.append(sum((b * rng.randint(-2, 2) for b in basis), K.zero()))
        for alpha in candidates:
            if alpha.is_zero():
                continue
            if ideal_from_generators(K, [K.from_rational(a), alpha]) == self:
                return a, alpha
        raise ValueError("no two-element representation found")

    @cached_property
    def _reduced_lattice(self) -> Tuple[List[List[int]], ShortVectorEnumerator]:
        geo = field_geometry(self.field)
        basis = geo.reduced_basis([list(b) for b in self.basis])
        return basis, ShortVectorEnumerator(geo.gram(basis))

    def shortest_element(self) -> FieldElement:
        basis, _ = self._reduced_lattice
        geo = field_geometry(self.field)
        best = min(basis, key=geo.t2)
        return self.field.element(best, self.den)

    def reduced(self) -> Tuple["FractionalIdeal", FieldElement]:
        """
        A small integral ideal in the same class.

        Returns:
            (J, x) with J = x * I integral and x in I^-1
        """
        x = self.inverse().shortest_element()
        return self.scale(x), x

    # --- presentation -----------------------------------------------------------

    def to_json(self) -> Dict:
        return {"hnf": [[str(c) for c in col] for col in self.basis], "den": str(self.den)}

    def two_gens_json(self, seed: int = 0) -> Dict:
        """{"two_gens": [a, alpha], "den": den} with den * I = a O_K + alpha O_K."""
        numerator = self.scale(self.field.from_rational(self.den))
        a, alpha = numerator.two_element(seed)
        return {"two_gens": [str(a), alpha.to_json()], "den": str(self.den)}

    def factors_json(self) -> List[List]:
        out = []
        for P, k in factor_ideal(self):
            out.append([str(P.p), P.alpha.to_json(), str(k)])
        return out


def _divisors(n: int) -> List[int]:
    divs = [1]
    for p, k in factorint(n).items():
        divs = [d * p ** j for d in divs for j in range(k + 1)]
    return divs


def unit_ideal(K: NumberField) -> FractionalIdeal:
    m = K.degree
    return FractionalIdeal(K, [[1 if i == j else 0 for i in range(m)] for j in range(m)], 1)


def ideal_from_generators(K: NumberField, gens: Sequence[FieldElement]) -> FractionalIdeal:
    """The O_K-module generated by `gens`."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise ZeroIdeal("no nonzero generators")
    den = 1
    for g in gens:
        den = _lcm(den, g.denom)
    vectors = []
    modulus = None
    for g in gens:
        num = g * den
        M = num.multiplication_matrix()
        vectors.extend([[M[i][j] for i in range(K.degree)] for j in range(K.degree)])
        nrm = abs(int(num.norm()))
        modulus = nrm if modulus is None else min(modulus, nrm)
    return FractionalIdeal(K, vectors, den, modulus=modulus)


def principal_divisor(a: FieldElement) -> FractionalIdeal:
    """div(a) = a O_K."""
    if a.is_zero():
        raise ZeroElement("div(0) is undefined")
    return unit_ideal(a.field).scale(a)


def element_from_json(K: NumberField, data) -> FieldElement:
    """Integral-basis coordinates as a list of "p/q" strings, or a polynomial in x."""
    if isinstance(data, str):
        return K.parse_element(data)
    if not isinstance(data, list) or len(data) != K.degree:
        raise InvalidIdealSpec(f"element needs {K.degree} integral-basis coordinates")
    try:
        return K.element([Fraction(str(c)) for c in data])
    except (ValueError, ZeroDivisionError) as e:
        raise InvalidIdealSpec(f"bad coordinate in {data}: {e}")


def ideal_from_json(K: NumberField, data: Dict) -> FractionalIdeal:
    """
    Parse either JSON form of an ideal.

    {"hnf": [[int...]...], "den": int} is checked to be an O_K-module;
    {"two_gens": [a, alpha], "den": int} is (a O_K + alpha O_K) / den.

    Raises:
        InvalidIdealSpec: malformed input, zero generators, or a lattice that is not an ideal
    """
    if not isinstance(data, dict):
        raise InvalidIdealSpec("ideal must be a JSON object")
    try:
        den = int(data.get("den", 1))
    except (TypeError, ValueError):
        raise InvalidIdealSpec(f"bad denominator {data.get('den')!r}")
    if den <= 0:
        raise InvalidIdealSpec("ideal denominator must be positive")

    if "two_gens" in data:
        gens = data["two_gens"]
        if not isinstance(gens, list) or len(gens) != 2:
            raise InvalidIdealSpec('"two_gens" must be [a, alpha]')
        try:
            a = K.from_rational(Fraction(str(gens[0])))
        except (ValueError, ZeroDivisionError) as e:
            raise InvalidIdealSpec(f"bad generator {gens[0]!r}: {e}")
        alpha = element_from_json(K, gens[1])
        try:
            I = ideal_from_generators(K, [a, alpha])
        except ZeroIdeal:
            raise InvalidIdealSpec("both generators are zero")
        return I.scale(K.from_rational(Fraction(1, den)))

    if "hnf" in data:
        columns = data["hnf"]
        if not isinstance(columns, list) or len(columns) != K.degree \
                or any(not isinstance(col, list) or len(col) != K.degree for col in columns):
            raise InvalidIdealSpec(f'"hnf" must be {K.degree} columns of length {K.degree}')
        try:
            I = FractionalIdeal(K, [[int(c) for c in col] for col in columns], den)
        except (TypeError, ValueError) as e:
            raise InvalidIdealSpec(f"bad hnf entry: {e}")
        except ZeroIdeal:
            raise InvalidIdealSpec("hnf columns are not of full rank")
        if not I.is_module():
            raise InvalidIdealSpec("hnf columns do not span an O_K-module")
        return I

    raise InvalidIdealSpec('ideal needs "two_gens" or "hnf"')


def ideal_sum(I: FractionalIdeal, J: FractionalIdeal) -> FractionalIdeal:
    """I + J as modules (the gcd of I and J)."""
    den = _lcm(I.den, J.den)
    si, sj = den // I.den, den // J.den
    vectors = [[c * si for c in col] for col in I.basis] + [[c * sj for c in col] for col in J.basis]
    m = I.field.degree
    modulus = gcd(I.numerator_index * si ** m, J.numerator_index * sj ** m)
    return FractionalIdeal(I.field, vectors, den, modulus=modulus)


class PrimeIdeal:
    """Prime P = (p, alpha) of O_K with ramification index e and residue degree f."""

    def __init__(self, ideal: FractionalIdeal, p: int, alpha: FieldElement, e: int, f: int):
        self.ideal = ideal
        self.p = p
        self.alpha = alpha
        self.e = e
        self.f = f

    @property
    def field(self) -> NumberField:
        return self.ideal.field

    def norm(self) -> int:
        return self.p ** self.f

    @cached_property
    def gamma(self) -> FieldElement:
        """An element of P^-1 outside O_K; v_P(gamma) = -1 and gamma is integral elsewhere."""
        for x in self.ideal.inverse().basis_elements():
            if not x.is_integral():
                return x
        raise ValueError("prime ideal has trivial inverse")

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeIdeal) and self.ideal == other.ideal

    def __hash__(self) -> int:
        return hash(self.ideal)

    def __repr__(self) -> str:
        return f"PrimeIdeal(p={self.p}, alpha={self.alpha}, e={self.e}, f={self.f})"

    def sort_key(self) -> Tuple:
        return (self.p, self.f, self.ideal.basis)


def factor_rational_prime(K: NumberField, p: int) -> List[Tuple[PrimeIdeal, int]]:
    """
    pO_K = prod P^e.

    Kummer-Dedekind when p does not divide the index of Z[theta], lattice splitting otherwise
    (both via sympy's prime_decomp).
    """
    with _prime_lock:
        cached = K._factor_cache.get(p)
    if cached is not None:
        return cached

    if K.degree == 1:
        P = PrimeIdeal(principal_divisor(K.from_rational(p)), p, K.zero(), 1, 1)
        result = [(P, 1)]
    else:
        ZK, dK = K.sympy_order()
        result = []
        for sp in prime_decomp(p, K.polynomial, ZK=ZK, dK=dK):
            alpha_pb = sp.alpha.over_power_basis()
            denom = int(alpha_pb.denom)
            alpha = K.from_power_basis([Fraction(int(c), denom) for c in alpha_pb.coeffs])
            ideal = ideal_from_generators(K, [K.from_rational(p), alpha])
            result.append((PrimeIdeal(ideal, p, alpha, int(sp.e), int(sp.f)), int(sp.e)))
        result.sort(key=lambda item: item[0].sort_key())
        if sum(P.e * P.f for P, _ in result) != K.degree:
            raise ValueError(f"inconsistent decomposition of {p} in {K}")

    with _prime_lock:
        K._factor_cache.setdefault(p, result)
    logger.debug(f"{p} splits in {K} as {[(P.e, P.f) for P, _ in result]}")
    return result


def primes_above(K: NumberField, p: int) -> List[PrimeIdeal]:
    return [P for P, _ in factor_rational_prime(K, p)]


def _p_adic(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def element_valuation(x: FieldElement, P: PrimeIdeal) -> int:
    """v_P(x) for nonzero x."""
    if x.is_zero():
        raise ZeroElement("valuation of zero")
    num = FieldElement(x.field, x.coeffs, 1)
    bound = _p_adic(abs(int(num.norm())), P.p) // P.f
    k = 0
    current = num
    while k < bound:
        current = current * P.gamma
        if not current.is_integral():
            break
        k += 1
    return k - P.e * _p_adic(x.denom, P.p)


def valuation(I: FractionalIdeal, P: PrimeIdeal) -> int:
    """v_P(I) = min over a Z-basis of the numerator, minus the denominator's contribution."""
    v_den = P.e * _p_adic(I.den, P.p)
    if I.numerator_index % P.p != 0:
        return -v_den
    K = I.field
    v_num = min(element_valuation(K.element(b), P) for b in I.basis)
    return v_num - v_den


def factor_ideal(I: FractionalIdeal) -> List[Tuple[PrimeIdeal, int]]:
    """Sparse factorization of a nonzero fractional ideal, primes in a fixed order."""
    K = I.field
    rational_primes = set(factorint(I.numerator_index)) | set(factorint(I.den))
    out = []
    for p in sorted(rational_primes):
        for P in primes_above(K, p):
            v = valuation(I, P)
            if v:
                out.append((P, v))
    return out


def ideal_from_factors(K: NumberField, factors: Sequence[Tuple[PrimeIdeal, int]]) -> FractionalIdeal:
    result = unit_ideal(K)
    for P, k in factors:
        if k:
            result = result * P.ideal ** k
    return result


def nth_root_ideal(I: FractionalIdeal, n: int) -> FractionalIdeal:
    """The unique A with A^n = I."""
    if I.is_one():
        return I
    factors = factor_ideal(I)
    bad = [(P, k) for P, k in factors if k % n]
    if bad:
        raise NotAnNthPower(f"exponent {bad[0][1]} at {bad[0][0]} is not divisible by {n}")
    return ideal_from_factors(I.field, [(P, k // n) for P, k in factors])


def small_elements(I: FractionalIdeal, bound: float, limit: Optional[int] = None) -> Iterator[Tuple[FieldElement, float]]:
    """
    Nonzero x in I with T2(x) <= bound, one of each pair +-x.

    Args:
        I: ideal to search
        bound: T2 bound
        limit: maximum number of enumeration leaves

    Yields:
        (x, approximate T2(x))
    """
    basis, enumerator = I._reduced_lattice
    scale = I.den ** 2
    m = I.field.degree
    for vec, q in enumerator.vectors(bound * scale, limit):
        coords = [sum(vec[k] * basis[k][j] for k in range(m)) for j in range(m)]
        yield I.field.element(coords, I.den), q / scale
