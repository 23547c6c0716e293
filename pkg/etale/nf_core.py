"""
Number Field Core

Exact arithmetic in a fixed number field K = Q[x]/(f):
- maximal order and integral basis (sympy Round Two)
- elements stored as integer coordinates over the integral basis with a common denominator
- signature via Sturm real-root counting
- roots of unity and exact root finding by factoring over K

No floating point appears in this module.
"""

import re
import threading
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple
import logging

from sympy import Poly, Symbol, cyclotomic_poly, integer_nthroot, totient
from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.numberfields.basis import round_two
from sympy.polys.polytools import resultant

from errors import (
    DivisionByZero, NonMonic, NotAnNthPower, PolynomialSyntaxError, ReduciblePolynomial,
)

logger = logging.getLogger(__name__)

X = Symbol('x')

_TERM = re.compile(r'([+-])?(\d+(?:/\d+)?)?(\*)?(x)?(?:\^(\d+))?')


def parse_polynomial(text: str, allow_rational: bool = False) -> List[Fraction]:
    """
    Parse `x^2+5`-style text into coefficients, highest degree first.

    Args:
        text: polynomial in `x` with `^` powers and `+`/`-` terms
        allow_rational: accept `p/q` coefficients (element input)

    Returns:
        Coefficient list (ints unless allow_rational)
    """
    s = text.replace(' ', '')
    if not s:
        raise PolynomialSyntaxError("empty polynomial")

    terms: Dict[int, Fraction] = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise PolynomialSyntaxError(f"cannot parse '{text}' at position {pos}")
        sign, digits, star, var, exp = m.groups()
        if pos > 0 and sign is None:
            raise PolynomialSyntaxError(f"missing operator in '{text}' at position {pos}")
        if digits is None and var is None:
            raise PolynomialSyntaxError(f"dangling sign in '{text}'")
        if star and (digits is None or var is None):
            raise PolynomialSyntaxError(f"misplaced '*' in '{text}'")
        if exp is not None and var is None:
            raise PolynomialSyntaxError(f"exponent without variable in '{text}'")
        if digits is not None and '/' in digits and not allow_rational:
            raise PolynomialSyntaxError(f"rational coefficient in '{text}'")

        coefficient = Fraction(digits) if digits else Fraction(1)
        if sign == '-':
            coefficient = -coefficient
        power = (int(exp) if exp is not None else 1) if var else 0
        terms[power] = terms.get(power, Fraction(0)) + coefficient
        pos = m.end()

    nonzero = [k for k, c in terms.items() if c != 0]
    if not nonzero:
        return [Fraction(0)] if allow_rational else [0]
    degree = max(nonzero)
    coefficients = [terms.get(k, Fraction(0)) for k in range(degree, -1, -1)]
    if allow_rational:
        return coefficients
    return [int(c) for c in coefficients]


def format_polynomial(coefficients: Sequence[int]) -> str:
    degree = len(coefficients) - 1
    parts = []
    for i, c in enumerate(coefficients):
        k = degree - i
        if c == 0:
            continue
        sign = '-' if c < 0 else '+'
        a = abs(c)
        if k == 0:
            body = f"{a}"
        else:
            mono = 'x' if k == 1 else f"x^{k}"
            body = mono if a == 1 else f"{a}{mono}"
        parts.append((sign, body))
    if not parts:
        return "0"
    text = ''.join(f"{s}{b}" for s, b in parts)
    return text[1:] if text.startswith('+') else text


def _to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _poly_mul_mod(a: Sequence, b: Sequence, f_low: Sequence[int]) -> List:
    """Product of two low-first coefficient lists modulo monic f (low-first)."""
    m = len(f_low) - 1
    prod = [0] * (len(a) + len(b) - 1 if a and b else 0)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            prod[i + j] += ai * bj
    for k in range(len(prod) - 1, m - 1, -1):
        c = prod[k]
        if c == 0:
            continue
        prod[k] = 0
        for t in range(m):
            prod[k - m + t] -= c * f_low[t]
    return (prod + [0] * m)[:m]


def solve_rational(rows: List[List[Fraction]], rhs: List[Fraction]) -> List[Fraction]:
    """Solve a square nonsingular rational system with sympy's DomainMatrix."""
    n = len(rows)
    A = DomainMatrix([[QQ(r.numerator, r.denominator) for r in row] for row in rows], (n, n), QQ)
    b = DomainMatrix([[QQ(v.numerator, v.denominator)] for v in rhs], (n, 1), QQ)
    x = A.lu_solve(b)
    return [_to_fraction(x[i, 0].element) for i in range(n)]


class NumberField:
    """
    K = Q[x]/(f) with its maximal order.

    Integral basis vectors are stored in power-basis coordinates as integer
    columns over a common denominator (the shape sympy's Round Two returns).
    """

    def __init__(self, coefficients: Sequence[int], basis_columns: List[List[int]], basis_denom: int,
                 discriminant: int):
        self.coefficients: Tuple[int, ...] = tuple(int(c) for c in coefficients)
        self.degree = len(self.coefficients) - 1
        self._f_low: List[int] = list(reversed(self.coefficients))
        self.basis_columns = [list(col) for col in basis_columns]
        self.basis_denom = int(basis_denom)
        self.discriminant = int(discriminant)
        self.polynomial = Poly(list(self.coefficients), X, domain=ZZ)

        m = self.degree
        basis_rows = [[Fraction(self.basis_columns[j][i]) for j in range(m)] for i in range(m)]
        # ib = denom * B^{-1} pb
        inverse_columns = [
            solve_rational(basis_rows, [Fraction(1 if i == k else 0) for i in range(m)])
            for k in range(m)
        ]
        self._pb_to_ib = [[inverse_columns[k][i] * self.basis_denom for k in range(m)] for i in range(m)]
        self._mult_table = self._build_mult_table()
        self._one = self._power_to_integral([Fraction(1)] + [Fraction(0)] * (m - 1))
        self._lock = threading.Lock()
        self._factor_cache: Dict[int, list] = {}
        self._sympy_order = None

    # --- identity ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, NumberField) and self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash(("NumberField", self.coefficients))

    def __repr__(self) -> str:
        return f"NumberField({format_polynomial(self.coefficients)})"

    @property
    def poly_text(self) -> str:
        return format_polynomial(self.coefficients)

    # --- basis conversions ------------------------------------------------

    def _power_to_integral(self, pb: Sequence[Fraction]) -> List[Fraction]:
        m = self.degree
        return [sum((self._pb_to_ib[i][k] * pb[k] for k in range(m) if pb[k]), Fraction(0)) for i in range(m)]

    def _integral_to_power(self, ib: Sequence[Fraction]) -> List[Fraction]:
        m = self.degree
        return [
            sum((Fraction(self.basis_columns[j][i]) * ib[j] for j in range(m) if ib[j]), Fraction(0))
            / self.basis_denom
            for i in range(m)
        ]

    def _build_mult_table(self) -> List[List[List[Tuple[int, int]]]]:
        m = self.degree
        columns = [[Fraction(c, self.basis_denom) for c in col] for col in self.basis_columns]
        table = []
        for i in range(m):
            row = []
            for j in range(m):
                pb = _poly_mul_mod(columns[i], columns[j], self._f_low)
                ib = self._power_to_integral(pb)
                if any(c.denominator != 1 for c in ib):
                    raise ValueError("integral basis is not closed under multiplication")
                row.append([(k, int(c)) for k, c in enumerate(ib) if c != 0])
            table.append(row)
        return table

    # --- element construction ---------------------------------------------

    def element(self, coords: Sequence, denom: int = 1) -> "FieldElement":
        """Element from integral-basis coordinates (ints or Fractions)."""
        fracs = [Fraction(c) / denom for c in coords]
        return FieldElement.from_fractions(self, fracs)

    def from_power_basis(self, pb: Sequence) -> "FieldElement":
        pb = [Fraction(c) for c in pb] + [Fraction(0)] * (self.degree - len(pb))
        return FieldElement.from_fractions(self, self._power_to_integral(pb[:self.degree]))

    def from_rational(self, q) -> "FieldElement":
        q = Fraction(q)
        return FieldElement.from_fractions(self, [c * q for c in self._one])

    def parse_element(self, text: str) -> "FieldElement":
        """Element written as a polynomial in x (power basis), rational coefficients allowed."""
        theta = self.generator()
        result = self.zero()
        for c in parse_polynomial(text, allow_rational=True):
            result = result * theta + c
        return result

    def zero(self) -> "FieldElement":
        return FieldElement(self, (0,) * self.degree, 1)

    def one(self) -> "FieldElement":
        return self.from_rational(1)

    def generator(self) -> "FieldElement":
        """The class of x (the primitive element theta)."""
        if self.degree == 1:
            return self.from_rational(-self._f_low[0])
        return self.from_power_basis([0, 1])

    def basis_elements(self) -> List["FieldElement"]:
        m = self.degree
        return [self.element([1 if i == j else 0 for i in range(m)]) for j in range(m)]

    def random_element(self, rng, bound: int = 3, integral: bool = True) -> "FieldElement":
        coords = [rng.randint(-bound, bound) for _ in range(self.degree)]
        denom = 1 if integral else rng.randint(1, bound)
        return self.element(coords, denom)

    # --- invariants -------------------------------------------------------

    @cached_property
    def signature(self) -> Tuple[int, int]:
        return signature(self)

    @property
    def is_totally_imaginary(self) -> bool:
        return self.signature[0] == 0

    @property
    def unit_rank(self) -> int:
        r1, r2 = self.signature
        return r1 + r2 - 1

    def trace_form_determinant(self) -> int:
        """det(Tr(w_i w_j)) over the integral basis; equals the discriminant."""
        basis = self.basis_elements()
        m = self.degree
        rows = [[ZZ(int((basis[i] * basis[j]).trace())) for j in range(m)] for i in range(m)]
        return int(DomainMatrix(rows, (m, m), ZZ).det())

    # --- sympy algebraic field bridge ----------------------------------------

    @cached_property
    def algebraic_domain(self):
        return QQ.alg_field_from_poly(self.polynomial)

    def to_anp(self, e: "FieldElement"):
        pb = e.power_basis()
        return self.algebraic_domain([QQ(c.numerator, c.denominator) for c in reversed(pb)])

    def from_anp(self, a) -> "FieldElement":
        rep = a.to_list() if hasattr(a, 'to_list') else list(a.rep)
        pb = [_to_fraction(c) for c in reversed(rep)]
        return self.from_power_basis(pb)

    def factor_over(self, coefficients: Sequence["FieldElement"]) -> List[Tuple[List["FieldElement"], int]]:
        """
        Factor a polynomial with coefficients in K (highest degree first).

        Returns:
            List of (factor coefficients, multiplicity)
        """
        if self.degree == 1:
            rationals = [c.rational_value() for c in coefficients]
            poly = Poly([QQ(c.numerator, c.denominator) for c in rationals], X, domain=QQ)
            _, factors = poly.factor_list()
            return [([self.from_rational(_to_fraction(c)) for c in fac.rep.to_list()], k)
                    for fac, k in factors]
        dom = self.algebraic_domain
        poly = Poly.from_list([self.to_anp(c) for c in coefficients], X, domain=dom)
        _, factors = poly.factor_list()
        return [([self.from_anp(c) for c in fac.rep.to_list()], k) for fac, k in factors]

    def roots_of(self, coefficients: Sequence["FieldElement"]) -> List["FieldElement"]:
        """All roots in K of a polynomial over K, each listed once."""
        roots = []
        for factor, _ in self.factor_over(coefficients):
            if len(factor) == 2:
                roots.append(-(factor[1] / factor[0]))
        return roots

    def roots_of_integer_poly(self, coefficients: Sequence[int]) -> List["FieldElement"]:
        return self.roots_of([self.from_rational(c) for c in coefficients])

    def nth_root(self, e: "FieldElement", k: int) -> "FieldElement":
        """Some k-th root of e in K, or NotAnNthPower."""
        if k == 1 or e.is_zero():
            return e
        if e.is_rational():
            q = e.rational_value()
            candidate = _rational_root(q, k)
            if candidate is not None:
                return self.from_rational(candidate)
        coefficients = [self.one()] + [self.zero()] * (k - 1) + [-e]
        roots = self.roots_of(coefficients)
        if not roots:
            raise NotAnNthPower(f"element is not a {k}-th power in {self}")
        return roots[0]

    def is_nth_power(self, e: "FieldElement", k: int) -> bool:
        try:
            self.nth_root(e, k)
            return True
        except NotAnNthPower:
            return False

    @cached_property
    def torsion(self) -> "RootsOfUnity":
        return _torsion_units(self)

    def sympy_order(self):
        """(ZK, dK) as sympy's Round Two returns them, computed on first use."""
        with self._lock:
            if self._sympy_order is None:
                self._sympy_order = round_two(self.polynomial)
            return self._sympy_order


def _rational_root(q: Fraction, k: int) -> Optional[Fraction]:
    def iroot(n: int) -> Optional[int]:
        if n < 0:
            if k % 2 == 0:
                return None
            r = iroot(-n)
            return None if r is None else -r
        r, exact = integer_nthroot(n, k)
        return int(r) if exact else None

    a, b = iroot(q.numerator), iroot(q.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)


class FieldElement:
    """Element of K as integer coordinates over the integral basis divided by a positive denominator."""

    __slots__ = ('field', 'coeffs', 'denom')

    def __init__(self, field: NumberField, coeffs: Sequence[int], denom: int = 1):
        if denom == 0:
            raise DivisionByZero("zero denominator")
        coeffs = [int(c) for c in coeffs]
        denom = int(denom)
        if denom < 0:
            coeffs, denom = [-c for c in coeffs], -denom
        self.field = field
        if not any(coeffs):
            self.coeffs, self.denom = tuple(coeffs), 1
            return
        g = gcd(denom, *coeffs)
        self.coeffs = tuple(c // g for c in coeffs)
        self.denom = denom // g

    @classmethod
    def from_fractions(cls, field: NumberField, fracs: Sequence[Fraction]) -> "FieldElement":
        den = 1
        for c in fracs:
            den = den * c.denominator // gcd(den, c.denominator)
        return cls(field, [int(c * den) for c in fracs], den)

    # --- views --------------------------------------------------------------

    @property
    def coordinates(self) -> Tuple[Fraction, ...]:
        return tuple(Fraction(c, self.denom) for c in self.coeffs)

    def power_basis(self) -> List[Fraction]:
        return self.field._integral_to_power(self.coordinates)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_one(self) -> bool:
        return self == self.field.one()

    def is_integral(self) -> bool:
        return self.denom == 1

    def is_rational(self) -> bool:
        pb = self.power_basis()
        return all(c == 0 for c in pb[1:])

    def rational_value(self) -> Fraction:
        pb = self.power_basis()
        if any(c != 0 for c in pb[1:]):
            raise ValueError("element is not rational")
        return pb[0]

    # --- arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        return self.field.from_rational(Fraction(other))

    def __add__(self, other) -> "FieldElement":
        other = self._coerce(other)
        d = self.denom * other.denom // gcd(self.denom, other.denom)
        a, b = d // self.denom, d // other.denom
        return FieldElement(self.field, [a * x + b * y for x, y in zip(self.coeffs, other.coeffs)], d)

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, [-c for c in self.coeffs], self.denom)

    def __sub__(self, other) -> "FieldElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "FieldElement":
        return self._coerce(other) - self

    def __mul__(self, other) -> "FieldElement":
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return FieldElement(self.field, [c * q.numerator for c in self.coeffs], self.denom * q.denominator)
        other = self._coerce(other)
        out = [0] * self.field.degree
        table = self.field._mult_table
        for i, ai in enumerate(self.coeffs):
            if ai == 0:
                continue
            row = table[i]
            for j, bj in enumerate(other.coeffs):
                if bj == 0:
                    continue
                c = ai * bj
                for k, t in row[j]:
                    out[k] += c * t
        return FieldElement(self.field, out, self.denom * other.denom)

    __rmul__ = __mul__

    def multiplication_matrix(self) -> List[List[int]]:
        """Integer matrix of multiplication by the numerator; column j = coords of num * w_j."""
        m = self.field.degree
        M = [[0] * m for _ in range(m)]
        table = self.field._mult_table
        for i, ai in enumerate(self.coeffs):
            if ai == 0:
                continue
            for j in range(m):
                for k, t in table[i][j]:
                    M[k][j] += ai * t
        return M

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        M = self.multiplication_matrix()
        rows = [[Fraction(v) for v in row] for row in M]
        x = solve_rational(rows, list(self.field._one))
        return FieldElement.from_fractions(self.field, [c * self.denom for c in x])

    def __truediv__(self, other) -> "FieldElement":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero("division by zero")
            return self * (1 / Fraction(other))
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other) -> "FieldElement":
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "FieldElement":
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def pow_mod(self, k: int, p: int) -> "FieldElement":
        """Integral element raised to k with coordinates reduced mod p at each step."""
        if not self.is_integral():
            raise ValueError("pow_mod requires an integral element")
        result = self.field.one()
        base = FieldElement(self.field, [c % p for c in self.coeffs], 1)
        while k:
            if k & 1:
                result = result * base
                result = FieldElement(self.field, [c % p for c in result.coeffs], 1)
            base = base * base
            base = FieldElement(self.field, [c % p for c in base.coeffs], 1)
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.field.from_rational(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs and self.denom == other.denom

    def __hash__(self) -> int:
        return hash((self.field.coefficients, self.coeffs, self.denom))

    # --- norms and traces -----------------------------------------------------

    def norm(self) -> Fraction:
        """Absolute norm as the determinant of multiplication on the integral basis."""
        m = self.field.degree
        if self.is_zero():
            return Fraction(0)
        M = self.multiplication_matrix()
        det = DomainMatrix([[ZZ(v) for v in row] for row in M], (m, m), ZZ).det()
        return Fraction(int(det), self.denom ** m)

    def resultant_norm(self) -> Fraction:
        """Absolute norm as Res(f, g) for the power-basis representative g."""
        pb = self.power_basis()
        g = Poly([QQ(c.numerator, c.denominator) for c in reversed(pb)], X, domain=QQ)
        f = Poly(list(self.field.coefficients), X, domain=QQ)
        return Fraction(str(resultant(f, g)))

    def trace(self) -> Fraction:
        M = self.multiplication_matrix()
        return Fraction(sum(M[i][i] for i in range(len(M))), self.denom)

    def characteristic_polynomial(self) -> List[Fraction]:
        from sympy import Matrix
        M = Matrix(self.multiplication_matrix()) / self.denom
        return [Fraction(str(c)) for c in M.charpoly(X).all_coeffs()]

    # --- presentation ---------------------------------------------------------

    def to_json(self) -> List[str]:
        return [str(c) for c in self.coordinates]

    def __repr__(self) -> str:
        pb = self.power_basis()
        terms = []
        for k, c in enumerate(pb):
            if c == 0:
                continue
            mono = '' if k == 0 else ('x' if k == 1 else f'x^{k}')
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append('-' + mono)
            else:
                terms.append(f"{c}{'*' + mono if mono else ''}")
        return ' + '.join(terms).replace('+ -', '- ') if terms else '0'


class RootsOfUnity:
    """mu_order(K) with a fixed generator."""

    def __init__(self, order: int, generator: FieldElement):
        self.order = order
        self.generator = generator

    def elements(self) -> List[FieldElement]:
        out = [self.generator.field.one()]
        for _ in range(self.order - 1):
            out.append(out[-1] * self.generator)
        return out

    def discrete_log(self, z: FieldElement) -> int:
        for k, w in enumerate(self.elements()):
            if w == z:
                return k
        raise ValueError("element is not in this group of roots of unity")

    def __repr__(self) -> str:
        return f"RootsOfUnity(order={self.order}, generator={self.generator})"


def _torsion_units(K: NumberField) -> RootsOfUnity:
    m = K.degree
    order, generator = 2, K.from_rational(-1)
    # torsion order w is even with phi(w) | m, and phi(k) <= m forces k <= 2 m^2
    candidates = [k for k in range(4, 2 * m * m + 3, 2) if m % int(totient(k)) == 0]
    for k in sorted(candidates, reverse=True):
        coeffs = [int(c) for c in Poly(cyclotomic_poly(k, X), X).all_coeffs()]
        roots = K.roots_of_integer_poly(coeffs)
        if roots:
            order, generator = k, roots[0]
            break
    logger.debug(f"Torsion of {K}: order {order}")
    return RootsOfUnity(order, generator)


def make_field(coefficients: Sequence[int], integral_basis: Optional[Sequence[Sequence[Fraction]]] = None) -> NumberField:
    """
    Build K = Q[x]/(f) with its maximal order.

    Args:
        coefficients: integer coefficients of f, highest degree first
        integral_basis: optional basis in power-basis coordinates (lists of rationals) bypassing Round Two

    Returns:
        NumberField with integral basis, discriminant and signature
    """
    coefficients = [int(c) for c in coefficients]
    while coefficients and coefficients[0] == 0:
        coefficients.pop(0)
    if len(coefficients) < 2:
        raise ReduciblePolynomial("defining polynomial must have degree >= 1")
    if coefficients[0] != 1:
        raise NonMonic(f"leading coefficient {coefficients[0]} is not 1")

    poly = Poly(coefficients, X, domain=ZZ)
    if poly.degree() > 1 and not poly.is_irreducible:
        raise ReduciblePolynomial(f"{format_polynomial(coefficients)} is reducible over Q")

    m = poly.degree()
    if m == 1:
        return NumberField(coefficients, [[1]], 1, 1)

    if integral_basis is not None:
        fracs = [[Fraction(c) for c in vec] + [Fraction(0)] * (m - len(vec)) for vec in integral_basis]
        denom = 1
        for vec in fracs:
            for c in vec:
                denom = denom * c.denominator // gcd(denom, c.denominator)
        columns = [[int(c * denom) for c in vec] for vec in fracs]
        field = NumberField(coefficients, columns, denom, 0)
        field.discriminant = field.trace_form_determinant()
        poly_disc = int(poly.discriminant())
        if field.discriminant == 0 or poly_disc % field.discriminant != 0:
            raise ValueError("supplied integral basis is not a basis of an order")
        logger.info(f"Built {field} from supplied integral basis, discriminant {field.discriminant}")
        return field

    ZK, dK = round_two(poly)
    matrix = ZK.matrix.to_Matrix()
    columns = [[int(matrix[i, j]) for i in range(m)] for j in range(m)]
    field = NumberField(coefficients, columns, int(ZK.denom), int(dK))
    field._sympy_order = (ZK, dK)
    logger.info(f"Built {field}: degree {m}, discriminant {field.discriminant}")
    return field


def field_from_text(text: str) -> NumberField:
    return make_field(parse_polynomial(text))


def signature(K: NumberField) -> Tuple[int, int]:
    """
    (r1, r2) for K.

    r1 is the number of real roots of the defining polynomial, from sympy's `Poly.count_roots`,
    which isolates real roots with a Sturm sequence; no explicit sequence is built here.
    """
    r1 = int(K.polynomial.count_roots())
    return r1, (K.degree - r1) // 2


def roots_of_unity(K: NumberField, n: int) -> RootsOfUnity:
    """mu_n(K): the n-torsion of the torsion unit group."""
    if n < 1:
        raise ValueError("n must be positive")
    torsion = K.torsion
    g = gcd(torsion.order, n)
    if g == 1:
        return RootsOfUnity(1, K.one())
    return RootsOfUnity(g, torsion.generator ** (torsion.order // g))
