"""
Binary quadratic forms of negative discriminant.

Class-number oracle for imaginary quadratic fields, independent of the
relation search in class_unit: reduced forms, Gaussian composition and
fundamental discriminants.
"""

from dataclasses import dataclass
from math import gcd, isqrt
from typing import Iterator, List

from sympy import factorint
try:
    from sympy.core.intfunc import igcdex
except ImportError:  # sympy < 1.13
    from sympy.core.numbers import igcdex


@dataclass(frozen=True)
class BinaryQF:
    a: int
    b: int
    c: int

    def __repr__(self) -> str:
        return f"{self.a}x^2 + {self.b}xy + {self.c}y^2"

    def discriminant(self) -> int:
        return self.b ** 2 - 4 * self.a * self.c

    def __mul__(self, other: "BinaryQF") -> "BinaryQF":
        """Dirichlet composition, reduced."""
        f1, f2 = (self, other) if self.a <= other.a else (other, self)
        a1, b1 = f1.a, f1.b
        a2, b2, c2 = f2.a, f2.b, f2.c
        s = (b1 + b2) // 2
        n = b2 - s
        if a2 % a1 == 0:
            y1, d = 0, a1
        else:
            u, _, d = igcdex(a2, a1)
            y1 = u
        if s % d == 0:
            x2, y2, d1 = 0, -1, d
        else:
            u, v, d1 = igcdex(s, d)
            x2, y2 = u, -v
        v1, v2 = a1 // d1, a2 // d1
        r = (y1 * y2 * n - x2 * c2) % v1
        b3 = b2 + 2 * v2 * r
        a3 = v1 * v2
        c3 = (c2 * d1 + r * (b2 + v2 * r)) // v1
        return BinaryQF(a3, b3, c3).reduced_form()

    def square(self) -> "BinaryQF":
        return self * self

    def normalize(self) -> "BinaryQF":
        a, b, c = self.a, self.b, self.c
        r = (a - b) // (2 * a)
        return BinaryQF(a, b + 2 * r * a, a * r * r + b * r + c)

    def reduced_form(self) -> "BinaryQF":
        f = self.normalize()
        a, b, c = f.a, f.b, f.c
        while not (a < c or (a == c and b >= 0)):
            s = (c + b) // (2 * c)
            a, b, c = c, -b + 2 * s * c, c * s * s - b * s + a
        return BinaryQF(a, b, c)

    def is_reduced(self) -> bool:
        return abs(self.b) <= self.a <= self.c and not (self.b < 0 and (abs(self.b) == self.a or self.a == self.c))


def principal_form(D: int) -> BinaryQF:
    k = D % 2
    return BinaryQF(1, k, (k * k - D) // 4)


def form_power(f: BinaryQF, n: int) -> BinaryQF:
    result = principal_form(f.discriminant())
    while n > 0:
        if n & 1:
            result = result * f
        f = f * f
        n >>= 1
    return result


def reduced_forms(D: int) -> List[BinaryQF]:
    """All primitive reduced forms of discriminant D < 0."""
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a negative discriminant")
    forms = []
    a_max = isqrt(-D // 3)
    for a in range(1, a_max + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, b), c) != 1:
                continue
            forms.append(BinaryQF(a, b, c))
    return forms


def class_number(D: int) -> int:
    return len(reduced_forms(D))


def torsion_count(D: int, n: int) -> int:
    """|Cl[n]| by composing every reduced form."""
    identity = principal_form(D)
    return sum(1 for f in reduced_forms(D) if form_power(f, n) == identity)


def is_fundamental_discriminant(D: int) -> bool:
    if D in (0, 1):
        return False
    if D % 4 == 1:
        return all(k == 1 for k in factorint(abs(D)).values())
    if D % 4 == 0:
        m = D // 4
        if m % 4 not in (2, 3):
            return False
        return all(k == 1 for k in factorint(abs(m)).values())
    return False


def fundamental_discriminants(lo: int, hi: int) -> Iterator[int]:
    """Negative fundamental discriminants in [lo, hi], descending from hi."""
    for D in range(min(hi, -3), lo - 1, -1):
        if is_fundamental_discriminant(D):
            yield D


def quadratic_polynomial(D: int) -> List[int]:
    """Defining polynomial of Q(sqrt D) whose root generates the maximal order."""
    if D % 4 == 0:
        return [1, 0, -(D // 4)]
    return [1, -1, (1 - D) // 4]
