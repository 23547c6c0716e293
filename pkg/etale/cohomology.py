"""
Cohomology of Spec O_K with Z/n coefficients

Works with the explicit complex

    K*  --d0-->  K* (+) Div K  --d1-->  Div K
    d0(a) = (a^-n, div a),   d1(a, A) = div a + n A

whose first cohomology Z1/B1 carries the cup products. H^i is reported through
duality with Ext^(3-i): H^0 = Z/n, H^1 = (Cl K/n)^, H^2 = (Z1/B1)^, H^3 = mu_n(K)^.

Classes in H^2 are value tables on the generators of a Z1/B1 presentation,
checked against every relation. Classes in H^1 are unramified cyclic extensions
(rel_ext.H1Class).
"""

import random
import threading
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple
import logging

from class_unit import (
    TorsionGenerator, UnitsModPowers, class_group, class_group_mod_n, class_group_n_torsion,
    norm_image_classes, units_mod_nth_powers,
)
from config import SolverConfig, resolve_config
from errors import (
    DescentFailure, InvalidExtensionSpec, InvalidIdealSpec, NotAnNthPower, NotDivisibleByN, NotInZ1,
    ScopeViolation, WitnessCheckFailed,
)
from hilbert90 import coboundary, furtwangler_split, hilbert90_element, hilbert90_ideal, solve_norm_unit
from ideal_arith import (
    FractionalIdeal, element_from_json, factor_ideal, ideal_from_factors, ideal_from_json, nth_root_ideal,
    principal_divisor, unit_ideal,
)
from lattice import smith_form, vec_mat
from nf_core import FieldElement, NumberField, roots_of_unity
from rel_ext import CyclicExtension, H1Class

logger = logging.getLogger(__name__)

_presentations: Dict[Tuple, "Ext1Presentation"] = {}
_presentation_lock = threading.Lock()


# --- the complex ----------------------------------------------------------------------

@dataclass(frozen=True)
class Ext1Class:
    """A pair (a, A) in K* (+) Div K; lies in Z1 when -div(a) = n A."""
    a: FieldElement
    ideal: FractionalIdeal
    n: int

    def in_z1(self) -> bool:
        return principal_divisor(self.a) * self.ideal ** self.n == unit_ideal(self.ideal.field)

    def check(self) -> "Ext1Class":
        if not self.in_z1():
            raise NotInZ1("-div(a) != n A")
        return self

    def __add__(self, other: "Ext1Class") -> "Ext1Class":
        return Ext1Class(self.a * other.a, self.ideal * other.ideal, self.n)

    def __neg__(self) -> "Ext1Class":
        return Ext1Class(self.a.inverse(), self.ideal.inverse(), self.n)

    def __mul__(self, k: int) -> "Ext1Class":
        return Ext1Class(self.a ** k, self.ideal ** k, self.n)

    __rmul__ = __mul__

    def to_json(self) -> Dict:
        return {"a": self.a.to_json(), "ideal": self.ideal.to_json(), "factors": self.ideal.factors_json()}


def ext1_from_json(K: NumberField, n: int, data: Dict) -> Ext1Class:
    """{"a": element, "ideal": ideal JSON}, checked to lie in Z1."""
    if not isinstance(data, dict) or "a" not in data or "ideal" not in data:
        raise InvalidIdealSpec('pair needs "a" and "ideal"')
    a = element_from_json(K, data["a"])
    if a.is_zero():
        raise InvalidIdealSpec("a must be nonzero")
    return Ext1Class(a, ideal_from_json(K, data["ideal"]), n).check()


class ExtComplex:
    """The three-term complex for (K, n)."""

    def __init__(self, K: NumberField, n: int):
        self.field = K
        self.n = n

    def d0(self, a: FieldElement) -> Ext1Class:
        return Ext1Class(a ** (-self.n), principal_divisor(a), self.n)

    def d1(self, pair: Ext1Class) -> FractionalIdeal:
        return principal_divisor(pair.a) * pair.ideal ** self.n

    def boundary(self, b: FieldElement) -> Ext1Class:
        """(b^n, -div b) = d0(1/b)."""
        return self.d0(b.inverse())


# --- Z1/B1 --------------------------------------------------------------------------------

class Ext1Presentation:
    """
    Generators and relations for Z1/B1.

    Generators are (u_j, (1)) for the generators u_j of U/U^n, then (gamma_i^-1, c_i) for each
    generator c_i of Cl[n] with c_i^n = (gamma_i). Relations are the unit orders and
    g_i f_i = coords(gamma_i^-g_i pi_i^n) with c_i^g_i = (pi_i).
    """

    def __init__(self, K: NumberField, n: int, config: Optional[SolverConfig] = None):
        self.field = K
        self.n = n
        self.config = resolve_config(config)
        self.units: UnitsModPowers = units_mod_nth_powers(K, n, self.config)
        self.torsion: List[TorsionGenerator] = class_group_n_torsion(K, n, self.config)

        K1 = unit_ideal(K)
        self.generators: List[Ext1Class] = [Ext1Class(u, K1, n) for u in self.units.generators]
        self.generators += [Ext1Class(t.gamma.inverse(), t.ideal, n) for t in self.torsion]
        for g in self.generators:
            g.check()

        k = len(self.generators)
        ku = len(self.units.generators)
        relations = []
        for j, d in enumerate(self.units.orders):
            row = [0] * k
            row[j] = d
            relations.append(row)
        for i, t in enumerate(self.torsion):
            u = t.gamma ** (-t.order) * t.principal ** n
            coords = self.units.discrete_log(u)
            row = [-c for c in coords] + [0] * len(self.torsion)
            row[ku + i] += t.order
            relations.append(row)
        self.relations = relations
        if k:
            diag, _, V = smith_form(relations, k)
            self._diag = diag
            self._V = V
        else:
            self._diag, self._V = [], []
        logger.info(f"Z1/B1 for {K}, n={n}: orders {self.orders}")

    @property
    def orders(self) -> List[int]:
        return [d for d in self._diag if d != 1]

    @property
    def order(self) -> int:
        result = 1
        for d in self._diag:
            result *= d
        return result

    def raw_coordinates(self, pair: Ext1Class) -> List[int]:
        """Coordinates of a Z1 pair over the presentation generators."""
        pair.check()
        K = self.field
        group = class_group(K, self.config)
        vec = group.discrete_log(pair.ideal)
        ks = []
        a, ideal = pair.a, pair.ideal
        for t in self.torsion:
            step = group.snf_orders[t.snf_index] // t.order
            if vec[t.snf_index] % step:
                raise WitnessCheckFailed("class of A is not n-torsion")
            c = (vec[t.snf_index] // step) % t.order
            ks.append(c)
            if c:
                a = a * t.gamma ** c
                ideal = ideal / t.ideal ** c
        beta = group.is_principal(ideal)
        if beta is None:
            raise WitnessCheckFailed("shifted ideal is not principal")
        u = a * beta ** self.n
        if not principal_divisor(u).is_one():
            raise WitnessCheckFailed("unit part of a Z1 pair is not a unit")
        return self.units.discrete_log(u) + ks

    def coordinates(self, pair: Ext1Class) -> List[int]:
        """Canonical SNF coordinates; equal iff the classes agree mod B1."""
        raw = self.raw_coordinates(pair)
        if not raw:
            return []
        y = vec_mat(raw, self._V)
        return [v % d for v, d in zip(y, self._diag) if d != 1]

    def is_zero(self, pair: Ext1Class) -> bool:
        return not any(self.coordinates(pair))

    def to_json(self) -> Dict:
        return {
            "orders": [str(d) for d in self.orders],
            "order": str(self.order),
            "generators": [g.to_json() for g in self.generators],
            "relations": [[str(c) for c in row] for row in self.relations],
        }


def ext1_presentation(K: NumberField, n: int, config: Optional[SolverConfig] = None) -> Ext1Presentation:
    key = (K.coefficients, n, resolve_config(config).seed)
    with _presentation_lock:
        cached = _presentations.get(key)
    if cached is not None:
        return cached
    presentation = Ext1Presentation(K, n, config)
    with _presentation_lock:
        _presentations.setdefault(key, presentation)
    return presentation


def ext1_reduce(pair: Ext1Class, config: Optional[SolverConfig] = None) -> List[int]:
    return ext1_presentation(pair.ideal.field, pair.n, config).coordinates(pair)


def random_b1_element(K: NumberField, n: int, rng: random.Random) -> Ext1Class:
    b = K.zero()
    while b.is_zero():
        b = K.random_element(rng, bound=3)
    return ExtComplex(K, n).boundary(b)


def random_z1_element(presentation: Ext1Presentation, rng: random.Random) -> Ext1Class:
    K, n = presentation.field, presentation.n
    pair = random_b1_element(K, n, rng)
    for g in presentation.generators:
        k = rng.randint(0, n - 1)
        if k:
            pair = pair + g * k
    return pair


# --- group structures ------------------------------------------------------------------------

@dataclass
class GroupStructure:
    degree: int
    orders: List[int]
    description: str
    details: Dict = dc_field(default_factory=dict)

    @property
    def order(self) -> int:
        result = 1
        for d in self.orders:
            result *= d
        return result

    def to_json(self) -> Dict:
        return {"degree": str(self.degree), "orders": [str(d) for d in self.orders],
                "order": str(self.order), "description": self.description, **self.details}


def ext_group(K: NumberField, n: int, i: int, config: Optional[SolverConfig] = None) -> GroupStructure:
    """Ext^i(Z/n, G_m) on Spec O_K."""
    if i == 0:
        mu = roots_of_unity(K, n)
        return GroupStructure(0, [mu.order] if mu.order > 1 else [], "mu_n(K)",
                              {"generator": mu.generator.to_json()})
    if i == 1:
        presentation = ext1_presentation(K, n, config)
        return GroupStructure(1, presentation.orders, "Z1/B1", {"presentation": presentation.to_json()})
    if i == 2:
        return GroupStructure(2, class_group_mod_n(K, n, config), "Cl K/n")
    if i == 3:
        return GroupStructure(3, [n] if n > 1 else [], "Z/n")
    return GroupStructure(i, [], "trivial")


def check_scope(K: NumberField, n: int):
    if n % 2 == 0 and not K.is_totally_imaginary:
        raise ScopeViolation(f"n = {n} is even and {K} has real places")


def h_group(K: NumberField, n: int, i: int, config: Optional[SolverConfig] = None) -> GroupStructure:
    """H^i(Spec O_K, Z/n), dual to Ext^(3-i)."""
    check_scope(K, n)
    if i < 0 or i > 3:
        return GroupStructure(i, [], "trivial")
    dual = ext_group(K, n, 3 - i, config)
    return GroupStructure(i, dual.orders, f"dual of {dual.description}")


# --- H^2 and H^3 classes ------------------------------------------------------------------

class H2Class:
    """A functional on Z1/B1, given by its values in Z/n on the presentation generators."""

    def __init__(self, presentation: Ext1Presentation, values: Sequence[int], witnesses: Optional[List[Dict]] = None):
        self.presentation = presentation
        self.n = presentation.n
        self.values = [v % self.n for v in values]
        self.witnesses = witnesses or []
        self.validate()

    def validate(self):
        if len(self.values) != len(self.presentation.generators):
            raise WitnessCheckFailed("value table does not match the generators")
        for row in self.presentation.relations:
            if sum(r * v for r, v in zip(row, self.values)) % self.n:
                raise WitnessCheckFailed("functional does not vanish on a Z1/B1 relation")

    def evaluate(self, pair: Ext1Class) -> int:
        coords = self.presentation.raw_coordinates(pair)
        return sum(c * v for c, v in zip(coords, self.values)) % self.n

    def is_zero(self) -> bool:
        return not any(self.values)

    def __eq__(self, other) -> bool:
        return isinstance(other, H2Class) and self.values == other.values and self.n == other.n

    def __add__(self, other: "H2Class") -> "H2Class":
        return H2Class(self.presentation, [a + b for a, b in zip(self.values, other.values)])

    def to_json(self) -> Dict:
        return {"n": str(self.n), "values": [str(v) for v in self.values],
                "generators": [g.to_json() for g in self.presentation.generators]}


@dataclass
class H3Class:
    """Value in Z/n of a functional on mu_n(K) at the generator zeta."""
    value: int
    n: int
    mu_order: int
    zeta: FieldElement
    witnesses: List[Dict] = dc_field(default_factory=list)

    def is_zero(self) -> bool:
        return self.value % self.n == 0

    def to_json(self) -> Dict:
        return {"value": str(self.value), "n": str(self.n), "mu_order": str(self.mu_order),
                "zeta": self.zeta.to_json(), "witnesses": self.witnesses}


def zero_h2(K: NumberField, n: int, config: Optional[SolverConfig] = None) -> H2Class:
    presentation = ext1_presentation(K, n, config)
    return H2Class(presentation, [0] * len(presentation.generators))


# --- cup products ----------------------------------------------------------------------------

def kappa(n: int, d: int) -> int:
    """(n(d+1)/2)(n/d) mod n."""
    return (n * (d + 1) // 2) * (n // d) % n


def _cup_11_pipeline(x: H1Class, pair: Ext1Class, seed: Optional[int],
                     config: Optional[SolverConfig]) -> Tuple[FractionalIdeal, List[Dict]]:
    """
    The ideal kappa B + (n/d) N(I) of K for the pair (a, B), where N(t) = a^-1 and
    B^(n/d) O_L = I - sigma(I) + div(t).
    """
    ext = x.ext
    n, d = x.n, ext.degree
    pair.check()
    K = ext.base
    if ext.is_trivial:
        return unit_ideal(K), []

    M = ext.extend_ideal(pair.ideal ** (n // d))
    split = furtwangler_split(ext, M, seed, config)
    s = split.a
    unit = ext.norm(s) * pair.a
    if not principal_divisor(unit).is_one():
        raise WitnessCheckFailed("N(s) a is not a unit")
    norm_witness = solve_norm_unit(ext, unit.inverse(), seed, config)
    w = norm_witness.v
    t = s * w
    if ext.norm(t) != pair.a.inverse():
        raise WitnessCheckFailed("N(t) != a^-1")
    cob = hilbert90_ideal(ext, principal_divisor(w))
    I = split.b_prime / cob.I
    if coboundary(ext, I) * principal_divisor(t) != M:
        raise WitnessCheckFailed("B^(n/d) O_L != I - sigma(I) + div(t)")
    J = pair.ideal ** kappa(n, d) * ext.norm_ideal(I) ** (n // d)
    records = [split.as_record(), norm_witness.as_record(), cob.as_record(), {"t": t.to_json()}]
    return J, records


def cup_11_value(x: H1Class, y: H1Class, pair: Ext1Class, seed: Optional[int] = None,
                 config: Optional[SolverConfig] = None) -> Tuple[int, List[Dict]]:
    """<x cup y, (a, B)> = chi_y(kappa B + (n/d) N(I))."""
    if x.n != y.n or x.base != y.base:
        raise InvalidExtensionSpec("cup product needs classes over the same field and modulus")
    J, records = _cup_11_pipeline(x, pair, seed, config)
    return y.chi(J), records


def cup_11(x: H1Class, y: H1Class, seed: Optional[int] = None, config: Optional[SolverConfig] = None) -> H2Class:
    presentation = ext1_presentation(x.base, x.n, config)
    values, witnesses = [], []
    for g in presentation.generators:
        v, records = cup_11_value(x, y, g, seed, config)
        values.append(v)
        witnesses.append({"generator": g.to_json(), "value": str(v), "witnesses": records})
    logger.info(f"cup_11 values {values} for {x} and {y}")
    return H2Class(presentation, values, witnesses)


def cup_11_norm_image_check(x: H1Class, y: H1Class, pair: Ext1Class, seed: Optional[int] = None,
                            config: Optional[SolverConfig] = None) -> bool:
    """True iff kappa B + (n/d) N(I) lies in N_{M|K}(Cl M) for y's extension M/K."""
    J, _ = _cup_11_pipeline(x, pair, seed, config)
    group = class_group(x.base, config)
    return tuple(group.discrete_log(J)) in norm_image_classes(y.ext, config)


def bockstein_value(x: H1Class, pair: Ext1Class) -> int:
    pair.check()
    return x.chi(pair.ideal)


def bockstein(x: H1Class, config: Optional[SolverConfig] = None) -> H2Class:
    """(a, A) -> (n/d) Art_{L|K}(A)."""
    presentation = ext1_presentation(x.base, x.n, config)
    return H2Class(presentation, [bockstein_value(x, g) for g in presentation.generators])


def descend_ideal(ext: CyclicExtension, I: FractionalIdeal) -> FractionalIdeal:
    """The ideal A of K with A O_L = I."""
    if ext.is_trivial:
        return I
    exponents: Dict = {}
    for P, k in factor_ideal(I):
        p, _ = ext.prime_below(P)
        e = dict(ext.primes_over(p))[P]
        if k % e:
            raise DescentFailure(f"exponent {k} at {P} is not divisible by e = {e}")
        if exponents.setdefault(p, k // e) != k // e:
            raise DescentFailure(f"exponents above {p} differ")
    A = ideal_from_factors(ext.base, list(exponents.items()))
    if ext.extend_ideal(A) != I:
        raise DescentFailure("ideal does not descend to the base")
    return A


def cup_12(x: H1Class, y: H2Class, seed: Optional[int] = None, config: Optional[SolverConfig] = None) -> H3Class:
    """
    <x cup y, zeta> = y(b^-n, A) where sigma(b)/b = zeta^(n/d) and A O_L = div(b).

    Raises:
        DescentFailure: div(b) or b^-n does not come from K
    """
    if y.presentation.n != x.n or y.presentation.field != x.base:
        raise InvalidExtensionSpec("cup product needs classes over the same field and modulus")
    ext = x.ext
    n, d = x.n, ext.degree
    mu = roots_of_unity(x.base, n)
    zeta = mu.generator
    witness = hilbert90_element(ext, ext.embed(zeta ** (n // d)), seed, config)
    b = witness.b
    a = ext.restrict(b ** (-n))
    A = descend_ideal(ext, principal_divisor(b))
    pair = Ext1Class(a, A, n).check()
    value = y.evaluate(pair)
    return H3Class(value, n, mu.order, zeta, [witness.as_record(), {"pair": pair.to_json()}])


def kummer_cup_value(x: H1Class, y: H2Class) -> int:
    """y(v^-1, A) with div(v) = n A for x = K(v^(1/n))."""
    kummer = x.ext.kummer
    if kummer is None:
        raise InvalidExtensionSpec("class was not built from a Kummer radicand")
    try:
        A = nth_root_ideal(principal_divisor(kummer.v), x.n)
    except NotAnNthPower as e:
        raise NotDivisibleByN(str(e))
    return y.evaluate(Ext1Class(kummer.v.inverse(), A, x.n).check())


def steenrod_check(x: H1Class, seed: Optional[int] = None, config: Optional[SolverConfig] = None) -> bool:
    """Compare x cup x with bockstein(x) at n = 2; a mismatch is logged, never raised."""
    if x.n != 2:
        logger.debug(f"Steenrod cross-check skipped for n = {x.n}")
        return True
    square = cup_11(x, x, seed, config)
    beta = bockstein(x, config)
    if square != beta:
        logger.warning(f"x cup x {square.values} differs from bockstein {beta.values} for {x}")
        return False
    return True
