"""
Class Group and Unit Group Service

Cl K by relation search over the Minkowski factor base, O_K* by short-vector
search, principal ideal testing with generator recovery, discrete logs in
Cl K and in U/U^n.

Generator searches use a T2 bound derived from the unit logarithms, so an
empty search certifies non-principality. Every returned generator is checked
with exact ideal arithmetic.
"""

import itertools
import math
import random
import threading
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Set, Tuple
import logging

import numpy as np
from sympy import factorint, primerange

from config import SolverConfig, resolve_config
from errors import BoundsExceeded, RankTooLarge, SearchExhausted
from ideal_arith import (
    FractionalIdeal, PrimeIdeal, element_valuation, factor_ideal, field_geometry,
    primes_above, principal_divisor, small_elements, unit_ideal,
)
from lattice import determinant, hnf_basis, integer_inverse, smith_form, solve_in_finite_group
from nf_core import FieldElement, NumberField, RootsOfUnity

logger = logging.getLogger(__name__)

_cache_lock = threading.Lock()
_unit_cache: Dict[Tuple, "UnitGroup"] = {}
_class_cache: Dict[Tuple, "ClassGroup"] = {}

SATURATION_PRIMES = (2, 3, 5, 7)


# --- units -----------------------------------------------------------------

@dataclass
class UnitGroup:
    """O_K* = torsion x <fundamental_units>."""
    field: NumberField
    torsion: RootsOfUnity
    fundamental_units: List[FieldElement]

    @property
    def rank(self) -> int:
        return len(self.fundamental_units)

    def log_vectors(self) -> np.ndarray:
        """Weighted log embeddings of the fundamental units, last place dropped."""
        geo = field_geometry(self.field)
        weights = geo.place_weights()
        rows = []
        for u in self.fundamental_units:
            logs = geo.log_abs(u.coordinates)
            rows.append([w * v for w, v in zip(weights, logs)][:-1])
        return np.array(rows, dtype=float).reshape(self.rank, max(len(weights) - 1, 0))

    def height(self) -> float:
        """Sum over fundamental units of max_j |log|sigma_j(u)||."""
        geo = field_geometry(self.field)
        return sum(max(abs(v) for v in geo.log_abs(u.coordinates)) for u in self.fundamental_units)

    def discrete_log(self, u: FieldElement) -> Tuple[int, List[int]]:
        """
        Exponents (t, [a_i]) with u = zeta^t * prod u_i^a_i.

        The fundamental exponents are read off the log embedding and then confirmed exactly.
        """
        exps: List[int] = []
        if self.rank:
            geo = field_geometry(self.field)
            weights = geo.place_weights()
            target = np.array([w * v for w, v in zip(weights, geo.log_abs(u.coordinates))][:-1])
            A = self.log_vectors().T
            sol, *_ = np.linalg.lstsq(A, target, rcond=None)
            exps = [int(round(float(s))) for s in sol]
        rest = u
        for e, f in zip(exps, self.fundamental_units):
            rest = rest / f ** e
        try:
            t = self.torsion.discrete_log(rest)
        except ValueError:
            raise SearchExhausted("unit logarithm did not round to an exact representation")
        return t, exps

    def to_json(self) -> Dict:
        return {
            "torsion_order": str(self.torsion.order),
            "torsion_generator": self.torsion.generator.to_json(),
            "fundamental_units": [u.to_json() for u in self.fundamental_units],
        }


def _is_unit(x: FieldElement) -> bool:
    return x.is_integral() and abs(x.norm()) == 1


def _is_torsion(x: FieldElement, w: int) -> bool:
    return (x ** w).is_one()


def _unit_candidates(K: NumberField, bound: float, limit: int) -> List[FieldElement]:
    geo = field_geometry(K)
    out = []
    for x, _ in small_elements(unit_ideal(K), bound, limit):
        if abs(geo.approx_norm(x.coordinates) - 1.0) > 1e-6:
            continue
        if _is_unit(x):
            out.append(x)
    return out


def _residue_test_primes(K: NumberField, p: int, count: int = 3) -> List[PrimeIdeal]:
    """Unramified primes P with N(P) = 1 mod p."""
    out: List[PrimeIdeal] = []
    for q in primerange(3, 5000):
        if q == p or K.discriminant % q == 0:
            continue
        out.extend(P for P in primes_above(K, q) if (P.norm() - 1) % p == 0)
        if len(out) >= count:
            break
    return out


def _is_power_residue(x: FieldElement, P: PrimeIdeal, p: int) -> bool:
    y = x.pow_mod((P.norm() - 1) // p, P.p)
    return P.ideal.contains(y - 1)


def _saturate(K: NumberField, torsion: RootsOfUnity, units: List[FieldElement]) -> List[FieldElement]:
    """Replace the system by p-th roots where some product of units is a p-th power."""
    tests = {p: _residue_test_primes(K, p) for p in SATURATION_PRIMES}
    changed = True
    while changed:
        changed = False
        for p in SATURATION_PRIMES:
            for exps in itertools.product(range(p), repeat=len(units)):
                if not any(exps):
                    continue
                for t in range(torsion.order if torsion.order % p == 0 else 1):
                    candidate = torsion.generator ** t
                    for e, u in zip(exps, units):
                        candidate = candidate * u ** e
                    if not all(_is_power_residue(candidate, P, p) for P in tests[p]):
                        continue
                    if K.is_nth_power(candidate, p):
                        root = K.nth_root(candidate, p)
                        j = max(i for i, e in enumerate(exps) if e)
                        logger.debug(f"Saturating unit system of {K} at {p}")
                        units = units[:j] + [root] + units[j + 1:]
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break
    return units


def unit_group(K: NumberField, config: Optional[SolverConfig] = None) -> UnitGroup:
    """
    Torsion and a fundamental system of units.

    Raises:
        RankTooLarge: unit rank beyond the configured scope
        SearchExhausted: no independent system within the configured heights
    """
    cfg = resolve_config(config)
    key = (K.coefficients,)
    with _cache_lock:
        if key in _unit_cache:
            return _unit_cache[key]

    rank = K.unit_rank
    max_rank = int(cfg.get("units", "max_rank"))
    if rank > max_rank:
        raise RankTooLarge(f"unit rank {rank} of {K} exceeds configured maximum {max_rank}")
    torsion = K.torsion
    fundamental: List[FieldElement] = []

    if rank > 0:
        limit = int(cfg.get("search", "max_enumerated"))
        geo = field_geometry(K)
        weights = geo.place_weights()
        for multiplier in cfg.get("units", "height_multipliers"):
            bound = K.degree * float(multiplier)
            found = [u for u in _unit_candidates(K, bound, limit) if not _is_torsion(u, torsion.order)]
            if not found:
                continue
            logs = [[w * v for w, v in zip(weights, geo.log_abs(u.coordinates))][:-1] for u in found]
            if rank == 1:
                # T2 is convex along powers of the fundamental unit
                fundamental = [min(found, key=lambda u: geo.t2(u.coordinates))]
                break
            best, best_det = None, None
            for i, j in itertools.combinations(range(len(found)), 2):
                det = abs(float(np.linalg.det(np.array([logs[i], logs[j]]))))
                if det > 1e-6 and (best_det is None or det < best_det):
                    best, best_det = (found[i], found[j]), det
            if best is not None:
                fundamental = _saturate(K, torsion, list(best))
                break
        if len(fundamental) != rank:
            raise SearchExhausted(f"no independent unit system for {K} within configured heights")

    group = UnitGroup(K, torsion, fundamental)
    logger.info(f"Unit group of {K}: torsion {torsion.order}, rank {rank}")
    with _cache_lock:
        _unit_cache.setdefault(key, group)
    return group


@dataclass
class UnitsModPowers:
    """U/U^n with generators and cyclic orders (trivial factors dropped)."""
    n: int
    units: UnitGroup
    generators: List[FieldElement]
    orders: List[int]
    has_torsion_part: bool

    @property
    def order(self) -> int:
        result = 1
        for d in self.orders:
            result *= d
        return result

    def discrete_log(self, u: FieldElement) -> List[int]:
        t, exps = self.units.discrete_log(u)
        coords = []
        if self.has_torsion_part:
            coords.append(t % self.orders[0])
        coords.extend(e % self.n for e in exps)
        return coords


def units_mod_nth_powers(K: NumberField, n: int, config: Optional[SolverConfig] = None) -> UnitsModPowers:
    units = unit_group(K, config)
    generators, orders = [], []
    g = gcd(units.torsion.order, n)
    if g > 1:
        generators.append(units.torsion.generator)
        orders.append(g)
    if n > 1:
        generators.extend(units.fundamental_units)
        orders.extend([n] * units.rank)
    return UnitsModPowers(n, units, generators, orders, g > 1)


# --- principal ideals ------------------------------------------------------

def generator_bound(I: FractionalIdeal, config: Optional[SolverConfig] = None) -> float:
    """T2 bound under which some generator of a principal integral I must lie."""
    K = I.field
    units = unit_group(K, config)
    N = float(I.norm())
    return K.degree * N ** (2.0 / K.degree) * math.exp(units.height()) * (1 + 1e-9)


def find_generator(I: FractionalIdeal, config: Optional[SolverConfig] = None,
                   multipliers: Optional[Sequence[float]] = None) -> Optional[FieldElement]:
    """
    Bounded generator search, independent of the class group.

    Returns:
        g with div(g) = I, or None when I is not principal
    """
    K = I.field
    if I.is_one():
        return K.one()
    if not I.is_integral():
        J, x = I.reduced()
        g = find_generator(J, config, multipliers)
        return None if g is None else g / x

    cfg = resolve_config(config)
    N = I.norm()
    base = K.degree * float(N) ** (2.0 / K.degree)
    complete = generator_bound(I, cfg)
    steps = [base * float(m) for m in (multipliers or cfg.generator_multipliers) if base * float(m) < complete]
    steps.append(complete)
    limit = int(cfg.get("search", "max_enumerated"))
    geo = field_geometry(K)
    target = float(N)
    for bound in steps:
        for x, _ in small_elements(I, bound, limit):
            if abs(geo.approx_norm(x.coordinates) - target) > 1e-6 * target:
                continue
            if abs(x.norm()) == N:
                return x
    return None


def principal_generator(I: FractionalIdeal, config: Optional[SolverConfig] = None) -> Optional[FieldElement]:
    """Generator of I via a reduced representative of its class."""
    if I.is_one():
        return I.field.one()
    J, x = I.reduced()
    g = find_generator(J, config)
    if g is None:
        return None
    return g / x


# --- class group ------------------------------------------------------------

def minkowski_bound(K: NumberField) -> float:
    m = K.degree
    r1, r2 = K.signature
    return (4 / math.pi) ** r2 * math.factorial(m) / m ** m * math.sqrt(abs(K.discriminant))


def factor_base(K: NumberField, bound: float) -> List[PrimeIdeal]:
    fb = []
    for p in primerange(2, int(bound) + 1):
        for P in primes_above(K, p):
            if P.norm() <= bound:
                fb.append(P)
    return fb


@dataclass
class ClassGroup:
    """
    Cl K in Smith normal form coordinates.

    relation_data maps a factor-base exponent row vector e to SNF coordinates (e * relation_data)_i mod snf_orders[i].
    """
    field: NumberField
    snf_orders: List[int]
    generators: List[FractionalIdeal]
    factor_base: List[PrimeIdeal]
    relation_data: List[List[int]]
    generator_exponents: List[List[int]]
    config: SolverConfig
    _prime_vectors: Dict[PrimeIdeal, List[int]] = dc_field(default_factory=dict)
    _lock: threading.Lock = dc_field(default_factory=threading.Lock)

    @property
    def order(self) -> int:
        h = 1
        for d in self.snf_orders:
            h *= d
        return h

    def is_trivial(self) -> bool:
        return not self.snf_orders

    def to_snf(self, exps: Sequence[int]) -> List[int]:
        return [sum(e * self.relation_data[j][i] for j, e in enumerate(exps)) % d
                for i, d in enumerate(self.snf_orders)]

    def _prime_vector(self, P: PrimeIdeal) -> List[int]:
        with self._lock:
            cached = self._prime_vectors.get(P)
        if cached is not None:
            return cached
        k = len(self.factor_base)
        if P in self.factor_base:
            vec = [0] * k
            vec[self.factor_base.index(P)] = 1
        else:
            vec = self._rewrite_prime(P)
        with self._lock:
            self._prime_vectors[P] = vec
        return vec

    def _rewrite_prime(self, P: PrimeIdeal) -> List[int]:
        """FB vector of [P] for P outside the factor base, from x in P with div(x)/P smooth."""
        K = self.field
        attempts = int(self.config.get("search", "dlog_attempts"))
        rng = random.Random(self.config.seed)
        basis, _ = P.ideal._reduced_lattice
        bound = int(self.config.get("class_group", "sample_coefficient_bound"))
        for _ in range(attempts):
            coords = [sum(rng.randint(-bound, bound) * b[j] for b in basis) for j in range(K.degree)]
            x = K.element(coords)
            if x.is_zero() or element_valuation(x, P) != 1:
                continue
            rest = _smooth_exponents(x, self.factor_base, divide_by=P.norm())
            if rest is not None:
                return [-v for v in rest]
        raise SearchExhausted(f"could not express {P} over the factor base")

    def discrete_log(self, I: FractionalIdeal) -> List[int]:
        """SNF coordinates of the class of I."""
        if self.is_trivial() or I.is_one():
            return [0] * len(self.snf_orders)
        J, _ = I.reduced()
        exps = [0] * len(self.factor_base)
        for P, e in factor_ideal(J):
            for j, v in enumerate(self._prime_vector(P)):
                exps[j] += e * v
        return self.to_snf(exps)

    def is_principal(self, I: FractionalIdeal) -> Optional[FieldElement]:
        """
        Generator of I if principal, else None.

        Raises:
            SearchExhausted: class is trivial but the bounded search found nothing
        """
        if any(self.discrete_log(I)):
            return None
        g = principal_generator(I, self.config)
        if g is None:
            raise SearchExhausted(f"principal ideal of norm {I.norm()} has no generator within bounds")
        if principal_divisor(g) != I:
            raise SearchExhausted("generator check failed")
        return g

    def ideal_of(self, coords: Sequence[int]) -> FractionalIdeal:
        """A reduced integral ideal in the class with the given SNF coordinates."""
        result = unit_ideal(self.field)
        for c, G, d in zip(coords, self.generators, self.snf_orders):
            c %= d
            if c:
                result = (result * G ** c).reduced()[0]
        return result

    def elements(self) -> List[Tuple[int, ...]]:
        return list(itertools.product(*[range(d) for d in self.snf_orders]))

    def to_json(self) -> Dict:
        return {
            "snf": [str(d) for d in self.snf_orders],
            "class_number": str(self.order),
            "generators": [G.to_json() for G in self.generators],
        }


def _smooth_exponents(x: FieldElement, fb: Sequence[PrimeIdeal], divide_by: int = 1) -> Optional[List[int]]:
    """FB exponents of div(x)/(ideal of norm divide_by outside fb), or None when not smooth."""
    remaining = Fraction(abs(x.norm())) / divide_by
    if remaining.denominator != 1:
        return None
    remaining = int(remaining)
    vec = [0] * len(fb)
    for j, P in enumerate(fb):
        if remaining % P.p:
            continue
        v = element_valuation(x, P)
        if v:
            vec[j] = v
            remaining //= P.norm() ** v
    return vec if remaining == 1 else None


def _check_bounds(K: NumberField, cfg: SolverConfig):
    section = cfg.section("class_group")
    if K.degree > int(section["max_degree"]):
        raise BoundsExceeded(f"degree {K.degree} exceeds configured maximum {section['max_degree']}")
    if abs(K.discriminant) > int(section["max_abs_discriminant"]):
        raise BoundsExceeded(f"|disc| {abs(K.discriminant)} exceeds configured maximum")


def _fb_ideal(K: NumberField, fb: Sequence[PrimeIdeal], exps: Sequence[int]) -> FractionalIdeal:
    result = unit_ideal(K)
    for P, e in zip(fb, exps):
        if e:
            result = (result * P.ideal ** e).reduced()[0]
    return result


def _finalize(K: NumberField, fb: List[PrimeIdeal], relations: List[List[int]], cfg: SolverConfig) -> ClassGroup:
    k = len(fb)
    rows = hnf_basis(relations, k)
    diag, _, V = smith_form(rows, k)
    Vinv = integer_inverse(V)
    idx = [i for i, d in enumerate(diag) if d != 1]
    orders = [diag[i] for i in idx]
    exps = [Vinv[i] for i in idx]
    generators = [_fb_ideal(K, fb, e) for e in exps]
    relation_data = [[V[j][i] for i in idx] for j in range(k)]
    return ClassGroup(K, orders, generators, fb, relation_data, exps, cfg)


def _missing_relations(group: ClassGroup) -> List[List[int]]:
    """Principal classes among the q-torsion of the candidate group, as new FB relations."""
    K = group.field
    h = group.order
    for q in sorted(factorint(h)):
        coords = [i for i, d in enumerate(group.snf_orders) if d % q == 0]
        for vec in itertools.product(range(q), repeat=len(coords)):
            first = next((v for v in vec if v), None)
            if first != 1:
                continue
            exps = [0] * len(group.factor_base)
            for c, i in zip(vec, coords):
                step = c * (group.snf_orders[i] // q)
                for j, e in enumerate(group.generator_exponents[i]):
                    exps[j] += step * e
            J = _fb_ideal(K, group.factor_base, exps)
            if find_generator(J, group.config) is not None:
                logger.debug(f"Class group of {K}: found missing relation at {q}")
                return [exps]
    return []


def class_group(K: NumberField, config: Optional[SolverConfig] = None) -> ClassGroup:
    """
    Cl K by random relations over the Minkowski factor base.

    Raises:
        BoundsExceeded: field or factor base beyond the configured desk-scale bounds
        SearchExhausted: relation budget spent without a verified group
    """
    cfg = resolve_config(config)
    key = (K.coefficients, cfg.seed)
    with _cache_lock:
        if key in _class_cache:
            return _class_cache[key]

    _check_bounds(K, cfg)
    section = cfg.section("class_group")
    unit_group(K, cfg)
    bound = minkowski_bound(K)
    fb = factor_base(K, bound)
    if len(fb) > int(section["max_factor_base"]):
        raise BoundsExceeded(f"factor base of {len(fb)} primes exceeds configured maximum")
    logger.debug(f"{K}: Minkowski bound {bound:.2f}, factor base of {len(fb)} primes")

    if not fb:
        group = ClassGroup(K, [], [], [], [], [], cfg)
    else:
        group = _relation_search(K, fb, cfg)

    if group.order > int(section["max_class_number"]):
        raise BoundsExceeded(f"class number {group.order} exceeds configured maximum")
    logger.info(f"Class group of {K}: {group.snf_orders or 'trivial'}")
    with _cache_lock:
        _class_cache.setdefault(key, group)
    return group


def _relation_search(K: NumberField, fb: List[PrimeIdeal], cfg: SolverConfig) -> ClassGroup:
    section = cfg.section("class_group")
    k = len(fb)
    rng = random.Random(cfg.seed)
    coeff_bound = int(section["sample_coefficient_bound"])
    streak_target = int(section["relation_streak"])
    max_relations = int(section["max_relations"])

    relations: List[List[int]] = []
    for p in sorted({P.p for P in fb}):
        above = primes_above(K, p)
        if all(P in fb for P in above):
            vec = [0] * k
            for P in above:
                vec[fb.index(P)] = P.e
            relations.append(vec)

    last_det, streak = None, 0
    generated = 0
    while generated < max_relations:
        for _ in range(k):
            generated += 1
            vec = _random_relation(K, fb, rng, coeff_bound)
            if vec is not None and any(vec):
                relations.append(vec)
        basis = hnf_basis(relations, k)
        if len(basis) < k:
            continue
        relations = basis
        det = abs(determinant(basis))
        streak = streak + 1 if det == last_det else 0
        last_det = det
        if det == 1 or streak >= streak_target:
            group = _finalize(K, fb, relations, cfg)
            extra = _missing_relations(group)
            if not extra:
                return group
            relations = relations + extra
            last_det, streak = None, 0
    raise SearchExhausted(f"relation search for {K} used {max_relations} relations without converging")


def _random_relation(K: NumberField, fb: List[PrimeIdeal], rng: random.Random, coeff_bound: int) -> Optional[List[int]]:
    A = unit_ideal(K)
    for _ in range(rng.randint(1, 3)):
        A = A * rng.choice(fb).ideal
    basis, _ = A._reduced_lattice
    coords = [sum(rng.randint(-coeff_bound, coeff_bound) * b[j] for b in basis) for j in range(K.degree)]
    x = K.element(coords)
    if x.is_zero():
        return None
    return _smooth_exponents(x, fb)


def is_principal(I: FractionalIdeal, config: Optional[SolverConfig] = None) -> Optional[FieldElement]:
    return class_group(I.field, config).is_principal(I)


def class_discrete_log(I: FractionalIdeal, config: Optional[SolverConfig] = None) -> List[int]:
    return class_group(I.field, config).discrete_log(I)


# --- quotients and torsion ----------------------------------------------------

def class_group_mod_n(K: NumberField, n: int, config: Optional[SolverConfig] = None) -> List[int]:
    """Orders of Cl K / n Cl K (trivial factors dropped)."""
    return [g for g in (gcd(d, n) for d in class_group(K, config).snf_orders) if g > 1]


@dataclass
class TorsionGenerator:
    """c of order g in Cl[n]: c^g = (principal) and c^n = (gamma)."""
    ideal: FractionalIdeal
    order: int
    snf_index: int
    principal: FieldElement
    gamma: FieldElement


def class_group_n_torsion(K: NumberField, n: int, config: Optional[SolverConfig] = None) -> List[TorsionGenerator]:
    """Generators of Cl[n] with generators of their g-th and n-th powers."""
    group = class_group(K, config)
    out = []
    for i, d in enumerate(group.snf_orders):
        g = gcd(d, n)
        if g == 1:
            continue
        c = (group.generators[i] ** (d // g)).reduced()[0]
        principal = principal_generator(c ** g, group.config)
        if principal is None:
            raise SearchExhausted(f"generator of a principal power of order {g} not found")
        out.append(TorsionGenerator(c, g, i, principal, principal ** (n // g)))
    return out


# --- norm images ----------------------------------------------------------------

def norm_image_subgroup(ext, config: Optional[SolverConfig] = None) -> List[List[int]]:
    """Generators (SNF vectors of Cl K) of N_{L|K}(Cl L)."""
    K = ext.base
    groupK = class_group(K, config)
    if ext.is_trivial:
        return [[1 if i == j else 0 for i in range(len(groupK.snf_orders))] for j in range(len(groupK.snf_orders))]
    groupL = class_group(ext.top, config)
    return [groupK.discrete_log(ext.norm_ideal(G)) for G in groupL.generators]


def in_subgroup(vec: Sequence[int], generators: Sequence[Sequence[int]], orders: Sequence[int]) -> bool:
    if not orders:
        return True
    if not generators:
        return not any(v % d for v, d in zip(vec, orders))
    return solve_in_finite_group(generators, vec, orders) is not None


def norm_image_classes(ext, config: Optional[SolverConfig] = None) -> Set[Tuple[int, ...]]:
    """Exhaustive image N_{L|K}(Cl L) as a set of SNF vectors of Cl K."""
    K = ext.base
    groupK = class_group(K, config)
    orders = groupK.snf_orders
    if ext.is_trivial:
        return set(groupK.elements())
    groupL = class_group(ext.top, config)
    images = [groupK.discrete_log(ext.norm_ideal(G)) for G in groupL.generators]
    out = set()
    for combo in groupL.elements():
        vec = [0] * len(orders)
        for c, img in zip(combo, images):
            vec = [(v + c * x) for v, x in zip(vec, img)]
        out.add(tuple(v % d for v, d in zip(vec, orders)))
    return out
