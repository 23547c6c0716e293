"""
Witness Solvers

Constructive Hilbert 90 for elements and ideals, Furtwangler splitting and
norms of units in a cyclic extension L/K. Every solver checks its defining
identity exactly and returns a frozen witness that can be written to the
audit record of a cup-product evaluation.
"""

import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple
import logging

from class_unit import class_group, unit_group
from config import SolverConfig, resolve_config
from errors import (
    ClassEquationUnsolvable, NormNotOne, NormNotTrivialIdeal, RankTooLarge, ResolventExhausted,
    SearchExhausted, WitnessCheckFailed,
)
from ideal_arith import (
    FractionalIdeal, PrimeIdeal, factor_ideal, ideal_from_factors, primes_above, principal_divisor,
    small_elements, unit_ideal,
)
from lattice import solve_in_finite_group
from nf_core import FieldElement
from rel_ext import CyclicExtension

logger = logging.getLogger(__name__)


def _rng(seed: Optional[int], config: Optional[SolverConfig]) -> random.Random:
    return random.Random(resolve_config(config).seed if seed is None else seed)


@dataclass(frozen=True)
class NormOneWitness:
    """sigma(b) / b = u."""
    u: FieldElement
    b: FieldElement
    seed: Optional[int]
    residual_ok: bool = True

    def as_record(self) -> Dict:
        return {"kind": "hilbert90_element", "u": self.u.to_json(), "b": self.b.to_json(),
                "residual_ok": self.residual_ok}


@dataclass(frozen=True)
class IdealCoboundaryWitness:
    """J = I - sigma(I)."""
    J: FractionalIdeal
    I: FractionalIdeal
    residual_ok: bool = True

    def as_record(self) -> Dict:
        return {"kind": "hilbert90_ideal", "J": self.J.to_json(), "I": self.I.to_json(),
                "residual_ok": self.residual_ok}


@dataclass(frozen=True)
class FurtwanglerWitness:
    """M = b' - sigma(b') + div(a)."""
    M: FractionalIdeal
    b_prime: FractionalIdeal
    a: FieldElement
    seed: Optional[int]
    residual_ok: bool = True

    def as_record(self) -> Dict:
        return {"kind": "furtwangler_split", "M": self.M.to_json(), "b_prime": self.b_prime.to_json(),
                "a": self.a.to_json(), "residual_ok": self.residual_ok}


@dataclass(frozen=True)
class NormUnitWitness:
    """N_{L|K}(v) = u."""
    u: FieldElement
    v: FieldElement
    residual_ok: bool = True

    def as_record(self) -> Dict:
        return {"kind": "solve_norm_unit", "u": self.u.to_json(), "v": self.v.to_json(),
                "residual_ok": self.residual_ok}


# --- elements -------------------------------------------------------------------------

def hilbert90_element(ext: CyclicExtension, u: FieldElement, seed: Optional[int] = None,
                      config: Optional[SolverConfig] = None) -> NormOneWitness:
    """
    b in L with sigma(b)/b = u for u of relative norm 1.

    b = sum_i (prod_{j<i} sigma^j(u))^(-1) sigma^i(r) for a random integral r, retried while b = 0.

    Raises:
        NormNotOne: N(u) != 1
        ResolventExhausted: every resolvent tried was zero
    """
    cfg = resolve_config(config)
    L = ext.top
    if not ext.norm(u).is_one():
        raise NormNotOne(f"relative norm of {u} is not 1")
    if u.is_one():
        return NormOneWitness(u, L.one(), seed)

    rng = _rng(seed, cfg)
    coefficients = [L.one()]
    for i in range(1, ext.degree):
        coefficients.append(coefficients[-1] / ext.sigma(u, i - 1))

    retries = int(cfg.get("witness", "resolvent_retries"))
    for attempt in range(retries):
        r = L.random_element(rng, bound=2 + attempt // 8)
        if r.is_zero():
            continue
        b = L.zero()
        for i, c in enumerate(coefficients):
            b = b + c * ext.sigma(r, i)
        if b.is_zero():
            continue
        if ext.sigma(b) != u * b:
            raise WitnessCheckFailed("resolvent does not satisfy sigma(b) = u b")
        logger.debug(f"Hilbert 90 witness found after {attempt + 1} resolvents")
        return NormOneWitness(u, b, seed)
    raise ResolventExhausted(f"{retries} resolvents were all zero")


# --- ideals --------------------------------------------------------------------------------

def _sigma_prime(ext: CyclicExtension, P: PrimeIdeal) -> PrimeIdeal:
    image = ext.sigma_ideal(P.ideal)
    for Q in primes_above(ext.top, P.p):
        if Q.ideal == image:
            return Q
    raise WitnessCheckFailed(f"sigma image of {P} is not a prime of L")


def sigma_orbit(ext: CyclicExtension, P: PrimeIdeal) -> List[PrimeIdeal]:
    orbit = [P]
    Q = _sigma_prime(ext, P)
    while Q != P:
        orbit.append(Q)
        Q = _sigma_prime(ext, Q)
    return orbit


def coboundary(ext: CyclicExtension, I: FractionalIdeal) -> FractionalIdeal:
    """I - sigma(I)."""
    return I / ext.sigma_ideal(I)


def hilbert90_ideal(ext: CyclicExtension, J: FractionalIdeal) -> IdealCoboundaryWitness:
    """
    I with J = I - sigma(I) for J of trivial relative norm, solved orbit by orbit.

    Raises:
        NormNotTrivialIdeal: N(J) != (1)
    """
    L = ext.top
    if not ext.norm_ideal(J).is_one():
        raise NormNotTrivialIdeal("relative norm of J is not (1)")
    if J.is_one():
        return IdealCoboundaryWitness(J, unit_ideal(L))

    exponents = dict(factor_ideal(J))
    done = set()
    factors: List[Tuple[PrimeIdeal, int]] = []
    for P in sorted(exponents, key=lambda Q: Q.sort_key()):
        if P in done:
            continue
        orbit = sigma_orbit(ext, P)
        done.update(orbit)
        # x_j - x_{j-1} = e_j along the orbit, x_0 = 0
        x = 0
        for Q in orbit[1:]:
            x += exponents.get(Q, 0)
            factors.append((Q, x))
    I = ideal_from_factors(L, factors)
    if coboundary(ext, I) != J:
        raise WitnessCheckFailed("J != I - sigma(I)")
    return IdealCoboundaryWitness(J, I)


# --- Furtwangler ---------------------------------------------------------------------------

def sigma_action_matrix(ext: CyclicExtension, config: Optional[SolverConfig] = None) -> List[List[int]]:
    """Columns: SNF coordinates of sigma(G_j) for the generators G_j of Cl L."""
    groupL = class_group(ext.top, config)
    return [groupL.discrete_log(ext.sigma_ideal(G)) for G in groupL.generators]


def furtwangler_split(ext: CyclicExtension, M: FractionalIdeal, seed: Optional[int] = None,
                      config: Optional[SolverConfig] = None) -> FurtwanglerWitness:
    """
    (b', a) with M = b' - sigma(b') + div(a), for M whose norm class is trivial in Cl K.

    Raises:
        ClassEquationUnsolvable: (1 - sigma) x = [M] has no solution in Cl L
        SearchExhausted: generator recovery ran out of bound
    """
    cfg = resolve_config(config)
    L = ext.top
    groupK = class_group(ext.base, cfg)
    if any(groupK.discrete_log(ext.norm_ideal(M))):
        raise ClassEquationUnsolvable("norm of M is not principal in the base")

    groupL = class_group(L, cfg)
    orders = groupL.snf_orders
    target = groupL.discrete_log(M)
    if ext.is_trivial or not orders:
        b_prime = unit_ideal(L)
    else:
        images = sigma_action_matrix(ext, cfg)
        columns = [[(1 if i == j else 0) - images[j][i] for i in range(len(orders))] for j in range(len(orders))]
        x = solve_in_finite_group(columns, target, orders)
        if x is None:
            raise ClassEquationUnsolvable("(1 - sigma) x = [M] has no solution in Cl L")
        b_prime = groupL.ideal_of(x)

    if seed is not None and not ext.is_trivial:
        rng = random.Random(seed)
        c = L.random_element(rng, bound=2)
        if not c.is_zero():
            b_prime = b_prime * principal_divisor(c)

    rest = M / coboundary(ext, b_prime)
    a = groupL.is_principal(rest)
    if a is None:
        raise ClassEquationUnsolvable("M - b' + sigma(b') is not principal")
    if coboundary(ext, b_prime) * principal_divisor(a) != M:
        raise WitnessCheckFailed("M != b' - sigma(b') + div(a)")
    return FurtwanglerWitness(M, b_prime, a, seed)


# --- norms of units -------------------------------------------------------------------------

def _unit_pool(ext: CyclicExtension, config: SolverConfig) -> List[FieldElement]:
    L = ext.top
    try:
        units = unit_group(L, config)
    except (RankTooLarge, SearchExhausted) as e:
        logger.debug(f"Unit group of {L} unavailable for the norm search: {e}")
        return []
    pool = []
    span = range(-2, 3)
    combos = [[]]
    for _ in units.fundamental_units:
        combos = [c + [k] for c in combos for k in span]
    for z in units.torsion.elements():
        for combo in combos:
            x = z
            for eps, k in zip(units.fundamental_units, combo):
                if k:
                    x = x * eps ** k
            pool.append(x)
    return pool


def solve_norm_unit(ext: CyclicExtension, u: FieldElement, seed: Optional[int] = None,
                    config: Optional[SolverConfig] = None) -> NormUnitWitness:
    """
    v in L with N_{L|K}(v) = u for a unit u of K.

    Searches units of L first, then small integral elements and their ratios.

    Raises:
        SearchExhausted: nothing found within the configured bound
    """
    cfg = resolve_config(config)
    L = ext.top
    if not u.is_integral() or abs(u.norm()) != 1:
        raise ValueError(f"{u} is not a unit")
    if u.is_one():
        return NormUnitWitness(u, L.one())
    if ext.is_trivial:
        return NormUnitWitness(u, u)

    def accept(v: FieldElement) -> NormUnitWitness:
        if ext.norm(v) != u:
            raise WitnessCheckFailed("N(v) != u")
        return NormUnitWitness(u, v)

    for x in _unit_pool(ext, cfg):
        if ext.norm(x) == u:
            return accept(x)

    bound = float(cfg.get("witness", "norm_search_bound")) * L.degree
    limit = int(cfg.get("search", "max_enumerated"))
    candidates = [x for x, _ in small_elements(unit_ideal(L), bound, limit) if not x.is_zero()]
    candidates += [-x for x in candidates]
    _rng(seed, cfg).shuffle(candidates)
    by_norm: Dict[FieldElement, FieldElement] = {}
    for x in candidates:
        nx = ext.norm(x)
        if nx == u:
            return accept(x)
        y = by_norm.get(nx / u)
        if y is not None:
            return accept(x / y)
        by_norm.setdefault(nx, x)
        # N(y) = N(x) * u also pairs as y / x
        y = by_norm.get(nx * u)
        if y is not None:
            return accept(y / x)
    raise SearchExhausted(f"no element of norm {u} within T2 bound {bound}")
