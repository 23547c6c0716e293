"""
Kim Invariant Pipeline

For a Kummer class x of L = K(v^(1/n)) with n A = -div(v), the invariant of
x cup bockstein(x) vanishes iff A is a norm from Cl L, iff Art_{L|K}(A) = 0.
The pipeline computes the Artin value, cross-checks it against the cup-product
evaluation, and optionally against an exhaustive norm-image enumeration.
"""

import itertools
import time
from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterator, List, Optional
import logging

from sympy import factorint

from class_unit import class_group, norm_image_classes
from cohomology import bockstein, check_scope, cup_12, kummer_cup_value
from config import SolverConfig, resolve_config
from errors import (
    MathematicalError, NotAnNthPower, NotDivisibleByN, PipelineMismatch, RamifiedExtension, RootOfUnityMissing,
)
from forms import quadratic_polynomial
from ideal_arith import FractionalIdeal, nth_root_ideal, principal_divisor
from nf_core import FieldElement, NumberField, make_field, roots_of_unity
from rel_ext import CyclicExtension, H1Class, build_kummer, unramified_report

logger = logging.getLogger(__name__)


@dataclass
class KimJob:
    """L = K(v^(1/n)) with n A = -div(v)."""
    field: NumberField
    n: int
    v: FieldElement
    ideal: FractionalIdeal
    ext: CyclicExtension

    @property
    def poly(self) -> str:
        return self.field.poly_text

    def key_parts(self) -> Dict:
        return {"poly": self.poly, "n": str(self.n), "v": self.v.to_json()}


@dataclass
class KimResult:
    job: KimJob
    vanishes: bool
    artin_value: int
    degree: int
    cup_value: int
    norm_image_member: Optional[bool]
    witnesses: List[Dict] = dc_field(default_factory=list)
    timing: Optional[float] = None

    @property
    def is_trivial(self) -> bool:
        return self.degree == 1

    def to_record(self, include_timing: bool = True) -> Dict:
        record = {
            **self.job.key_parts(),
            "vanishes": self.vanishes,
            "artin_value": str(self.artin_value),
            "artin_value_note": "up to normalization",
            "degree": str(self.degree),
            "is_trivial": self.is_trivial,
            "cup_value": str(self.cup_value),
            "norm_image_member": self.norm_image_member,
            "ideal": self.job.ideal.to_json(),
            "witnesses": self.witnesses,
        }
        if include_timing and self.timing is not None:
            record["timing"] = f"{self.timing:.3f}"
        return record


def make_kim_job(K: NumberField, n: int, v: FieldElement) -> KimJob:
    """
    Validate (K, n, v) and build the job.

    Raises:
        ScopeViolation, RootOfUnityMissing, NotDivisibleByN, RamifiedExtension
    """
    check_scope(K, n)
    mu = roots_of_unity(K, n)
    if mu.order != n:
        raise RootOfUnityMissing(f"{K} has only {mu.order} of the {n}-th roots of unity")
    try:
        A = nth_root_ideal(principal_divisor(v).inverse(), n)
    except NotAnNthPower as e:
        raise NotDivisibleByN(f"div({v}) is not {n} times a divisor: {e}")
    ext = build_kummer(K, n, v)
    report = unramified_report(ext, n)
    if not report.unramified:
        raise RamifiedExtension(f"K(v^(1/{n})) is ramified: {report.reason}")
    return KimJob(K, n, v, A, ext)


def kim_invariant(job: KimJob, verify_norm_image: bool = False, seed: Optional[int] = None,
                  config: Optional[SolverConfig] = None) -> KimResult:
    """
    Vanishing of the invariant of x cup bockstein(x) for x = K(v^(1/n)).

    Raises:
        PipelineMismatch: the Artin criterion and the cup product (or the norm-image oracle) disagree
    """
    start = time.perf_counter()
    cfg = resolve_config(config)
    ext = job.ext
    x = H1Class(ext, job.n)
    artin_value = ext.artin_symbol(job.ideal)
    vanishes = artin_value == 0

    beta = bockstein(x, cfg)
    cup = cup_12(x, beta, seed, cfg)
    if cup.is_zero() != vanishes:
        raise PipelineMismatch(
            f"Artin value {artin_value} and cup value {cup.value} disagree for v = {job.v}")
    if ext.kummer is not None and kummer_cup_value(x, beta) != cup.value:
        raise PipelineMismatch("Kummer shortcut and general witness disagree")

    member = None
    if verify_norm_image:
        group = class_group(job.field, cfg)
        member = tuple(group.discrete_log(job.ideal)) in norm_image_classes(ext, cfg)
        if member != vanishes:
            raise PipelineMismatch(f"norm-image membership {member} but vanishes = {vanishes}")

    elapsed = time.perf_counter() - start
    logger.info(f"Kim job {job.poly}, n={job.n}, v={job.v}: vanishes={vanishes} ({elapsed:.2f}s)")
    return KimResult(job, vanishes, artin_value, ext.degree, cup.value, member, cup.witnesses, elapsed)


def _squarefree_products(primes: List[int]) -> Iterator[int]:
    for r in range(len(primes) + 1):
        for combo in itertools.combinations(primes, r):
            result = 1
            for p in combo:
                result *= p
            yield result


def kim_jobs_for_discriminant(D: int, n: int = 2, config: Optional[SolverConfig] = None) -> List[KimJob]:
    """
    Admissible jobs for K = Q(sqrt D): v = +-(squarefree product of primes dividing D),
    keeping nontrivial unramified extensions whose divisor is n-divisible.
    """
    K = make_field(quadratic_polynomial(D))
    primes = sorted(factorint(abs(D)))
    jobs = []
    for m in _squarefree_products(primes):
        for sign in (1, -1):
            value = sign * m
            if value == 1:
                continue
            try:
                job = make_kim_job(K, n, K.from_rational(value))
            except MathematicalError as e:
                logger.debug(f"D={D}, v={value} not admissible: {e}")
                continue
            if job.ext.is_trivial:
                continue
            jobs.append(job)
    return jobs
