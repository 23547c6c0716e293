#!/usr/bin/env python3
"""
Cl[3] Quartic Finder

Searches totally imaginary biquadratic-style quartics x^4 + a*x^2 + b for a field
whose class group has nontrivial 3-torsion. Such a field is a unit-rank-1 test case
for the n = 3 cohomology pipeline.

Usage:
    python scripts/find_cl3_quartic.py [max_coefficient]

Environment Variables:
=====================
ETALE_CONFIG  - Optional: solver config JSON used for the class group searches
"""

import os
import sys
from pathlib import Path
import logging

SCRIPT_DIR = Path(__file__).parent
REPO_ROOT = SCRIPT_DIR.parent
sys.path.insert(0, str(REPO_ROOT / "etale"))

from class_unit import class_group, class_group_n_torsion  # noqa: E402
from config import SolverConfig, solver_config  # noqa: E402
from errors import MathematicalError, UsageError  # noqa: E402
from nf_core import format_polynomial, make_field  # noqa: E402

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


def candidate_polynomials(max_coefficient: int):
    """x^4 + a x^2 + b with no real roots, ordered by |a| + b."""
    pairs = [(a, b) for a in range(-max_coefficient, max_coefficient + 1) for b in range(1, max_coefficient + 1)]
    pairs.sort(key=lambda ab: (abs(ab[0]) + ab[1], ab))
    for a, b in pairs:
        # no real roots: a >= 0, or a^2 < 4b
        if a < 0 and a * a >= 4 * b:
            continue
        yield [1, 0, a, 0, b]


def find_field(max_coefficient: int, config: SolverConfig):
    seen = set()
    for coefficients in candidate_polynomials(max_coefficient):
        text = format_polynomial(coefficients)
        try:
            K = make_field(coefficients)
        except UsageError:
            continue
        if K.discriminant in seen or not K.is_totally_imaginary:
            continue
        seen.add(K.discriminant)
        try:
            group = class_group(K, config)
        except MathematicalError as e:
            logger.warning(f"{text}: class group failed ({type(e).__name__}: {e})")
            continue
        logger.info(f"{text}: disc {K.discriminant}, Cl = {group.snf_orders or 'trivial'}")
        if any(d % 3 == 0 for d in group.snf_orders):
            return K, group, class_group_n_torsion(K, 3, config)
    return None


def main():
    max_coefficient = int(sys.argv[1]) if len(sys.argv) > 1 else 30
    config_path = os.environ.get("ETALE_CONFIG")
    config = SolverConfig(config_path) if config_path else solver_config

    logger.info(f"Searching quartics with coefficients up to {max_coefficient}")
    found = find_field(max_coefficient, config)
    if found is None:
        logger.error("No totally imaginary quartic with nontrivial Cl[3] in range")
        sys.exit(1)

    K, group, torsion = found
    print(f"polynomial: {K.poly_text}")
    print(f"discriminant: {K.discriminant}")
    print(f"class group: {group.snf_orders}")
    print(f"mu_3 in K: {K.torsion.order % 3 == 0}")
    for t in torsion:
        print(f"Cl[3] generator of order {t.order}: {t.ideal}")


if __name__ == "__main__":
    main()
