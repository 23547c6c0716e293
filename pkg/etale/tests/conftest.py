import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from nf_core import make_field  # noqa: E402
from rel_ext import build_kummer, extension_by_polynomial  # noqa: E402


@pytest.fixture(scope="session")
def qsqrt_m5():
    """Q(sqrt -5): h = 2."""
    return make_field([1, 0, 5])


@pytest.fixture(scope="session")
def qi():
    return make_field([1, 0, 1])


@pytest.fixture(scope="session")
def qsqrt_m3():
    return make_field([1, 0, 3])


@pytest.fixture(scope="session")
def qsqrt_m15():
    """Q(sqrt -15) on its maximal-order polynomial: h = 2."""
    return make_field([1, -1, 4])


@pytest.fixture(scope="session")
def qsqrt_m23():
    """Q(sqrt -23): h = 3."""
    return make_field([1, -1, 6])


@pytest.fixture(scope="session")
def qsqrt_m5_i(qsqrt_m5):
    """K(i)/K for K = Q(sqrt -5): unramified, the Hilbert class field."""
    return build_kummer(qsqrt_m5, 2, qsqrt_m5.from_rational(-1))


@pytest.fixture(scope="session")
def qsqrt_m23_hilbert(qsqrt_m23):
    """K(beta), beta^3 = beta + 1: the Hilbert class field of Q(sqrt -23)."""
    return extension_by_polynomial(qsqrt_m23, [1, 0, -1, -1])
