import cmath
from fractions import Fraction

import pytest

from dsmult.lattice import load_bundled


def to_complex(x) -> complex:
    """Complex embedding zeta_L -> exp(2 pi i / L); test-only oracle."""
    if isinstance(x, (int, Fraction)):
        return complex(x)
    z = cmath.exp(2j * cmath.pi / x.conductor)
    return sum(complex(float(c)) * z**i for i, c in enumerate(x.coeffs))


def close(a: complex, b: complex, tol: float = 1e-9) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


@pytest.fixture(scope="session")
def sl2_free():
    return load_bundled("sl2_torsion_free")


@pytest.fixture(scope="session")
def sl2_237():
    return load_bundled("sl2_237")


@pytest.fixture(scope="session")
def su21_data():
    return load_bundled("su21_elliptic")
