import pytest

from symtwist.hecke import build_sym_square, load_maass_form, synthetic_form

from pathlib import Path

FIXTURE = Path(__file__).resolve().parent.parent / "data" / "maass_r13p7797.txt"

# table size covering every acceptance experiment: moments to 1e5, exponent
# scan to 2^16, and the deepest Voronoi tail window (c=5 at N=1000)
N_MAX = 102000


@pytest.fixture(scope="session")
def maass_form():
    return load_maass_form(FIXTURE)


@pytest.fixture(scope="session")
def sym_form(maass_form):
    return build_sym_square(maass_form, N_MAX)


@pytest.fixture(scope="session")
def sym_form_synthetic():
    """Multiplicative but non-automorphic coefficients (negative control)."""
    return build_sym_square(synthetic_form(seed=7, p_max=20000,
                                           t_j=13.77975135189071), 20000)
