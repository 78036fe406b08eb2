import pathlib

import pytest
from hypothesis import HealthCheck, settings

from omegalab import profiles, sieve

settings.register_profile(
    "suite",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

REGRESSION_DIR = pathlib.Path(__file__).parent / "regression"


@pytest.fixture(scope="session")
def big_block():
    """Multiplicity counts for n = 1 .. 10^8 + 1, sieved once and shared.

    Covers shift-1 two-point profiles at n_limit = 10^8.  Building it
    costs a few seconds; every large-scale check reuses it through the
    profile cache.
    """
    block = sieve.factor_counts(1, 10 ** 8 + 2)
    profiles.adopt_block(block)
    return block


@pytest.fixture(scope="session")
def regression_dir():
    REGRESSION_DIR.mkdir(exist_ok=True)
    return REGRESSION_DIR
