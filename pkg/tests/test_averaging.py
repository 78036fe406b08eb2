"""Cesaro and logarithmic averaging primitives."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from omegalab import (CESARO, LOGARITHMIC, ContractError, EmptyDomainError,
                      cesaro_avg, cesaro_to_log_decompose, harmonic_mass,
                      log_avg)


def test_cesaro_basic():
    avg = cesaro_avg([1.0, 2.0, 3.0, 4.0])
    assert avg.weight_kind == CESARO
    assert avg.value == 2.5
    assert avg.count == 4 and avg.mass == 4.0


def test_log_avg_weights_early_terms_more():
    # Indicator of n = 1 over [2]: weight 1 against total 1 + 1/2.
    avg = log_avg([1.0, 0.0])
    assert avg.weight_kind == LOGARITHMIC
    assert math.isclose(avg.value.real, 2.0 / 3.0, rel_tol=0, abs_tol=1e-15)


def test_log_avg_with_explicit_indices():
    avg = log_avg([1.0, 1.0], indices=[10, 20])
    assert math.isclose(avg.value.real, 1.0, abs_tol=1e-15)
    assert math.isclose(avg.mass, 0.15, abs_tol=1e-15)
    with pytest.raises(ContractError):
        log_avg([1.0], indices=[0])
    with pytest.raises(ContractError):
        log_avg([1.0, 2.0], indices=[1])


def test_empty_inputs_rejected():
    with pytest.raises(EmptyDomainError):
        cesaro_avg([])
    with pytest.raises(EmptyDomainError):
        log_avg([])


def test_harmonic_mass_frozen():
    assert harmonic_mass(1) == 1.0
    assert math.isclose(harmonic_mass(10), 2.9289682539682538, abs_tol=1e-15)
    # grows like log n
    assert abs(harmonic_mass(10 ** 6) - math.log(10 ** 6) - 0.5772156649) < 1e-3


@given(c=st.complex_numbers(max_magnitude=1.0, allow_nan=False,
                            allow_infinity=False),
       n=st.integers(min_value=1, max_value=400))
@settings(max_examples=40)
def test_constant_sequences_average_to_the_constant(c, n):
    values = [c] * n
    assert abs(cesaro_avg(values).value - c) < 1e-12
    assert abs(log_avg(values).value - c) < 1e-12


@given(values=st.lists(st.floats(min_value=-1.0, max_value=1.0), min_size=1,
                       max_size=300))
@settings(max_examples=40)
def test_averages_stay_in_convex_hull(values):
    for avg in (cesaro_avg(values), log_avg(values)):
        assert min(values) - 1e-12 <= avg.value.real <= max(values) + 1e-12


def test_decomposition_exact_for_constants():
    out = cesaro_to_log_decompose([1.0] * 1000, epsilon=0.1)
    assert abs(out["lhs"] - 1.0) < 1e-12
    assert abs(out["rhs"] - 1.0) < 1e-12
    assert abs(out["residual"]) < 1e-12


def test_decomposition_epsilon_validation():
    for eps in (0.0, 0.5, -0.1, 0.7):
        with pytest.raises(ContractError):
            cesaro_to_log_decompose([1.0, 2.0, 3.0], epsilon=eps)


def test_decomposition_residual_scales_like_one_over_log():
    # Alternating-sign worst case: the residual must shrink as N grows.
    rng = np.random.default_rng(5)
    residuals = []
    for n in (10 ** 3, 10 ** 4, 10 ** 5):
        values = rng.choice([-1.0, 1.0], size=n)
        out = cesaro_to_log_decompose(values, epsilon=0.05)
        bound = 4.0 * (1.0 / math.log(n) + 0.05)
        assert abs(out["residual"]) <= bound
        residuals.append(abs(out["residual"]))
    assert residuals[-1] <= residuals[0] + 0.05


@given(seed=st.integers(min_value=0, max_value=2 ** 16))
@settings(max_examples=20)
def test_decomposition_residual_bound_random_signs(seed):
    rng = np.random.default_rng(seed)
    values = rng.uniform(-1.0, 1.0, size=2000)
    out = cesaro_to_log_decompose(values, epsilon=0.1)
    assert abs(out["residual"]) <= 4.0 * (1.0 / math.log(2000) + 0.1)
