"""Two-point correlation experiments for functions of the prime-factor count.

The central objects are averages of a(count(n)) * b(count(n+shift)) under
Cesaro or logarithmic weighting, their independence-style predictions
(product of marginal means, or the Gaussian-model double sum), level-set
resolved discrepancy sums, the prime-shift identity, and small exploratory
k-point products.  Everything is exact given the sieve output: the bounded
functions only see count values, so the joint level-set statistics of
`profiles` are sufficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import sieve, stats
from .errors import CapacityError, ContractError, EmptyDomainError
from .profiles import NBINS, shared_counts, two_point_profile

CESARO = "cesaro"
LOGARITHMIC = "logarithmic"

_MODULUS_SLACK = 1e-12


@dataclass(frozen=True)
class BoundedFunction:
    """Complex function of a nonnegative integer level, capped in modulus.

    values maps levels to complex numbers; levels outside the map take
    default_value (0 unless stated), which is also what level -1 means in
    downshift constructions.
    """

    bound: float = 1.0
    values: dict = field(default_factory=dict)
    default_value: complex = 0.0

    def __post_init__(self):
        if not self.bound > 0:
            raise ContractError("bound must be positive")
        cap = self.bound + _MODULUS_SLACK
        if abs(self.default_value) > cap:
            raise ContractError("default_value exceeds the stated bound")
        for ell, val in self.values.items():
            if ell < 0:
                raise ContractError("levels must be nonnegative")
            if abs(val) > cap:
                raise ContractError(f"value at level {ell} exceeds the bound")

    def __call__(self, ell: int) -> complex:
        return complex(self.values.get(int(ell), self.default_value))

    def table(self, length: int = NBINS) -> np.ndarray:
        out = np.full(length, complex(self.default_value), dtype=np.complex128)
        for ell, val in self.values.items():
            if ell < length:
                out[ell] = val
        return out

    def down_shifted(self) -> "BoundedFunction":
        """The function level -> self(level - 1), with self.default at 0."""
        vals = {ell + 1: val for ell, val in self.values.items() if ell + 1 < NBINS}
        vals[0] = self.default_value
        shifted = dict.fromkeys(range(1, NBINS), self.default_value)
        shifted.update(vals)
        return BoundedFunction(self.bound, shifted, self.default_value)


def constant_function(c) -> BoundedFunction:
    c = complex(c)
    return BoundedFunction(bound=max(abs(c), 1e-300), default_value=c)


def parity_function() -> BoundedFunction:
    return BoundedFunction(values={ell: (-1.0) ** ell for ell in range(NBINS)})


def indicator_function(level: int) -> BoundedFunction:
    if not 0 <= level < NBINS:
        raise ContractError(f"indicator level must be in [0, {NBINS})")
    return BoundedFunction(values={int(level): 1.0 + 0.0j})


def fourier_mode_function(xi: int, interval_size: int) -> BoundedFunction:
    """level -> e(xi * level / interval_size)."""
    if interval_size < 1:
        raise ContractError("interval size must be >= 1")
    theta = 2.0 * math.pi * xi / interval_size
    return BoundedFunction(values={
        ell: complex(math.cos(theta * ell), math.sin(theta * ell))
        for ell in range(NBINS)
    })


def random_bounded_function(seed: int) -> BoundedFunction:
    """Values drawn uniformly on the closed unit disc, reproducibly."""
    rng = np.random.default_rng(seed)
    radii = np.sqrt(rng.uniform(0.0, 1.0, NBINS))
    angles = rng.uniform(0.0, 2.0 * math.pi, NBINS)
    vals = radii * np.exp(1j * angles)
    return BoundedFunction(values={ell: complex(vals[ell]) for ell in range(NBINS)})


@dataclass(frozen=True)
class CorrelationReport:
    N: int
    lhs: complex
    prediction: complex
    error: float
    weighting: str
    metadata: dict


def two_point_lhs(a: BoundedFunction, b: BoundedFunction, n_limit: int,
                  shift: int = 1, weighting: str = LOGARITHMIC,
                  counts=None) -> complex:
    """Average of a(count(n)) * b(count(n+shift)) over n <= N."""
    if n_limit < 3:
        raise ContractError("two-point average needs N >= 3")
    if shift < 1:
        raise ContractError("shift must be >= 1")
    profile = two_point_profile(n_limit, shift, counts)
    ta, tb = a.table(), b.table()
    if weighting == LOGARITHMIC:
        return complex(ta @ profile.joint_log.astype(np.complex128) @ tb
                       ) / profile.harmonic_mass
    if weighting == CESARO:
        return complex(ta @ profile.joint.astype(np.complex128) @ tb) / n_limit
    raise ContractError(f"unknown weighting {weighting!r}")


def _cesaro_mean(fn: BoundedFunction, profile) -> complex:
    return complex(fn.table() @ profile.hist.astype(np.complex128)) / profile.n_limit


def _log_mean(fn: BoundedFunction, profile) -> complex:
    return complex(fn.table() @ profile.log_hist.astype(np.complex128)
                   ) / profile.harmonic_mass


def theorem_a_report(a: BoundedFunction, b: BoundedFunction, n_limit: int,
                     counts=None, metadata=None) -> CorrelationReport:
    """Log-averaged two-point correlation against the product of Cesaro means."""
    if n_limit < 10**3:
        raise ContractError("correlation report wants N >= 1e3")
    profile = two_point_profile(n_limit, 1, counts)
    lhs = two_point_lhs(a, b, n_limit, 1, LOGARITHMIC, counts)
    prediction = _cesaro_mean(a, profile) * _cesaro_mean(b, profile)
    meta = {"shift": 1, "a_bound": a.bound, "b_bound": b.bound}
    if metadata:
        meta.update(metadata)
    return CorrelationReport(
        N=int(n_limit), lhs=lhs, prediction=prediction,
        error=abs(lhs - prediction), weighting=LOGARITHMIC, metadata=meta,
    )


def theorem_b_prediction(a: BoundedFunction, b: BoundedFunction,
                         n_limit: int) -> complex:
    """Gaussian-model double sum over levels k, ell up to mu + 12 sigma.

    The discarded tail is below 1e-30, far under every tolerance in use.
    """
    if n_limit < 10**3:
        raise ContractError("prediction wants N >= 1e3")
    model = stats.gaussian_model(n_limit)
    top = math.ceil(model.mu + 12.0 * model.sigma)
    if top >= NBINS:
        raise CapacityError("level cutoff beyond the 64-level table")
    ells = np.arange(top + 1, dtype=np.float64)
    z = (ells - model.mu) / model.sigma
    dens = np.exp(-0.5 * z * z) / (model.sigma * math.sqrt(2.0 * math.pi))
    ta = a.table(top + 1) * dens
    tb = b.table(top + 1) * dens
    return complex(np.sum(np.outer(ta, tb)))


def _level_discrepancies(a: BoundedFunction, profile):
    """Per-level |E^log_{level set} a(count(n+1)) - cesaro mean of a|."""
    ta = a.table()
    mean_a = _cesaro_mean(a, profile)
    with np.errstate(invalid="ignore", divide="ignore"):
        row_means = (profile.joint_log.astype(np.complex128) @ ta) / profile.log_hist
    disc = np.abs(row_means - mean_a)
    disc[profile.log_hist == 0.0] = 0.0
    return disc


def theorem_c_sum(a: BoundedFunction, n_limit: int, counts=None) -> float:
    """Density-weighted sum of level-resolved correlation discrepancies.

    sum over ell of pi_bar_ell * |E^log over the ell-level set of
    a(count(n+1)) - cesaro mean of a(count(n))|; empty levels contribute 0.
    """
    if n_limit < 10**3:
        raise ContractError("discrepancy sum wants N >= 1e3")
    profile = two_point_profile(n_limit, 1, counts)
    disc = _level_discrepancies(a, profile)
    return float(np.sum(profile.hist / profile.n_limit * disc))


def typical_ell_exceptions(a: BoundedFunction, n_limit: int, A: float,
                           epsilon: float, counts=None) -> int:
    """Count levels in the typical range whose discrepancy exceeds epsilon."""
    if not A > 1:
        raise ContractError("typical range audit needs A > 1")
    if not epsilon > 0:
        raise ContractError("epsilon must be positive")
    window = stats.typical_range(A, n_limit)
    members = [ell for ell in window.members if 0 <= ell < NBINS]
    if not members:
        raise EmptyDomainError("typical range holds no usable levels")
    profile = two_point_profile(n_limit, 1, counts)
    disc = _level_discrepancies(a, profile)
    return int(sum(1 for ell in members
                   if profile.log_hist[ell] > 0.0 and disc[ell] > epsilon))


def prime_shift_identity(a: BoundedFunction, b: BoundedFunction, n_limit: int,
                         window) -> dict:
    """Compare the shift-1 correlation with its prime-shifted form.

    lhs averages a(count(n)) b(count(n+1)); rhs log-averages over window
    primes p the correlation of the down-shifted functions at shift p.
    """
    p_arr = np.unique(np.asarray(list(window), dtype=np.int64))
    if p_arr.size == 0:
        raise ContractError("prime window is empty")
    table = sieve.enumerate_primes(int(p_arr[-1]))
    if np.setdiff1d(p_arr, table.primes).size:
        raise ContractError("window contains a composite")
    if n_limit < 10 * int(p_arr[-1]):
        raise ContractError("need N >= 10 * max window prime")
    lhs = two_point_lhs(a, b, n_limit, 1, LOGARITHMIC)

    counts = shared_counts(n_limit + int(p_arr[-1]) + 1)
    ta = a.down_shifted().table()
    tb = b.down_shifted().table()
    c0 = counts[:n_limit]
    inner = np.empty(p_arr.size, dtype=np.complex128)
    chunk = 1 << 22
    for j, p in enumerate(p_arr):
        total = 0.0 + 0.0j
        mass = 0.0
        for start in range(0, n_limit, chunk):
            stop = min(start + chunk, n_limit)
            inv_n = 1.0 / np.arange(start + 1, stop + 1, dtype=np.float64)
            total += np.sum(ta[c0[start:stop]] * tb[counts[start + p : stop + p]] * inv_n)
            mass += float(inv_n.sum())
        inner[j] = total / mass
    weights = 1.0 / p_arr.astype(np.float64)
    rhs = complex(np.sum(inner * weights) / np.sum(weights))
    return {"lhs": lhs, "rhs": rhs, "gap": abs(lhs - rhs)}


def k_point_explore(functions, n_limit: int, weighting: str = CESARO) -> dict:
    """Joint average of up to four consecutive-shift factors; EXPLORATORY.

    Returns the joint average, the product of marginal averages over [N],
    and their gap.
    """
    functions = list(functions)
    k = len(functions)
    if k < 1:
        raise ContractError("need at least one function")
    if k > 4:
        raise CapacityError("k-point exploration is capped at k = 4")
    if n_limit < 10**3:
        raise ContractError("exploration wants N >= 1e3")
    counts = shared_counts(n_limit + k)
    tables = [fn.table() for fn in functions]
    chunk = 1 << 22
    total = 0.0 + 0.0j
    mass = 0.0
    for start in range(0, n_limit, chunk):
        stop = min(start + chunk, n_limit)
        prod = tables[0][counts[start:stop]]
        for i in range(1, k):
            prod = prod * tables[i][counts[start + i : stop + i]]
        if weighting == CESARO:
            total += np.sum(prod)
            mass += stop - start
        elif weighting == LOGARITHMIC:
            inv_n = 1.0 / np.arange(start + 1, stop + 1, dtype=np.float64)
            total += np.sum(prod * inv_n)
            mass += float(inv_n.sum())
        else:
            raise ContractError(f"unknown weighting {weighting!r}")
    joint = complex(total / mass)

    profile = two_point_profile(n_limit, 1)
    if weighting == CESARO:
        singles = [_cesaro_mean(fn, profile) for fn in functions]
    else:
        singles = [_log_mean(fn, profile) for fn in functions]
    product = complex(np.prod(singles))
    return {
        "label": "EXPLORATORY",
        "k": k,
        "weighting": weighting,
        "value": joint,
        "marginal_product": product,
        "independence_gap": abs(joint - product),
    }
