"""Distribution of the prime-factor count over [N].

Densities of the level sets {n <= N : count(n) = ell} under both uniform
and 1/n weighting, the Gaussian model with mean and variance loglog N,
the typical range, a Kolmogorov-Smirnov audit of the central limit
behaviour, and the variance-type inequality for divisor-indicator sums
over arbitrary prime sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from . import sieve
from .errors import ContractError, EmptyDomainError

# level sets above 63 are empty for any n < 2**64
_NBINS = 64

_CHUNK = 1 << 22


@dataclass(frozen=True)
class GaussianModel:
    mu: float
    sigma: float


@dataclass(frozen=True)
class TypicalRange:
    A: float
    N: int
    lo: float
    hi: float
    members: tuple  # all integers in [lo, hi]


@dataclass(frozen=True)
class DensityTable:
    N: int
    counts: np.ndarray        # per-ell integer counts, index = ell
    pi_bar: np.ndarray        # counts / N
    pi_bar_log: np.ndarray    # (sum of 1/n over the level set) / harmonic mass
    gaussian: np.ndarray      # model density at each integer ell
    harmonic_mass: float


def gaussian_model(n_limit: int) -> GaussianModel:
    if n_limit < 3:
        raise ContractError("model needs n_limit >= 3 so loglog is positive")
    mu = math.log(math.log(n_limit))
    return GaussianModel(mu=mu, sigma=math.sqrt(mu))


def gaussian_density(x: float, model: GaussianModel) -> float:
    if not model.sigma > 0:
        raise ContractError("gaussian density needs sigma > 0")
    z = (x - model.mu) / model.sigma
    return math.exp(-0.5 * z * z) / (model.sigma * math.sqrt(2.0 * math.pi))


def normal_cdf(x) -> np.ndarray:
    """Standard normal CDF via the complementary error function."""
    return 0.5 * erfc(-np.asarray(x, dtype=np.float64) / math.sqrt(2.0))


def typical_range(A: float, n_limit: int) -> TypicalRange:
    if A < 1:
        raise ContractError("typical range needs A >= 1")
    model = gaussian_model(n_limit)
    lo = model.mu - A * model.sigma
    hi = model.mu + A * model.sigma
    members = tuple(range(math.ceil(lo), math.floor(hi) + 1))
    return TypicalRange(A=float(A), N=int(n_limit), lo=lo, hi=hi, members=members)


def _level_histograms(counts: np.ndarray, n_of_first: int):
    """Integer and 1/n-weighted histograms of count values.

    counts[i] is the count for n = n_of_first + i.  Chunked so no float
    array over the full range is ever materialized.
    """
    hist = np.zeros(_NBINS, dtype=np.int64)
    log_hist = np.zeros(_NBINS, dtype=np.float64)
    for start in range(0, counts.size, _CHUNK):
        chunk = counts[start : start + _CHUNK]
        hist += np.bincount(chunk, minlength=_NBINS)
        n_values = np.arange(n_of_first + start,
                             n_of_first + start + chunk.size, dtype=np.float64)
        log_hist += np.bincount(chunk, weights=1.0 / n_values, minlength=_NBINS)
    return hist, log_hist


def _counts_for(n_limit, counts_block, config):
    if counts_block is not None:
        if counts_block.lo != 1 or counts_block.hi < n_limit + 1:
            raise ContractError("counts block must cover [1, N]")
        if counts_block.mode.kind != "big":
            raise ContractError("density statistics need multiplicity counts")
        return counts_block.counts[: n_limit]
    return sieve.factor_counts(1, n_limit + 1, sieve.BigOmega, config).counts


def density_table(n_limit: int, counts_block=None, config=None) -> DensityTable:
    """Level-set densities of the multiplicity count over [N].

    The ell=0 row (n=1 alone) is kept so the uniform densities partition
    exactly.  Pass a prepared FactorCountBlock covering [1, N] to reuse a
    sieve run.
    """
    if n_limit < 3:
        raise ContractError("density table needs N >= 3")
    counts = _counts_for(n_limit, counts_block, config)
    hist, log_hist = _level_histograms(counts, 1)
    mass = float(log_hist.sum())
    model = gaussian_model(n_limit)
    ells = np.arange(_NBINS, dtype=np.float64)
    z = (ells - model.mu) / model.sigma
    gauss = np.exp(-0.5 * z * z) / (model.sigma * math.sqrt(2.0 * math.pi))
    return DensityTable(
        N=int(n_limit),
        counts=hist,
        pi_bar=hist / float(n_limit),
        pi_bar_log=log_hist / mass,
        gaussian=gauss,
        harmonic_mass=mass,
    )


def sathe_selberg_ratio_check(n_limit: int, A: float, counts_block=None) -> dict:
    """Ratios of measured level densities to the Gaussian model on T_{A,N}.

    Restricted to the positive integers of the typical range: the
    underlying estimate is stated for positive ell, and the ell=0 level
    holds the single integer 1, whose density 1/N says nothing about the
    model.  Returns the per-ell table and the max of |ratio - 1|.
    """
    window = typical_range(A, n_limit)
    members = [ell for ell in window.members if ell >= 1]
    if not members:
        raise EmptyDomainError(f"typical range T_({A},{n_limit}) has no positive integers")
    table = density_table(n_limit, counts_block=counts_block)
    rows = []
    max_dev = 0.0
    for ell in members:
        ratio = float(table.pi_bar[ell] / table.gaussian[ell])
        dev = abs(ratio - 1.0)
        max_dev = max(max_dev, dev)
        rows.append({"ell": ell, "pi_bar": float(table.pi_bar[ell]),
                     "gaussian": float(table.gaussian[ell]), "ratio": ratio,
                     "deviation": dev})
    return {"window": window, "rows": rows, "max_deviation": max_dev}


def erdos_kac_ks(n_limit: int, counts_block=None) -> dict:
    """Kolmogorov-Smirnov distance of the standardized count to N(0,1).

    The empirical CDF is right-continuous; the sup is scanned at the jump
    points, comparing the normal CDF against both the value at the jump
    and the left limit, which is where a jump-vs-continuous sup lives.
    """
    if n_limit < 10**4:
        raise ContractError("KS audit wants N >= 1e4")
    table = density_table(n_limit, counts_block=counts_block)
    model = gaussian_model(n_limit)
    cum = np.cumsum(table.pi_bar)
    x = (np.arange(_NBINS) - model.mu) / model.sigma
    phi = normal_cdf(x)
    left = np.concatenate(([0.0], cum[:-1]))
    ks = float(np.max(np.maximum(np.abs(cum - phi), np.abs(left - phi))))
    return {"ks": ks, "normalized": ks * math.sqrt(model.mu)}


def turan_kubilius_check(n_limit: int, prime_set) -> dict:
    """Exact variance-type inequality for a divisor-indicator sum.

    lhs = mean over n <= N of |sum_{p in P} [p | n] - sum_{p in P} 1/p|,
    rhs = 2 sqrt(sum_{p in P} 1/p); holds must be True for every prime set
    P inside [1, N].
    """
    p_arr = np.asarray(list(prime_set), dtype=np.int64)
    if p_arr.size == 0:
        return {"lhs": 0.0, "rhs": 0.0, "holds": True}
    p_arr = np.unique(p_arr)
    if p_arr[0] < 2 or p_arr[-1] > n_limit:
        raise ContractError("prime set must lie inside [2, N]")
    table = sieve.enumerate_primes(int(p_arr[-1]))
    if np.setdiff1d(p_arr, table.primes).size:
        raise ContractError("prime set contains a composite")
    indicator_sum = np.zeros(n_limit, dtype=np.uint8)   # index = n - 1
    for p in p_arr:
        indicator_sum[p - 1 :: p] += 1
    expected = float(np.sum(1.0 / p_arr.astype(np.float64)))
    lhs = 0.0
    for start in range(0, n_limit, _CHUNK):
        chunk = indicator_sum[start : start + _CHUNK].astype(np.float64)
        lhs += float(np.sum(np.abs(chunk - expected)))
    lhs /= n_limit
    rhs = 2.0 * math.sqrt(expected)
    return {"lhs": lhs, "rhs": rhs, "holds": bool(lhs <= rhs)}


def tail_densities(n_limit: int, D: float, distinct_block=None) -> dict:
    """Densities of n with an atypically large or small distinct count.

    For n <= N the indicator sum over all primes <= N is exactly the
    distinct-prime count, so the tails are level-set tails:
    gamma for counts above loglog N + D sqrt(loglog N), delta for counts
    below loglog N - D sqrt(loglog N), both strict.
    """
    if D < 1:
        raise ContractError("tail densities need D >= 1")
    if distinct_block is not None:
        if distinct_block.lo != 1 or distinct_block.hi < n_limit + 1:
            raise ContractError("counts block must cover [1, N]")
        if distinct_block.mode.kind != "small":
            raise ContractError("tail densities need distinct counts")
        counts = distinct_block.counts[: n_limit]
    else:
        counts = sieve.factor_counts(1, n_limit + 1, sieve.SmallOmega).counts[: n_limit]
    model = gaussian_model(n_limit)
    hist = np.bincount(counts, minlength=_NBINS)
    ells = np.arange(hist.size)
    upper = model.mu + D * model.sigma
    lower = model.mu - D * model.sigma
    gamma = float(hist[ells > upper].sum()) / n_limit
    delta = float(hist[ells < lower].sum()) / n_limit
    return {"gamma": gamma, "delta": delta}


def density_l1_gap(n_limit: int, counts_block=None) -> float:
    """L1 distance between the uniform and logarithmic density columns."""
    if n_limit < 10**4:
        raise ContractError("density gap audit wants N >= 1e4")
    table = density_table(n_limit, counts_block=counts_block)
    return float(np.sum(np.abs(table.pi_bar - table.pi_bar_log)))


def write_density_csv(table: DensityTable, path) -> None:
    """CSV export `ell,pi_bar,pi_bar_log,gaussian,ratio` (17 significant digits)."""
    with open(path, "w", newline="") as fh:
        fh.write("ell,pi_bar,pi_bar_log,gaussian,ratio\n")
        for ell in range(_NBINS):
            if table.counts[ell] == 0 and table.gaussian[ell] < 1e-300:
                continue
            ratio = table.pi_bar[ell] / table.gaussian[ell]
            fh.write("%d,%.17g,%.17g,%.17g,%.17g\n" % (
                ell, table.pi_bar[ell], table.pi_bar_log[ell],
                table.gaussian[ell], ratio))
