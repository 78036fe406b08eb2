"""Fourier reduction experiments over prime windows.

This module turns a two-point correlation question about bounded level
functions into frequency-space quantities that can be measured directly:

* discrete Fourier expansion of a bounded function over a symmetric
  integer interval, with a Parseval audit,
* the reduced mean-square sum that controls the correlation error, one
  term per frequency, averaged over shifts by primes from a window,
* Taylor truncation of the complex exponential with its factorial tail
  bound,
* the gap introduced by truncating the multiplicity count at a cutoff,
* exponential sums over prime windows and a grid estimate of the measure
  of the alpha set where they are large.

Throughout, e(x) means exp(2*pi*i*x).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, ContractError, DegenerateWindowError
from . import averaging
from . import profiles
from . import pretentious
from . import sieve
from .correlation import BoundedFunction
from .profiles import NBINS

__all__ = [
    "PrimeWindow",
    "FourierTable",
    "window_formula_bounds",
    "prime_window",
    "fourier_expand",
    "parseval_audit",
    "reduced_sum_terms",
    "reduced_sum",
    "reduction_inequality_audit",
    "taylor_truncation",
    "omega_truncation_gap",
    "prime_exponential_sum",
    "major_arc_measure",
    "write_xi_sweep_csv",
    "write_alpha_sweep_csv",
]

AUDIT_CONSTANT = 2.0

# Per-prime gathers beat an FFT convolution only while the window is small.
_GATHER_WINDOW_LIMIT = 16


@dataclass(frozen=True)
class PrimeWindow:
    """Primes in [lower, upper] with harmonic weights.

    mass is the sum of 1/p over the window; formula_lower/formula_upper
    record what the shrinking-window formulas produced (None when the
    window came from explicit bounds without a reference limit).
    """

    lower: float
    upper: float
    primes: np.ndarray
    mass: float
    formula_lower: float | None = None
    formula_upper: float | None = None

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ContractError("window needs lower < upper")
        if self.primes.size == 0 or self.mass <= 0.0:
            raise DegenerateWindowError(
                "empty prime window", lower=self.lower, upper=self.upper)

    @property
    def weights(self) -> np.ndarray:
        return 1.0 / self.primes.astype(np.float64)

    @property
    def max_prime(self) -> int:
        return int(self.primes[-1])


def window_formula_bounds(n_limit: int) -> tuple[float, float]:
    """Edges of the prime window for averaging shifts at scale n_limit.

    The upper edge is exp((log N)^(1/(loglog N)^(4/9))); the lower edge
    multiplies that exponent by exp(-(loglog N)^(1/3)), so the window
    carries total weight close to (loglog N)^(1/3).
    """
    n_limit = int(n_limit)
    if n_limit < 16:
        raise ContractError("window formulas need n_limit >= 16")
    loglog = math.log(math.log(n_limit))
    exponent = math.log(n_limit) ** (1.0 / loglog ** (4.0 / 9.0))
    upper = math.exp(exponent)
    lower = math.exp(math.exp(-loglog ** (1.0 / 3.0)) * exponent)
    return lower, upper


def prime_window(n_limit: int | None = None,
                 overrides: dict | None = None) -> PrimeWindow:
    """Prime window for shift averaging, by formula or explicit bounds.

    overrides, when given, is a mapping with keys "lower" and "upper"
    that replaces the formula edges; the formula values are still
    recorded when n_limit is supplied.  An empty window raises
    DegenerateWindowError carrying the offending edges.
    """
    formula_lower = formula_upper = None
    if n_limit is not None:
        formula_lower, formula_upper = window_formula_bounds(n_limit)
    if overrides is not None:
        unknown = set(overrides) - {"lower", "upper"}
        if unknown:
            raise ContractError(f"unknown window overrides: {sorted(unknown)}")
        lower = float(overrides.get("lower", formula_lower if formula_lower is not None else 0.0))
        upper = float(overrides.get("upper", formula_upper if formula_upper is not None else 0.0))
    else:
        if n_limit is None:
            raise ContractError("prime_window needs n_limit or overrides")
        if n_limit < 10 ** 4:
            raise ContractError(
                "formula window wants n_limit >= 10^4; pass overrides below that")
        lower, upper = formula_lower, formula_upper
    if not lower < upper:
        raise DegenerateWindowError(
            f"window edges collapsed: lower={lower!r} upper={upper!r}",
            lower=lower, upper=upper)
    if upper < 2.0:
        raise DegenerateWindowError(
            f"no primes at or below {upper!r}", lower=lower, upper=upper)
    table = sieve.enumerate_primes(int(math.floor(upper)))
    primes = table.primes[table.primes >= lower]
    if primes.size == 0:
        raise DegenerateWindowError(
            f"no primes in [{lower!r}, {upper!r}]", lower=lower, upper=upper)
    mass = float((1.0 / primes.astype(np.float64)).sum())
    return PrimeWindow(lower=float(lower), upper=float(upper), primes=primes,
                       mass=mass, formula_lower=formula_lower,
                       formula_upper=formula_upper)


# ---------------------------------------------------------------------------
# Fourier expansion over a symmetric integer interval


@dataclass(frozen=True)
class FourierTable:
    """DFT coefficients of a bounded function sampled on an interval.

    Frequencies run over the interval itself; since the characters
    e(xi*n/|I|) only depend on xi mod |I|, any |I| consecutive integers
    index the full dual group.
    """

    members: tuple
    coefficients: dict = field(compare=False)

    @property
    def size(self) -> int:
        return len(self.members)

    def value_at(self, n: int) -> complex:
        size = self.size
        total = 0.0 + 0.0j
        for xi, coef in self.coefficients.items():
            total += coef * np.exp(2j * np.pi * xi * n / size)
        return complex(total)


def _interval_members(interval) -> np.ndarray:
    if isinstance(interval, pretentious.FrequencyFamily):
        members = np.asarray(interval.members, dtype=np.int64)
    else:
        members = np.asarray(list(interval), dtype=np.int64)
    if members.size == 0:
        raise ContractError("interval must be nonempty")
    if members.size > 1 and not np.all(np.diff(members) == 1):
        raise ContractError("interval must be consecutive integers")
    return members


def fourier_expand(b: BoundedFunction, interval) -> FourierTable:
    """Expand b over the interval so b(n) = sum over xi of b^(xi) e(xi n/|I|).

    The interval may be a FrequencyFamily, a range, or any sequence of
    consecutive integers; frequencies range over the same interval.
    """
    members = _interval_members(interval)
    size = members.size
    samples = np.array([b(int(n)) for n in members], dtype=np.complex128)
    # xi rows, n columns; direct DFT is fine at these interval sizes.
    phase = np.exp(-2j * np.pi * np.outer(members, members) / size)
    coefs = phase @ samples / size
    coefficients = {int(xi): complex(c) for xi, c in zip(members, coefs)}
    return FourierTable(members=tuple(int(m) for m in members),
                        coefficients=coefficients)


def parseval_audit(table: FourierTable, b: BoundedFunction) -> dict:
    """Compare coefficient energy with sample energy over the interval."""
    coef_energy = sum(abs(c) ** 2 for c in table.coefficients.values())
    sample_energy = sum(abs(b(int(n))) ** 2 for n in table.members) / table.size
    scale = max(sample_energy, 1e-300)
    return {
        "coefficient_energy": float(coef_energy),
        "sample_energy": float(sample_energy),
        "relative_gap": abs(coef_energy - sample_energy) / scale,
    }


# ---------------------------------------------------------------------------
# Reduced mean-square sums


_inner_mean_cache: dict = {}


def _mode_table(xi: int, size: int) -> np.ndarray:
    z = np.exp(2j * np.pi * xi / size)
    return z ** np.arange(NBINS)


def _inner_log_mean(n_limit: int, xi: int, size: int) -> complex:
    """Log-weighted mean of e(xi*count(m)/size) over m <= n_limit, cached."""
    key = (n_limit, xi, size)
    hit = _inner_mean_cache.get(key)
    if hit is not None:
        return hit
    profile = profiles.two_point_profile(n_limit, 0)
    table = _mode_table(xi, size)
    value = complex((profile.log_hist @ table) / profile.harmonic_mass)
    if len(_inner_mean_cache) > 256:
        _inner_mean_cache.clear()
    _inner_mean_cache[key] = value
    return value


def _window_shift_mean(values: np.ndarray, window: PrimeWindow,
                       n_limit: int) -> np.ndarray:
    """Window-averaged shifts: out[n-1] = E over p of values[n+p-1], n <= N.

    values holds g(m) for m = 1 .. N + max prime (index m-1).
    """
    primes = window.primes
    weights = window.weights / window.mass
    if primes.size <= _GATHER_WINDOW_LIMIT:
        out = np.zeros(n_limit, dtype=np.complex128)
        for p, w in zip(primes, weights):
            out += w * values[p : p + n_limit]
        return out
    # Large windows: one overlap-add convolution instead of many gathers.
    from scipy.signal import oaconvolve

    kernel = np.zeros(window.max_prime + 1, dtype=np.float64)
    kernel[primes] = weights
    full = oaconvolve(values, kernel[::-1])
    start = kernel.size - 1
    return full[start : start + n_limit]


def reduced_sum_terms(n_limit: int, window: PrimeWindow, xi_set,
                      counts: np.ndarray | None = None) -> dict:
    """Per-frequency terms of the reduced sum.

    Each term is the log-weighted mean over n <= N of
    |E over window primes p of e(xi*count(n+p)/|I|) - inner log mean|^2.
    Frequencies must lie in the symmetric interval for scale N; xi = 0
    contributes exactly 0.
    """
    n_limit = int(n_limit)
    family = pretentious.frequency_family(n_limit)
    allowed = set(family.members)
    xi_list = [int(x) for x in xi_set]
    for xi in xi_list:
        if xi not in allowed:
            raise ContractError(
                f"frequency {xi} outside the interval for n_limit={n_limit}")
    need = n_limit + window.max_prime
    if counts is None:
        counts = profiles.shared_counts(need + 1)
    if counts.shape[0] < need:
        raise ContractError("counts must cover n = 1 .. N + max window prime")

    inv_n = 1.0 / np.arange(1, n_limit + 1, dtype=np.float64)
    mass = averaging.harmonic_mass(n_limit)
    terms: dict = {}
    for xi in xi_list:
        if xi % family.size == 0:
            terms[xi] = 0.0
            continue
        table = _mode_table(xi, family.size)
        values = table[counts[:need]]
        inner = _window_shift_mean(values, window, n_limit)
        inner -= _inner_log_mean(n_limit, xi, family.size)
        gap_sq = inner.real ** 2 + inner.imag ** 2
        terms[xi] = float((gap_sq @ inv_n) / mass)
    return terms


def reduced_sum(n_limit: int, window: PrimeWindow, xi_set,
                counts: np.ndarray | None = None) -> float:
    """Total reduced sum over the given frequency set."""
    return float(sum(reduced_sum_terms(n_limit, window, xi_set, counts).values()))


def reduction_inequality_audit(a: BoundedFunction, b: BoundedFunction,
                               n_limit: int, window: PrimeWindow,
                               audit_constant: float = AUDIT_CONSTANT) -> dict:
    """Check the correlation error against the square root of the reduced sum.

    lhs is |log two-point mean - product of marginal log means| at shift 1;
    sqrt_reduced is the root of the reduced sum over the full frequency
    interval; the audit term audit_constant * (loglog N)^(-1/6) stands in
    for the error terms the comparison absorbs.  slack should stay >= 0.
    """
    n_limit = int(n_limit)
    family = pretentious.frequency_family(n_limit)
    profile = profiles.two_point_profile(n_limit, 1)
    ta, tb = a.table(), b.table()
    lhs_mean = (ta @ profile.joint_log @ tb) / profile.harmonic_mass
    marg = profiles.two_point_profile(n_limit, 0)
    mean_a = (marg.log_hist @ ta) / marg.harmonic_mass
    mean_b = (marg.log_hist @ tb) / marg.harmonic_mass
    lhs = abs(lhs_mean - mean_a * mean_b)
    total = reduced_sum(n_limit, window, family.members)
    sqrt_reduced = math.sqrt(total)
    audit_term = audit_constant * math.log(math.log(n_limit)) ** (-1.0 / 6.0)
    return {
        "lhs": float(lhs),
        "sqrt_reduced": sqrt_reduced,
        "audit_term": audit_term,
        "slack": sqrt_reduced - float(lhs) + audit_term,
    }


# ---------------------------------------------------------------------------
# Taylor truncation of e(x)


def taylor_truncation(x: float, order: int) -> dict:
    """Degree-order Taylor approximation of e(x) with its tail bound.

    approx = sum over k <= order of (2 pi i x)^k / k!; the guarantee is
    |e(x) - approx| <= (2 pi |x|)^(order+1) / (order+1)!.
    """
    order = int(order)
    if order < 0:
        raise ContractError("order must be nonnegative")
    if order > 10 ** 4:
        raise ContractError("order capped at 10^4")
    x = float(x)
    arg = 2j * math.pi * x
    term = 1.0 + 0.0j
    total = 1.0 + 0.0j
    for k in range(1, order + 1):
        term *= arg / k
        total += term
    if x == 0.0:
        bound = 0.0
    else:
        log_bound = (order + 1) * math.log(2.0 * math.pi * abs(x)) \
            - math.lgamma(order + 2)
        try:
            bound = math.exp(log_bound)
        except OverflowError:
            bound = math.inf
    return {"approx": complex(total), "bound": bound}


# ---------------------------------------------------------------------------
# Truncation gap for the multiplicity count


def omega_truncation_gap(n_limit: int, p: int, q: int, t: float = 1.0,
                         cutoff: float | None = None) -> dict:
    """Measure what truncating the multiplicity count at a cutoff costs.

    Returns the plain mean of |count(n) - truncated(n)| over n <= N and
    the gap between the two exponential averages
    E e(t*(count(n+p) - count(n+q)) / sqrt(loglog N)), with the full and
    the truncated count.  cutoff defaults to the shrinking formula
    N^(1/(loglog N)^8), which stays below 2 for every 64-bit N; the
    truncated count is then identically zero.  Pass an explicit cutoff
    (e.g. N itself, which reduces the truncation to the distinct-prime
    count) to exercise a nontrivial comparison.
    """
    n_limit, p, q = int(n_limit), int(p), int(q)
    if min(p, q) < 1:
        raise ContractError("shifts must be positive")
    if 10 * max(p, q) > n_limit:
        raise ContractError("shifts must satisfy 10*max(p, q) <= n_limit")
    shrinking_cutoff = sieve.truncation_cutoff(n_limit)
    if cutoff is None:
        cutoff = shrinking_cutoff
    cutoff = float(cutoff)
    hi = n_limit + max(p, q) + 1
    counts = profiles.shared_counts(hi)
    if cutoff < 2.0:
        truncated = np.zeros(hi - 1, dtype=counts.dtype)
    else:
        truncated = sieve.factor_counts(
            1, hi, sieve.TruncatedOmega(cutoff)).counts
    gap = counts[:n_limit].astype(np.int64) - truncated[:n_limit]
    mean_abs = float(np.abs(gap).mean())

    scale = math.sqrt(math.log(math.log(n_limit)))
    # Pair differences live in (-NBINS, NBINS); a phase table covers them.
    diffs = np.arange(-(NBINS - 1), NBINS, dtype=np.float64)
    phases = np.exp(2j * np.pi * t * diffs / scale)

    def exp_mean(arr: np.ndarray) -> complex:
        d = arr[p : p + n_limit].astype(np.int64) - arr[q : q + n_limit]
        return complex(phases[d + (NBINS - 1)].mean())

    exp_gap = abs(exp_mean(counts) - exp_mean(truncated))
    return {
        "mean_abs_gap": mean_abs,
        "exp_gap": float(exp_gap),
        "cutoff": cutoff,
        "formula_cutoff": shrinking_cutoff,
    }


# ---------------------------------------------------------------------------
# Prime exponential sums and major arcs


def prime_exponential_sum(window: PrimeWindow, alpha: float) -> complex:
    """Harmonically weighted mean of e(p*alpha) over the window primes."""
    phases = np.exp(2j * np.pi * window.primes.astype(np.float64) * alpha)
    return complex((window.weights @ phases) / window.mass)


def _abs_sum_grid(window: PrimeWindow, alphas: np.ndarray) -> np.ndarray:
    primes = window.primes.astype(np.float64)
    weights = window.weights / window.mass
    acc = np.zeros(alphas.size, dtype=np.complex128)
    for p, w in zip(primes, weights):
        acc += w * np.exp(2j * np.pi * p * alphas)
    return np.abs(acc)


def major_arc_measure(window: PrimeWindow, epsilon: float,
                      grid_resolution: int) -> float:
    """Grid estimate of the measure of {alpha in [0,1): |sum| > epsilon}.

    The grid must have at least 10 * max(window prime) points so that
    cells are shorter than a tenth of the Lipschitz scale of the sum;
    cells where the threshold is crossed are refined by bisection.
    """
    if not epsilon > 0.0:
        raise ContractError("epsilon must be positive")
    grid_resolution = int(grid_resolution)
    if grid_resolution < 10 * window.max_prime:
        raise ContractError(
            "grid_resolution must be at least 10 * max window prime")
    spacing = 1.0 / grid_resolution
    alphas = np.arange(grid_resolution, dtype=np.float64) * spacing
    values = _abs_sum_grid(window, alphas)
    above = values > epsilon
    nxt = np.roll(above, -1)
    measure = spacing * float(np.count_nonzero(above & nxt))
    mixed = np.nonzero(above != nxt)[0]

    def crossing(lo: float, hi: float, lo_above: bool) -> float:
        # Bisect |sum|(alpha) - epsilon; 30 steps pin the root well past
        # the grid accuracy.
        for _ in range(30):
            mid = 0.5 * (lo + hi)
            mid_above = abs(prime_exponential_sum(window, mid)) > epsilon
            if mid_above == lo_above:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    for j in mixed:
        lo = alphas[j]
        hi = lo + spacing
        root = crossing(lo, hi, bool(above[j]))
        # Count the sub-interval lying on the "above" side.
        measure += (root - lo) if above[j] else (lo + spacing - root)
    return measure


# ---------------------------------------------------------------------------
# CSV sweeps


def write_xi_sweep_csv(path, terms: dict) -> None:
    """Write frequency/term rows, frequencies sorted ascending."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["xi", "term"])
        for xi in sorted(terms):
            writer.writerow([xi, format(terms[xi], ".17g")])


def write_alpha_sweep_csv(path, window: PrimeWindow, alphas) -> None:
    """Write alpha/abs_sum rows for the window exponential sum."""
    alphas = np.asarray(alphas, dtype=np.float64)
    magnitudes = _abs_sum_grid(window, alphas)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["alpha", "abs_sum"])
        for alpha, mag in zip(alphas, magnitudes):
            writer.writerow([format(alpha, ".17g"), format(mag, ".17g")])
