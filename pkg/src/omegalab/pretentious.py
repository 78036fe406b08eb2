"""Pretentious distance machinery for 1-bounded multiplicative functions.

Distances are prime sums D(f,g;N)^2 = sum_{p<=N} (1 - Re f(p) conj(g(p)))/p.
The module covers the distance itself, grid infima over Archimedean twists
n^{it}, a Halasz-type mean-value audit, the frequency family of completely
multiplicative modes in the factor-count variable, Dirichlet character
construction from the unit-group structure, and residual checks of the
closed-form distance formula for the frequency family.

Frequencies are identified modulo the family size: e(xi*n/|I|) with integer
n depends only on xi mod |I|, so callers may pass any real xi (large
frequency labels land outside the canonical window at desk scale) and it is
folded exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import sieve
from .errors import ContractError
from .profiles import NBINS, two_point_profile

_MODULUS_SLACK = 1e-12


# ---------------------------------------------------------------------------
# multiplicative function specs

@dataclass(frozen=True)
class MultFunSpec:
    """Completely multiplicative, 1-bounded, via prime values.

    Primes not listed in prime_values take default_prime_value; the two
    workhorse specs (Liouville-like and the frequency modes) are constant
    on primes, which downstream code exploits.
    """

    default_prime_value: complex = 1.0 + 0.0j
    prime_values: dict = field(default_factory=dict)
    completely_multiplicative: bool = True

    def __post_init__(self):
        if abs(self.default_prime_value) > 1.0 + _MODULUS_SLACK:
            raise ContractError("default prime value must have modulus <= 1")
        for p, v in self.prime_values.items():
            if abs(v) > 1.0 + _MODULUS_SLACK:
                raise ContractError(f"prime value at {p} must have modulus <= 1")

    def value_at_prime(self, p: int) -> complex:
        return complex(self.prime_values.get(int(p), self.default_prime_value))

    def values_on(self, primes: np.ndarray) -> np.ndarray:
        out = np.full(primes.size, complex(self.default_prime_value),
                      dtype=np.complex128)
        if self.prime_values:
            for p, v in self.prime_values.items():
                idx = np.searchsorted(primes, p)
                if idx < primes.size and primes[idx] == p:
                    out[idx] = v
        return out

    def constant_prime_value(self):
        """The shared prime value, or None when overrides exist."""
        return None if self.prime_values else complex(self.default_prime_value)


def liouville_spec() -> MultFunSpec:
    return MultFunSpec(default_prime_value=-1.0 + 0.0j)


def unit_spec() -> MultFunSpec:
    return MultFunSpec()


def archimedean_spec_value(t: float, p) -> complex:
    """Prime value of n -> n^{it}: e^{i t log p}."""
    return np.exp(1j * t * np.log(np.asarray(p, dtype=np.float64)))


def factorize(n: int):
    """Trial-division factorization [(p, exponent), ...]; plumbing."""
    n = int(n)
    if n < 1:
        raise ContractError("factorization needs n >= 1")
    out = []
    for p in (2, 3):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    d = 5
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 2 if d % 6 == 5 else 4
    if n > 1:
        out.append((n, 1))
    return out


def eval_multfun(spec: MultFunSpec, n: int, factorization=None) -> complex:
    """f(n) as the product of prime values with multiplicity; f(1) = 1."""
    if factorization is None:
        factorization = factorize(n)
    value = 1.0 + 0.0j
    for p, e in factorization:
        value *= spec.value_at_prime(p) ** e
    return value


# ---------------------------------------------------------------------------
# frequency family

@dataclass(frozen=True)
class FrequencyFamily:
    N: int
    A: float
    radius: float        # A * sqrt(loglog N); the interval is (-radius, radius]
    members: tuple       # the integers of the interval
    size: int

    def fold(self, xi: float) -> float:
        """Reduce a frequency into the canonical window (exact identification)."""
        half = self.size / 2.0
        folded = math.fmod(xi, self.size)
        if folded > half:
            folded -= self.size
        elif folded <= -half:
            folded += self.size
        return folded


def frequency_family(n_limit: int) -> FrequencyFamily:
    if n_limit < 16:
        raise ContractError("frequency family needs loglog N > 0")
    loglog = math.log(math.log(n_limit))
    A = 4.0 * loglog ** (1.0 / 9.0)
    radius = A * math.sqrt(loglog)
    members = tuple(range(math.floor(-radius) + 1, math.floor(radius) + 1))
    return FrequencyFamily(N=int(n_limit), A=A, radius=radius,
                           members=members, size=len(members))


def mode_spec(family: FrequencyFamily, xi: float) -> MultFunSpec:
    """The completely multiplicative mode with prime value e(xi / |I|)."""
    theta = 2.0 * math.pi * xi / family.size
    return MultFunSpec(default_prime_value=complex(math.cos(theta), math.sin(theta)))


# ---------------------------------------------------------------------------
# prime sums and distances

_prime_cache: dict = {}


def _primes_upto(n_limit: int):
    """(primes, log primes, 1/p) for p <= N, served from a growing cache."""
    cached = _prime_cache.get("data")
    if cached is None or cached[0] < n_limit:
        table = sieve.enumerate_primes(max(n_limit, 10**5))
        primes = table.primes.astype(np.float64)
        _prime_cache["data"] = (table.limit, table.primes, np.log(primes), 1.0 / primes)
        cached = _prime_cache["data"]
    limit, primes, logs, invp = cached
    cut = int(np.searchsorted(primes, n_limit, side="right"))
    return primes[:cut], logs[:cut], invp[:cut]


def distance(f: MultFunSpec, g: MultFunSpec, n_limit: int) -> float:
    """Pretentious distance between two completely multiplicative specs."""
    if n_limit < 2:
        raise ContractError("distance needs N >= 2")
    primes, _, invp = _primes_upto(n_limit)
    fp = f.values_on(primes)
    gp = g.values_on(primes)
    total = float(np.sum((1.0 - (fp * np.conj(gp)).real) * invp))
    return math.sqrt(max(total, 0.0))


def distance_sq_to_twist(f: MultFunSpec, n_limit: int, t: float,
                         chi_table=None) -> float:
    """D(f, n -> chi(n) n^{it}; N)^2 for one t (chi optional)."""
    primes, logs, invp = _primes_upto(n_limit)
    fp = f.values_on(primes)
    gp = np.exp(1j * t * logs)
    if chi_table is not None:
        q = len(chi_table)
        gp = gp * np.asarray(chi_table)[(primes.astype(np.int64) % q)]
    return float(np.sum((1.0 - (fp * np.conj(gp)).real) * invp))


_trig_cache: dict = {}


def _trig_sums(n_limit: int, t_grid: np.ndarray):
    """C(t) = sum cos(t log p)/p and S(t) likewise, cached per (N, grid)."""
    key = (n_limit, t_grid.tobytes())
    if key in _trig_cache:
        return _trig_cache[key]
    _, logs, invp = _primes_upto(n_limit)
    C = np.empty(t_grid.size)
    S = np.empty(t_grid.size)
    for i, t in enumerate(t_grid):
        phase = t * logs
        C[i] = np.cos(phase) @ invp
        S[i] = np.sin(phase) @ invp
    if len(_trig_cache) > 8:
        _trig_cache.clear()
    _trig_cache[key] = (C, S)
    return C, S


def distance_sq_profile(f: MultFunSpec, n_limit: int, t_grid) -> np.ndarray:
    """D(f, n -> n^{it}; N)^2 along a t grid.

    Specs that are constant on primes share one cached pair of trig prime
    sums per (N, grid); general specs pay a per-spec scan.
    """
    t_grid = np.asarray(t_grid, dtype=np.float64)
    if t_grid.size == 0:
        raise ContractError("empty t grid")
    primes, logs, invp = _primes_upto(n_limit)
    h = float(np.sum(invp))
    z = f.constant_prime_value()
    if z is not None:
        C, S = _trig_sums(n_limit, t_grid)
        return h - z.real * C - z.imag * S
    fp = f.values_on(primes)
    u = fp.real * invp
    v = fp.imag * invp
    out = np.empty(t_grid.size)
    for i, t in enumerate(t_grid):
        phase = t * logs
        out[i] = h - np.cos(phase) @ u - np.sin(phase) @ v
    return out


def log_t_grid(t_max: float, points: int = 10**4, t_min: float = 1e-6) -> np.ndarray:
    """Symmetric grid on [-t_max, t_max]: 0 plus log-spaced magnitudes."""
    if not t_max > 0:
        raise ContractError("t_max must be positive")
    half = max(points // 2, 1)
    mags = np.geomspace(t_min, t_max, half)
    return np.concatenate((-mags[::-1], [0.0], mags))


def m0(f: MultFunSpec, n_limit: int, t_grid) -> dict:
    """Grid minimum of the squared distance to Archimedean twists.

    The grid argmin is refined by golden-section search on the bracketing
    interval; the squared distance is slowly varying in t (each prime term
    is Lipschitz with constant log p / p), so this pins the infimum to far
    below the audit tolerances.
    """
    t_grid = np.asarray(t_grid, dtype=np.float64)
    if t_grid.size == 0:
        raise ContractError("empty t grid")
    t_grid = np.sort(t_grid)
    values = distance_sq_profile(f, n_limit, t_grid)
    i = int(np.argmin(values))
    best_t, best_v = float(t_grid[i]), float(values[i])

    lo = t_grid[max(i - 1, 0)]
    hi = t_grid[min(i + 1, t_grid.size - 1)]
    if hi > lo:
        def d2(t):
            return distance_sq_to_twist(f, n_limit, t)
        phi = (math.sqrt(5.0) - 1.0) / 2.0
        a, b = float(lo), float(hi)
        c = b - phi * (b - a)
        d = a + phi * (b - a)
        fc, fd = d2(c), d2(d)
        for _ in range(40):
            if fc <= fd:
                b, d, fd = d, c, fc
                c = b - phi * (b - a)
                fc = d2(c)
            else:
                a, c, fc = c, d, fd
                d = a + phi * (b - a)
                fd = d2(d)
            if b - a < 1e-12 * max(1.0, abs(a)):
                break
        for t, v in ((c, fc), (d, fd)):
            if v < best_v:
                best_t, best_v = float(t), float(v)
    return {"value": best_v, "argmin_t": best_t}


def dist_formula_residual(xi: float, n_limit: int, t: float) -> float:
    """Gap between the mode distance and its two-term closed form.

    Measured: D(mode_xi, n -> n^{it}; N)^2.  Closed form:
    (1 - cos(2 pi xi/|I|)) loglog N + cos(2 pi xi/|I|) log(1 + |t| log N).
    """
    if abs(t) > 10.0:
        raise ContractError("residual audit covers |t| <= 10")
    family = frequency_family(n_limit)
    if not math.isfinite(xi):
        raise ContractError("xi must be finite")
    theta = 2.0 * math.pi * family.fold(xi) / family.size
    spec = MultFunSpec(default_prime_value=complex(math.cos(theta), math.sin(theta)))
    measured = distance_sq_to_twist(spec, n_limit, t)
    loglog = math.log(math.log(n_limit))
    formula = ((1.0 - math.cos(theta)) * loglog
               + math.cos(theta) * math.log(1.0 + abs(t) * math.log(n_limit)))
    return abs(measured - formula)


# ---------------------------------------------------------------------------
# Dirichlet characters

@dataclass(frozen=True)
class TwistSpec:
    modulus: int
    character: tuple       # values on residues 0..q-1
    t: float = 0.0
    principal: bool = False

    def __post_init__(self):
        q = self.modulus
        if q < 1:
            raise ContractError("modulus must be >= 1")
        if len(self.character) != q:
            raise ContractError("character table must have q entries")
        for r, v in enumerate(self.character):
            unit = math.gcd(r, q) == 1
            if unit and abs(abs(v) - 1.0) > 1e-9:
                raise ContractError("character must be unimodular on units")
            if not unit and abs(v) > 1e-12:
                raise ContractError("character must vanish off units")
        if abs(self.character[1 % q] - 1.0) > 1e-9:
            raise ContractError("character must send 1 to 1")


def _primitive_root(p: int, e: int) -> int:
    phi = p - 1
    factors = [f for f, _ in factorize(phi)]
    g = 2
    while True:
        if all(pow(g, phi // f, p) != 1 for f in factors):
            break
        g += 1
    if e >= 2 and pow(g, p - 1, p * p) == 1:
        g += p
    return g


def _component_generators(p: int, e: int):
    """Generators and orders of the unit group mod p**e."""
    pe = p**e
    if p == 2:
        if e == 1:
            return pe, []
        if e == 2:
            return pe, [(3, 2)]
        return pe, [(pe - 1, 2), (5, 2 ** (e - 2))]
    return pe, [(_primitive_root(p, e), (p - 1) * p ** (e - 1))]


def _component_logs(pe: int, gens):
    """Map unit -> exponent tuple over the generator list."""
    logs = {1 % pe: tuple(0 for _ in gens)}
    if not gens:
        return logs
    # enumerate the direct product of the cyclic factors
    reps = [1]
    exps = [()]
    for g, order in gens:
        new_reps, new_exps = [], []
        power = 1
        for k in range(order):
            for r, ex in zip(reps, exps):
                new_reps.append(r * power % pe)
                new_exps.append(ex + (k,))
            power = power * g % pe
        reps, exps = new_reps, new_exps
    return dict(zip(reps, exps))


def dirichlet_characters(q: int) -> list:
    """All phi(q) characters mod q from the unit-group structure.

    Built per prime-power component with explicit generators, then glued
    along the Chinese remainder decomposition; deterministic order with
    the principal character first.
    """
    q = int(q)
    if q < 1:
        raise ContractError("modulus must be >= 1")
    if q > 10**4:
        raise ContractError("character construction capped at q = 1e4")
    if q == 1:
        return [TwistSpec(1, (1.0 + 0.0j,), principal=True)]

    components = [_component_generators(p, e) for p, e in factorize(q)]
    logs = [_component_logs(pe, gens) for pe, gens in components]
    orders = [tuple(order for _, order in gens) for _, gens in components]

    # character index = one exponent tuple per component's generator list
    choices = [()]
    for ords in orders:
        choices = local_product(choices, ords)

    out = []
    for choice in choices:
        table = np.zeros(q, dtype=np.complex128)
        for r in range(q):
            if math.gcd(r, q) != 1:
                continue
            val = 1.0 + 0.0j
            for (pe, _), comp_logs, ords, js in zip(components, logs, orders, choice):
                exps = comp_logs[r % pe]
                for a, j, m in zip(exps, js, ords):
                    val *= np.exp(2j * np.pi * (a * j % m) / m)
            table[r] = val
        principal = all(j == 0 for js in choice for j in js)
        out.append(TwistSpec(q, tuple(table.tolist()), principal=principal))
    out.sort(key=lambda ts: not ts.principal)
    return out


def local_product(prefixes, orders):
    """Extend index prefixes by one component's generator index tuples."""
    local = [()]
    for m in orders:
        local = [ex + (j,) for ex in local for j in range(m)]
    return [prefix + (loc,) for prefix in prefixes for loc in local]


def twisted_distance(f: MultFunSpec, chi: TwistSpec, n_limit: int) -> float:
    """D(f, n -> chi(n) n^{it}; N); p | q terms contribute (1 - 0)/p."""
    if n_limit < 2:
        raise ContractError("distance needs N >= 2")
    value = distance_sq_to_twist(f, n_limit, chi.t, chi_table=chi.character)
    return math.sqrt(max(value, 0.0))


def character_table_csv(specs, path) -> None:
    """CSV export: one row per (character index, residue, re, im)."""
    with open(path, "w", newline="") as fh:
        fh.write("character,residue,re,im,principal\n")
        for i, ts in enumerate(specs):
            for r, v in enumerate(ts.character):
                fh.write("%d,%d,%.17g,%.17g,%d\n"
                         % (i, r, v.real, v.imag, int(ts.principal)))


# ---------------------------------------------------------------------------
# mean values and the Halasz audit

def eval_multfun_range(spec: MultFunSpec, n_limit: int) -> np.ndarray:
    """f(n) for n = 1..N (index n-1) via count lookup plus override fixups."""
    from .profiles import shared_counts

    counts = shared_counts(n_limit + 1)[:n_limit]
    base = complex(spec.default_prime_value)
    table = np.array([base**k for k in range(NBINS)], dtype=np.complex128)
    values = table[counts]
    for p, v in spec.prime_values.items():
        p = int(p)
        if abs(base) == 0.0:
            raise ContractError("override fixup needs a nonzero default value")
        ratio = complex(v) / base
        q = p
        while q <= n_limit:
            values[q - 1 :: q] *= ratio
            q *= p
    return values


def mean_over_range(spec: MultFunSpec, n_limit: int) -> complex:
    """Cesaro mean of f over [N]."""
    z = spec.constant_prime_value()
    if z is not None:
        profile = two_point_profile(n_limit, 0)
        table = np.array([z**k for k in range(NBINS)], dtype=np.complex128)
        return complex(table @ profile.hist) / n_limit
    values = eval_multfun_range(spec, n_limit)
    return complex(np.sum(values)) / n_limit


def halasz_audit(f: MultFunSpec, n_limit: int, t_grid) -> dict:
    """Mean value against the distance-based decay bound.

    bound = exp(-(1/16) * min over the grid of D(f, n^{it}; N)^2); the
    grid should cover |t| <= log N.  ratio = |mean| / bound.
    """
    if n_limit < 10**4:
        raise ContractError("mean-value audit wants N >= 1e4")
    mean = mean_over_range(f, n_limit)
    infimum = m0(f, n_limit, t_grid)
    bound = math.exp(-infimum["value"] / 16.0)
    return {"mean": mean, "bound": bound, "ratio": abs(mean) / bound,
            "m0": infimum}
