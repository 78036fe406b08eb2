"""Streaming reductions of factor-count blocks into small sufficient statistics.

Both correlation averages and level-set densities only see the count values
of n and n+shift, never n itself beyond its weight.  One chunked pass over a
counts block therefore compresses everything the downstream operations need
into 64-vectors and a 64x64 joint matrix per (N, shift):

  hist[l]        count of {n <= N : count(n) = l}
  log_hist[l]    sum of 1/n over that level set
  joint[k,l]     count of {n <= N : count(n) = k, count(n+shift) = l}
  joint_log[k,l] same pairs, 1/n-weighted

A module-level cache keeps the largest multiplicity block sieved so far and
serves smaller ranges as views, so a 1e8 sieve run is paid for once per
process.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import sieve
from .errors import ContractError

NBINS = 64
_CHUNK = 1 << 22


@dataclass(frozen=True)
class TwoPointProfile:
    n_limit: int
    shift: int
    hist: np.ndarray
    log_hist: np.ndarray
    joint: np.ndarray
    joint_log: np.ndarray
    harmonic_mass: float


_cached_block: sieve.FactorCountBlock | None = None
_profile_cache: dict = {}


def invalidate_cache() -> None:
    global _cached_block
    _cached_block = None
    _profile_cache.clear()


def adopt_block(block: sieve.FactorCountBlock) -> None:
    """Install an existing multiplicity block as the shared cache."""
    global _cached_block
    if block.mode.kind != "big" or block.lo != 1:
        raise ContractError("shared cache wants a multiplicity block starting at 1")
    if _cached_block is None or block.hi > _cached_block.hi:
        _cached_block = block


def shared_counts(hi: int, config: sieve.SieveConfig | None = None) -> np.ndarray:
    """Multiplicity counts for n in [1, hi), index n-1, served from cache."""
    global _cached_block
    if _cached_block is None or _cached_block.hi < hi:
        adopt_block(sieve.factor_counts(1, hi, sieve.BigOmega, config))
    return _cached_block.counts[: hi - 1]


def two_point_profile(n_limit: int, shift: int = 1,
                      counts: np.ndarray | None = None) -> TwoPointProfile:
    """Sufficient statistics for two-point averages over n <= N.

    counts, when given, must hold the multiplicity counts for
    n = 1 .. N+shift (index n-1); otherwise the shared cache supplies them.
    """
    n_limit, shift = int(n_limit), int(shift)
    if n_limit < 3:
        raise ContractError("profile needs N >= 3")
    if shift < 0:
        raise ContractError("profile needs shift >= 0")
    key = (n_limit, shift)
    if counts is None and key in _profile_cache:
        return _profile_cache[key]
    if counts is None:
        counts = shared_counts(n_limit + shift + 1)
    if counts.shape[0] < n_limit + shift:
        raise ContractError("counts must cover n = 1 .. N+shift")

    hist = np.zeros(NBINS, dtype=np.int64)
    log_hist = np.zeros(NBINS, dtype=np.float64)
    joint = np.zeros(NBINS * NBINS, dtype=np.int64)
    joint_log = np.zeros(NBINS * NBINS, dtype=np.float64)
    mass = 0.0
    for start in range(0, n_limit, _CHUNK):
        stop = min(start + _CHUNK, n_limit)
        c0 = counts[start:stop]
        c1 = counts[start + shift : stop + shift]
        inv_n = 1.0 / np.arange(start + 1, stop + 1, dtype=np.float64)
        mass += float(inv_n.sum())
        hist += np.bincount(c0, minlength=NBINS)
        log_hist += np.bincount(c0, weights=inv_n, minlength=NBINS)
        pair = c0.astype(np.int32) * NBINS + c1
        joint += np.bincount(pair, minlength=NBINS * NBINS)
        joint_log += np.bincount(pair, weights=inv_n, minlength=NBINS * NBINS)
    profile = TwoPointProfile(
        n_limit=n_limit,
        shift=shift,
        hist=hist,
        log_hist=log_hist,
        joint=joint.reshape(NBINS, NBINS),
        joint_log=joint_log.reshape(NBINS, NBINS),
        harmonic_mass=mass,
    )
    if len(_profile_cache) > 64:
        _profile_cache.clear()
    _profile_cache[key] = profile
    return profile
