"""Windowed divisor-function sieve and divisor sums over progressions.

tau(n) counts divisors.  The sieve marks a window [start, start+len) by
walking divisors d and bumping every multiple; symmetry d <-> n/d means we
only walk d <= sqrt(n), add 2 per pair, and correct perfect squares by 1.
Everything is exact int64 / uint32.

S(X; a, q) = sum of tau(n) over n <= X, n = a mod q comes in three exact
routes that the tests play against each other:

  * naive: sieve tau on [1, X] and bucket by residue,
  * hyperbola: count lattice points dm <= X with dm = a mod q per residue
    class in O(sqrt(X) * q) without materializing tau,
  * single: same counting for one residue only, O(sqrt(X)) modular solves.

The identity sum_a S(X; a, q) = sum_{n<=X} tau(n), with the right side
computed by the classical 2*sum floor(X/d) - floor(sqrt(X))^2 formula, is
the row-sum check every route must pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidRange, WindowTooLarge

DEFAULT_MEMORY_BUDGET = 2 * 2**30  # bytes
_WINDOW_CAP = 2**40  # windows must sit below this


@dataclass(frozen=True)
class TauTable:
    """tau(n) for n in [start, start + len(values))."""

    start: int
    values: np.ndarray

    def __getitem__(self, n: int) -> int:
        return int(self.values[n - self.start])

    @property
    def stop(self) -> int:
        return self.start + len(self.values)


def sieve_tau(start: int, length: int, memory_budget: int = DEFAULT_MEMORY_BUDGET) -> TauTable:
    """Exact tau on [start, start+length), deep windows allowed."""
    if start < 1 or length < 1:
        raise InvalidRange(f"need start >= 1 and length >= 1, got {start}, {length}")
    end = start + length
    if end > _WINDOW_CAP:
        raise InvalidRange(f"window reaches {end}, beyond the {_WINDOW_CAP} cap")
    if 4 * length > memory_budget:
        raise WindowTooLarge(f"window of {length} entries exceeds {memory_budget} byte budget")
    tau = np.zeros(length, dtype=np.uint32)
    dmax = math.isqrt(end - 1)
    for d in range(1, dmax + 1):
        lo = max(start, d * (d + 1))
        first = -(-lo // d) * d
        if first < end:
            tau[first - start :: d] += 2
    e = math.isqrt(start - 1) + 1
    while e * e < end:
        tau[e * e - start] += 1
        e += 1
    return TauTable(start=start, values=tau)


def total_divisor_sum(X: int) -> int:
    """sum_{n <= X} tau(n) by the hyperbola identity; exact."""
    if X < 1:
        raise InvalidRange(f"need X >= 1, got {X}")
    r = math.isqrt(X)
    d = np.arange(1, r + 1, dtype=np.int64)
    return int(2 * np.sum(X // d)) - r * r


@dataclass(frozen=True)
class ProgressionSumVector:
    """S(X; a, q) for every residue a, index a = 0..q-1."""

    X: int
    q: int
    sums: np.ndarray

    def __getitem__(self, a: int) -> int:
        return int(self.sums[a % self.q])

    def total(self) -> int:
        return int(self.sums.sum())


def _progressions_naive(X: int, q: int, memory_budget: int) -> np.ndarray:
    buckets = np.zeros(q, dtype=np.int64)
    seg = min(X, max(q, memory_budget // 16, 1 << 20))
    start = 1
    while start <= X:
        length = min(seg, X - start + 1)
        tab = sieve_tau(start, length, memory_budget)
        idx = np.arange(start, start + length, dtype=np.int64) % q
        # per-bucket totals stay far below 2^53, so float accumulation is exact
        buckets += np.bincount(idx, weights=tab.values.astype(np.float64), minlength=q).astype(
            np.int64
        )
        start += length
    return buckets


def _progressions_hyperbola(X: int, q: int) -> np.ndarray:
    r = np.arange(q, dtype=np.int64)
    buckets = np.zeros(q, dtype=np.float64)
    D = math.isqrt(X)
    for d in range(1, D + 1):
        hi = X // d
        cnt = (hi - r) // q - (d - 1 - r) // q
        idx = d * r % q
        buckets += np.bincount(idx, weights=cnt.astype(np.float64), minlength=q)
    S = 2 * buckets.astype(np.int64)
    e = np.arange(1, D + 1, dtype=np.int64)
    np.subtract.at(S, e * e % q, 1)
    return S


def divisor_sum_progressions(
    X: int,
    q: int,
    method: str = "auto",
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
) -> ProgressionSumVector:
    """All S(X; a, q) at once.  method in {auto, naive, hyperbola}."""
    if X < 1:
        raise InvalidRange(f"need X >= 1, got {X}")
    if q < 1 or q > X:
        raise InvalidRange(f"need 1 <= q <= X, got q = {q}, X = {X}")
    if method == "auto":
        # hyperbola does isqrt(X)*q bucket updates, naive about X*log X
        method = "hyperbola" if math.isqrt(X) * q <= 24 * X else "naive"
    if method == "naive":
        sums = _progressions_naive(X, q, memory_budget)
    elif method == "hyperbola":
        sums = _progressions_hyperbola(X, q)
    else:
        raise ValueError(f"unknown method {method!r}")
    return ProgressionSumVector(X=X, q=q, sums=sums)


def progression_sum_single(X: int, q: int, a: int) -> int:
    """S(X; a, q) for one residue in O(sqrt(X)) time, O(1) space."""
    if X < 1:
        raise InvalidRange(f"need X >= 1, got {X}")
    if q < 1 or q > X:
        raise InvalidRange(f"need 1 <= q <= X, got q = {q}, X = {X}")
    a %= q
    total = 0
    D = math.isqrt(X)
    for d in range(1, D + 1):
        g = math.gcd(d, q)
        if a % g:
            continue
        qq = q // g
        m0 = (a // g) * pow(d // g, -1, qq) % qq if qq > 1 else 0
        hi = X // d
        total += 2 * ((hi - m0) // qq - (d - 1 - m0) // qq)
    # remove the double-counted diagonal d = m
    e = np.arange(1, D + 1, dtype=np.int64)
    total -= int(np.count_nonzero(e * e % q == a))
    return total
