"""Complete Kloosterman sums K_d(m, n) = sum_{x in (Z/d)^*} e_d(mx + n xbar).

The sums are real (x -> -x pairs conjugate terms), so the public value is
the real part with the accumulated imaginary part checked to be noise.
K_1 := 1 by the empty-group convention; the divisor-sum decomposition
needs the d = 1 term to contribute a unit.

Three routes, used against each other in the tests:

  * scalar evaluation over the unit group with a shared twiddle table,
  * batch over a: K_d(m, a) for many a through one length-d inverse DFT
    of the unit-indexed phase vector (K_d(m, .) is the Fourier transform
    of y -> e_d(m ybar) on Z_d),
  * full table: all K_d(m, n) at once from a 2-D inverse DFT of the
    indicator of {(x, xbar)}.

Classical identities (symmetry, degeneration to Ramanujan sums, twisted
multiplicativity, Weil's bound) are test oracles, not used in evaluation.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .arith import is_prime, tau_of
from .errors import InvalidModulus, WindowTooLarge

TWIDDLE_CAP = 10**7  # above this, phases are computed on the fly per call
_TABLE_CAP = 4096  # full d x d tables: 16 d^2 bytes of complex128

_IMAG_SLACK = 1e-9  # per-unit allowance on the accumulated imaginary part


def _inverse_table_prime(d: int) -> np.ndarray:
    """inv[x] for x in 1..d-1, linear-time recurrence, prime d."""
    inv = [0] * d
    if d > 1:
        inv[1 % d] = 1 % d
    for i in range(2, d):
        inv[i] = (d - (d // i) * inv[d % i]) % d
    return np.array(inv[1:], dtype=np.int64)


@functools.lru_cache(maxsize=64)
def _evaluator(d: int) -> "KloostermanEvaluator":
    return KloostermanEvaluator.build(d)


@dataclass(frozen=True)
class KloostermanEvaluator:
    """Unit group of Z/d with inverses and the e_d twiddle table."""

    d: int
    units: np.ndarray
    inverses: np.ndarray
    twiddle: np.ndarray | None  # e_d(k), k = 0..d-1; None above TWIDDLE_CAP

    @classmethod
    def build(cls, d: int) -> "KloostermanEvaluator":
        if d < 1:
            raise InvalidModulus(f"modulus must be >= 1, got {d}")
        if d > 10**8:
            # unit/inverse tables alone would be GBs; also keeps the int64
            # index arithmetic below overflow-free (m*x < 10^16 << 2^63)
            raise WindowTooLarge(f"complete sums over d = {d} are beyond desk scale")
        if d == 1:
            return cls(
                d=1,
                units=np.zeros(0, dtype=np.int64),
                inverses=np.zeros(0, dtype=np.int64),
                twiddle=np.ones(1, dtype=np.complex128),
            )
        x = np.arange(1, d, dtype=np.int64)
        units = x[np.gcd(x, d) == 1]
        if is_prime(d):
            inverses = _inverse_table_prime(d)
        else:
            inverses = np.array([pow(int(u), -1, d) for u in units], dtype=np.int64)
        twiddle = None
        if d <= TWIDDLE_CAP:
            twiddle = np.exp(2j * np.pi / d * np.arange(d))
        return cls(d=d, units=units, inverses=inverses, twiddle=twiddle)

    @property
    def phi(self) -> int:
        return len(self.units) if self.d > 1 else 1

    def _phases(self, idx: np.ndarray) -> np.ndarray:
        if self.twiddle is not None:
            return self.twiddle[idx]
        return np.exp(2j * np.pi / self.d * idx)

    def value_complex(self, m: int, n: int) -> complex:
        if self.d == 1:
            return 1.0 + 0.0j
        m %= self.d
        n %= self.d
        idx = (m * self.units + n * self.inverses) % self.d
        return complex(self._phases(idx).sum())

    def value(self, m: int, n: int) -> float:
        z = self.value_complex(m, n)
        if abs(z.imag) > _IMAG_SLACK * max(self.phi, 1):
            raise FloatingPointError(
                f"K_{self.d}({m},{n}) imaginary part {z.imag:.3e} exceeds tolerance"
            )
        return z.real

    def batch_over_a(self, m: int, a_values, method: str = "auto") -> np.ndarray:
        """K_d(m, a) for each a in a_values; 'direct', 'fft' or 'auto'."""
        a_arr = np.asarray(list(a_values), dtype=np.int64) % self.d
        if self.d == 1:
            return np.ones(len(a_arr))
        if method == "auto":
            direct_cost = len(a_arr) * max(self.phi, 1)
            fft_cost = 8 * self.d * max(math.log2(self.d), 1)
            method = "fft" if direct_cost > fft_cost and self.twiddle is not None else "direct"
        if method == "direct":
            f = self._phases(m % self.d * self.units % self.d)
            out = np.empty(len(a_arr))
            for i, a in enumerate(a_arr):
                z = (f * self._phases(int(a) * self.inverses % self.d)).sum()
                out[i] = z.real
            return out
        if method != "fft":
            raise ValueError(f"unknown method {method!r}")
        g = np.zeros(self.d, dtype=np.complex128)
        g[self.inverses] = self._phases(m % self.d * self.units % self.d)
        K_all = (self.d * np.fft.ifft(g)).real
        return K_all[a_arr]


def kloosterman(d: int, m: int, n: int) -> float:
    """K_d(m, n) as a real number."""
    return _evaluator(d).value(m, n)


def kloosterman_batch_over_a(d: int, m: int, a_values, method: str = "auto") -> np.ndarray:
    return _evaluator(d).batch_over_a(m, a_values, method=method)


def kloosterman_table(d: int) -> np.ndarray:
    """All K_d(m, n) as a d x d real array, row m, column n."""
    if d < 1:
        raise InvalidModulus(f"modulus must be >= 1, got {d}")
    if d > _TABLE_CAP:
        raise WindowTooLarge(f"full table for d = {d} exceeds the {_TABLE_CAP} cap")
    ev = _evaluator(d)
    if d == 1:
        return np.ones((1, 1))
    ind = np.zeros((d, d), dtype=np.complex128)
    ind[ev.units, ev.inverses] = 1.0
    return (d * d * np.fft.ifft2(ind)).real


@dataclass(frozen=True)
class WeilCheck:
    value: float
    bound: float
    ok: bool


def check_weil(d: int, m: int, n: int) -> WeilCheck:
    """|K_d(m,n)| against tau(d) gcd(m,n,d)^(1/2) d^(1/2)."""
    v = kloosterman(d, m, n)
    g = math.gcd(m % d if d > 1 else 0, n % d if d > 1 else 0, d)
    bound = tau_of(d) * math.sqrt(g) * math.sqrt(d)
    return WeilCheck(value=v, bound=bound, ok=abs(v) <= bound + 1e-6)
