"""Multiplicative characters mod a prime, moment statistics, congruence counts.

Characters are indexed through one discrete-log table: fix a primitive
root g of p, let ind(x) be the log of x base g, and set

    chi_j(x) = e(j * ind(x) / (p - 1)),   j = 0 .. p-2,   chi_j(0) = 0.

chi_0 is principal, chi_j * chi_k = chi_{j+k mod p-1}, and orthogonality
(1/(p-1)) sum_j chi_j(a) = [a = 1 mod p] all come for free.

The fourth moment

    sum_{chi != chi_0} | sum_{x=K}^{K+H} chi(x) |^4

is computed for all characters at once: the inner sums are the length
(p-1) inverse DFT of the index histogram of [K, K+H] (residues counted
with floor-division multiplicity, so H may exceed p).  The O(pH) double
loop stays as the oracle.

The product-congruence count

    #{(x1..x4) in H1 x .. x H4 : p does not divide x1..x4,
      x1 x2 = x3 x4 mod p}

is a dot product of two product-residue histograms, never the 4-fold
loop except as a small-case oracle.  Its reference envelope is
H1H2H3H4/p + sqrt(H1H2H3H4).

Gauss sums follow the convention tau(chi) = sum_z conj(chi)(z) e_p(z),
with eta(chi) = conj(tau)/tau the unimodular factor in the twisted
Poisson formula.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .arith import is_prime, primitive_root
from .errors import InvalidRange, NotPrime, NotPrimitive

_BRUTE_CAP = 4 * 10**6  # pair-enumeration ceiling for the histogram route


@dataclass(frozen=True)
class CharacterTable:
    """Discrete-log table for the full character group mod an odd prime."""

    p: int
    g: int
    index: np.ndarray  # index[x] = ind_g(x) for x in [1, p-1]; index[0] = -1
    zeta_powers: np.ndarray  # e((p-1)-th roots of unity), k = 0 .. p-2

    @classmethod
    def build(cls, p: int) -> "CharacterTable":
        if not is_prime(p) or p == 2:
            raise NotPrime(f"need an odd prime, got {p}")
        g = primitive_root(p)
        index = np.full(p, -1, dtype=np.int64)
        x = 1
        for k in range(p - 1):
            index[x] = k
            x = x * g % p
        zeta = np.exp(2j * np.pi / (p - 1) * np.arange(p - 1))
        return cls(p=p, g=g, index=index, zeta_powers=zeta)

    @property
    def order(self) -> int:
        return self.p - 1

    def chi(self, j: int, x: int) -> complex:
        """chi_j(x); zero on multiples of p."""
        x %= self.p
        if x == 0:
            return 0j
        return complex(self.zeta_powers[j * self.index[x] % (self.p - 1)])

    def chi_row(self, j: int) -> np.ndarray:
        """chi_j on 0..p-1 as one array (0 at x = 0)."""
        row = np.zeros(self.p, dtype=np.complex128)
        xs = np.arange(1, self.p)
        row[xs] = self.zeta_powers[j % (self.p - 1) * self.index[xs] % (self.p - 1)]
        return row

    def conductor_is_primitive(self, j: int) -> bool:
        """Prime modulus: primitive iff non-principal."""
        return j % (self.p - 1) != 0


@functools.lru_cache(maxsize=64)
def character_table(p: int) -> CharacterTable:
    return CharacterTable.build(p)


def _residue_counts(p: int, K: int, H: int) -> np.ndarray:
    """How often each residue r = 0..p-1 appears among {K, ..., K+H}."""
    r = np.arange(p, dtype=np.int64)
    return (K + H - r) // p - (K - 1 - r) // p


def fourth_moment(p: int, K: int, H: int) -> float:
    """sum over non-principal chi of |sum_{x=K}^{K+H} chi(x)|^4."""
    if H < 0:
        raise InvalidRange(f"need H >= 0, got {H}")
    table = character_table(p)
    cnt = _residue_counts(p, K, H)
    hist = np.zeros(p - 1, dtype=np.float64)
    xs = np.arange(1, p)
    np.add.at(hist, table.index[xs], cnt[xs])
    inner = (p - 1) * np.fft.ifft(hist)  # inner[j] = sum_x chi_j(x), all j at once
    mags = np.abs(inner[1:]) ** 2
    return float(np.sum(mags * mags))


def fourth_moment_brute(p: int, K: int, H: int, x_budget: int = 10**6) -> float:
    """Literal double loop over characters and x; the test oracle."""
    if H < 0:
        raise InvalidRange(f"need H >= 0, got {H}")
    if H + 1 > x_budget:
        raise InvalidRange(f"brute force over {H + 1} terms exceeds budget")
    table = character_table(p)
    xs = np.arange(K, K + H + 1, dtype=np.int64) % p
    xs = xs[xs != 0]
    total = 0.0
    for j in range(1, p - 1):
        s = table.zeta_powers[j * table.index[xs] % (p - 1)].sum()
        total += abs(s) ** 4
    return total


def gauss_sum(table: CharacterTable, j: int) -> complex:
    """tau(chi_j) = sum_{z=1}^{p} conj(chi_j)(z) e_p(z)."""
    p = table.p
    z = np.arange(1, p)
    phases = np.exp(2j * np.pi / p * z)
    chibar = np.conj(table.zeta_powers[j % (p - 1) * table.index[z] % (p - 1)])
    return complex(np.sum(chibar * phases))


def eta_factor(table: CharacterTable, j: int) -> complex:
    """conj(tau)/tau; unimodular for primitive chi_j."""
    if not table.conductor_is_primitive(j):
        raise NotPrimitive(f"chi_{j} mod {table.p} is principal")
    t = gauss_sum(table, j)
    return t.conjugate() / t


def _box_length(box: tuple[int, int]) -> int:
    lo, hi = box
    if hi < lo:
        raise InvalidRange(f"box ({lo}, {hi}) has negative length")
    return hi - lo + 1


def _product_histogram(p: int, box1: tuple[int, int], box2: tuple[int, int]) -> np.ndarray:
    """Counts of x1*x2 mod p over the two boxes, zero factors excluded."""
    H1, H2 = _box_length(box1), _box_length(box2)
    if H1 * H2 <= _BRUTE_CAP:
        x1 = np.arange(box1[0], box1[1] + 1, dtype=np.int64) % p
        x2 = np.arange(box2[0], box2[1] + 1, dtype=np.int64) % p
        x1 = x1[x1 != 0]
        x2 = x2[x2 != 0]
        prods = x1[:, None] * x2[None, :] % p
        return np.bincount(prods.ravel(), minlength=p).astype(np.int64)
    # large boxes: count residues first, convolve over the index group
    table = character_table(p)
    out = np.zeros(p, dtype=np.int64)
    c1 = _residue_counts(p, box1[0], box1[1] - box1[0])[1:].astype(np.float64)
    c2 = _residue_counts(p, box2[0], box2[1] - box2[0])[1:].astype(np.float64)
    xs = np.arange(1, p)
    h1 = np.zeros(p - 1)
    h2 = np.zeros(p - 1)
    np.add.at(h1, table.index[xs], c1)
    np.add.at(h2, table.index[xs], c2)
    conv = np.fft.irfft(np.fft.rfft(h1) * np.fft.rfft(h2), p - 1)
    # conv[k] counts pairs with ind(x1)+ind(x2) = k mod p-1, i.e. x1 x2 = g^k
    g_pow = np.empty(p - 1, dtype=np.int64)
    x = 1
    for k in range(p - 1):
        g_pow[k] = x
        x = x * table.g % p
    out[g_pow] = np.rint(conv).astype(np.int64)
    return out


def multiplicative_congruence_count(
    p: int,
    box1: tuple[int, int],
    box2: tuple[int, int],
    box3: tuple[int, int],
    box4: tuple[int, int],
) -> int:
    """Exact count of x1 x2 = x3 x4 mod p with no factor divisible by p."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if any(_box_length(b) == 0 for b in (box1, box2, box3, box4)):
        return 0
    h12 = _product_histogram(p, box1, box2)
    h34 = _product_histogram(p, box3, box4)
    return int(np.dot(h12, h34))


def multiplicative_congruence_count_brute(
    p: int,
    box1: tuple[int, int],
    box2: tuple[int, int],
    box3: tuple[int, int],
    box4: tuple[int, int],
) -> int:
    """4-fold loop oracle; only for small boxes."""
    if any(_box_length(b) > 64 for b in (box1, box2, box3, box4)):
        raise InvalidRange("brute-force oracle is limited to boxes of length <= 64")
    count = 0
    for x1 in range(box1[0], box1[1] + 1):
        for x2 in range(box2[0], box2[1] + 1):
            if x1 * x2 % p == 0:
                continue
            lhs = x1 * x2 % p
            for x3 in range(box3[0], box3[1] + 1):
                for x4 in range(box4[0], box4[1] + 1):
                    if x3 * x4 % p == 0:
                        continue
                    if lhs == x3 * x4 % p:
                        count += 1
    return count


@dataclass(frozen=True)
class CongruenceBoundReport:
    count: int
    p: int
    lengths: tuple[int, int, int, int]
    envelope: float
    ratio: float


def congruence_bound_report(
    count: int,
    p: int,
    box1: tuple[int, int],
    box2: tuple[int, int],
    box3: tuple[int, int],
    box4: tuple[int, int],
) -> CongruenceBoundReport:
    """count against the two-term envelope H../p + sqrt(H..)."""
    lengths = tuple(_box_length(b) for b in (box1, box2, box3, box4))
    prod = math.prod(lengths)
    envelope = prod / p + math.sqrt(prod)
    ratio = count / envelope if envelope > 0 else 0.0
    return CongruenceBoundReport(
        count=count, p=p, lengths=lengths, envelope=envelope, ratio=ratio
    )
