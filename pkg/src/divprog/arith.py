"""Elementary arithmetic: inverses, factorization, multiplicative functions.

Everything here is exact integer work.  Factorization is trial division
over a small prime wheel followed by Brent's variant of Pollard rho, which
is comfortable for the 62-bit moduli this package targets.  Primality is
deterministic Miller-Rabin with the standard twelve-witness set, correct
for all n < 3.3e24.

The Ramanujan sum r_d(a) = sum_{x in (Z/d)^*} e_d(ax) is computed through
its divisor form sum_{e | gcd(a,d)} e * mu(d/e); the exponential-sum
definition serves as the oracle in the tests, never here.  gcd(0, d) = d,
so r_d(0) = phi(d).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .errors import InvalidModulus, NotInvertible, NotPrime

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def mod_inverse(x: int, d: int) -> int:
    """Inverse of x modulo d, reduced to [0, d).  d = 1 gives 0."""
    if d <= 0:
        raise InvalidModulus(f"modulus must be positive, got {d}")
    if d == 1:
        return 0
    try:
        return pow(x, -1, d)
    except ValueError:
        raise NotInvertible(f"{x} is not invertible mod {d}") from None


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond 2^62."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int, rng: random.Random) -> int:
    """Brent cycle-finding; returns a nontrivial factor of composite odd n."""
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r <<= 1
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization as a sorted list of (prime, exponent) pairs."""
    if n <= 0:
        raise InvalidModulus(f"can only factor positive integers, got {n}")
    out: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    rng = random.Random(n)
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        g = _pollard_rho(m, rng)
        stack += [g, m // g]
    return sorted(out.items())


def divisors(n: int) -> list[int]:
    """All positive divisors of n, sorted ascending."""
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def mobius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def euler_phi(n: int) -> int:
    phi = 1
    for p, e in factorize(n):
        phi *= (p - 1) * p ** (e - 1)
    return phi


def tau_of(n: int) -> int:
    """Number of divisors; for bulk work use the sieve module instead."""
    t = 1
    for _, e in factorize(n):
        t *= e + 1
    return t


def ramanujan_sum(d: int, a: int) -> int:
    """r_d(a) via the divisor form.  Always an integer."""
    if d <= 0:
        raise InvalidModulus(f"modulus must be positive, got {d}")
    g = math.gcd(a, d)  # gcd(0, d) = d, as required
    return sum(e * mobius(d // e) for e in divisors(g))


def primitive_root(p: int) -> int:
    """Least primitive root of an odd prime p (and 1 for p = 2)."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p == 2:
        return 1
    qs = [q for q, _ in factorize(p - 1)]
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise AssertionError("unreachable: every prime has a primitive root")


@dataclass(frozen=True)
class MultiplicativeSieveTables:
    """Dense tables of spf / mu / phi on 1..limit, built in one linear pass.

    spf[n] is the smallest prime factor (spf[1] = 1).  Memory is three
    int64 arrays, about 24 bytes per entry.
    """

    limit: int
    spf: np.ndarray
    mobius: np.ndarray
    phi: np.ndarray

    @classmethod
    def build(cls, limit: int) -> "MultiplicativeSieveTables":
        if limit < 1:
            raise InvalidModulus(f"limit must be >= 1, got {limit}")
        spf = np.zeros(limit + 1, dtype=np.int64)
        for i in range(2, limit + 1):
            if spf[i] == 0:
                sl = spf[i::i]
                sl[sl == 0] = i
        spf[1] = 1
        mu = np.zeros(limit + 1, dtype=np.int64)
        phi = np.zeros(limit + 1, dtype=np.int64)
        mu[1] = phi[1] = 1
        spl = spf.tolist()  # plain-int access is ~3x faster in the loop
        mul = mu.tolist()
        phl = phi.tolist()
        for n in range(2, limit + 1):
            p = spl[n]
            m = n // p
            if m % p == 0:
                mul[n] = 0
                phl[n] = phl[m] * p
            else:
                mul[n] = -mul[m]
                phl[n] = phl[m] * (p - 1)
        mu = np.array(mul, dtype=np.int64)
        phi = np.array(phl, dtype=np.int64)
        return cls(limit=limit, spf=spf, mobius=mu, phi=phi)
