"""Main terms, error terms, and their averages over residue sets.

For the divisor sum S(X; a, q) the expected size is

    M(X; a, q) = (X/q) * P(log X; q, a),
    P(T; q, a) = sum_{d | q} (r_d(a)/d) * (T - 2 log d + 2 gamma - 1),

with r_d the Ramanujan sum and gamma Euler's constant, hard-coded below to
twenty digits so nothing here depends on a special-function library.  The
error term is R = S - M with S exact from the sieve module.  When
gcd(a, q) = 1 the polynomial collapses to the closed form

    M = (phi(q)/q^2) X (log X + 2 gamma - 1) - (2X/q) sum_{d|q} mu(d) log d / d,

kept here as an independent route for the tests.

Averages over a residue set A of reduced residues:

    D(X; A, q) = sum |R|,   E(X; A, q) = sum R,

and the exceptional set collects the a in [1, p-1] whose signed R reaches
X^(1/3 - kappa).  Interval sets mean {B+1, ..., B+A} reduced mod q; strict
mode rejects non-reduced members, lenient mode drops and counts them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .arith import divisors, euler_phi, is_prime, mobius, ramanujan_sum
from .errors import InvalidRange, NonReducedResidue, NotPrime
from .tausieve import divisor_sum_progressions, progression_sum_single

EULER_GAMMA = 0.57721566490153286061


@dataclass(frozen=True)
class MainTermPolynomial:
    """P(T; q, a) = c1*T + c0, with the per-divisor terms kept for audit."""

    q: int
    a: int
    divisor_terms: tuple[tuple[int, int], ...]  # (d, r_d(a)) for d | q
    c1: float
    c0: float

    @classmethod
    def build(cls, q: int, a: int) -> "MainTermPolynomial":
        if q < 2:
            raise InvalidRange(f"need q >= 2, got {q}")
        a %= q
        terms = tuple((d, ramanujan_sum(d, a)) for d in divisors(q))
        c1 = math.fsum(r / d for d, r in terms)
        c0 = math.fsum(r / d * (2 * EULER_GAMMA - 1 - 2 * math.log(d)) for d, r in terms)
        return cls(q=q, a=a, divisor_terms=terms, c1=c1, c0=c0)

    def evaluate(self, T: float) -> float:
        return self.c1 * T + self.c0

    def evaluate_term_by_term(self, T: float) -> float:
        """The defining double sum, no coefficient collection (audit route)."""
        return math.fsum(
            r / d * (T - 2 * math.log(d) + 2 * EULER_GAMMA - 1) for d, r in self.divisor_terms
        )


def main_term(X: int, q: int, a: int) -> float:
    """M(X; a, q) = (X/q) P(log X; q, a)."""
    if X < 1:
        raise InvalidRange(f"need X >= 1, got {X}")
    return X / q * MainTermPolynomial.build(q, a).evaluate(math.log(X))


def main_term_coprime(X: int, q: int) -> float:
    """Closed form of M for gcd(a, q) = 1; independent of a."""
    if X < 1 or q < 2:
        raise InvalidRange(f"need X >= 1 and q >= 2, got {X}, {q}")
    phi = euler_phi(q)
    tail = math.fsum(mobius(d) * math.log(d) / d for d in divisors(q))
    return phi / q**2 * X * (math.log(X) + 2 * EULER_GAMMA - 1) - 2 * X / q * tail


def main_term_vector(X: int, q: int) -> np.ndarray:
    """M(X; a, q) for all residues a = 0..q-1 at once."""
    if X < 1 or q < 2:
        raise InvalidRange(f"need X >= 1 and q >= 2, got {X}, {q}")
    T = math.log(X)
    M = np.zeros(q)
    for d in divisors(q):
        rd = np.zeros(q)
        for e in divisors(d):
            rd[0::e] += e * mobius(d // e)
        M += rd / d * (T - 2 * math.log(d) + 2 * EULER_GAMMA - 1)
    return X / q * M


@dataclass(frozen=True)
class ErrorTermRecord:
    X: int
    q: int
    a: int
    S: int
    M: float
    R: float


def error_term(X: int, q: int, a: int) -> ErrorTermRecord:
    """R(X; a, q) = S - M for a single residue."""
    a %= q
    S = progression_sum_single(X, q, a)
    M = main_term(X, q, a)
    return ErrorTermRecord(X=X, q=q, a=a, S=S, M=M, R=S - M)


@dataclass(frozen=True)
class ErrorVector:
    """S, M, R for every residue class mod q at a single X."""

    X: int
    q: int
    S: np.ndarray
    M: np.ndarray
    R: np.ndarray


def error_vector(X: int, q: int, method: str = "auto") -> ErrorVector:
    S = divisor_sum_progressions(X, q, method=method).sums
    M = main_term_vector(X, q)
    return ErrorVector(X=X, q=q, S=S, M=M, R=S - M)


def interval_residues(q: int, B: int, A: int, strict: bool = True) -> tuple[list[int], int]:
    """{B+1, ..., B+A} reduced mod q, filtered to reduced residues.

    Returns (residues, dropped).  strict raises on the first non-reduced
    member instead of dropping.
    """
    if A < 1 or B < 0:
        raise InvalidRange(f"need A >= 1 and B >= 0, got A = {A}, B = {B}")
    out = []
    dropped = 0
    for n in range(B + 1, B + A + 1):
        a = n % q
        if math.gcd(a, q) == 1:
            out.append(a)
        elif strict:
            raise NonReducedResidue(f"{n} = {a} mod {q} shares a factor with {q}")
        else:
            dropped += 1
    return out, dropped


@dataclass(frozen=True)
class AveragedErrors:
    X: int
    q: int
    set_descriptor: str
    D: float
    E: float
    cardinality: int
    dropped: int = 0


def averaged_errors(
    X: int,
    q: int,
    residues: Iterable[int],
    set_descriptor: str = "explicit",
    strict: bool = True,
    dropped: int = 0,
) -> AveragedErrors:
    """D = sum |R| and E = sum R over a set of reduced residues mod q.

    Duplicate residues are collapsed; summation is over sorted residues so
    the result is deterministic regardless of input order.
    """
    aset = sorted({a % q for a in residues})
    for a in aset:
        if math.gcd(a, q) != 1:
            if strict:
                raise NonReducedResidue(f"{a} shares a factor with {q}")
            dropped += 1
    if not strict:
        aset = [a for a in aset if math.gcd(a, q) == 1]
    if len(aset) <= max(8, q // 64):
        rs = [error_term(X, q, a).R for a in aset]
    else:
        R = error_vector(X, q).R
        rs = [float(R[a]) for a in aset]
    return AveragedErrors(
        X=X,
        q=q,
        set_descriptor=set_descriptor,
        D=math.fsum(abs(r) for r in rs),
        E=math.fsum(rs),
        cardinality=len(aset),
        dropped=dropped,
    )


def exceptional_set(X: int, p: int, kappa: float) -> list[int]:
    """Residues a in [1, p-1] with signed R(X; a, p) >= X^(1/3 - kappa)."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if not 0 < kappa < 1 / 3:
        raise InvalidRange(f"need kappa in (0, 1/3), got {kappa}")
    if p > X:
        raise InvalidRange(f"need p <= X, got p = {p}, X = {X}")
    threshold = X ** (1 / 3 - kappa)
    R = error_vector(X, p).R
    return [a for a in range(1, p) if R[a] >= threshold]
