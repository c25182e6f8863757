"""Bilinear Kloosterman sums over shifted intervals, and empirical exponents.

For intervals I = {B+1, ..., B+A} and J = {M+1, ..., M+N} inside [1, d-1]
and weights |alpha_a| <= 1, |nu_n| <= 1:

    S_d(alpha, nu; I, J) = sum_{a in I} sum_{n in J} alpha_a nu_n K_d(n, a).

Two evaluation routes:

  * brute force through the Kloosterman matrix, chunked over the unit
    group so memory stays bounded,
  * for alpha identically 1, the collapsed kernel
        sum_{x in (Z/d)^*} T(x) G_I(xbar),
    where T(x) = sum_n nu_n e_d(nx) comes from one length-d inverse DFT
    and G_I(y) = sum_{a in I} e_d(ay) is a geometric ratio with a guarded
    denominator (G_I = A exactly when y = 0).

The reference bounds these sums are measured against:

  * initial-interval, prime modulus, general alpha:
        (A N^(1/2) p^(1/2) + A^(13/16) N^(13/16) p^(43/64)) * p^o(1),
    valid when p^(1/4) <= AN <= p^(5/4) and N <= A p^(1/4); the side
    conditions act as measurement filters here, never as preconditions,
  * any modulus, alpha == 1:
        N^(3/4) (A^(1/8) d + A^(1/2) d^(3/4)) * d^o(1).

exponent_fit regresses log|S| on (log A, log N, log d) and reports the
worst observed ratio against each bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InsufficientSpread, IntervalOutOfRange
from .kloosterman import _evaluator

_UNIT_CHUNK = 1 << 14


def _check_interval(d: int, B: int, length: int, name: str) -> None:
    if length < 1 or B < 0 or B + length > d - 1:
        raise IntervalOutOfRange(
            f"{name} = {{{B + 1}, ..., {B + length}}} must sit inside [1, {d - 1}]"
        )


@dataclass(frozen=True)
class BilinearInstance:
    """One sum specification: modulus, the two intervals, the two weights."""

    d: int
    I: tuple[int, int]  # (B, A): residues B+1 .. B+A
    J: tuple[int, int]  # (M, N): residues M+1 .. M+N
    alpha: np.ndarray = field(repr=False)
    nu: np.ndarray = field(repr=False)

    def __post_init__(self):
        B, A = self.I
        M, N = self.J
        _check_interval(self.d, B, A, "I")
        _check_interval(self.d, M, N, "J")
        alpha = np.asarray(self.alpha, dtype=np.complex128)
        nu = np.asarray(self.nu, dtype=np.complex128)
        if alpha.shape != (A,) or nu.shape != (N,):
            raise ValueError(f"weights must have shapes ({A},) and ({N},)")
        if np.abs(alpha).max() > 1 + 1e-12 or np.abs(nu).max() > 1 + 1e-12:
            raise ValueError("weight magnitudes must not exceed 1")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "nu", nu)

    @classmethod
    def unweighted(cls, d: int, I: tuple[int, int], J: tuple[int, int]) -> "BilinearInstance":
        return cls(d=d, I=I, J=J, alpha=np.ones(I[1]), nu=np.ones(J[1]))


def bilinear_sum(inst: BilinearInstance) -> complex:
    """Brute-force evaluation through the Kloosterman matrix."""
    ev = _evaluator(inst.d)
    d = inst.d
    B, A = inst.I
    M, N = inst.J
    a_vals = np.arange(B + 1, B + A + 1, dtype=np.int64)
    n_vals = np.arange(M + 1, M + N + 1, dtype=np.int64)
    total = 0.0 + 0.0j
    chunk = max(1, _UNIT_CHUNK * 64 // (A + N))  # keep phase matrices ~ 1M entries
    for lo in range(0, ev.phi, chunk):
        x = ev.units[lo : lo + chunk]
        xb = ev.inverses[lo : lo + chunk]
        En = ev._phases(n_vals[:, None] * x[None, :] % d)  # N x chunk
        Ea = ev._phases(a_vals[:, None] * xb[None, :] % d)  # A x chunk
        total += inst.nu @ En @ (Ea.T @ inst.alpha)
    return complex(total)


def _geometric_interval_sum(d: int, B: int, A: int, y: np.ndarray, ev) -> np.ndarray:
    """G_I(y) = sum_{a=B+1}^{B+A} e_d(ay), vectorized over integer y."""
    w = ev._phases(y % d)
    num = ev._phases(A * y % d) - 1.0
    den = w - 1.0
    first = ev._phases((B + 1) * y % d)
    out = np.empty(len(y), dtype=np.complex128)
    sing = np.abs(den) < 1e-9
    ok = ~sing
    out[ok] = first[ok] * num[ok] / den[ok]
    out[sing] = A
    return out


def bilinear_sum_unweighted_a(inst: BilinearInstance) -> complex:
    """Fast route for alpha == 1: one DFT plus a pass over the unit group."""
    if not np.allclose(inst.alpha, 1.0, atol=1e-12):
        raise ValueError("fast path requires alpha identically 1")
    ev = _evaluator(inst.d)
    d = inst.d
    B, A = inst.I
    M, N = inst.J
    padded = np.zeros(d, dtype=np.complex128)
    n_vals = np.arange(M + 1, M + N + 1, dtype=np.int64) % d
    np.add.at(padded, n_vals, inst.nu)
    T = d * np.fft.ifft(padded)  # T[x] = sum_n nu_n e_d(n x)
    G = _geometric_interval_sum(d, B, A, ev.inverses, ev)
    return complex(np.sum(T[ev.units] * G))


def bilinear_bound_initial_interval(A: int, N: int, p: int) -> float:
    """Reference bound for prime modulus, general weights, J = {1..N}."""
    return A * math.sqrt(N) * math.sqrt(p) + A ** (13 / 16) * N ** (13 / 16) * p ** (43 / 64)


def initial_interval_conditions(A: int, N: int, p: int) -> bool:
    """Side conditions under which the initial-interval bound applies."""
    return p ** 0.25 <= A * N <= p ** 1.25 and N <= A * p ** 0.25


def bilinear_bound_general(A: int, N: int, d: int) -> float:
    """Reference bound for any modulus, alpha == 1."""
    return N ** 0.75 * (A ** 0.125 * d + math.sqrt(A) * d ** 0.75)


@dataclass(frozen=True)
class Measurement:
    A: int
    N: int
    d: int
    abs_value: float
    initial_interval: bool = True  # J started at 1 (comparison caveat otherwise)


@dataclass(frozen=True)
class ExponentFit:
    exponents: tuple[float, float, float, float]  # (const, A, N, d)
    ratio_initial_interval: float | None
    ratio_general: float
    n_measurements: int
    n_in_conditions: int


def _dyadic_spread(values: Sequence[int]) -> int:
    return len({v.bit_length() for v in values})


def exponent_fit(measurements: Sequence[Measurement]) -> ExponentFit:
    """Least-squares exponents for |S| ~ C A^a N^b d^c, plus bound ratios.

    Needs at least 8 measurements spanning at least 2 dyadic ranges in
    each of A, N, d.  Zero measurements are dropped from the regression
    (log undefined) but still counted for ratios.
    """
    if len(measurements) < 8:
        raise InsufficientSpread(f"need >= 8 measurements, got {len(measurements)}")
    for attr in ("A", "N", "d"):
        if _dyadic_spread([getattr(m, attr) for m in measurements]) < 2:
            raise InsufficientSpread(f"measurements span a single dyadic range in {attr}")
    rows = [m for m in measurements if m.abs_value > 0]
    X = np.array([[1.0, math.log(m.A), math.log(m.N), math.log(m.d)] for m in rows])
    y = np.array([math.log(m.abs_value) for m in rows])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    in_cond = [
        m
        for m in measurements
        if m.initial_interval and initial_interval_conditions(m.A, m.N, m.d)
    ]
    ratio21 = (
        max(m.abs_value / bilinear_bound_initial_interval(m.A, m.N, m.d) for m in in_cond)
        if in_cond
        else None
    )
    ratio22 = max(m.abs_value / bilinear_bound_general(m.A, m.N, m.d) for m in measurements)
    return ExponentFit(
        exponents=tuple(float(c) for c in coef),
        ratio_initial_interval=ratio21,
        ratio_general=ratio22,
        n_measurements=len(measurements),
        n_in_conditions=len(in_cond),
    )
