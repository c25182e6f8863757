"""The transform-side expansion of the progression error term R(X; a, q).

With a smooth cutoff w (see cutoff.SmoothCutoff) and kernels K0, Y0, the
weights attached to the dual sum are

    u_d^+(n) = (4/d)    int w(x) K0(4 pi sqrt(x n)/d) dx,
    u_d^-(n) = -(2pi/d) int w(x) Y0(4 pi sqrt(x n)/d) dx,

and the expansion reads

    R(X; a, q) ~ (1/q) sum_{d | q} sum_{n <= V(d)} tau(n)
                   [ u_d^+(n) K_d(-n, a) + u_d^-(n) K_d(n, a) ]

up to a truncation error of order (Y/q + 1) (Yq)^eps.  The thresholds

    U(d) = d^2 / X,    V(d) = d^2 X^(1+eps) / Y^2

separate the flat regime (|u| of order X/d for n <= U), the decay regime
(|u| of order X^(1/4) d^(1/2) n^(-3/4) up to V), and the negligible tail.

Quadrature: the integrand oscillates through the kernel's zeros, so each
weight integral is split at the (asymptotically located) zeros plus the
cutoff's two transition regions, with Gauss-Legendre inside each panel.
The 16-point and 24-point values give the error estimate; one uniform
refinement is attempted before flagging.  Convergence problems are
reported on the returned value, never raised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cutoff import SmoothCutoff
from .bessel import bessel_k0, bessel_y0
from .errors import InvalidRange, NonReducedResidue
from .arith import divisors
from .kloosterman import _evaluator
from .tausieve import sieve_tau

_K0_ARG_CUT = 50.0  # kernel below exp(-50); beyond this the integrand is dead
_MAX_PANELS = 4000


def truncation_thresholds(d: int, X: float, Y: float, eps: float = 0.05) -> tuple[float, float]:
    """(U(d), V(d)) for the flat / decay / tail regime boundaries."""
    return d * d / X, d * d * X ** (1.0 + eps) / (Y * Y)


@lru_cache(maxsize=4)
def _gl_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return nodes, weights


def _gl_integrate(f, edges: np.ndarray, order: int) -> float:
    nodes, weights = _gl_rule(order)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    xs = mid[:, None] + half[:, None] * nodes[None, :]
    vals = f(xs.ravel()).reshape(xs.shape)
    return float(np.sum(half * (vals * weights[None, :]).sum(axis=1)))


def _panel_edges(cutoff: SmoothCutoff, c: float, oscillatory: bool) -> np.ndarray | None:
    """Split [Y, X+Y] at cutoff transitions and kernel phase steps.

    The kernel argument is z = c sqrt(x).  For Y0 a panel spans at most
    one phase interval of pi (one half-oscillation); for K0 at most two
    e-foldings of decay, truncated entirely once z > 50.
    """
    Y, X = cutoff.Y, cutoff.X
    lo, hi = Y, X + Y
    if not oscillatory:
        xcut = (_K0_ARG_CUT / c) ** 2
        if xcut <= lo:
            return None
        hi = min(hi, xcut)
    pts = [lo, hi]
    for k in range(1, 6):
        t = Y + k * Y / 6.0
        if lo < t < hi:
            pts.append(t)
        t = X + k * Y / 6.0
        if lo < t < hi:
            pts.append(t)
    if lo < X < hi:
        pts.append(X)
    if lo < 2.0 * Y < hi:
        pts.append(2.0 * Y)
    z0, z1 = c * math.sqrt(lo), c * math.sqrt(hi)
    step = math.pi if oscillatory else 2.0
    n_steps = int((z1 - z0) / step)
    if n_steps > _MAX_PANELS:
        # coarser than a half-oscillation per panel would be garbage
        raise InvalidRange(f"weight quadrature needs {n_steps} panels; instance too extreme")
    for j in range(1, n_steps + 1):
        z = z0 + j * step
        if z < z1:
            pts.append((z / c) ** 2)
    edges = np.unique(np.asarray(pts, dtype=np.float64))
    return edges


def _refine(edges: np.ndarray) -> np.ndarray:
    mids = 0.5 * (edges[1:] + edges[:-1])
    return np.sort(np.concatenate([edges, mids]))


@dataclass(frozen=True)
class WeightValue:
    value: float
    error_estimate: float  # relative, against the value or the regime scale
    converged: bool
    panels: int


def weight_u(d: int, n: int, sign: int, cutoff: SmoothCutoff, target: float = 1e-8) -> WeightValue:
    """u_d^+(n) for sign=+1, u_d^-(n) for sign=-1."""
    if n < 1:
        raise InvalidRange(f"need n >= 1, got {n}")
    if sign not in (+1, -1):
        raise InvalidRange(f"sign must be +1 or -1, got {sign}")
    c = 4.0 * math.pi * math.sqrt(n) / d
    if sign > 0:
        kernel, prefactor = bessel_k0, 4.0 / d
    else:
        kernel, prefactor = bessel_y0, -2.0 * math.pi / d
    edges = _panel_edges(cutoff, c, oscillatory=sign < 0)
    if edges is None:
        return WeightValue(value=0.0, error_estimate=0.0, converged=True, panels=0)

    def integrand(x):
        return np.asarray(cutoff(x)) * np.asarray(kernel(c * np.sqrt(x)))

    scale = 1e-10 * cutoff.X / d  # floor: 1e-10 of the flat-regime magnitude
    coarse = _gl_integrate(integrand, edges, 16)
    fine = _gl_integrate(integrand, edges, 24)
    err = abs(fine - coarse) / max(abs(fine), scale)
    if err > target:
        edges = _refine(edges)
        coarse = fine
        fine = _gl_integrate(integrand, edges, 24)
        err = abs(fine - coarse) / max(abs(fine), scale)
    return WeightValue(
        value=prefactor * fine,
        error_estimate=err,
        converged=bool(err <= target),
        panels=len(edges) - 1,
    )


class VoronoiWeights:
    """Cached u_d^{+/-}(n) for one modulus and cutoff."""

    def __init__(self, d: int, cutoff: SmoothCutoff, eps: float = 0.05):
        self.d = d
        self.cutoff = cutoff
        self.eps = eps
        self._cache: dict[tuple[int, int], WeightValue] = {}

    @property
    def thresholds(self) -> tuple[float, float]:
        return truncation_thresholds(self.d, self.cutoff.X, self.cutoff.Y, self.eps)

    def u(self, n: int, sign: int) -> WeightValue:
        key = (n, sign)
        if key not in self._cache:
            self._cache[key] = weight_u(self.d, n, sign, self.cutoff)
        return self._cache[key]


@dataclass(frozen=True)
class TruncationEntry:
    d: int
    V: float
    n_terms: int
    n_flagged: int


@dataclass(frozen=True)
class VoronoiErrorTerm:
    X: int
    q: int
    a: int
    Y: float
    eps: float
    approx_R: float
    budget: float
    truncation_report: tuple[TruncationEntry, ...]


def error_budget(q: int, Y: float, exponent: float = 0.1) -> float:
    """(Y/q + 1) (Yq)^exponent: the truncation error scale of the expansion."""
    return (Y / q + 1.0) * (Y * q) ** exponent


def voronoi_error_terms(
    X: int,
    q: int,
    a_values,
    Y: float,
    eps: float = 0.05,
) -> list[VoronoiErrorTerm]:
    """The expansion evaluated for several residues, sharing all weights."""
    a_list = [a % q for a in a_values]
    for a in a_list:
        if math.gcd(a, q) != 1:
            raise NonReducedResidue(f"{a} shares a factor with {q}")
    cutoff = SmoothCutoff(X=float(X), Y=float(Y))
    totals = np.zeros(len(a_list))
    report: list[TruncationEntry] = []
    for d in divisors(q):
        _, V = truncation_thresholds(d, float(X), float(Y), eps)
        nmax = int(V)
        if nmax < 1:
            report.append(TruncationEntry(d=d, V=V, n_terms=0, n_flagged=0))
            continue
        tau = sieve_tau(1, nmax).values
        weights = VoronoiWeights(d, cutoff, eps)
        ev = _evaluator(d)
        flagged = 0
        for n in range(1, nmax + 1):
            up = weights.u(n, +1)
            um = weights.u(n, -1)
            flagged += (not up.converged) + (not um.converged)
            K_plus = ev.batch_over_a(-n, a_list)  # pairs with u^+
            K_minus = ev.batch_over_a(n, a_list)  # pairs with u^-
            totals += float(tau[n - 1]) * (up.value * K_plus + um.value * K_minus)
        report.append(TruncationEntry(d=d, V=V, n_terms=nmax, n_flagged=flagged))
    budget = error_budget(q, Y)
    rep = tuple(report)
    return [
        VoronoiErrorTerm(
            X=X, q=q, a=a, Y=Y, eps=eps, approx_R=float(t) / q, budget=budget,
            truncation_report=rep,
        )
        for a, t in zip(a_list, totals)
    ]


def voronoi_error_term(X: int, q: int, a: int, Y: float, eps: float = 0.05) -> VoronoiErrorTerm:
    return voronoi_error_terms(X, q, [a], Y, eps)[0]
