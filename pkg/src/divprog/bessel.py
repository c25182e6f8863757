"""The kernels K0 and Y0 appearing in the divisor-sum transform weights.

Both functions are needed at absolute accuracy far below anything the
oscillatory quadrature downstream can feel; targets are ~1e-12 absolute
against the local envelope and 1e-10 relative away from zeros.

K0 (positive, monotone decreasing):
  * x <= 2: ascending series
        K0 = -(log(x/2) + gamma) I0(x) + sum_k H_k (x^2/4)^k / (k!)^2,
    all terms positive, no cancellation;
  * x > 2: the integral K0 = int_0^inf exp(-x cosh t) dt, truncated where
    the integrand falls 46 e-foldings under its peak and evaluated by a
    48-panel trapezoid rule.  The integrand is even at 0 and dead at the
    cut, so the trapezoid converges spectrally (checked to 1e-15 relative
    against mpmath up to x = 700).  Below the double-precision floor
    (x > 700) the value is flushed to exactly 0.

Y0 (oscillatory):
  * x <= 8: ascending series
        Y0 = (2/pi)[(log(x/2) + gamma) J0(x)
                    + sum_k (-1)^(k+1) H_k (x^2/4)^k / (k!)^2];
    cancellation grows with x and caps the accuracy near 1e-13 at x = 8;
  * 8 < x <= 17: a degree-47 Chebyshev interpolant; coefficients frozen
    from demos/generate_bessel_table.py (mpmath, 40-digit working
    precision), tail magnitudes ~1e-35;
  * x > 17: the large-argument expansion
        Y0 = sqrt(2/(pi x)) [sin(x - pi/4) P(x) + cos(x - pi/4) Q(x)]
    with 32 terms, safely inside the decreasing range of the divergent
    series (first neglected term < 2e-15 of the envelope).

Relative accuracy at an individual zero of Y0 is meaningless in doubles
(the zero's location itself carries rounding); accuracy statements near
zeros are against the envelope sqrt(2/(pi x)).
"""

from __future__ import annotations

import numpy as np

EULER_GAMMA = 0.57721566490153286061

_K0_SERIES_TERMS = 20
_K0_PANELS = 48
_K0_CUT_EFOLDINGS = 46.0
_Y0_SERIES_TERMS = 32
_Y0_ASYM_TERMS = 32

_HARMONIC = np.cumsum(1.0 / np.arange(1, 64))

_Y0_MID_LO = 8.0
_Y0_MID_HI = 17.0
_Y0_MID_COEFFS = np.array([
    0.063922071070524766850,
    -0.089918998806429784368,
    0.094512410072830446648,
    -0.12395511958427779222,
    -0.11460836087836227390,
    0.065571886925162203306,
    0.023697336002610349082,
    -0.010599578705475652390,
    -0.0021955542839305848484,
    0.00086406738033639820970,
    0.00011837138364620676072,
    -0.000043021333378805809263,
    -4.2344854486963061149e-6,
    1.4553374395405806388e-6,
    1.0866746152764129319e-7,
    -3.5789230601276169670e-8,
    -2.1084126359906942486e-9,
    6.7070475446483100493e-10,
    3.2092750541038892256e-11,
    -9.9127661398326633015e-12,
    -3.9455327847553883124e-13,
    1.1871399408517571984e-13,
    3.9947597054294698895e-15,
    -1.1746316069976049022e-15,
    -3.4200964492250242300e-17,
    9.8207473747022886322e-18,
    2.4253661046995986553e-19,
    -6.8819597854311968471e-20,
    -1.7001117197239332494e-21,
    4.5542285092513058038e-22,
    3.4759703788914998004e-24,
    -1.3927871590090941459e-24,
])


def _k0_series(x: np.ndarray) -> np.ndarray:
    y = x * x / 4.0
    i0 = np.ones_like(x)
    extra = np.zeros_like(x)
    term = np.ones_like(x)
    for k in range(1, _K0_SERIES_TERMS + 1):
        term = term * y / (k * k)
        i0 += term
        extra += _HARMONIC[k - 1] * term
    return -(np.log(x / 2.0) + EULER_GAMMA) * i0 + extra


def _k0_integral(x: np.ndarray) -> np.ndarray:
    T = np.arccosh(1.0 + _K0_CUT_EFOLDINGS / x)
    u = np.linspace(0.0, 1.0, _K0_PANELS + 1)
    t = T[:, None] * u[None, :]
    f = np.exp(-x[:, None] * np.cosh(t))
    f[:, 0] *= 0.5
    f[:, -1] *= 0.5
    return T / _K0_PANELS * f.sum(axis=1)


def _y0_series(x: np.ndarray) -> np.ndarray:
    y = x * x / 4.0
    j0 = np.ones_like(x)
    extra = np.zeros_like(x)
    term = np.ones_like(x)
    sign = 1.0
    for k in range(1, _Y0_SERIES_TERMS + 1):
        term = term * y / (k * k)
        sign = -sign
        j0 += sign * term
        extra += -sign * _HARMONIC[k - 1] * term
    return 2.0 / np.pi * ((np.log(x / 2.0) + EULER_GAMMA) * j0 + extra)


def _y0_chebyshev(x: np.ndarray) -> np.ndarray:
    t = (2.0 * x - (_Y0_MID_LO + _Y0_MID_HI)) / (_Y0_MID_HI - _Y0_MID_LO)
    b1 = np.zeros_like(x)
    b2 = np.zeros_like(x)
    for c in _Y0_MID_COEFFS[:0:-1]:
        b1, b2 = c + 2.0 * t * b1 - b2, b1
    return _Y0_MID_COEFFS[0] + t * b1 - b2


def _y0_asymptotic(x: np.ndarray) -> np.ndarray:
    P = np.ones_like(x)
    Q = np.zeros_like(x)
    c = np.ones_like(x)
    for k in range(1, _Y0_ASYM_TERMS + 1):
        c = c * (-((2 * k - 1) ** 2)) / (8.0 * k * x)
        s = 1.0 if k % 4 in (0, 1) else -1.0
        if k % 2 == 0:
            P += s * c
        else:
            Q += s * c
    phase = x - np.pi / 4.0
    return np.sqrt(2.0 / (np.pi * x)) * (np.sin(phase) * P + np.cos(phase) * Q)


def _dispatch(x, pieces) -> np.ndarray | float:
    arr = np.asarray(x, dtype=np.float64)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if arr.size and arr.min() <= 0.0:
        raise ValueError("kernels are defined for positive arguments only")
    out = np.empty_like(arr)
    for lo, hi, fn in pieces:
        m = (arr > lo) & (arr <= hi)
        if m.any():
            out[m] = fn(arr[m])
    return float(out[0]) if scalar else out


def bessel_k0(x) -> np.ndarray | float:
    """K0(x) for scalar or array x > 0."""
    return _dispatch(
        x,
        [
            (0.0, 2.0, _k0_series),
            (2.0, 700.0, _k0_integral),
            (700.0, np.inf, lambda a: np.zeros_like(a)),
        ],
    )


def bessel_y0(x) -> np.ndarray | float:
    """Y0(x) for scalar or array x > 0."""
    return _dispatch(
        x,
        [
            (0.0, _Y0_MID_LO, _y0_series),
            (_Y0_MID_LO, _Y0_MID_HI, _y0_chebyshev),
            (_Y0_MID_HI, np.inf, _y0_asymptotic),
        ],
    )


def y0_envelope(x) -> np.ndarray | float:
    """The local amplitude sqrt(2/(pi x)); error yardstick near zeros."""
    arr = np.asarray(x, dtype=np.float64)
    return np.sqrt(2.0 / (np.pi * arr))
