"""Regenerate the Chebyshev table used by divprog.bessel for Y0 on [8, 17].

The ascending series for Y0 loses digits to cancellation past x ~ 8 and
the large-argument expansion only reaches full double accuracy past
x ~ 17, so the window between is served by one Chebyshev interpolant.
This script rebuilds its coefficients with mpmath at 40-digit working
precision and prints them ready to paste into bessel.py.  Run it only
when changing the window or the degree; the committed table is frozen.

Usage: python demos/generate_bessel_table.py
"""

import mpmath as mp

LO, HI = 8.0, 17.0
DEGREE = 48

mp.mp.dps = 40


def cheb_coeffs(f, lo, hi, n):
    """Coefficients of the degree-(n-1) Chebyshev interpolant on [lo, hi]."""
    nodes = [mp.cos(mp.pi * (k + mp.mpf(1) / 2) / n) for k in range(n)]
    vals = [f((hi - lo) / 2 * t + (hi + lo) / 2) for t in nodes]
    out = []
    for j in range(n):
        s = mp.fsum(vals[k] * mp.cos(mp.pi * j * (k + mp.mpf(1) / 2) / n) for k in range(n))
        out.append(s * 2 / n)
    out[0] /= 2
    return out


def main():
    coeffs = cheb_coeffs(lambda x: mp.bessely(0, x), LO, HI, DEGREE)
    # report the drop-off so the committed degree is visibly sufficient
    print(f"# Y0 Chebyshev on [{LO}, {HI}], degree {DEGREE}")
    print(f"# last three magnitudes: {[mp.nstr(abs(c), 3) for c in coeffs[-3:]]}")
    print("_Y0_MID_LO = %.1f" % LO)
    print("_Y0_MID_HI = %.1f" % HI)
    print("_Y0_MID_COEFFS = np.array([")
    for c in coeffs:
        print(f"    {mp.nstr(c, 20, strip_zeros=False)},")
    print("])")


if __name__ == "__main__":
    main()
