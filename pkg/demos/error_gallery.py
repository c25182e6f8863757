"""The main term, the error term, and who exceeds the X^(1/3) scale.

S(X; a, q) splits as (X/q) P(log X; q, a) + R(X; a, q) with P the
divisor-weighted linear polynomial.  This walks one modulus up a ladder
of X, showing that max |R| rides at a modest multiple of X^(1/3) when
q ~ X^(2/3), then lists an exceptional set: the residues whose error
beats X^(1/3 - kappa).

Usage: python demos/error_gallery.py
"""

import numpy as np

from divprog.mainterm import error_term, error_vector, exceptional_set

print("one residue in detail (q = 463, a = 5):")
for X in (10**4, 10**5, 10**6):
    rec = error_term(X, 463, 5)
    print(
        f"  X = {X:>7}:  S = {rec.S:>7}  M = {rec.M:>12.3f}  "
        f"R = {rec.R:>8.3f}  R/X^(1/3) = {rec.R / X ** (1 / 3):+.3f}"
    )

print()
print("error spread across all residues, q near X^(2/3):")
for X, q in ((10**4, 463), (10**5, 2153), (10**6, 9973)):
    R = np.asarray(error_vector(X, q).R)
    scale = X ** (1 / 3)
    print(
        f"  X = {X:>7}, q = {q:>5}:  max|R|/X^(1/3) = {np.max(np.abs(R)) / scale:5.3f}   "
        f"rms/X^(1/3) = {np.sqrt(np.mean(R**2)) / scale:5.3f}"
    )

print()
X, p, kappa = 10**5, 2153, 0.02
members = exceptional_set(X, p, kappa)
print(f"exceptional residues at X = {X}, p = {p}, kappa = {kappa}:")
print(f"  threshold X^(1/3 - kappa) = {X ** (1 / 3 - kappa):.2f}")
print(f"  {len(members)} of {p - 1} reduced residues exceed it")
print(f"  first few: {members[:8]}")
