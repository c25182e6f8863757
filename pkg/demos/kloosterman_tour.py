"""Kloosterman sums: values, the square-root envelope, and the algebra.

K_d(m, n) sums e_d(mx + n/x) over units x.  The demo shows the values
are real, hug tau(d) sqrt(gcd(m,n,d)) sqrt(d), degenerate to Ramanujan
sums when one argument vanishes, and factor across coprime moduli after
twisting the arguments by inverse squares.

Usage: python demos/kloosterman_tour.py
"""

import numpy as np

from divprog.arith import ramanujan_sum, tau_of
from divprog.kloosterman import check_weil, kloosterman, kloosterman_table

print("small values:")
for d, m, n in ((3, 1, 1), (5, 1, 1), (7, 1, 1), (11, 2, 3), (12, 1, 1)):
    chk = check_weil(d, m, n)
    print(
        f"  K_{d:>2}({m},{n}) = {chk.value:>9.5f}   envelope {chk.bound:8.4f}   "
        f"used {abs(chk.value) / chk.bound:5.1%}"
    )

print()
d = 101
T = kloosterman_table(d)
g = np.gcd.outer(np.gcd(np.arange(d), d), np.gcd(np.arange(d), d))
bound = tau_of(d) * np.sqrt(d * g)
usage = np.abs(T) / bound
print(f"full table mod {d}: {d*d} sums at once")
print(f"  largest |K|: {np.abs(T).max():.4f}  (envelope usage up to {usage.max():.1%})")
print(f"  symmetry K(m,n) = K(n,m): max gap {np.abs(T - T.T).max():.2e}")

print()
print("degeneration to Ramanujan sums (n = 0):")
for m in (0, 1, 2, 5):
    print(f"  K_101({m}, 0) = {T[m, 0]:>8.3f}   r_101({m}) = {ramanujan_sum(101, m)}")

print()
print("twisted multiplicativity across coprime moduli:")
for d1, d2, m, n in ((3, 5, 1, 1), (7, 11, 2, 5), (8, 9, 1, 3)):
    i2 = pow(d2, -2, d1)
    i1 = pow(d1, -2, d2)
    lhs = kloosterman(d1 * d2, m, n)
    rhs = kloosterman(d1, m, n * i2 % d1) * kloosterman(d2, m, n * i1 % d2)
    print(f"  K_{d1 * d2}({m},{n}) = {lhs:9.5f} = K_{d1} * K_{d2} twisted = {rhs:9.5f}")
