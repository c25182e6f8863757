"""Exact divisor sums over progressions, three ways.

The library computes S(X; a, q) = sum of tau(n) over n <= X, n = a mod q
by bucketing a sieved tau table and, independently, by the hyperbola
trick: pairs (d, n/d) with d <= sqrt(X) counted twice, the square
diagonal removed.  Both must agree digit for digit, and the rows of any
modulus must add back to the unconditioned sum.

Usage: python demos/hyperbola_identity.py
"""

import numpy as np

from divprog.tausieve import divisor_sum_progressions, total_divisor_sum

print("total divisor sums (the classic staircase):")
for X in (1, 10, 100, 10**4, 10**6):
    print(f"  sum_{{n <= {X:>7}}} tau(n) = {total_divisor_sum(X)}")

print()
print("the two evaluation routes, checked against each other:")
for X, q in ((10**4, 12), (10**5, 463), (10**6, 101)):
    naive = divisor_sum_progressions(X, q, method="naive").sums
    hyper = divisor_sum_progressions(X, q, method="hyperbola").sums
    same = np.array_equal(naive, hyper)
    print(f"  X = {X:>7}, q = {q:>3}: naive == hyperbola: {same}")
    assert same

print()
q = 7
X = 10**5
vec = divisor_sum_progressions(X, q)
print(f"S({X}; a, {q}) by residue class:")
for a in range(q):
    print(f"  a = {a}:  {vec[a]:>8}   ({vec[a] * q / vec.total():.4f} of uniform share x {q})")
print(f"  row sum {vec.total()} == total {total_divisor_sum(X)}: {vec.total() == total_divisor_sum(X)}")

# the nonuniformity above is real: a = 0 collects every multiple of 7,
# which are tau-richer than typical integers, and the coprime classes
# split the rest almost evenly.
