import math

import numpy as np
import pytest

from divprog.arith import euler_phi, ramanujan_sum
from divprog.errors import InvalidRange, NonReducedResidue, NotPrime
from divprog.mainterm import (
    EULER_GAMMA,
    MainTermPolynomial,
    averaged_errors,
    error_term,
    error_vector,
    exceptional_set,
    interval_residues,
    main_term,
    main_term_coprime,
    main_term_vector,
)
from divprog.tausieve import total_divisor_sum


def test_polynomial_collected_vs_term_by_term():
    rng = np.random.default_rng(2)
    for _ in range(200):
        q = int(rng.integers(2, 5000))
        a = int(rng.integers(0, q))
        P = MainTermPolynomial.build(q, a)
        for T in (0.0, 1.0, math.log(10**6)):
            lhs = P.evaluate(T)
            rhs = P.evaluate_term_by_term(T)
            assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs)), (q, a, T)


def test_polynomial_small_hand_case():
    # q = 2, a = 0: divisors 1 and 2 with r_1(0) = 1, r_2(0) = phi(2) = 1;
    # P(T) = (T + 2g - 1) + (1/2)(T - 2 log 2 + 2g - 1)
    P = MainTermPolynomial.build(2, 0)
    assert dict(P.divisor_terms) == {1: 1, 2: 1}
    g = EULER_GAMMA
    for T in (0.0, 2.5):
        expect = (T + 2 * g - 1) + 0.5 * (T - 2 * math.log(2) + 2 * g - 1)
        assert abs(P.evaluate(T) - expect) < 1e-14


def test_ramanujan_term_at_zero_for_prime_modulus():
    for p in (3, 5, 101, 499):
        P = MainTermPolynomial.build(p, 0)
        assert dict(P.divisor_terms)[p] == p - 1
        assert ramanujan_sum(p, 0) == p - 1 == euler_phi(p)


def test_coprime_closed_form_matches_polynomial_route():
    assert abs(main_term(10**4, 7, 3) - main_term_coprime(10**4, 7)) <= 1e-9 * main_term(10**4, 7, 3)
    rng = np.random.default_rng(7)
    checked = 0
    while checked < 300:
        q = int(rng.integers(2, 10**5))
        a = int(rng.integers(1, q))
        if math.gcd(a, q) != 1:
            continue
        X = int(rng.integers(q, 10**6))
        m1 = main_term(X, q, a)
        m2 = main_term_coprime(X, q)
        assert abs(m1 - m2) <= 1e-9 * max(1.0, abs(m2)), (X, q, a)
        checked += 1


def test_main_term_vector_matches_scalar():
    for X, q in ((1000, 12), (5000, 101), (777, 60)):
        vec = main_term_vector(X, q)
        for a in range(q):
            assert abs(vec[a] - main_term(X, q, a)) < 1e-9, (X, q, a)


def test_error_record_is_definitional():
    rec = error_term(12345, 37, 5)
    assert rec.S == rec.M + rec.R  # R is literally the float difference
    assert rec.a == 5


def test_error_rowsum_closure():
    for X, q in ((2000, 24), (10**4, 101)):
        ev = error_vector(X, q)
        lhs = float(np.sum(ev.R))
        rhs = total_divisor_sum(X) - float(np.sum(ev.M))
        assert abs(lhs - rhs) < 1e-6 * q


def test_single_instance_error_bound():
    X = 10**6
    rec = error_term(X, 101, 1)
    assert abs(rec.R) < 10 * X ** (1 / 3)


def test_interval_residues_modes():
    res, dropped = interval_residues(10, 0, 10, strict=False)
    assert res == [1, 3, 7, 9]
    assert dropped == 6
    with pytest.raises(NonReducedResidue):
        interval_residues(10, 0, 10, strict=True)
    # wrap-around interval {6,7,8,9} mod 7 hits 0, which lenient mode drops
    res, dropped = interval_residues(7, 5, 4, strict=False)
    assert res == [6, 1, 2]
    assert dropped == 1
    with pytest.raises(InvalidRange):
        interval_residues(7, -1, 3)
    with pytest.raises(InvalidRange):
        interval_residues(7, 0, 0)


def test_averaged_errors_singleton_and_triangle():
    X, q = 20000, 101
    rec = error_term(X, q, 13)
    avg = averaged_errors(X, q, [13])
    assert avg.cardinality == 1
    assert abs(avg.D - abs(rec.R)) < 1e-9
    assert abs(avg.E - rec.R) < 1e-9

    res, _ = interval_residues(q, 3, 40)
    avg = averaged_errors(X, q, res, set_descriptor="interval(3,40)")
    assert avg.D >= 0
    assert abs(avg.E) <= avg.D + 1e-12


def test_averaged_errors_full_reduced_set_prime():
    X, q = 5000, 53
    ev = error_vector(X, q)
    avg = averaged_errors(X, q, range(1, q))
    assert abs(avg.E - float(np.sum(ev.R[1:]))) < 1e-8
    assert avg.cardinality == q - 1


def test_averaged_errors_strictness_and_dedup():
    with pytest.raises(NonReducedResidue):
        averaged_errors(1000, 10, [2])
    lenient = averaged_errors(1000, 10, [2, 3, 3, 13], strict=False)
    assert lenient.cardinality == 1  # 3 and 13 collapse, 2 dropped
    assert lenient.dropped == 1


def test_averaged_errors_small_and_large_paths_agree():
    # under the cutover the per-residue route is used, above it the vector
    X, q = 30000, 257
    res, _ = interval_residues(q, 1, 6)
    small = averaged_errors(X, q, res)
    big_set, _ = interval_residues(q, 1, 100)
    ev = error_vector(X, q)
    big = averaged_errors(X, q, big_set)
    direct_D = math.fsum(abs(float(ev.R[a])) for a in big_set)
    assert abs(big.D - direct_D) < 1e-8
    direct_small = math.fsum(abs(float(ev.R[a])) for a in res)
    assert abs(small.D - direct_small) < 1e-8


def test_exceptional_set_matches_direct_scan():
    X, p = 10**5, 311
    kappa = 0.05
    members = exceptional_set(X, p, kappa)
    ev = error_vector(X, p)
    threshold = X ** (1 / 3 - kappa)
    expect = [a for a in range(1, p) if ev.R[a] >= threshold]
    assert members == expect
    # shape comparison against the count envelope, generous harness factor
    envelope = max(p * X ** (-1 / 3 + 4 * kappa), X ** (3 * kappa))
    assert len(members) <= 10 * envelope


def test_exceptional_set_limits():
    X, p = 3000, 101
    # kappa near 1/3: threshold ~ 1, the set is everything with R >= ~1
    near = exceptional_set(X, p, 1 / 3 - 1e-9)
    ev = error_vector(X, p)
    assert near == [a for a in range(1, p) if ev.R[a] >= X ** (1e-9)]
    # small prime, small kappa: threshold X^0.2833 ~ 26 clears max R ~ 16
    assert float(error_vector(10**5, 11).R[1:].max()) < 10**5 ** (1 / 3 - 0.05)
    assert exceptional_set(10**5, 11, 0.05) == []


def test_exceptional_set_validation():
    with pytest.raises(NotPrime):
        exceptional_set(1000, 100, 0.1)
    with pytest.raises(InvalidRange):
        exceptional_set(1000, 101, 0.5)
    with pytest.raises(InvalidRange):
        exceptional_set(50, 101, 0.1)


def test_main_term_validation():
    with pytest.raises(InvalidRange):
        main_term(0, 7, 1)
    with pytest.raises(InvalidRange):
        MainTermPolynomial.build(1, 0)
    with pytest.raises(InvalidRange):
        main_term_coprime(100, 1)
