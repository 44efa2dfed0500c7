import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symtwist.arith import (dirichlet_approx, divisor_count, divisors,
                            kloosterman, kloosterman_table, mobius,
                            mod_inverse, sieve_primes, weil_check)


def test_mobius_divisor_basics():
    assert mobius(1) == 1 and divisor_count(1) == 1
    assert mobius(12) == 0 and divisor_count(12) == 6
    assert mobius(30) == -1 and mobius(6) == 1
    assert divisors(12) == [1, 2, 3, 4, 6, 12]


def test_mod_inverse():
    assert mod_inverse(3, 7) == 5                 # 15 = 2*7 + 1
    assert mod_inverse(1, 1) == 0                 # empty modulus convention
    with pytest.raises(ValueError):
        mod_inverse(2, 4)


def test_sieve():
    ps = sieve_primes(30)
    assert list(ps) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_kloosterman_small_values():
    assert kloosterman(1, 1, 1) == 1.0
    # S(1,1;3) = e(2/3) + e(4/3) = 2 cos(2 pi/3) = -1
    assert kloosterman(1, 1, 3) == pytest.approx(-1.0, abs=1e-12)


def test_kloosterman_ramanujan_reduction():
    # S(1,0;c) is the Ramanujan sum at 1, which equals mu(c)
    for c in range(1, 60):
        assert kloosterman(1, 0, c) == pytest.approx(mobius(c), abs=1e-10)


def test_kloosterman_symmetry_and_table():
    rng = np.random.default_rng(0)
    for _ in range(25):
        c = int(rng.integers(1, 80))
        a = int(rng.integers(0, c)) if c > 1 else 0
        b = int(rng.integers(0, c)) if c > 1 else 0
        assert kloosterman(a, b, c) == pytest.approx(kloosterman(b, a, c), abs=1e-9)
    for c in (1, 2, 5, 12, 30):
        table = kloosterman_table(c)
        for a in range(c):
            for b in range(c):
                assert table[a, b] == pytest.approx(kloosterman(a, b, c), abs=1e-8)


def test_kloosterman_twisted_multiplicativity():
    # S(a,b;c1 c2) = S(a c2bar^2, b; c1) S(a c1bar^2, b; c2) for (c1,c2)=1
    rng = np.random.default_rng(1)
    for _ in range(20):
        c1, c2 = int(rng.integers(2, 12)), int(rng.integers(2, 12))
        if math.gcd(c1, c2) != 1:
            continue
        a = int(rng.integers(1, c1 * c2))
        b = int(rng.integers(0, c1 * c2))
        c2bar = mod_inverse(c2, c1)
        c1bar = mod_inverse(c1, c2)
        lhs = kloosterman(a, b, c1 * c2)
        rhs = kloosterman(a * c2bar * c2bar, b, c1) \
            * kloosterman(a * c1bar * c1bar, b, c2)
        assert lhs == pytest.approx(rhs, abs=1e-7)


def test_weil_check_examples():
    r = weil_check(1, 1, 1)
    assert (r.value, r.bound, r.ok) == (1.0, 1.0, True)
    r = weil_check(1, 1, 3)
    assert r.value == pytest.approx(-1.0, abs=1e-12)
    assert r.bound == pytest.approx(2.0 * math.sqrt(3.0))
    assert r.ok


def test_dirichlet_examples():
    r = dirichlet_approx(1.0 / 3.0, 10)
    assert (r.a, r.q) == (1, 3) and abs(r.theta) < 1e-12
    r = dirichlet_approx(0.0, 5)
    assert (r.a, r.q) == (0, 1) and r.theta == 0.0
    r = dirichlet_approx(math.pi, 10)
    assert (r.a, r.q) == (22, 7)
    assert r.theta == pytest.approx(2 * math.pi * (math.pi - 22 / 7))
    assert abs(r.theta / (2 * math.pi)) <= 1 / (7 * 10)


def _best_denominator_brute(alpha, Q):
    """Independent oracle: q <= Q minimizing ||q alpha||."""
    best_q, best = 1, 1.0
    for q in range(1, int(Q) + 1):
        d = abs(q * alpha - round(q * alpha))
        if d < best - 1e-15:
            best_q, best = q, d
    return best_q


@given(st.floats(min_value=-50.0, max_value=50.0,
                 allow_nan=False, allow_infinity=False),
       st.integers(min_value=1, max_value=300))
@settings(max_examples=150, deadline=None)
def test_dirichlet_invariants(alpha, Q):
    r = dirichlet_approx(alpha, Q)
    assert 1 <= r.q <= Q
    assert math.gcd(r.a, r.q) == 1
    assert abs(r.theta / (2 * math.pi)) <= 1.0 / (r.q * Q) + 1e-12
    assert r.theta == pytest.approx(2 * math.pi * (alpha - r.a / r.q), abs=1e-9)


def test_dirichlet_is_best_approximation():
    rng = np.random.default_rng(2)
    for _ in range(40):
        alpha = float(rng.uniform(0, 1))
        Q = int(rng.integers(2, 1000))
        r = dirichlet_approx(alpha, Q)
        q_star = _best_denominator_brute(alpha, Q)
        # no q' <= q beats the returned denominator
        d_r = abs(r.q * alpha - round(r.q * alpha))
        d_star = abs(q_star * alpha - round(q_star * alpha))
        assert d_r <= d_star + 1e-12 or q_star > r.q
        for qp in range(1, r.q):
            assert abs(qp * alpha - round(qp * alpha)) >= d_r - 1e-12
