"""Elementary arithmetic kernels.

Kloosterman sums, the multiplicative helper functions mu(n) and d(n), modular
inverses, and Dirichlet rational approximation.  Everything here is pure and
stateless; e(x) means exp(2*pi*i*x) throughout the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "RationalApprox",
    "dirichlet_approx",
    "divisor_count",
    "divisors",
    "kloosterman",
    "kloosterman_table",
    "mobius",
    "mod_inverse",
    "sieve_primes",
    "smallest_prime_factors",
    "weil_check",
]


def sieve_primes(n: int) -> np.ndarray:
    """All primes <= n, ascending."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0].astype(np.int64)


def smallest_prime_factors(n: int) -> np.ndarray:
    """spf[k] = smallest prime factor of k, for 0 <= k <= n (spf[0]=spf[1]=0)."""
    spf = np.zeros(n + 1, dtype=np.int64)
    if n >= 2:
        ks = np.arange(n + 1)
        spf[2::2] = 2
        for p in range(3, math.isqrt(n) + 1, 2):
            if spf[p] == 0:
                sl = slice(p * p, n + 1, 2 * p)
                unset = spf[sl] == 0
                spf[sl] = np.where(unset, p, spf[sl])
        odd_unset = (spf == 0) & (ks >= 2)
        spf[odd_unset] = ks[odd_unset]
    return spf


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization [(p, e), ...] by trial division; fine at desk scale."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out = []
    for p in (2, 3):
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            if e:
                out.append((p, e))
        f += 6
    if n > 1:
        out.append((n, 1))
    return out


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError(f"mobius undefined for {n}")
    mu = 1
    for _, e in factorize(n):
        if e > 1:
            return 0
        mu = -mu
    return mu


def divisor_count(n: int) -> int:
    out = 1
    for _, e in factorize(n):
        out *= e + 1
    return out


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    out = [1]
    for p, e in factorize(n):
        out = [d * p**j for d in out for j in range(e + 1)]
    return sorted(out)


def mod_inverse(d: int, c: int) -> int:
    """dbar with d*dbar == 1 (mod c); for c = 1 the inverse is 0."""
    if c < 1:
        raise ValueError(f"modulus must be positive, got {c}")
    if math.gcd(d, c) != 1:
        raise ValueError(f"{d} is not invertible modulo {c}")
    return pow(d, -1, c)


def kloosterman(a: int, b: int, c: int) -> float:
    """S(a,b;c) = sum over x mod c, (x,c)=1, of e((a x + b xbar)/c).

    Direct summation, O(c) terms; the sum is real (x -> -x pairs terms with
    their conjugates) so the cosine parts are accumulated with fsum and the
    imaginary part is dropped.
    """
    if c < 1:
        raise ValueError(f"modulus must be positive, got {c}")
    if c == 1:
        return 1.0
    terms = []
    for x in range(1, c):
        if math.gcd(x, c) != 1:
            continue
        xbar = pow(x, -1, c)
        terms.append(math.cos(2.0 * math.pi * ((a * x + b * xbar) % c) / c))
    return math.fsum(terms)


def kloosterman_table(c: int) -> np.ndarray:
    """S(a,b;c) for all 0 <= a,b < c at once, via a 2-d FFT.

    The indicator matrix I[x, xbar] = 1 on units has 2-d DFT equal to
    S(-a,-b;c) = S(a,b;c).  Used for exhaustive Weil-bound sweeps.
    """
    if c < 1:
        raise ValueError(f"modulus must be positive, got {c}")
    ind = np.zeros((c, c))
    for x in range(c if c > 1 else 0):
        if math.gcd(x, c) == 1:
            ind[x, pow(x, -1, c)] = 1.0
    if c == 1:
        ind[0, 0] = 1.0
    return np.real(np.fft.fft2(ind))


@dataclass(frozen=True)
class WeilCheck:
    value: float
    bound: float
    ok: bool


def weil_check(a: int, b: int, c: int) -> WeilCheck:
    """|S(a,b;c)| <= d(c) sqrt(c) sqrt(gcd(a,b,c)), with 1e-9 slack."""
    value = kloosterman(a, b, c)
    g = math.gcd(math.gcd(abs(a), abs(b)), c)
    bound = divisor_count(c) * math.sqrt(c) * math.sqrt(g if g else c)
    return WeilCheck(value, bound, abs(value) <= bound + 1e-9)


@dataclass(frozen=True)
class RationalApprox:
    """alpha = a/q + theta/(2 pi) with gcd(a,q)=1, 1 <= q <= Q, |theta/2pi| <= 1/(qQ)."""

    a: int
    q: int
    theta: float


def dirichlet_approx(alpha: float, Q: float) -> RationalApprox:
    """Best rational approximation a/q with q <= Q via continued fractions.

    Returns the last continued-fraction convergent with denominator <= Q;
    these are best approximations (no q' <= q has smaller ||q' alpha||), and
    the next convergent's denominator exceeding Q gives |alpha - a/q| <= 1/(qQ).
    """
    if Q < 1:
        raise ValueError(f"Q must be >= 1, got {Q}")
    x = float(alpha)
    p_prev, q_prev = 1, 0
    p_cur, q_cur = int(math.floor(x)), 1
    x -= math.floor(x)
    for _ in range(64):
        if x < 1e-14 or q_cur > 1e15:
            break
        x = 1.0 / x
        a_i = int(math.floor(x))
        x -= a_i
        p_nxt, q_nxt = a_i * p_cur + p_prev, a_i * q_cur + q_prev
        if q_nxt > Q:
            break
        p_prev, q_prev, p_cur, q_cur = p_cur, q_cur, p_nxt, q_nxt
    theta = 2.0 * math.pi * (alpha - p_cur / q_cur)
    return RationalApprox(p_cur, q_cur, theta)
