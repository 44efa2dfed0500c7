"""Hecke-eigenvalue and symmetric-square coefficient machinery.

A GL(2) Maass form is ingested as its spectral parameter t_j and a table of
prime Hecke eigenvalues lambda(p).  Everything else is rebuilt from Hecke
multiplicativity:

    lambda(mn) = lambda(m) lambda(n)            for (m,n)=1
    lambda(p^{k+1}) = lambda(p) lambda(p^k) - lambda(p^{k-1})

The symmetric-square lift has GL(3) coefficients A(1,n) = sum_{m l^2 = n}
lambda(m^2), Langlands parameters (iT, 0, -iT) with T = 2 t_j, and Laplace
eigenvalue 1 + T^2.  All tables are dense, immutable after construction, and
safe for concurrent reads.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .arith import mobius, sieve_primes, smallest_prime_factors

__all__ = [
    "HeckeTable",
    "IngestionError",
    "MaassGL2Form",
    "SatakePair",
    "SymSquareForm",
    "build_sym_square",
    "extend_hecke",
    "gl3_coeff",
    "langlands_from_type",
    "load_maass_form",
    "moment_sum",
    "satake",
    "short_interval_sum",
    "sym_square_coeff",
    "synthetic_form",
    "verify_local_euler_identity",
]

KIM_SARNAK_EXPONENT = 7.0 / 64.0

MOMENT_KINDS = ("A2", "A4", "sym2-4th", "8th")


class IngestionError(ValueError):
    """Raised when a Maass data file is malformed or incomplete."""


@dataclass(frozen=True)
class MaassGL2Form:
    """Ground-truth GL(2) data: spectral parameter and prime eigenvalues.

    Laplace eigenvalue is 1/4 + t_j^2.  The Kim-Sarnak gate
    |lambda(p)| <= 2 p^{7/64} + data_precision is a warning by default and an
    error under strict=True (ingested tables carry rounding slop).
    """

    t_j: float
    prime_eigenvalues: dict[int, float]
    p_max: int
    data_precision: float = 1e-9
    label: str = ""

    def __post_init__(self):
        if not self.t_j > 0:
            raise IngestionError(f"t_j must be positive, got {self.t_j}")
        primes = sieve_primes(self.p_max)
        for p in primes:
            if int(p) not in self.prime_eigenvalues:
                raise IngestionError(f"missing prime {int(p)} (p_max={self.p_max})")
        for p in self.prime_eigenvalues:
            if not _is_prime(p):
                raise IngestionError(f"non-prime entry {p} in eigenvalue table")
            if p > self.p_max:
                raise IngestionError(f"entry {p} exceeds declared p_max={self.p_max}")

    def validate_bounds(self, strict: bool = False, ramanujan: bool = False) -> list[int]:
        """Kim-Sarnak (and optionally Ramanujan) sanity gate; returns offenders."""
        bad = []
        for p, lam in self.prime_eigenvalues.items():
            cap = 2.0 if ramanujan else 2.0 * p**KIM_SARNAK_EXPONENT
            if abs(lam) > cap + self.data_precision:
                bad.append(p)
        if bad:
            msg = f"eigenvalue bound violated at primes {sorted(bad)[:8]}"
            if strict:
                raise IngestionError(msg)
            warnings.warn(msg, stacklevel=2)
        return sorted(bad)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for f in range(2, math.isqrt(n) + 1):
        if n % f == 0:
            return False
    return True


def load_maass_form(path: str | Path, strict: bool = False,
                    ramanujan: bool = False) -> MaassGL2Form:
    """Parse the line-oriented data file.

    Format: optional '#' comment lines, a header line ``tj <decimal>``, an
    optional ``precision <decimal>``, then one line ``p lambda_p`` per prime
    in increasing order with no gaps or duplicates.
    """
    path = Path(path)
    t_j = None
    precision = 1e-9
    eigen: dict[int, float] = {}
    last_p = 0
    for ln, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "tj":
            t_j = float(parts[1])
            continue
        if parts[0] == "precision":
            precision = float(parts[1])
            continue
        if t_j is None:
            raise IngestionError(f"{path}:{ln}: data before 'tj' header")
        if len(parts) != 2:
            raise IngestionError(f"{path}:{ln}: expected 'p lambda_p'")
        p, lam = int(parts[0]), float(parts[1])
        if not _is_prime(p):
            raise IngestionError(f"{path}:{ln}: {p} is not prime")
        if p in eigen:
            raise IngestionError(f"{path}:{ln}: duplicate prime {p}")
        if p < last_p:
            raise IngestionError(f"{path}:{ln}: primes out of order at {p}")
        nxt = _next_prime(last_p)
        if last_p and p != nxt:
            raise IngestionError(f"{path}:{ln}: gap, missing prime {nxt}")
        eigen[p] = lam
        last_p = p
    if t_j is None:
        raise IngestionError(f"{path}: missing 'tj' header")
    if not eigen:
        raise IngestionError(f"{path}: no eigenvalue lines")
    form = MaassGL2Form(t_j=t_j, prime_eigenvalues=eigen, p_max=last_p,
                        data_precision=precision, label=path.name)
    form.validate_bounds(strict=strict, ramanujan=ramanujan)
    return form


def _next_prime(p: int) -> int:
    n = p + 1
    while not _is_prime(n):
        n += 1
    return n


def synthetic_form(seed: int, p_max: int, t_j: float = 13.0) -> MaassGL2Form:
    """Random-Satake-angle form for plumbing tests and negative controls.

    lambda(p) = 2 cos(phi_p) with phi_p uniform on (0, pi).  The coefficients
    are multiplicative and Ramanujan-bounded but NOT automorphic: the Voronoi
    identity does not hold for this data, by design.
    """
    rng = np.random.default_rng(seed)
    primes = sieve_primes(p_max)
    eigen = {int(p): float(2.0 * math.cos(phi))
             for p, phi in zip(primes, rng.uniform(0.0, math.pi, len(primes)))}
    return MaassGL2Form(t_j=t_j, prime_eigenvalues=eigen, p_max=int(primes[-1]),
                        data_precision=0.0, label=f"synthetic-{seed}")


# ----------------------------------------------------------------------------
# Dense Hecke tables


class HeckeTable:
    """Dense lambda(n) for 1 <= n <= n_max, plus prime-power recurrences."""

    def __init__(self, values: np.ndarray, n_max: int):
        self.values = values          # 1-based; values[0] unused
        self.values.flags.writeable = False
        self.n_max = n_max
        self._spf = smallest_prime_factors(n_max)
        self._spf.flags.writeable = False

    def __getitem__(self, n: int) -> float:
        if not 1 <= n <= self.n_max:
            raise IndexError(f"n={n} outside table range 1..{self.n_max}")
        return float(self.values[n])

    def power_eigenvalue(self, p: int, k: int) -> float:
        """lambda(p^k) by the three-term recurrence, any k >= 0."""
        lam_p = self[p]
        prev, cur = 1.0, lam_p
        if k == 0:
            return 1.0
        for _ in range(k - 1):
            prev, cur = cur, lam_p * cur - prev
        return cur

    def lambda_of_square(self, m: int) -> float:
        """lambda(m^2) for m <= n_max, multiplicatively (m^2 may exceed n_max)."""
        if not 1 <= m <= self.n_max:
            raise IndexError(f"m={m} outside table range 1..{self.n_max}")
        out = 1.0
        while m > 1:
            p = int(self._spf[m])
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out *= self.power_eigenvalue(p, 2 * e)
        return out


def extend_hecke(form: MaassGL2Form, n_max: int) -> HeckeTable:
    """Build the dense lambda table from prime data via the Hecke relations."""
    primes_needed = sieve_primes(n_max)
    if len(primes_needed) and primes_needed[-1] > form.p_max:
        missing = int(primes_needed[primes_needed > form.p_max][0])
        raise IngestionError(f"missing prime {missing}: table to {n_max} "
                             f"needs primes beyond p_max={form.p_max}")
    lam = np.empty(n_max + 1)
    lam[0] = np.nan
    lam[1] = 1.0
    spf = smallest_prime_factors(n_max)
    for n in range(2, n_max + 1):
        p = int(spf[n])
        m, pe = n // p, p
        while m % p == 0:
            m //= p
            pe *= p
        if m > 1:
            lam[n] = lam[pe] * lam[m]
        elif pe == p:
            lam[n] = form.prime_eigenvalues[p]
        else:
            below = n // p
            lam[n] = lam[p] * lam[below] - (lam[below // p] if below % p == 0 else 0.0)
    return HeckeTable(lam, n_max)


def _multiplicative_table(n_max: int, prime_power, spf: np.ndarray) -> np.ndarray:
    """Dense table of a multiplicative function given its prime-power values."""
    vals = np.empty(n_max + 1)
    vals[0] = np.nan
    vals[1] = 1.0
    for n in range(2, n_max + 1):
        p = int(spf[n])
        m, pe, e = n // p, p, 1
        while m % p == 0:
            m //= p
            pe *= p
            e += 1
        vals[n] = vals[pe] * vals[m] if m > 1 else prime_power(p, e)
    return vals


# ----------------------------------------------------------------------------
# The symmetric-square lift


def langlands_from_type(nu1: complex, nu2: complex) -> tuple[complex, complex, complex]:
    """(alpha1, alpha2, alpha3) of a type-(nu1,nu2) form; components sum to 0."""
    return (-nu1 - 2 * nu2 + 1, -nu1 + nu2, 2 * nu1 + nu2 - 1)


@dataclass(frozen=True)
class SymSquareForm:
    """GL(3) symmetric-square lift: T = 2 t_j, parameters (iT, 0, -iT).

    Carries dense coefficient tables up to n_max:
      a1n[n]    = A(1,n) = sum_{m l^2 = n} lambda(m^2)
      lam[n]    = lambda(n)
      lam_sq[n] = lambda(n^2)
    """

    T: float
    n_max: int
    a1n: np.ndarray
    lam: np.ndarray
    lam_sq: np.ndarray
    data_precision: float
    table: HeckeTable = field(repr=False)
    label: str = ""

    @property
    def langlands(self) -> tuple[complex, complex, complex]:
        return (1j * self.T, 0.0 + 0.0j, -1j * self.T)

    @property
    def laplace_eigenvalue(self) -> float:
        return 1.0 + self.T * self.T

    def a1(self, n: int) -> float:
        if not 1 <= n <= self.n_max:
            raise IndexError(f"n={n} outside table range 1..{self.n_max}")
        return float(self.a1n[n])


def build_sym_square(form: MaassGL2Form, n_max: int) -> SymSquareForm:
    """Derive the GL(3) lift tables from the GL(2) prime data.

    A(1, p^e) obeys the self-dual recurrence with Euler polynomial
    1 - lambda(p^2) x + lambda(p^2) x^2 - x^3 (elementary symmetric functions
    of {alpha_p^2, 1, beta_p^2} collapse to e1 = e2 = lambda(p^2), e3 = 1).
    """
    table = extend_hecke(form, n_max)
    spf = table._spf

    def a1_prime_power(p: int, e: int) -> float:
        lp2 = table.power_eigenvalue(p, 2)
        h = [1.0, lp2]
        while len(h) <= e:
            k = len(h)
            h.append(lp2 * (h[k - 1] - h[k - 2]) + (h[k - 3] if k >= 3 else 0.0))
        return h[e]

    def lamsq_prime_power(p: int, e: int) -> float:
        return table.power_eigenvalue(p, 2 * e)

    a1n = _multiplicative_table(n_max, a1_prime_power, spf)
    lam_sq = _multiplicative_table(n_max, lamsq_prime_power, spf)
    a1n.flags.writeable = False
    lam_sq.flags.writeable = False
    return SymSquareForm(T=2.0 * form.t_j, n_max=n_max, a1n=a1n,
                         lam=table.values, lam_sq=lam_sq,
                         data_precision=form.data_precision, table=table,
                         label=form.label)


def sym_square_coeff(table: HeckeTable, n: int) -> float:
    """A(1,n) = sum over l with l^2 | n of lambda((n/l^2)^2), by definition.

    Independent of the multiplicative fast path in build_sym_square; the two
    routes agreeing on every n is a library invariant.
    """
    if not 1 <= n <= table.n_max:
        raise IndexError(f"n={n} outside table range 1..{table.n_max}")
    total = 0.0
    l = 1
    while l * l <= n:
        if n % (l * l) == 0:
            total += table.lambda_of_square(n // (l * l))
        l += 1
    return total


def gl3_coeff(form: SymSquareForm, n2: int, n1: int) -> float:
    """A(n2, n1) via the Hecke relation; A(n,1) = A(1,n) for the self-dual lift.

    A(n2, n1) = sum_{d | (n2, n1)} mu(d) A(n2/d, 1) A(1, n1/d).
    """
    if not (1 <= n1 <= form.n_max and 1 <= n2 <= form.n_max):
        raise IndexError(f"(n2,n1)=({n2},{n1}) outside table range")
    g = math.gcd(n2, n1)
    total = 0.0
    for d in range(1, g + 1):
        if g % d == 0:
            mu = mobius(d)
            if mu:
                total += mu * form.a1(n2 // d) * form.a1(n1 // d)
    return total


# ----------------------------------------------------------------------------
# Satake parameters and the local Euler identity


@dataclass(frozen=True)
class SatakePair:
    alpha_p: complex
    beta_p: complex


def satake(lambda_p: float) -> SatakePair:
    """Roots of z^2 - lambda(p) z + 1: unit-circle pair iff |lambda(p)| <= 2."""
    half = lambda_p / 2.0
    if abs(lambda_p) <= 2.0:
        s = math.sqrt(max(0.0, 1.0 - half * half))
        return SatakePair(complex(half, s), complex(half, -s))
    r = half + math.copysign(math.sqrt(half * half - 1.0), lambda_p)
    return SatakePair(complex(r), complex(1.0 / r))


def _symmetric_power_sums(lambda_p: float, r_max: int) -> list[float]:
    """e_r = sum_{m=0}^{r} alpha^{r-m} beta^m, via e_r = lambda e_{r-1} - e_{r-2}."""
    e = [1.0, lambda_p]
    for _ in range(r_max - 1):
        e.append(lambda_p * e[-1] - e[-2])
    return e


def verify_local_euler_identity(lambda_p: float) -> float:
    """Residual of the p^{-s} coefficient match lambda(p^2)^4 = e4^2 + 2 e3^2 + 3 e4 + 3 e2.

    The left side is the first Dirichlet coefficient of the local factor of
    sum lambda(n^2)^4 n^{-s}; the right side is the same coefficient of the
    product sym4 x sym4 . (sym3 x sym3)^2 . (sym4)^3 . (sym2)^3.  The identity
    is exact, so the residual is pure rounding.
    """
    e = _symmetric_power_sums(lambda_p, 4)
    lhs = e[2] ** 4
    rhs = e[4] ** 2 + 2.0 * e[3] ** 2 + 3.0 * e[4] + 3.0 * e[2]
    return abs(lhs - rhs)


# ----------------------------------------------------------------------------
# Moments and short intervals


def moment_sum(form: SymSquareForm, x: int, kind: str) -> float:
    """Partial moment sums up to x.

    kind: 'A2'       sum |A(1,n)|^2        'A4'   sum |A(1,n)|^4
          'sym2-4th' sum |lambda(n^2)|^4   '8th'  sum |lambda(n)|^8
    """
    if not 1 <= x <= form.n_max:
        raise IndexError(f"x={x} outside table range 1..{form.n_max}")
    if kind == "A2":
        data = form.a1n[1 : x + 1] ** 2
    elif kind == "A4":
        data = form.a1n[1 : x + 1] ** 4
    elif kind == "sym2-4th":
        data = form.lam_sq[1 : x + 1] ** 4
    elif kind == "8th":
        data = form.lam[1 : x + 1] ** 8
    else:
        raise ValueError(f"unknown moment kind {kind!r}; expected one of {MOMENT_KINDS}")
    return float(np.sum(data))


@dataclass(frozen=True)
class ShortIntervalSum:
    value: float
    ratios: dict[float, float]          # p -> value / ((B/A)^p A^eps)


def short_interval_sum(form: SymSquareForm, A: float, B: float,
                       eps: float = 0.1) -> ShortIntervalSum:
    """sum over n in [A-B, A+B] of |A(1,n)|/n, with diagnostic ratios.

    Requires 0 <= B <= A.  Ratios against (B/A)^p A^eps for p in {1/2,3/4,1}
    are reported, never asserted (the implied constants are unspecified).
    """
    if not (0 <= B <= A):
        raise ValueError(f"need 0 <= B <= A, got A={A}, B={B}")
    hi = int(math.floor(A + B))
    if hi > form.n_max:
        raise IndexError(f"A+B={A+B} outside table range 1..{form.n_max}")
    lo = max(1, int(math.ceil(A - B)))
    ns = np.arange(lo, hi + 1)
    value = float(np.sum(np.abs(form.a1n[lo : hi + 1]) / ns)) if hi >= lo else 0.0
    ratios = {}
    for p in (0.5, 0.75, 1.0):
        denom = (B / A) ** p * A**eps if B > 0 else math.inf
        ratios[p] = value / denom if denom > 0 and math.isfinite(denom) else math.inf
    return ShortIntervalSum(value, ratios)
