"""Experiment drivers: twisted sums, exponent scans, predicted-bound
calculators, moment studies, and the unsmoothing deduction.

The additively twisted coefficient sums are

    S(N, alpha) = sum_{n <= N} A(1,n) e(alpha n)            (sharp cutoff)
    S_w(alpha)  = sum_n A(1,n) e(alpha n) w(n)              (smooth weight)

with e(x) = exp(2 pi i x).  The exponent scan fits log max_alpha |S| against
log N; the prediction calculator evaluates the dual-sum regime bounds without
implied constants; the unsmoothing kernel recovers sharp partial sums from
smooth ones.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .hecke import MaassGL2Form, SymSquareForm, load_maass_form
from .transforms import PlateauBump, TestFunction

__all__ = [
    "PredictedBounds",
    "ScanConfig",
    "ScanResult",
    "UnsmoothingKernel",
    "emit_csv",
    "exponent_scan",
    "ingest",
    "predicted_bounds",
    "sample_alphas",
    "sharp_sum",
    "smooth_sum",
    "stitch_windows",
    "unsmooth_decompose",
    "unsmoothing_kernel",
    "uniform_predicted_bounds",
]

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def sharp_sum(form: SymSquareForm, N: int, alpha: float) -> complex:
    """S(N, alpha) = sum_{n <= N} A(1,n) e(alpha n), direct evaluation."""
    if not 1 <= N <= form.n_max:
        raise IndexError(f"N={N} outside table range 1..{form.n_max}")
    n = np.arange(1, N + 1)
    return complex(np.sum(form.a1n[1 : N + 1] * np.exp(2j * math.pi * alpha * n)))


def smooth_sum(form: SymSquareForm, tf: TestFunction, alpha: float) -> complex:
    """sum_n A(1,n) e(alpha n) w(n), finite over supp w in [N, 2N]."""
    hi = int(math.floor(2.0 * tf.N))
    if hi > form.n_max:
        raise IndexError(f"support reaches {hi}, table ends at {form.n_max}")
    n = np.arange(max(1, int(math.ceil(tf.N))), hi + 1)
    return complex(np.sum(form.a1n[n[0] : hi + 1] * tf.bump(n)
                          * np.exp(2j * math.pi * alpha * n)))


# ----------------------------------------------------------------------------
# Exponent scan


@dataclass(frozen=True)
class ScanConfig:
    """Grid and sampling rules for the exponent scan.

    Q_rule 'paper' uses Q = max(1, sqrt(N) T^{-1/3}); a float fixes Q.
    Half the alpha samples are low-discrepancy (golden-ratio rotation), half
    adversarial points a/q +- 1/(qQ) near small-denominator rationals, where
    the twisted sums are largest.
    """

    N_grid: tuple[int, ...]
    alpha_samples: int = 64
    Q_rule: str | float = "paper"
    p_exponent: float = 1.0
    D_exponent: float = 0.25
    seed: int = 0

    def __post_init__(self):
        if self.alpha_samples < 1:
            raise ValueError("alpha_samples must be >= 1")
        ns = list(self.N_grid)
        if not ns or any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError("N_grid must be ascending and nonempty")
        for n in ns:
            if n & (n - 1):
                raise ValueError(f"N_grid entries must be dyadic, got {n}")
        if self.D_exponent not in (0.25, 1.0 / 3.0):
            raise ValueError("D_exponent must be 1/4 or 1/3")

    def Q_of(self, N: int, T: float) -> float:
        if self.Q_rule == "paper":
            return max(1.0, math.sqrt(N) * T ** (-1.0 / 3.0))
        return max(1.0, float(self.Q_rule))


def sample_alphas(cfg: ScanConfig, N: int, T: float) -> np.ndarray:
    """Deterministic alpha sample: golden-ratio rotation plus adversarial
    rationals a/q +- 1/(qQ) for small q."""
    rng = np.random.default_rng(cfg.seed)
    offset = rng.random()
    n_adv = cfg.alpha_samples // 2
    n_low = cfg.alpha_samples - n_adv
    low = (offset + GOLDEN * np.arange(n_low)) % 1.0
    Q = cfg.Q_of(N, T)
    adv = []
    q = 1
    while len(adv) < n_adv:
        for a in range(q):
            if math.gcd(a, q) == 1:
                for sgn in (1.0, -1.0):
                    adv.append((a / q + sgn / (q * Q)) % 1.0)
                    if len(adv) >= n_adv:
                        break
            if len(adv) >= n_adv:
                break
        q += 1
    return np.concatenate([low, np.array(adv[:n_adv])])


@dataclass(frozen=True)
class ScanResult:
    rows: list[dict]
    slope: float
    normalized_slope: float


def exponent_scan(form: SymSquareForm, cfg: ScanConfig) -> ScanResult:
    """max_alpha |S(N, alpha)| over the grid, with log-log least squares.

    rows carry (N, max_abs, arg_alpha, normalized) where normalized divides
    by N^{3/4} (1+T^2)^D; both the raw slope and the slope of the normalized
    sequence are fitted by OLS.
    """
    rows = []
    for N in cfg.N_grid:
        alphas = sample_alphas(cfg, N, form.T)
        n = np.arange(1, N + 1)
        coeff = form.a1n[1 : N + 1]
        best, best_alpha = -1.0, 0.0
        for alpha in alphas:
            val = abs(np.sum(coeff * np.exp(2j * math.pi * alpha * n)))
            if val > best:
                best, best_alpha = float(val), float(alpha)
        normalized = best / (N**0.75 * form.laplace_eigenvalue**cfg.D_exponent)
        rows.append({"N": N, "max_abs": best, "arg_alpha": best_alpha,
                     "normalized": normalized})
    logn = np.log([r["N"] for r in rows])
    slope = float(np.polyfit(logn, np.log([r["max_abs"] for r in rows]), 1)[0])
    nslope = float(np.polyfit(logn, np.log([r["normalized"] for r in rows]), 1)[0])
    return ScanResult(rows=rows, slope=slope, normalized_slope=nslope)


# ----------------------------------------------------------------------------
# Predicted bounds (regime calculator, no implied constants)


@dataclass(frozen=True)
class PredictedBounds:
    S_M: float
    S_E1: float
    S_E2: float

    @property
    def total(self) -> float:
        return self.S_M + self.S_E1 + self.S_E2


def predicted_bounds(q: int, theta: float, N: float, T: float, p: float,
                     epsilon: float = 0.1) -> PredictedBounds:
    """Regime bounds at explicit (q, theta):

      S_M  = q^{3/2} (T + |tN|^{3/2})
      S_E1 = q^{3/2} T^2 |tN|^{-1/2} (|tN|^2/T^2)^p   on T^{2/3} <= |tN| <= T^{1-eps}
      S_E2 = q^{3/2} |tN|^{1-p} T                     on T^eps <= |tN| <= T^{2/3}

    with |tN| = |theta| N; the S_E terms vanish outside their windows.
    """
    if q < 1 or N <= 0 or T <= 0:
        raise ValueError("need q >= 1, N > 0, T > 0")
    tn = abs(theta) * N
    q32 = q**1.5
    s_m = q32 * (T + tn**1.5)
    s_e1 = s_e2 = 0.0
    if T ** (2.0 / 3.0) <= tn <= T ** (1.0 - epsilon):
        s_e1 = q32 * T * T / math.sqrt(tn) * (tn * tn / (T * T)) ** p
    elif T**epsilon <= tn <= T ** (2.0 / 3.0):
        s_e2 = q32 * tn ** (1.0 - p) * T
    return PredictedBounds(S_M=s_m, S_E1=s_e1, S_E2=s_e2)


def uniform_predicted_bounds(N: float, T: float, p: float, Q: float,
                             epsilon: float = 0.1) -> PredictedBounds:
    """Alpha-uniform bounds after maximizing over q <= Q, |tN| <= N/(qQ).

    S_M = Q^{3/2} T + N^{3/2} Q^{-3/2}; for p < 1 the error windows add
    their maximized contributions (at p = 3/4 these are Q^{-1/2} T^{1/2} N
    and Q^{3/2} T^{7/6}).  For p = 1 both vanish into S_M's shape.
    """
    if Q < 1 or N <= 0 or T <= 0:
        raise ValueError("need Q >= 1, N > 0, T > 0")
    s_m = Q**1.5 * T + N**1.5 * Q**-1.5
    s_e1 = s_e2 = 0.0
    if p < 1.0:
        tn_cap = min(T ** (1.0 - epsilon), N / (Q * Q))
        if tn_cap >= T ** (2.0 / 3.0):
            s_e1 = Q**1.5 * T ** (2.0 - 2.0 * p) * tn_cap ** (2.0 * p - 0.5)
        s_e2 = Q**1.5 * T ** ((5.0 - 2.0 * p) / 3.0)
    return PredictedBounds(S_M=s_m, S_E1=s_e1, S_E2=s_e2)


# ----------------------------------------------------------------------------
# Unsmoothing


class UnsmoothingKernel:
    """h(t) = sum_{|m| <= x} e(-m t) on [0, 1], zero elsewhere.

    The Fourier coefficients int_0^1 h(t) e(n t) dt are exactly the indicator
    of |n| <= x (character orthogonality), so they are evaluated in closed
    form; only the L1 norm (a Lebesgue-constant integral, ~ (4/pi^2) log x)
    requires quadrature.
    """

    def __init__(self, x: int):
        if x < 1:
            raise ValueError(f"kernel parameter must be a positive integer, got {x}")
        self.x = int(x)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        m = 2 * self.x + 1
        num = np.sin(m * math.pi * t)
        den = np.sin(math.pi * t)
        inside = (t >= 0.0) & (t <= 1.0)
        near = np.abs(den) < 1e-12
        out = np.zeros_like(t)
        ok = inside & ~near
        out[ok] = num[ok] / den[ok]
        out[inside & near] = float(m)
        return out if out.ndim else float(out)

    def fourier_coefficient(self, n) -> np.ndarray:
        """int_0^1 h(t) e(n t) dt, exactly, by orthogonality."""
        return np.where(np.abs(n) <= self.x, 1.0, 0.0)

    def l1_norm(self) -> float:
        """int_0^1 |h(t)| dt by Gauss-Legendre between consecutive zeros."""
        m = 2 * self.x + 1
        gx, gw = np.polynomial.legendre.leggauss(12)
        edges = np.arange(m + 1) / m
        mid = 0.5 * (edges[1:] + edges[:-1])
        half = 0.5 * (edges[1:] - edges[:-1])
        nodes = mid[:, None] + half[:, None] * gx[None, :]
        return float(np.sum(half[:, None] * gw[None, :] * np.abs(self(nodes))))


def unsmoothing_kernel(x: int) -> UnsmoothingKernel:
    return UnsmoothingKernel(x)


def _window_weight(M: float) -> PlateauBump:
    """Weight for the window (2M/3, M]: support [8M/15, 16M/15], flat on
    [2M/3, M] -- the dyadic-scale bump with N = 8M/15."""
    return PlateauBump(lo=8.0 * M / 15.0, flat_lo=2.0 * M / 3.0,
                       flat_hi=M, hi=16.0 * M / 15.0)


def unsmooth_decompose(form: SymSquareForm, N: float, alpha: float) -> complex:
    """Reconstruct sum_{2M/3 < n <= M} A(1,n) e(alpha n), M = 15N/8, from
    smooth sums truncated by the kernel's closed-form indicator.

    S_w(x) = sum_n A(1,n) e(alpha n) w(n) [|n| <= x] with w = 1 exactly on
    the window; the reconstruction is S_w(M) - S_w(2M/3) and must equal the
    direct sharp window sum to rounding.
    """
    M = 15.0 * N / 8.0
    w = _window_weight(M)
    lo = max(1, int(math.ceil(w.lo)))
    hi = int(math.floor(w.hi))
    if hi > form.n_max:
        raise IndexError(f"window reaches {hi}, table ends at {form.n_max}")
    n = np.arange(lo, hi + 1)
    base = form.a1n[lo : hi + 1] * w(n.astype(float)) \
        * np.exp(2j * math.pi * alpha * n)
    k_hi = UnsmoothingKernel(int(math.floor(M)))
    k_lo = UnsmoothingKernel(int(math.floor(2.0 * M / 3.0)))
    ind = k_hi.fourier_coefficient(n) - k_lo.fourier_coefficient(n)
    return complex(np.sum(base * ind))


def stitch_windows(n_lo: int, n_hi: int) -> list[tuple[int, int]]:
    """Half-open integer windows (lo, hi] with hi' = floor(2 hi / 3), tiling
    (n_lo, n_hi] exactly once."""
    if not 0 <= n_lo < n_hi:
        raise ValueError(f"need 0 <= n_lo < n_hi, got ({n_lo}, {n_hi})")
    out = []
    hi = n_hi
    while hi > n_lo:
        lo = max(int(math.floor(2.0 * hi / 3.0)), n_lo)
        out.append((lo, hi))
        hi = lo
    return out


# ----------------------------------------------------------------------------
# Plumbing


def ingest(path: str | Path, strict: bool = False,
           ramanujan: bool = False) -> MaassGL2Form:
    """Load and validate a Maass data file (see hecke.load_maass_form)."""
    return load_maass_form(path, strict=strict, ramanujan=ramanujan)


def emit_csv(rows: list[dict], path: str | Path, schema: str) -> None:
    """Write rows with a versioned '# schema=' comment line first."""
    path = Path(path)
    if not rows:
        path.write_text(f"# schema={schema}\n")
        return
    with path.open("w", newline="") as fh:
        fh.write(f"# schema={schema}\n")
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)


def read_csv(path: str | Path) -> tuple[str, list[dict]]:
    """Inverse of emit_csv; returns (schema, rows as strings)."""
    lines = Path(path).read_text().splitlines()
    if not lines or not lines[0].startswith("# schema="):
        raise ValueError(f"{path}: missing schema comment line")
    schema = lines[0].split("=", 1)[1]
    rows = list(csv.DictReader(lines[1:]))
    return schema, rows
