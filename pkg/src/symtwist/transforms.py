"""Archimedean analysis for the dual-sum transforms.

Contents: the oscillatory test weight psi(y) = e^{i theta y} w(y) with a
pluggable smooth bump w supported on [N, 2N]; its Fourier-Mellin transform

    I(tau) = int_0^inf w(x) e^{i theta x} x^{i tau} dx / x

with the stationary-phase main term; the contour transforms

    Psi_k(x) = (1/2 pi i) int_(sigma) (pi^3 x)^{-s}
               prod_i Gamma((1+s+a_i+k)/2) / Gamma((-s-a_i+k)/2)
               psitilde(-s) ds,        a = (iT, 0, -iT),  k = 0, 1,

    Psi_± = (1/2 pi^{3/2}) (Psi_0 ± (1/i) Psi_1);

and the piecewise bound envelope (U, Delta, M, E_Delta) that localizes the
dual variable near |theta N| T^2 / (2 pi)^3.

Gamma ratios are always evaluated through complex log-gamma differences and
assembled as exp(log magnitude + i phase); raw gammas overflow long before
the tau, T ranges of interest.  The contour integrand at sigma = -1/2 has a
unimodular gamma factor, which is why that abscissa is the default.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import loggamma

from .quadrature import QuadratureError, panel_grid, panel_nodes, refine_check, twiddle_dot

__all__ = [
    "CanonicalBump",
    "Envelope",
    "PlateauBump",
    "PsiEvaluator",
    "PsiTransformConfig",
    "TestFunction",
    "TruncationError",
    "envelope",
    "mellin_fourier_I",
    "psi_k",
    "psi_plus_minus",
    "stationary_main_term",
]


class TruncationError(RuntimeError):
    """Contour truncation height tau_max was insufficient."""

    def __init__(self, message: str, suggested_tau_max: float):
        super().__init__(f"{message}; retry with tau_max >= {suggested_tau_max:.1f}")
        self.suggested_tau_max = suggested_tau_max


# ----------------------------------------------------------------------------
# Bumps and the test function


@dataclass(frozen=True)
class CanonicalBump:
    """w(y) = exp(1 - 1/(1-u^2)) with u = (2y-3N)/N; support (N, 2N), peak 1."""

    N: float

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        u = (2.0 * y - 3.0 * self.N) / self.N
        out = np.zeros_like(y)
        inside = np.abs(u) < 1.0
        ui = u[inside]
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - ui * ui))
        return out if out.ndim else float(out)


def _smoothstep(t):
    """C-infinity transition, 0 for t<=0 and 1 for t>=1."""
    t = np.asarray(t, dtype=float)
    def sig(u):
        out = np.zeros_like(u)
        pos = u > 0
        out[pos] = np.exp(-1.0 / u[pos])
        return out
    a = sig(t)
    b = sig(1.0 - t)
    return a / (a + b + (a + b == 0.0))


@dataclass(frozen=True)
class PlateauBump:
    """Smooth bump, 1 exactly on [flat_lo, flat_hi], supported on [lo, hi]."""

    lo: float
    flat_lo: float
    flat_hi: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.flat_lo < self.flat_hi < self.hi:
            raise ValueError("need lo < flat_lo < flat_hi < hi")

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        rise = _smoothstep((y - self.lo) / (self.flat_lo - self.lo))
        fall = _smoothstep((self.hi - y) / (self.hi - self.flat_hi))
        out = rise * fall
        out[(y <= self.lo) | (y >= self.hi)] = 0.0
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class TestFunction:
    """psi(y) = e^{i theta y} w(y), w smooth with support inside [N, 2N]."""

    N: float
    theta: float = 0.0
    bump: object = None

    def __post_init__(self):
        if not self.N > 0:
            raise ValueError(f"N must be positive, got {self.N}")
        if self.bump is None:
            object.__setattr__(self, "bump", CanonicalBump(self.N))

    def w(self, y):
        return self.bump(y)

    def psi(self, y):
        y = np.asarray(y, dtype=float)
        return self.bump(y) * np.exp(1j * self.theta * y)

    @property
    def theta_n(self) -> float:
        return abs(self.theta) * self.N

    def derivative_constants(self, j_max: int = 4, grid: int = 1000) -> list[float]:
        """c_j with |w^(j)| <= c_j N^{-j}, estimated by central finite differences."""
        y = np.linspace(self.N, 2.0 * self.N, grid)
        h = self.N / 2000.0
        consts = [float(np.max(np.abs(self.bump(y))))]
        stencils = {
            1: ([-0.5, 0.0, 0.5], [-1, 0, 1]),
            2: ([1.0, -2.0, 1.0], [-1, 0, 1]),
            3: ([-0.5, 1.0, 0.0, -1.0, 0.5], [-2, -1, 0, 1, 2]),
            4: ([1.0, -4.0, 6.0, -4.0, 1.0], [-2, -1, 0, 1, 2]),
        }
        for j in range(1, j_max + 1):
            coef, off = stencils[j]
            acc = np.zeros_like(y)
            for c, o in zip(coef, off):
                if c:
                    acc += c * self.bump(y + o * h)
            consts.append(float(np.max(np.abs(acc)) / h**j * self.N**j))
        return consts


# ----------------------------------------------------------------------------
# Fourier-Mellin transform and its stationary-phase main term


def mellin_fourier_I(tf: TestFunction, tau: float, quad_tol: float = 1e-8,
                     weight_exponent: float = 0.0) -> complex:
    """I = int w(x) x^{weight} e^{i theta x} x^{i tau} dx/x by panel quadrature.

    Tolerance is relative to max(|I|, 1e-3 * L1 mass of the integrand); in the
    rapid-decay regimes |I| sits many orders below the L1 mass and is then
    resolved to absolute accuracy ~eps * L1.  Raises QuadratureError with the
    achieved error if the refined grid disagrees.
    """
    a, b = tf.N, 2.0 * tf.N
    freq = abs(tf.theta) + (abs(tau) + abs(weight_exponent) + 1.0) / tf.N

    def integrand(x):
        return tf.bump(x) * x ** (weight_exponent - 1.0) * np.exp(
            1j * (tf.theta * x + tau * np.log(x)))

    def integrate(nodes, weights):
        return complex(np.sum(weights * integrand(nodes)))

    x0, w0 = panel_nodes(a, b, max(freq, 4.0 / tf.N))
    l1 = float(np.sum(w0 * np.abs(integrand(x0))))
    return refine_check(integrate, a, b, freq, quad_tol,
                        scale_floor=1e-3 * l1, what="Fourier-Mellin transform")


def stationary_main_term(tf: TestFunction, tau: float) -> complex:
    """Closed-form stationary-phase main term of I.

    sqrt(2 pi) w(-tau/theta) |tau|^{-1/2} e^{i tau log|tau/(e theta)|}
    e^{i pi/4 sgn theta}; zero when the stationary point -tau/theta leaves
    [N, 2N].  Requires |tau| >= 1, |theta N| >= 1 (the oscillatory regime).
    """
    if tf.theta == 0.0 or abs(tau) < 1.0 or tf.theta_n < 1.0:
        raise ValueError("main term needs theta != 0, |tau| >= 1, |theta N| >= 1")
    x0 = -tau / tf.theta
    if not tf.N <= x0 <= 2.0 * tf.N:
        return 0.0 + 0.0j
    phase = tau * math.log(abs(tau / (math.e * tf.theta))) \
        + 0.25 * math.pi * math.copysign(1.0, tf.theta)
    return math.sqrt(2.0 * math.pi) * float(tf.bump(x0)) / math.sqrt(abs(tau)) \
        * complex(math.cos(phase), math.sin(phase))


# ----------------------------------------------------------------------------
# The contour transforms Psi_k and Psi_+-


@dataclass(frozen=True)
class PsiTransformConfig:
    """Contour parameters for Psi_k; sigma = -1/2 keeps the gamma ratio unimodular.

    tau_max=None lets the evaluator grow the contour until the truncation tail
    is below quad_tol of the integral's L1 mass; an explicit tau_max must obey
    the floor 4 (1+|theta N|)^{1.2} and is never extended.
    """

    T: float
    sigma: float = -0.5
    k: int = 0
    tau_max: float | None = None
    quad_tol: float = 1e-8

    def __post_init__(self):
        if not self.T > 0:
            raise ValueError(f"T must be positive, got {self.T}")
        if not self.sigma > -1.0:
            raise ValueError(f"need sigma > -1 for the lift's parameters, got {self.sigma}")
        if self.k not in (0, 1):
            raise ValueError(f"k must be 0 or 1, got {self.k}")
        if not 0.0 < self.quad_tol <= 1e-4:
            raise ValueError(f"quad_tol must lie in (0, 1e-4], got {self.quad_tol}")

    def tau_floor(self, tf: TestFunction) -> float:
        return 4.0 * (1.0 + tf.theta_n) ** 1.2


class PsiEvaluator:
    """Precomputed contour data for Psi_k(x) at fixed (tf, cfg), many x.

    The integrand factors as (pi^3 x)^{-s} * [gamma ratio * psitilde](tau), so
    psitilde and the log-gamma ratios are evaluated once on a shared tau grid
    and each x costs one twiddled dot product.  x_range fixes the phase rate
    |log(pi^3 x)| the grid must resolve.
    """

    def __init__(self, tf: TestFunction, cfg: PsiTransformConfig,
                 x_range: tuple[float, float]):
        if not 0.0 < x_range[0] <= x_range[1]:
            raise ValueError(f"bad x_range {x_range}")
        self.tf = tf
        self.cfg = cfg
        self.x_range = x_range
        floor = cfg.tau_floor(tf)
        if cfg.tau_max is not None:
            if cfg.tau_max < floor:
                raise ValueError(f"tau_max={cfg.tau_max} below floor {floor:.1f}")
            self._tau_capped = False
            self._build(cfg.tau_max)
        else:
            tau_max = max(floor, self._probe_tau_max())
            for _ in range(4):
                self._build(tau_max)
                if self.tail_fraction <= cfg.quad_tol or self._tau_capped:
                    break
                tau_max *= 1.5
            else:
                raise TruncationError("contour tail did not converge",
                                      suggested_tau_max=tau_max)

    def _probe_tau_max(self) -> float:
        """Size the contour from the measured decay of the integrand.

        The smooth bump's Mellin transform decays like exp(-c sqrt(tau))
        outside the band |tau| ~ |theta N|; the gamma ratio grows like
        [(1+|tau-T|)(1+|tau|)(1+|tau+T|)]^{sigma+1/2} (unimodular at the
        default sigma = -1/2).  The decay constant is fitted from probes of
        |psitilde| and the contour is cut where the weighted signal falls
        below quad_tol of its peak -- or where the signal meets the double
        precision floor, beyond which longer contours only integrate
        amplified rounding noise (relevant for sigma > -1/2).
        """
        tf, cfg = self.tf, self.cfg
        ex = cfg.sigma + 0.5

        def gamma_weight(t):
            return ((1.0 + abs(t - cfg.T)) * (1.0 + abs(t))
                    * (1.0 + abs(t + cfg.T))) ** ex

        def raw(t):
            return max(abs(mellin_fourier_I(tf, s * t, quad_tol=1e-4,
                                            weight_exponent=-cfg.sigma))
                       for s in (-1.0, 1.0))

        u_peak = max(raw(0.0), raw(tf.theta_n), 1e-300)
        u_floor = 1e-13 * u_peak
        peak_w = max(u_peak, raw(cfg.T) * gamma_weight(cfg.T))
        target = 0.25 * cfg.quad_tol * peak_w

        t = max(12.0, 1.3 * tf.theta_n, 1.3 * cfg.T)
        pts = [(t, max(raw(t), 1e-300))]
        for _ in range(9):
            if pts[-1][1] <= u_floor or pts[-1][1] * gamma_weight(pts[-1][0]) <= target:
                break
            t *= 1.8
            pts.append((t, max(raw(t), 1e-300)))
        if len(pts) < 2:
            return 1.2 * pts[-1][0]
        (t1, u1), (t2, u2) = pts[-2], pts[-1]
        c = max((math.log(u1) - math.log(u2)) / (math.sqrt(t2) - math.sqrt(t1)), 1e-3)

        def fitted(t):
            return u2 * math.exp(-c * (math.sqrt(t) - math.sqrt(t2)))

        # noise-floor crossing of the fitted signal
        t_floor = (math.sqrt(t2) + math.log(u2 / u_floor) / c) ** 2
        lo, hi = t2, max(400.0 * t2, t_floor)
        if fitted(lo) * gamma_weight(lo) <= target:
            hi = lo
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if fitted(mid) * gamma_weight(mid) <= target:
                hi = mid
            else:
                lo = mid
        self._tau_capped = t_floor < hi
        return 1.1 * min(hi, t_floor)

    def _build(self, tau_max: float):
        tf, cfg = self.tf, self.cfg
        # For real psi (theta = 0) the integrand at -tau is the conjugate of
        # the integrand at +tau, so only the tau >= 0 half is computed and the
        # evaluation takes twice the real part.
        self._half = tf.theta == 0.0
        # tau-grid frequency: x-twiddle + psitilde phase slope + gamma phase slope
        lx = max(abs(math.log(math.pi**3 * self.x_range[0])),
                 abs(math.log(math.pi**3 * self.x_range[1])))
        lpsi = max(abs(math.log(tf.N)), abs(math.log(2.0 * tf.N)))
        lgam = 3.0 * math.log(2.0 + 0.5 * (tau_max + cfg.T))
        lo = 0.0 if self._half else -tau_max
        self._tau_grid = panel_grid(lo, tau_max, lx + lpsi + lgam,
                                    min_panels=32, phase_per_panel=6.0 * np.pi)
        tau = self._tau_grid.nodes.ravel()
        wtau = self._tau_grid.weights.ravel()
        self.tau_max = tau_max

        # psitilde(-s) = int f(v) e^{-i tau v} dv in v = log x coordinates,
        # f(v) = w(e^v) e^{-sigma v} e^{i theta e^v}; uniform v-panels so the
        # tau sweep is a twiddle_dot.
        vfreq = 2.0 * abs(tf.theta) * tf.N + tau_max + abs(cfg.sigma) + 1.0
        vgrid = panel_grid(math.log(tf.N), math.log(2.0 * tf.N), vfreq,
                           phase_per_panel=6.0 * np.pi)
        vn = vgrid.nodes
        xv = np.exp(vn)
        f_po = vgrid.weights * tf.bump(xv) * np.exp(-cfg.sigma * vn) \
            * np.exp(1j * tf.theta * xv)
        psit = twiddle_dot(tau, vgrid, f_po)

        # six-gamma ratio via log-gamma differences, k = 0 and 1
        self._amps = []
        for k in (0, 1):
            logg = np.zeros(len(tau), dtype=complex)
            for t_i in (cfg.T, 0.0, -cfg.T):
                znum = 0.5 * (1.0 + cfg.sigma + k) + 0.5j * (tau + t_i)
                zden = 0.5 * (-cfg.sigma + k) - 0.5j * (tau + t_i)
                logg += loggamma(znum) - loggamma(zden)
            with np.errstate(over="ignore", invalid="ignore"):
                amp = np.exp(logg) * psit * wtau
            amp[~np.isfinite(amp)] = 0.0     # denominator-pole zeros of 1/Gamma
            self._amps.append(amp)

        self._tau = tau
        l1 = np.abs(self._amps[0]) + np.abs(self._amps[1])
        self.l1_mass = float(np.sum(l1)) * (2.0 if self._half else 1.0) / (2.0 * math.pi)
        edge = np.abs(tau) > 0.9 * tau_max
        prev = (np.abs(tau) > 0.8 * tau_max) & ~edge
        tail, ref = float(np.sum(l1[edge])), float(np.sum(l1[prev]))
        ratio = min(tail / ref, 0.9) if ref > 0 else 0.0
        self.tail_estimate = (tail * (1.0 + ratio / (1.0 - ratio))) / (2.0 * math.pi) \
            * (2.0 if self._half else 1.0)
        self.tail_fraction = self.tail_estimate / self.l1_mass if self.l1_mass else 0.0

    def psi_k_many(self, x, k: int) -> np.ndarray:
        """Psi_k at an array of x inside x_range (mild excursions tolerated)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if np.any(x <= 0):
            raise ValueError("x must be positive")
        lnpx = np.log(math.pi**3 * x)
        g = self._tau_grid
        amp_po = self._amps[k].reshape(g.n_panels, len(g.offs))
        out = twiddle_dot(lnpx, g, amp_po)
        if self._half:
            # integrand(-tau) = conj integrand(tau): fold the mirror half
            out = 2.0 * np.real(out).astype(complex)
        return out * (math.pi**3 * x) ** (-self.cfg.sigma) / (2.0 * math.pi)

    def psi_plus_minus_many(self, x) -> tuple[np.ndarray, np.ndarray]:
        p0 = self.psi_k_many(x, 0)
        p1 = self.psi_k_many(x, 1)
        c = 0.5 * math.pi ** (-1.5)
        return c * (p0 + p1 / 1j), c * (p0 - p1 / 1j)

    def tail_at(self, x) -> np.ndarray:
        """Truncation-tail bound on |Psi_k(x)| for this contour."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return self.tail_estimate * (math.pi**3 * x) ** (-self.cfg.sigma)


_EVALUATOR_CACHE: dict = {}


def _evaluator_for(tf: TestFunction, cfg: PsiTransformConfig, x: float) -> PsiEvaluator:
    key = (tf, replace(cfg, k=0))
    ev = _EVALUATOR_CACHE.get(key)
    if ev is None or not (ev.x_range[0] <= x <= ev.x_range[1]):
        lo = min(x / 4.0, ev.x_range[0] if ev else x)
        hi = max(4.0 * x, ev.x_range[1] if ev else x)
        ev = PsiEvaluator(tf, replace(cfg, k=0), (lo, hi))
        if len(_EVALUATOR_CACHE) > 16:
            _EVALUATOR_CACHE.clear()
        _EVALUATOR_CACHE[key] = ev
    return ev


def psi_k(x: float, cfg: PsiTransformConfig, tf: TestFunction) -> complex:
    """Psi_k(x) for cfg.k, with the truncation-tail contract enforced.

    Raises TruncationError when the tail bound exceeds quad_tol * |value|
    while the value still sits above the contour's noise floor.
    """
    ev = _evaluator_for(tf, cfg, x)
    value = complex(ev.psi_k_many(np.array([x]), cfg.k)[0])
    tail = float(ev.tail_at(np.array([x]))[0])
    noise_floor = cfg.quad_tol * ev.l1_mass * (math.pi**3 * x) ** (-cfg.sigma) * 1e-3
    if tail > cfg.quad_tol * abs(value) and tail > noise_floor:
        raise TruncationError(
            f"tail {tail:.2e} exceeds quad_tol * |Psi_{cfg.k}({x:g})| = "
            f"{cfg.quad_tol * abs(value):.2e}",
            suggested_tau_max=2.0 * ev.tau_max)
    return value


def psi_plus_minus(x: float, cfg: PsiTransformConfig,
                   tf: TestFunction) -> tuple[complex, complex]:
    """(Psi_+, Psi_-)(x) = (1/2 pi^{3/2}) (Psi_0 ± Psi_1 / i)(x)."""
    ev = _evaluator_for(tf, cfg, x)
    plus, minus = ev.psi_plus_minus_many(np.array([x]))
    return complex(plus[0]), complex(minus[0])


# ----------------------------------------------------------------------------
# The bound envelope


@dataclass(frozen=True)
class Envelope:
    U: float
    Delta: float
    M: float
    E_Delta: float
    epsilon: float
    fitted_constant: float = 1.0

    @property
    def bound(self) -> float:
        return self.fitted_constant * (self.M + self.E_Delta)


def envelope(x: float, theta: float, N: float, T: float, epsilon: float = 0.1,
             decay_power: float = 3.0, delta_multiplier: float = 100.0) -> Envelope:
    """Piecewise envelope for |Psi_±(x)|.

    U = max(1+T^2, T^2 |tN|, |tN|^3),  Delta = |xN - |tN| T^2 / (2 pi)^3|,
    M = max(1+T, |tN|^{3/2}) (NT)^eps (1 + xN / (U (NT)^eps))^{-A}, and
    E_Delta follows the four-case table gated on |tN| against T^{2/3} and
    T^{1-eps};  "much less than" thresholds carry the configurable multiplier
    (default 100).  Implied constants live in fitted_constant, set by the
    calibration experiments, never hardcoded.
    """
    if not (T > 0 and N > 0):
        raise ValueError("need T > 0 and N > 0")
    tn = abs(theta) * N
    xn = x * N
    U = max(1.0 + T * T, T * T * tn, tn**3)
    Delta = abs(xn - tn * T * T / (2.0 * math.pi) ** 3)
    nt_eps = (N * T) ** epsilon
    M = max(1.0 + T, tn**1.5) * nt_eps * (1.0 + xn / (U * nt_eps)) ** (-decay_power)
    c = delta_multiplier
    if T ** (2.0 / 3.0) <= tn <= T ** (1.0 - epsilon) and Delta <= c * tn**3:
        E = T * T / math.sqrt(tn)
    elif T ** (2.0 / 3.0) <= tn <= T ** (1.0 - epsilon) and Delta <= c * tn * T * T:
        E = T**3 * tn / Delta
    elif T**epsilon <= tn <= T ** (2.0 / 3.0) and Delta <= c * tn * T * T:
        E = tn * T * (min(1.0, T * T / Delta) if Delta > 0 else 1.0)
    else:
        E = 0.0
    return Envelope(U=U, Delta=Delta, M=M, E_Delta=E, epsilon=epsilon)
