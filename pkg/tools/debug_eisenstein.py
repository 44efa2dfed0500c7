#!/usr/bin/env python3
"""Validate the collocation pipeline against the SL(2,Z) Eisenstein series.

E*(z, 1/2+it) has the same even cos/K_{it} expansion shape as a Maass form,
with *known* coefficients lam_E(n) = sum_{ad=n} (a/d)^{it} plus an explicit
constant term, so it exercises pullback, Khat, and FFT extraction end to end.
"""

import numpy as np
import mpmath as mp
import sys

sys.path.insert(0, "tools")
from make_maass_fixture import (KhatSpline, pullback_grid, extract_coefficients,
                                U_CUT, M_STAR)

T = 13.779751351890708995960997537  # reuse the cached spline order


def lam_eis(n_max, t):
    lam = np.zeros(n_max + 1)
    for a in range(1, n_max + 1):
        for d in range(1, n_max // a + 1):
            lam[a * d] += np.cos(t * np.log(a / d))
    return lam


def main():
    mp.mp.dps = 40
    t = mp.mpf(repr(T))
    s = mp.mpf("0.5") + 1j * t
    xi = lambda u: mp.pi ** (-u / 2) * mp.gamma(u / 2) * mp.zeta(u)
    xi1 = xi(2 * s)          # = xi(1+2it)
    scale = mp.e ** (mp.pi * t / 2)
    xi1s = complex(xi1 * scale)
    print("scaled xi(1+2it):", xi1s)

    khat = KhatSpline(T, 0.04, 6000,
                      cache=__import__("pathlib").Path("tools/khat_cache_eis.npz"))

    n_max = 60
    lam = lam_eis(n_max, T)

    def const_term(y):
        # scaled: e^{pi t/2} * 2 Re[xi(1+2it) y^{1/2+it}]
        return 2.0 * np.real(xi1s * np.sqrt(y) * np.exp(1j * T * np.log(y)))

    def fhat(x, y, coef4):
        m_top = min(int(U_CUT / (2 * np.pi * y)), n_max)
        m = np.arange(1, m_top + 1)
        u = 2 * np.pi * m * y
        return const_term(y) + np.sqrt(y) * np.sum(
            coef4[1:m_top + 1] * khat(u) * np.cos(2 * np.pi * m * x))

    coef4 = 4.0 * lam

    # ---- direct automorphy test: F(z) == F(-1/z) ?
    print("\nautomorphy F(z) vs F(-1/z):")
    for (x, y) in [(0.31, 0.52), (0.11, 0.95), (-0.27, 0.61), (0.49, 0.71)]:
        d = x * x + y * y
        xs, ys = -x / d, y / d
        v1, v2 = fhat(x, y, coef4), fhat(xs, ys, coef4)
        print(f"  z=({x:+.2f},{y:.2f}) F={v1:+.10e}  F(Sz)={v2:+.10e}  diff={v1-v2:+.3e}")

    # ---- end-to-end collocation extraction on the Eisenstein series
    n_keep = 40
    y0 = (T + 5.0) / (2 * np.pi * 400)
    m_trunc = int(U_CUT / (2 * np.pi * y0)) + 1
    two_q = m_trunc + n_keep + 300
    x_star, y_star = pullback_grid(two_q, y0)
    g = np.array([fhat(x_star[j], y_star[j], coef4) for j in range(two_q)])
    ext = extract_coefficients(g, n_keep)
    kappa = np.sqrt(y0) * khat(2 * np.pi * np.arange(1, n_keep + 1) * y0)
    got = ext / kappa
    want = coef4[1:n_keep + 1]
    err = np.abs(got - want)
    print("\ncollocation-extracted coefficients vs known (first 8):")
    for i in range(8):
        print(f"  n={i+1}: got {got[i]:+.10f}  want {want[i]:+.10f}  kappa {kappa[i]:+.3e}")
    ok = np.abs(kappa) > 1e-3
    print(f"max err over n with |kappa|>1e-3: {err[ok].max():.3e}")


if __name__ == "__main__":
    main()
