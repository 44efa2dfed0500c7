import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symtwist.hecke import (IngestionError, MaassGL2Form, build_sym_square,
                            extend_hecke, gl3_coeff, langlands_from_type,
                            load_maass_form, moment_sum, satake,
                            short_interval_sum, sym_square_coeff,
                            synthetic_form, verify_local_euler_identity)


def test_langlands_symmetric_point():
    assert langlands_from_type(1.0 / 3.0, 1.0 / 3.0) == (0.0, 0.0, 0.0)


@given(st.floats(-3, 3, allow_nan=False), st.floats(-3, 3, allow_nan=False))
@settings(max_examples=100, deadline=None)
def test_langlands_sums_to_zero(nu1, nu2):
    a1, a2, a3 = langlands_from_type(nu1, nu2)
    assert abs(a1 + a2 + a3) < 1e-12


def test_langlands_dual():
    # the dual form has type (nu2, nu1) and parameters (-a3, -a2, -a1)
    rng = np.random.default_rng(3)
    for _ in range(20):
        nu1, nu2 = rng.uniform(-2, 2, 2)
        a1, a2, a3 = langlands_from_type(nu1, nu2)
        d1, d2, d3 = langlands_from_type(nu2, nu1)
        assert (d1, d2, d3) == pytest.approx((-a3, -a2, -a1))


# ----------------------------------------------------------------------------
# Hecke tables


def test_extend_hecke_relations(maass_form):
    table = extend_hecke(maass_form, 5000)
    lam = table.values
    assert lam[1] == 1.0
    assert lam[4] == pytest.approx(lam[2] ** 2 - 1.0, rel=1e-12)
    assert lam[12] == pytest.approx(lam[4] * lam[3], rel=1e-12)
    # exhaustive recurrence + multiplicativity
    for p in (2, 3, 5, 7):
        for k in range(2, 6):
            if p**k <= 5000:
                assert lam[p**k] == pytest.approx(
                    lam[p] * lam[p ** (k - 1)] - lam[p ** (k - 2)], abs=1e-10)
    rng = np.random.default_rng(4)
    for _ in range(300):
        m = int(rng.integers(2, 70))
        n = int(rng.integers(2, 5000 // m))
        if math.gcd(m, n) == 1:
            assert lam[m * n] == pytest.approx(lam[m] * lam[n], abs=1e-10)


def test_extend_hecke_missing_prime():
    form = synthetic_form(seed=1, p_max=97)
    with pytest.raises(IngestionError, match="101"):
        extend_hecke(form, 200)


def test_sym_square_definition(maass_form):
    table = extend_hecke(maass_form, 1000)
    assert sym_square_coeff(table, 1) == 1.0
    for p in (2, 3, 5, 13):
        assert sym_square_coeff(table, p) == pytest.approx(
            table.power_eigenvalue(p, 2), rel=1e-12)
    # n = 4: divisor pairs (m, l) with m l^2 = 4 are (4,1) and (1,2)
    assert sym_square_coeff(table, 4) == pytest.approx(
        table.power_eigenvalue(2, 4) + 1.0, rel=1e-12)


def test_sym_square_table_agrees_with_definition(maass_form):
    # multiplicative fast path vs the defining convolution, every n
    table = extend_hecke(maass_form, 2000)
    sym = build_sym_square(maass_form, 2000)
    for n in range(1, 2001):
        assert sym.a1n[n] == pytest.approx(sym_square_coeff(table, n), abs=1e-9)


def test_sym_square_form_fields(sym_form, maass_form):
    assert sym_form.T == pytest.approx(2.0 * maass_form.t_j)
    a1, a2, a3 = sym_form.langlands
    assert a1 == pytest.approx(1j * sym_form.T)
    assert a2 == 0.0 and a3 == pytest.approx(-1j * sym_form.T)
    assert abs(a1 + a2 + a3) < 1e-12
    assert sym_form.laplace_eigenvalue == pytest.approx(1.0 + sym_form.T**2)
    assert sym_form.a1n[1] == 1.0


def test_gl3_coeff(sym_form):
    for n in (1, 2, 17, 100):
        assert gl3_coeff(sym_form, 1, n) == pytest.approx(sym_form.a1(n))
        assert gl3_coeff(sym_form, n, 1) == pytest.approx(sym_form.a1(n))
    assert gl3_coeff(sym_form, 2, 2) == pytest.approx(
        sym_form.a1(2) ** 2 - 1.0, rel=1e-12)
    # (6,4): divisors of gcd = 2
    want = sym_form.a1(6) * sym_form.a1(4) - sym_form.a1(3) * sym_form.a1(2)
    assert gl3_coeff(sym_form, 6, 4) == pytest.approx(want, rel=1e-12)


# ----------------------------------------------------------------------------
# Satake parameters and the Euler identity


def test_satake_examples():
    s = satake(2.0)
    assert s.alpha_p == pytest.approx(1.0) and s.beta_p == pytest.approx(1.0)
    s = satake(0.0)
    assert s.alpha_p == pytest.approx(1j) and s.beta_p == pytest.approx(-1j)
    s = satake(1.2)
    assert abs(s.alpha_p) == pytest.approx(1.0, abs=1e-14)
    assert s.alpha_p * s.beta_p == pytest.approx(1.0, abs=1e-14)
    assert s.alpha_p + s.beta_p == pytest.approx(1.2, abs=1e-14)
    # roots of z^2 - lambda z + 1
    z = s.alpha_p
    assert abs(z * z - 1.2 * z + 1.0) < 1e-14


def test_satake_beyond_ramanujan():
    s = satake(2.5)
    assert s.alpha_p.imag == 0.0 and s.beta_p.imag == 0.0
    assert s.alpha_p * s.beta_p == pytest.approx(1.0, rel=1e-14)


def test_satake_reconstructs_prime_powers(maass_form):
    table = extend_hecke(maass_form, 2**11)
    for p in (2, 3):
        s = satake(table[p])
        for k in range(11):
            if p**k > table.n_max:
                break
            rec = sum(s.alpha_p**m * s.beta_p ** (k - m) for m in range(k + 1))
            assert rec.imag == pytest.approx(0.0, abs=1e-9)
            assert rec.real == pytest.approx(table[p**k], abs=1e-9)


def test_euler_identity_closed_forms():
    # lambda(p)=2: 3^4 = 25 + 2*16 + 3*5 + 3*3 = 81; lambda(p)=0: 1 = 1+0+3-3
    assert verify_local_euler_identity(2.0) == pytest.approx(0.0, abs=1e-12)
    assert verify_local_euler_identity(0.0) == pytest.approx(0.0, abs=1e-12)


def test_euler_identity_chebyshev_oracle():
    # independent oracle: e_r = sin((r+1) phi)/sin(phi) with lambda = 2 cos phi
    rng = np.random.default_rng(6)
    for _ in range(100):
        phi = rng.uniform(0.05, math.pi - 0.05)
        lam = 2.0 * math.cos(phi)
        e = [math.sin((r + 1) * phi) / math.sin(phi) for r in range(5)]
        lhs = e[2] ** 4
        rhs = e[4] ** 2 + 2 * e[3] ** 2 + 3 * e[4] + 3 * e[2]
        assert abs(lhs - rhs) < 1e-9                 # identity, trig route
        assert verify_local_euler_identity(lam) < 1e-10


# ----------------------------------------------------------------------------
# Moments and short intervals


def test_moment_sum_small(sym_form):
    for kind in ("A2", "A4", "sym2-4th", "8th"):
        assert moment_sum(sym_form, 1, kind) == pytest.approx(1.0)
    assert moment_sum(sym_form, 2, "A2") == pytest.approx(
        1.0 + sym_form.a1(2) ** 2)


def test_moment_sum_brute_force(maass_form, sym_form):
    # independent route via the defining convolution and lambda recurrences
    table = extend_hecke(maass_form, 1000)
    want = math.fsum(sym_square_coeff(table, n) ** 2 for n in range(1, 1001))
    assert moment_sum(sym_form, 1000, "A2") == pytest.approx(want, rel=1e-10)
    want8 = math.fsum(table[n] ** 8 for n in range(1, 501))
    assert moment_sum(sym_form, 500, "8th") == pytest.approx(want8, rel=1e-10)


def test_moment_sum_monotone(sym_form):
    for kind in ("A2", "A4", "sym2-4th", "8th"):
        vals = [moment_sum(sym_form, x, kind) for x in (10, 100, 1000, 5000)]
        assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_moment_sum_bad_kind(sym_form):
    with pytest.raises(ValueError, match="unknown moment kind"):
        moment_sum(sym_form, 10, "A3")


def test_short_interval_sum(sym_form):
    r = short_interval_sum(sym_form, 10.0, 0.0)
    assert r.value == pytest.approx(abs(sym_form.a1(10)) / 10.0)
    r = short_interval_sum(sym_form, 100.0, 10.0)
    want = math.fsum(abs(sym_form.a1(n)) / n for n in range(90, 111))
    assert r.value == pytest.approx(want, rel=1e-12)
    assert set(r.ratios) == {0.5, 0.75, 1.0}
    assert all(v > 0 for v in r.ratios.values())
    r = short_interval_sum(sym_form, 10**4, 10**2)
    assert math.isfinite(r.ratios[0.75])
    with pytest.raises(ValueError):
        short_interval_sum(sym_form, 10.0, 20.0)


# ----------------------------------------------------------------------------
# Ingestion and validation


def test_load_fixture_header(maass_form):
    assert maass_form.t_j == pytest.approx(13.77975135189071)
    assert maass_form.data_precision <= 1e-9
    assert maass_form.prime_eigenvalues[2] == pytest.approx(1.549304477941, abs=1e-9)


def test_loader_rejects_malformed(tmp_path):
    cases = {
        "no_header.txt": "2 1.0\n",
        "gap.txt": "tj 13.7\n2 1.0\n5 0.5\n",
        "dup.txt": "tj 13.7\n2 1.0\n2 1.0\n",
        "nonprime.txt": "tj 13.7\n2 1.0\n3 1.0\n4 1.0\n",
        "badline.txt": "tj 13.7\n2 1.0 extra junk\n",
    }
    for name, text in cases.items():
        p = tmp_path / name
        p.write_text(text)
        with pytest.raises(IngestionError):
            load_maass_form(p)


def test_loader_roundtrip(tmp_path, maass_form):
    p = tmp_path / "roundtrip.txt"
    with p.open("w") as fh:
        fh.write(f"tj {maass_form.t_j!r}\n")
        fh.write(f"precision {maass_form.data_precision:g}\n")
        for q in sorted(maass_form.prime_eigenvalues)[:25]:
            fh.write(f"{q} {maass_form.prime_eigenvalues[q]!r}\n")
    again = load_maass_form(p)
    assert again.t_j == maass_form.t_j
    assert again.prime_eigenvalues[89] == maass_form.prime_eigenvalues[89]


def test_kim_sarnak_gate():
    eigen = {2: 1.0, 3: 0.5, 5: -2.4}      # |lam(5)| > 2 * 5^{7/64} ~ 2.38
    form = MaassGL2Form(t_j=10.0, prime_eigenvalues=eigen, p_max=5,
                        data_precision=1e-9)
    with pytest.warns(UserWarning, match=r"\[5\]"):
        bad = form.validate_bounds()
    assert bad == [5]
    with pytest.raises(IngestionError):
        form.validate_bounds(strict=True)
    # ramanujan mode flags anything beyond 2
    eigen = {2: 2.05, 3: 0.5, 5: 1.0}
    form = MaassGL2Form(t_j=10.0, prime_eigenvalues=eigen, p_max=5)
    with pytest.warns(UserWarning):
        assert form.validate_bounds(ramanujan=True) == [2]
    assert form.validate_bounds(ramanujan=False) == []


def test_synthetic_form_is_multiplicative_but_flagged():
    form = synthetic_form(seed=11, p_max=500)
    assert "synthetic" in form.label
    table = extend_hecke(form, 500)
    assert table[6] == pytest.approx(table[2] * table[3], rel=1e-12)
    assert form.validate_bounds(ramanujan=True) == []


@given(st.integers(min_value=0, max_value=10**6))
@settings(max_examples=60, deadline=None)
def test_hecke_recurrence_property(seed):
    # recurrence and multiplicativity hold for any bounded eigenvalue data
    form = synthetic_form(seed=seed, p_max=200)
    table = extend_hecke(form, 400)
    for p in (2, 3, 5):
        for k in range(2, 6):
            if p**k <= 400:
                assert table[p**k] == pytest.approx(
                    table[p] * table[p ** (k - 1)] - table[p ** (k - 2)],
                    abs=1e-10)
