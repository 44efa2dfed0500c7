"""Command-line surface.

Subcommands: ingest, coeffs, sum, voronoi-check, psi, exponent-scan,
moments, kernel-check.  Exit codes: 0 success, 2 validation failure
(bad arguments or malformed data), 3 tolerance failure (a numeric check
missed its target).  All runs are deterministic given --seed.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import experiments, hecke, transforms, voronoi
from .quadrature import QuadratureError

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_TOLERANCE = 3


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data", help="Maass eigenvalue data file")
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--tol", type=float, default=1e-3, help="tolerance gate")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strict-ramanujan", action="store_true",
                   help="reject |lambda(p)| > 2 instead of warning")


def _load_sym(args, n_max: int) -> hecke.SymSquareForm:
    if not args.data:
        raise hecke.IngestionError("--data is required for this subcommand")
    form = experiments.ingest(args.data, strict=args.strict_ramanujan,
                              ramanujan=args.strict_ramanujan)
    return hecke.build_sym_square(form, n_max)


def _cmd_ingest(args) -> int:
    form = experiments.ingest(args.data, strict=args.strict_ramanujan,
                              ramanujan=args.strict_ramanujan)
    n_primes = len(form.prime_eigenvalues)
    print(f"tj={form.t_j} T={2 * form.t_j} primes={n_primes} "
          f"p_max={form.p_max} precision={form.data_precision}")
    return EXIT_OK


def _cmd_coeffs(args) -> int:
    sym = _load_sym(args, args.n)
    rows = [{"n": n, "a1n": sym.a1n[n], "lambda_n": sym.lam[n]}
            for n in range(1, args.n + 1)]
    if args.out:
        experiments.emit_csv(rows, args.out, "symtwist.coeffs.v1")
    else:
        for r in rows[-10:]:
            print(f"{r['n']} {r['a1n']:.12g} {r['lambda_n']:.12g}")
    return EXIT_OK


def _cmd_sum(args) -> int:
    sym = _load_sym(args, 2 * args.N if args.smooth else args.N)
    if args.smooth:
        tf = transforms.TestFunction(N=float(args.N))
        val = experiments.smooth_sum(sym, tf, args.alpha)
    else:
        val = experiments.sharp_sum(sym, args.N, args.alpha)
    print(f"{val.real:.12g} {val.imag:+.12g}j  |S|={abs(val):.12g}")
    return EXIT_OK


def _cmd_voronoi_check(args) -> int:
    if not args.data:
        raise hecke.IngestionError("--data is required for this subcommand")
    form = experiments.ingest(args.data, strict=args.strict_ramanujan,
                              ramanujan=args.strict_ramanujan)
    tf = transforms.TestFunction(N=float(args.N), theta=args.theta)
    need = max(2 * args.N, 4096,
               2 * voronoi._n2_cutoff(tf, 2.0 * form.t_j, 1, args.c))
    sym = hecke.build_sym_square(form, need)
    rep = voronoi.voronoi_residual(sym, tf, args.a, args.c)
    row = {"a": args.a, "c": args.c, "N": args.N, "theta": args.theta,
           "T": sym.T, "lhs_re": rep.lhs.real, "lhs_im": rep.lhs.imag,
           "rhs_re": rep.rhs.real, "rhs_im": rep.rhs.imag,
           "n2_max": rep.n2_max, "tail_bound": rep.tail_bound,
           "relative_residual": rep.relative_residual}
    if args.out:
        experiments.emit_csv([row], args.out, "symtwist.voronoi.v1")
    print(f"residual={rep.relative_residual:.3e} (tol {args.tol:g}) "
          f"n2_max={rep.n2_max} tail={rep.tail_bound:.2e}")
    return EXIT_OK if rep.relative_residual <= args.tol else EXIT_TOLERANCE


def _cmd_psi(args) -> int:
    tf = transforms.TestFunction(N=float(args.N), theta=args.theta)
    cfg = transforms.PsiTransformConfig(T=args.T, sigma=args.sigma)
    xs = np.array([float(v) for v in args.x.split(",")])
    ev = transforms.PsiEvaluator(tf, cfg, (xs.min(), xs.max()))
    plus, minus = ev.psi_plus_minus_many(xs)
    tails = ev.tail_at(xs)
    rows = []
    for x, p, m, t in zip(xs, plus, minus, tails):
        env = transforms.envelope(float(x), args.theta, float(args.N), args.T)
        rows.append({"x": x, "theta": args.theta, "N": args.N, "T": args.T,
                     "sigma": args.sigma,
                     "psi_plus_re": p.real, "psi_plus_im": p.imag,
                     "psi_minus_re": m.real, "psi_minus_im": m.imag,
                     "envelope_M": env.M, "envelope_E": env.E_Delta,
                     "tail_estimate": t})
        print(f"x={x:g}: Psi+={p:.6e} Psi-={m:.6e} M+E={env.M + env.E_Delta:.4e}")
    if args.out:
        experiments.emit_csv(rows, args.out, "symtwist.psi.v1")
    return EXIT_OK


def _cmd_exponent_scan(args) -> int:
    grid = tuple(int(v) for v in args.n_grid.split(","))
    cfg = experiments.ScanConfig(N_grid=grid, alpha_samples=args.samples,
                                 p_exponent=args.p, D_exponent=args.D,
                                 seed=args.seed)
    sym = _load_sym(args, grid[-1])
    res = experiments.exponent_scan(sym, cfg)
    for r in res.rows:
        print(f"N={r['N']:7d} max|S|={r['max_abs']:.6g} "
              f"normalized={r['normalized']:.6g}")
    print(f"slope={res.slope:.4f} normalized_slope={res.normalized_slope:.4f}")
    if args.out:
        experiments.emit_csv(res.rows, args.out, "symtwist.exponent_scan.v1")
    return EXIT_OK


def _cmd_moments(args) -> int:
    sym = _load_sym(args, args.x)
    val = hecke.moment_sum(sym, args.x, args.kind)
    print(f"{args.kind}({args.x}) = {val:.12g}  ratio/x^1.05 = "
          f"{val / args.x**1.05:.6g}")
    return EXIT_OK


def _cmd_kernel_check(args) -> int:
    kern = experiments.unsmoothing_kernel(args.x)
    bound = 7.0 + math.log(args.x)
    l1 = kern.l1_norm()
    ns = np.arange(-2 * args.x, 2 * args.x + 1)
    want = (np.abs(ns) <= args.x).astype(float)
    got = kern.fourier_coefficient(ns)
    print(f"x={args.x}: L1={l1:.6f} bound={bound:.6f} "
          f"indicator_exact={bool(np.array_equal(got, want))}")
    ok = l1 <= bound and np.array_equal(got, want)
    return EXIT_OK if ok else EXIT_TOLERANCE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="symtwist", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse and validate a data file")
    _add_common(p)
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("coeffs", help="tabulate A(1,n) and lambda(n)")
    _add_common(p)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_coeffs)

    p = sub.add_parser("sum", help="twisted coefficient sum")
    _add_common(p)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--smooth", action="store_true")
    p.set_defaults(func=_cmd_sum)

    p = sub.add_parser("voronoi-check", help="identity residual report")
    _add_common(p)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--theta", type=float, default=0.0)
    p.set_defaults(func=_cmd_voronoi_check)

    p = sub.add_parser("psi", help="dual-sum transforms and envelope")
    _add_common(p)
    p.add_argument("--x", required=True, help="comma-separated x values")
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--N", type=float, required=True)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--sigma", type=float, default=-0.5)
    p.set_defaults(func=_cmd_psi)

    p = sub.add_parser("exponent-scan", help="slope of log max|S| vs log N")
    _add_common(p)
    p.add_argument("--n-grid", default=",".join(str(2**k) for k in range(8, 17)))
    p.add_argument("--samples", type=int, default=64)
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--D", type=float, default=0.25)
    p.set_defaults(func=_cmd_exponent_scan)

    p = sub.add_parser("moments", help="partial moment sums")
    _add_common(p)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--kind", choices=hecke.MOMENT_KINDS, required=True)
    p.set_defaults(func=_cmd_moments)

    p = sub.add_parser("kernel-check", help="unsmoothing kernel properties")
    _add_common(p)
    p.add_argument("--x", type=int, required=True)
    p.set_defaults(func=_cmd_kernel_check)

    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (hecke.IngestionError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (QuadratureError, transforms.TruncationError) as exc:
        print(f"tolerance failure: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE


if __name__ == "__main__":
    sys.exit(main())
