"""Additive twists of symmetric-square GL(3) Fourier coefficients.

Library-plus-CLI toolkit: Hecke/symmetric-square coefficient tables built
from ingested Maass-form eigenvalue data, Kloosterman sums and Dirichlet
approximation, the oscillatory contour transforms Psi_± with their bound
envelope, numerical verification of the GL(3) dual-sum identity, and
experiment drivers for exponent scans, moment growth, and unsmoothing.
"""

from .arith import (RationalApprox, dirichlet_approx, divisor_count, divisors,
                    kloosterman, kloosterman_table, mobius, mod_inverse,
                    sieve_primes, weil_check)
from .hecke import (HeckeTable, IngestionError, MaassGL2Form, SatakePair,
                    SymSquareForm, build_sym_square, extend_hecke, gl3_coeff,
                    langlands_from_type, load_maass_form, moment_sum, satake,
                    short_interval_sum, sym_square_coeff, synthetic_form,
                    verify_local_euler_identity)
from .transforms import (CanonicalBump, Envelope, PlateauBump, PsiEvaluator,
                         PsiTransformConfig, TestFunction, TruncationError,
                         envelope, mellin_fourier_I, psi_k, psi_plus_minus,
                         stationary_main_term)
from .voronoi import (VoronoiReport, post_voronoi_majorant, voronoi_lhs,
                      voronoi_residual, voronoi_rhs)
from .experiments import (PredictedBounds, ScanConfig, ScanResult,
                          UnsmoothingKernel, emit_csv, exponent_scan, ingest,
                          predicted_bounds, sharp_sum, smooth_sum,
                          stitch_windows, unsmooth_decompose,
                          unsmoothing_kernel, uniform_predicted_bounds)

__version__ = "0.1.0"
