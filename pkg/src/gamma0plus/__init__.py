"""Exact singular invariants of the canonical generators x_N, y_N for the 38
genus-one extended Hecke groups: modular polynomials, (P, Q) pairs, generating
polynomials and their factorizations, high-precision CM evaluations, and
ring-class-field minimal polynomials.
"""

from .classfield import MinPolyJob, MinPolyResult, heegner_points, minpoly
from .cmeval import (ConvergenceError, EvalResult, PrecisionPolicy,
                     cubic_residual, eval_x, eval_y, y_from_pq)
from .curvedata import (CurveRecord, LevelRegistry, an_coefficients, ap_count,
                        bootstrap_coeffs, bootstrap_record, curve_coeffs,
                        default_registry, fourier_from_parametrization,
                        genus_one_levels, load_record, save_record,
                        validate_cubic)
from .exactalg import (CycInt, IntPoly, QSeries, YLinearPoly, cyc_to_int,
                       series_arith, series_reindex, ylinear_mul)
from .genpoly import (FactoredPoly, factor_over_z, generating_polynomial,
                      select_factor_by_root)
from .modpoly import (ModularPolynomial, OmegaMatrix, omega_pullback,
                      omega_set, phi_polynomial, pq_extract, psi,
                      reduce_to_xy, sigma1_plus)
from .quadforms import (CMPoint, Matrix2, QuadForm, class_number, cm_root,
                        coprime_rep, fixed_point, phi_map, reduce,
                        reduced_forms, tau0_for)

__version__ = "0.1.0"

__all__ = [
    "CMPoint", "ConvergenceError", "CurveRecord", "CycInt", "EvalResult",
    "FactoredPoly", "IntPoly", "LevelRegistry", "Matrix2", "MinPolyJob",
    "MinPolyResult", "ModularPolynomial", "OmegaMatrix", "PrecisionPolicy",
    "QSeries", "QuadForm", "YLinearPoly", "an_coefficients", "ap_count",
    "bootstrap_coeffs", "bootstrap_record", "class_number", "cm_root",
    "coprime_rep", "cubic_residual", "curve_coeffs", "cyc_to_int",
    "default_registry", "eval_x", "eval_y", "factor_over_z", "fixed_point",
    "fourier_from_parametrization", "generating_polynomial", "genus_one_levels",
    "heegner_points", "load_record", "minpoly", "omega_pullback", "omega_set",
    "phi_map", "phi_polynomial", "pq_extract", "psi", "reduce", "reduce_to_xy",
    "reduced_forms", "save_record", "select_factor_by_root", "series_arith",
    "series_reindex", "sigma1_plus", "tau0_for", "validate_cubic", "y_from_pq",
    "ylinear_mul",
]
