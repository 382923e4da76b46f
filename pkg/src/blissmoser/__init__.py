"""Numerics for limiting Bliss and log-log improved Moser functionals on E_N."""

from .functionals import (I_beta, J_1h, J_gamma, eval_functional, gamma_growth_model,
                          grad_slopes, prop24_lower_bound)
from .gridfn import (GridFn, MaxRatioResult, basic_bound_check, dumps, energy, eval_fn,
                     from_slopes, geometric_grid, loads, make_grid_fn, max_ratio, normalize,
                     random_monotone)
from .optimize import OptimizeReport, ScanResult, maximize_gridfn, scan_broken_line
from .quad import QuadConfig, QuadratureError, QuadResult, integrate_exp
from .sequences import (LemmaReport, SweepRow, SweepTable, broken_line, diagnostics, moser_w,
                        parse_schedule, sweep)
from .series import SeriesBound, divergence_witness, series_bound, series_term, term_ratio
from .special import (bliss_constant, bliss_limit, bliss_log_constant, bliss_table,
                      carleson_chang_threshold, hardy_constant, harmonic, log_gamma)
from .weights import WeightSpec, i_beta_spec, j1h_spec, j_gamma_spec, weight_eval

__version__ = "0.1.0"
