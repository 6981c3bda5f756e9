"""Distributional calculus for the 2D Schrodinger operator with a
Dirac-delta potential: symbolic rewrite rules, numerical weak pairings,
and the bound-state spectrum family."""

from .specfun import EULER_GAMMA, k0, k0_log_form
from .testfn import BumpFunction, make_bump, bump_eval, rescale
from .quad import (MollifierFamily, PairingReport, LogFitResult, QuadratureError,
                   integrate_radial, pair_regular, pair_delta,
                   pair_mollified_product, fit_log_divergence)
from .dexpr import (parse_expr, print_expr, normalize, canonical_coeffs,
                    scale_expr, laplacian_expr, rewrite_singular_products,
                    rewrite_full, apply_hamiltonian, weak_pair_expr)
from .spectrum import (PhysicalParams, BoundState, CSpectrumFamily,
                       AghhComparison, eeq_residual,
                       energy_from_b, b_from_energy, solve_eeq,
                       closed_form_energy, c_spectrum, aghh_check)

__version__ = "0.1.0"
