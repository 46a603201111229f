"""Discrete inf-sup constant of (p, div u) for mimetic spectral elements on squares."""
from .core import (
    InfSupResult,
    NormFactorization,
    beta_oracle,
    build_test_matrix,
    compute_infsup,
    smallest_positive_singular,
    sym_factor_psd,
)
from .discretization import (
    DofLayout,
    build_layout,
    divergence_coefficients,
    flux_mass_matrix,
    incidence_matrix,
    volume_mass_matrix,
)
from .polybasis import BasisSet1D, QuadratureRule1D, edge_at, gll_rule, lagrange_at, lagrange_deriv_at

__version__ = "0.1.0"
