"""Bound states of the D-dimensional Klein-Gordon equation with
generalized Hulthen vector/scalar potentials: closed-form spectra,
normalized eigenfunctions, and the numerical oracles that verify them."""

from .errors import ConvergenceError, DomainError, RegimeError, UnsupportedError
from .model import (DimensionlessSet, PotentialSpec, QuantumNumbers,
                    delta_exponent, dimensionless, effective_k)
from .normalize import norm_general_q, norm_q1, norm_quadrature, normalize_state
from .oracle import (GridSpec, build_operator, default_grid, fd_eigensolve,
                     fd_refine, inc_beta_quadrature, integrate, ode_residual)
from .spectrum import (BoundState, condition_residual, enumerate_spectrum,
                       solve_level, solve_level_bisection, state_from_energy)
from .wavefunc import (RadialSample, default_r_grid, radial_R, radial_u,
                       radial_u_jacobi, sample_radial, z_of_r)

__version__ = "0.1.0"

__all__ = [
    "BoundState", "ConvergenceError", "DimensionlessSet", "DomainError",
    "GridSpec", "PotentialSpec", "QuantumNumbers", "RadialSample",
    "RegimeError", "UnsupportedError", "build_operator", "condition_residual",
    "default_grid", "default_r_grid", "delta_exponent", "dimensionless",
    "effective_k", "enumerate_spectrum", "fd_eigensolve", "fd_refine",
    "inc_beta_quadrature", "integrate", "norm_general_q", "norm_q1",
    "norm_quadrature", "normalize_state", "ode_residual", "radial_R",
    "radial_u", "radial_u_jacobi", "sample_radial", "solve_level",
    "solve_level_bisection", "state_from_energy", "z_of_r",
]
