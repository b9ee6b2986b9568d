"""Central local discontinuous Galerkin solver for space-fractional diffusion."""

from ._core import (  # noqa: F401
    build_mesh,
    gauss_jacobi_rule,
    gl_fractional_derivative,
    left_frac_deriv,
    rl_power_rule,
    run_convergence,
    run_stability,
)

__all__ = [
    "build_mesh",
    "gauss_jacobi_rule",
    "gl_fractional_derivative",
    "left_frac_deriv",
    "rl_power_rule",
    "run_convergence",
    "run_stability",
]
