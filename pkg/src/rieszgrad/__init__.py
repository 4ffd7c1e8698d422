"""Sharp pointwise gradient bounds for Riesz potentials of bounded densities."""
from ._backend import BACKEND
from .bounds import (
    BoundResult,
    M_n,
    N_alpha,
    Phi_n,
    build_shape_table,
    gradient_bound,
    psi_shape,
    solve_t,
)
from .hypergeom import gauss_2f1, ln_gamma
from .potentials import (
    BallSpec,
    Component,
    Density,
    FunctionalValues,
    ball_F,
    ball_H,
    density_functionals,
    invert_ball,
)
from .reduced import f_alpha, h_alpha

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BallSpec",
    "BoundResult",
    "Component",
    "Density",
    "FunctionalValues",
    "M_n",
    "N_alpha",
    "Phi_n",
    "ball_F",
    "ball_H",
    "build_shape_table",
    "density_functionals",
    "f_alpha",
    "gauss_2f1",
    "gradient_bound",
    "h_alpha",
    "invert_ball",
    "ln_gamma",
    "psi_shape",
    "solve_t",
]
