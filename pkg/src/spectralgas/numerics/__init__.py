from .airy import airy_ai
from .ode import Trajectory, integrate_ode
from .polynomial import Polynomial
from .quadrature import QuadratureRule, composite_legendre, gauss_chebyshev_u, gauss_legendre
from .rational import RationalFunction, residue_at, root_clusters
from .rng import RngStream

__all__ = [
    "Polynomial",
    "QuadratureRule",
    "RationalFunction",
    "RngStream",
    "Trajectory",
    "airy_ai",
    "composite_legendre",
    "gauss_chebyshev_u",
    "gauss_legendre",
    "integrate_ode",
    "residue_at",
    "root_clusters",
]
