"""Heckman-Opdam hypergeometric functions, their Fourier transform, heat flow
and Segal-Bargmann transform on small root systems."""

from .errors import (DomainError, HypergeoError, InsufficientDecay, PoleEncountered,
                     SingularParameter, UnsupportedRootSystem, WeylClosureError)
from .hypergeo import (c_values, delta_density, gamma_coefficients, hypergeometric_function,
                       inv_c_values, plancherel_density)
from .quadrature import GridFunction, QuadratureGrid, TestFunction, box_grid, weyl_grid
from .rootsys import RootSystem, build_root_system, multiplicity, rho, weyl_group

__version__ = "0.1.0"

__all__ = [
    "DomainError", "HypergeoError", "InsufficientDecay", "PoleEncountered", "SingularParameter",
    "UnsupportedRootSystem", "WeylClosureError", "c_values", "delta_density",
    "gamma_coefficients", "hypergeometric_function", "inv_c_values", "plancherel_density",
    "GridFunction", "QuadratureGrid", "TestFunction", "box_grid", "weyl_grid", "RootSystem",
    "build_root_system", "multiplicity", "rho", "weyl_group",
]
