"""Fractional gradients, Riesz transforms and multiplier operators on sampled fields."""

from .constants import ConstantsTable, mu, nu, omega
from .fields import Grid, ScalarField, TestFunctionSpec, VectorField, sample
from .kernels import backend_name, use_backend
from .norms import gagliardo_seminorm, hardy_norm, lp_norm
from .spectral import MultiplierSpec, apply_multiplier, spectral_nabla, spectral_riesz
from .quadrature import QuadratureConfig, quad_nabla, quad_riesz

__version__ = "0.1.0"

__all__ = [
    "ConstantsTable", "Grid", "MultiplierSpec", "QuadratureConfig", "ScalarField", "TestFunctionSpec",
    "VectorField", "apply_multiplier", "backend_name", "gagliardo_seminorm", "hardy_norm", "lp_norm",
    "mu", "nu", "omega", "quad_nabla", "quad_riesz", "sample", "spectral_nabla", "spectral_riesz",
    "use_backend",
]
