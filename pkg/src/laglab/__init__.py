"""Riemannian geometry of positive Lagrangian graphs.

Numerical realization of the metric, Levi-Civita connection, curvature
tensor, sectional curvature and geodesics on the exact isotopy class of
positive Lagrangian graphs in flat almost Calabi-Yau models, together with
a finite-dimensional Hermitian-matrix mirror model and a battery of
independent finite-difference and integration-by-parts oracles.
"""

__version__ = "0.1.0"

from .ambient import CONVENTIONS, AlmostCYModel, AmbientPoint
from .connection import (
    GeodesicPath,
    HamiltonianFamily,
    SampledPath,
    VerticalDeformation,
    cov_deriv_along_path,
    cov_deriv_coordinate,
    geodesic_shoot,
    w_field,
)
from .curvature import (
    CurvatureReport,
    curvature_report,
    flat_family_check,
    riemann_field,
    riemann_quad,
    sectional,
)
from .hermitian import (
    HermBase,
    HermPoint,
    HermTangent,
    herm_curvature_quad,
    herm_fd_riemann,
    herm_inner,
    herm_sectional,
)
from .lagrangian import GraphLagrangian, TangentFunction, build, grad_inner, inner
from .torus import (
    PeriodicGrid,
    ScalarField,
    TensorField,
    TrigPolynomial,
    TrigTerm,
    integrate,
    partial,
    sample,
)
from .validation import CheckResult, SuiteConfig, SuiteReport, run_suite

__all__ = [
    "AlmostCYModel",
    "AmbientPoint",
    "CONVENTIONS",
    "CheckResult",
    "CurvatureReport",
    "GeodesicPath",
    "GraphLagrangian",
    "HamiltonianFamily",
    "HermBase",
    "HermPoint",
    "HermTangent",
    "PeriodicGrid",
    "SampledPath",
    "ScalarField",
    "SuiteConfig",
    "SuiteReport",
    "TangentFunction",
    "TensorField",
    "TrigPolynomial",
    "TrigTerm",
    "VerticalDeformation",
    "build",
    "cov_deriv_along_path",
    "cov_deriv_coordinate",
    "curvature_report",
    "flat_family_check",
    "geodesic_shoot",
    "grad_inner",
    "herm_curvature_quad",
    "herm_fd_riemann",
    "herm_inner",
    "herm_sectional",
    "inner",
    "integrate",
    "partial",
    "riemann_field",
    "riemann_quad",
    "run_suite",
    "sample",
    "sectional",
    "w_field",
]
