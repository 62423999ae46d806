"""Curvature of the metric on the isotopy class of positive Lagrangian graphs.

Two independent routes to the same tensor:

* ``riemann_field`` assembles the pointwise field R(h,k)l from intrinsic data
  (nonnegative Laplacian, restricted conformal factor, covariant Hessians,
  angle gradient) of the base Lagrangian;
* ``riemann_quad`` evaluates the integrated quadruple pairing directly as a
  quadrature, where integration by parts has already cancelled everything but
  one sec(theta)-weighted Cauchy-Schwarz bracket.

Pairing the first against the metric must reproduce the second; the
validation suite enforces this at every base point, and the sectional
curvature built from the quadruple form is non-positive by the pointwise
Cauchy-Schwarz inequality of its integrand.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DegeneratePlane, MarginTooSmall
from .lagrangian import (
    GraphLagrangian,
    TangentFunction,
    require_same_gamma,
)
from .torus import ScalarField, gradient_values, integrate_values

# Below this worst-case cos(theta) the sec^2 factors are considered too
# ill-conditioned for curvature evaluation.
DEFAULT_MARGIN_THRESHOLD = 1e-2

# A plane is degenerate when its Gram determinant is below this fraction of
# the product of the squared norms.
DEGENERACY_THRESHOLD = 1e-10


def _require_margin(gamma: GraphLagrangian, threshold: float):
    if gamma.margin <= threshold:
        raise MarginTooSmall(
            f"positivity margin {gamma.margin:.3e} <= threshold {threshold:.1e}"
        )


def _drift_laplacian(gamma: GraphLagrangian, values: np.ndarray) -> np.ndarray:
    """Lap h - (n / 2 rho) <dh, d rho> (nonnegative-Laplacian convention)."""
    lap = gamma.laplace_beltrami(ScalarField(gamma.grid, values)).values
    grad_h = gradient_values(gamma.grid, values)
    pairing = np.einsum(
        "...ab,...a,...b->...", gamma.inverse_metric, grad_h, gamma.grad_rho
    )
    return lap - (gamma.grid.n / 2.0) * pairing / gamma.rho


def riemann_field_values(
    gamma: GraphLagrangian,
    h: np.ndarray,
    k: np.ndarray,
    l: np.ndarray,
    margin_threshold: float = DEFAULT_MARGIN_THRESHOLD,
) -> np.ndarray:
    """Pointwise curvature field R(h,k)l on raw sample arrays."""
    _require_margin(gamma, margin_threshold)
    grid = gamma.grid
    ginv = gamma.inverse_metric

    grad_h = gradient_values(grid, h)
    grad_k = gradient_values(grid, k)
    grad_l = gradient_values(grid, l)

    def pair(ga, gb):
        return np.einsum("...ab,...a,...b->...", ginv, ga, gb)

    kl = pair(grad_k, grad_l)
    hl = pair(grad_h, grad_l)

    sec2 = 1.0 / gamma.cos_theta**2
    tan = np.tan(gamma.theta)

    term1 = -sec2 * (_drift_laplacian(gamma, h) * kl - _drift_laplacian(gamma, k) * hl)

    # <grad_x grad y, grad l> = Hess y(grad x, grad l) with raised gradients.
    up_h = np.einsum("...ab,...b->...a", ginv, grad_h)
    up_k = np.einsum("...ab,...b->...a", ginv, grad_k)
    up_l = np.einsum("...ab,...b->...a", ginv, grad_l)
    hess_k = gamma.covariant_hessian(ScalarField(grid, k)).values
    hess_h = gamma.covariant_hessian(ScalarField(grid, h)).values
    term2 = sec2 * (
        np.einsum("...ab,...a,...b->...", hess_k, up_h, up_l)
        - np.einsum("...ab,...a,...b->...", hess_h, up_k, up_l)
    )

    h_theta = pair(grad_h, gamma.grad_theta)
    k_theta = pair(grad_k, gamma.grad_theta)
    term3 = tan * sec2 * (h_theta * kl - k_theta * hl)

    return term1 + term2 + term3


def riemann_field(
    gamma: GraphLagrangian,
    h: TangentFunction,
    k: TangentFunction,
    l: TangentFunction,
    margin_threshold: float = DEFAULT_MARGIN_THRESHOLD,
) -> TangentFunction:
    """The curvature field R(h,k)l, returned without renormalization.

    The output is analytically expected to land in the tangent space; its
    zero-mean defect is deliberately *not* projected away (that could mask a
    sign bug) and can be read off with ``mean_zero_residual``.
    """
    require_same_gamma(h, k, l)
    vals = riemann_field_values(gamma, h.values, k.values, l.values, margin_threshold)
    return TangentFunction(gamma, ScalarField(gamma.grid, vals))


def mean_zero_residual(r: TangentFunction) -> tuple[float, float]:
    """(|integral R Re(Omega)|, integral |R| Re(Omega)) — defect and scale."""
    gamma = r.gamma
    raw = integrate_values(gamma.grid, r.values * gamma.re_omega)
    scale = integrate_values(gamma.grid, np.abs(r.values) * gamma.re_omega)
    return abs(raw), scale


def riemann_quad_values(
    gamma: GraphLagrangian,
    h: np.ndarray,
    k: np.ndarray,
    l: np.ndarray,
    m: np.ndarray,
    margin_threshold: float = DEFAULT_MARGIN_THRESHOLD,
) -> float:
    _require_margin(gamma, margin_threshold)
    grid = gamma.grid
    hm = gamma.grad_inner_values(h, m)
    kl = gamma.grad_inner_values(k, l)
    hl = gamma.grad_inner_values(h, l)
    km = gamma.grad_inner_values(k, m)
    integrand = (
        (hm * kl - hl * km)
        / gamma.cos_theta
        * gamma._rho_half
        * gamma.sqrt_det_metric
    )
    return -integrate_values(grid, integrand)


def riemann_quad(
    gamma: GraphLagrangian,
    h: TangentFunction,
    k: TangentFunction,
    l: TangentFunction,
    m: TangentFunction,
    margin_threshold: float = DEFAULT_MARGIN_THRESHOLD,
) -> float:
    """The integrated pairing (R(h,k)l, m) as a single quadrature:
    -integral sec(theta) [<dh,dm><dk,dl> - <dh,dl><dk,dm>] rho^{n/2} vol."""
    require_same_gamma(h, k, l, m)
    return riemann_quad_values(
        gamma, h.values, k.values, l.values, m.values, margin_threshold
    )


def sectional(
    gamma: GraphLagrangian,
    h: TangentFunction,
    k: TangentFunction,
    margin_threshold: float = DEFAULT_MARGIN_THRESHOLD,
) -> float:
    """Sectional curvature K(h, k); non-positive up to quadrature error.

    Raises
    ------
    DegeneratePlane
        If the Gram determinant falls below the degeneracy threshold times
        (h,h)(k,k).
    """
    require_same_gamma(h, k)
    hh = gamma.inner_values(h.values, h.values)
    kk = gamma.inner_values(k.values, k.values)
    hk = gamma.inner_values(h.values, k.values)
    gram = hh * kk - hk * hk
    if gram <= DEGENERACY_THRESHOLD * hh * kk:
        raise DegeneratePlane(
            f"Gram determinant {gram:.3e} below threshold for (h,h)(k,k) = {hh * kk:.3e}"
        )
    numerator = riemann_quad_values(
        gamma, h.values, k.values, k.values, h.values, margin_threshold
    )
    return numerator / gram


@dataclass(frozen=True)
class FlatFamilyReport:
    """Sectional curvatures across reparametrizations of one function."""

    max_abs_sectional: float
    sectionals: tuple[tuple[int, int, float], ...]
    skipped: tuple[tuple[int, int, str], ...]


def flat_family_check(
    gamma: GraphLagrangian,
    l: TangentFunction,
    reparams: Sequence[Callable[[np.ndarray], np.ndarray]],
    margin_threshold: float = DEFAULT_MARGIN_THRESHOLD,
) -> FlatFamilyReport:
    """Sectional curvatures over the family {a_i(l) + const}.

    Differentials of reparametrized copies of one function are pointwise
    collinear, so every plane they span is expected flat; degenerate pairs
    are skipped with a note.
    """
    if l.gamma is not gamma:
        raise ValueError("tangent function attached to a different Lagrangian")
    members = [
        gamma.normalize(ScalarField(gamma.grid, np.asarray(a(l.values), dtype=float)))
        for a in reparams
    ]
    sectionals: list[tuple[int, int, float]] = []
    skipped: list[tuple[int, int, str]] = []
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            try:
                val = sectional(gamma, members[i], members[j], margin_threshold)
                sectionals.append((i, j, val))
            except DegeneratePlane as exc:
                skipped.append((i, j, str(exc)))
    max_abs = max((abs(v) for _, _, v in sectionals), default=0.0)
    return FlatFamilyReport(max_abs, tuple(sectionals), tuple(skipped))


@dataclass(frozen=True)
class CurvatureReport:
    """Bundle of both curvature routes at one base point with diagnostics."""

    gamma: GraphLagrangian
    r_field: ScalarField
    quad_r3: float | None = None
    quad_r4: float | None = None
    sectional: float | None = None
    diagnostics: dict = field(default_factory=dict)


def curvature_report(
    gamma: GraphLagrangian,
    h: TangentFunction,
    k: TangentFunction,
    l: TangentFunction,
    m: TangentFunction | None = None,
    margin_threshold: float = DEFAULT_MARGIN_THRESHOLD,
) -> CurvatureReport:
    """Evaluate R(h,k)l and, when m is given, both quadruple pairings."""
    r = riemann_field(gamma, h, k, l, margin_threshold)
    residual, scale = mean_zero_residual(r)
    diagnostics = {
        "mean_zero_residual": residual,
        "mean_zero_scale": scale,
        "positivity_margin": gamma.margin,
    }
    quad_r3 = quad_r4 = None
    if m is not None:
        quad_r3 = gamma.inner_values(r.values, m.values)
        quad_r4 = riemann_quad(gamma, h, k, l, m, margin_threshold)
    sec = None
    if m is not None and l.h is k.h and m.h is h.h:
        try:
            sec = sectional(gamma, h, k, margin_threshold)
        except DegeneratePlane:
            sec = None
    return CurvatureReport(gamma, r.h, quad_r3, quad_r4, sec, diagnostics)
