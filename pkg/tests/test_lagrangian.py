import numpy as np
import pytest
from scipy.integrate import quad

from laglab.ambient import AlmostCYModel
from laglab.errors import GammaMismatch, NotPositive
from laglab.lagrangian import build, grad_inner, inner
from laglab.torus import (
    PeriodicGrid,
    ScalarField,
    constant_field,
    field_from_function,
    integrate,
)

# Frozen from the quadrature oracle below (exp(0.1 cos t) cos(0.1 sin t) weight):
# the projection constant of cos(x1) and the squared norm of cos(x1) at the
# twisted zero section.
TWISTED_NORMALIZE_SHIFT = 0.05
TWISTED_INNER_COS1 = 19.788556824184163


def twisted_weight(t):
    return np.exp(0.1 * np.cos(t)) * np.cos(0.1 * np.sin(t))


def test_flat_zero_section(flat_zero):
    assert np.abs(flat_zero.theta).max() == 0.0
    assert np.abs(flat_zero.rho - 1.0).max() < 1e-15
    assert np.abs(flat_zero.metric - np.eye(2)).max() == 0.0
    assert np.abs(flat_zero.sqrt_det_metric - 1.0).max() == 0.0
    assert flat_zero.margin == 1.0


def test_twisted_zero_section_closed_forms(twisted_zero, grid64):
    x1 = grid64.coords[..., 0]
    assert np.abs(twisted_zero.theta - 0.1 * np.sin(x1)).max() < 1e-14
    assert np.abs(twisted_zero.rho - np.exp(0.1 * np.cos(x1))).max() < 1e-14


def test_one_dimensional_angle():
    grid = PeriodicGrid(1, 64)
    model = AlmostCYModel(1)
    a = 0.4
    phi = field_from_function(grid, lambda c: a * np.cos(c[..., 0]))
    gamma = build(model, phi)
    # det(I - i Hess phi) = 1 + i a cos x, so theta = arctan(a cos x).
    expected = np.arctan(a * np.cos(grid.coords[..., 0]))
    assert np.abs(gamma.theta - expected).max() < 1e-13


def test_positivity_failure():
    grid = PeriodicGrid(2, 64)
    model = AlmostCYModel(2)
    phi = field_from_function(
        grid, lambda c: 1.5 * (np.cos(c[..., 0]) + np.cos(c[..., 1]))
    )
    with pytest.raises(NotPositive) as excinfo:
        build(model, phi)
    assert excinfo.value.margin <= 0.0
    assert len(excinfo.value.worst_point) == 2


def test_margin_decreases_with_hessian(flat_model, grid64):
    margins = []
    for amp in (0.2, 0.5, 0.8):
        phi = field_from_function(
            grid64, lambda c, a=amp: a * (np.cos(c[..., 0]) + np.cos(c[..., 1]))
        )
        margins.append(build(flat_model, phi).margin)
    assert margins[0] > margins[1] > margins[2] > 0.0


def test_phase_volume_identity(flat_generic, twisted_generic, twisted_zero):
    for gamma in (flat_generic, twisted_generic, twisted_zero):
        assert gamma.lagang_residual < 1e-10
        # |det(I - i Hess phi)| = sqrt(det(I + Hess^2)) pointwise.
        lhs = np.abs(gamma._det_B)
        assert np.abs(lhs - gamma.sqrt_det_metric).max() < 1e-10


def test_normalize_flat(flat_zero, grid64):
    f = field_from_function(grid64, lambda c: np.cos(c[..., 0]))
    h = flat_zero.normalize(f)
    assert np.abs(h.values - f.values).max() < 1e-14

    one = flat_zero.normalize(constant_field(grid64, 1.0))
    assert one.h.sup_norm() < 1e-14


def test_normalize_twisted_oracle(twisted_zero, grid64):
    num, _ = quad(lambda t: np.cos(t) * twisted_weight(t), 0, 2 * np.pi)
    den, _ = quad(twisted_weight, 0, 2 * np.pi)
    shift = num / den
    assert shift == pytest.approx(TWISTED_NORMALIZE_SHIFT, abs=1e-12)

    f = field_from_function(grid64, lambda c: np.cos(c[..., 0]))
    h = twisted_zero.normalize(f)
    expected = f.values - shift
    assert np.abs(h.values - expected).max() < 1e-12
    assert h.normalization_residual() < 1e-12


def test_normalize_idempotent(twisted_generic, grid64):
    f = field_from_function(grid64, lambda c: np.cos(c[..., 0]) + 0.3 * np.sin(2 * c[..., 1]))
    once = twisted_generic.normalize(f)
    twice = twisted_generic.normalize(once.h)
    assert np.abs(once.values - twice.values).max() < 1e-14


def test_inner_flat_values(flat_zero, grid64):
    h = flat_zero.normalize(field_from_function(grid64, lambda c: np.cos(c[..., 0])))
    k = flat_zero.normalize(field_from_function(grid64, lambda c: np.cos(c[..., 1])))
    assert inner(h, h) == pytest.approx(2 * np.pi**2, rel=1e-13)
    assert abs(inner(h, k)) < 1e-13


def test_inner_twisted_oracle(twisted_zero, grid64):
    val, _ = quad(lambda t: np.cos(t) ** 2 * twisted_weight(t), 0, 2 * np.pi)
    oracle = 2 * np.pi * val
    assert oracle == pytest.approx(TWISTED_INNER_COS1, rel=1e-13)

    f = field_from_function(grid64, lambda c: np.cos(c[..., 0]))
    raw = twisted_zero.inner_values(f.values, f.values)
    assert raw == pytest.approx(TWISTED_INNER_COS1, rel=1e-12)


def test_inner_bilinear_positive(twisted_generic, grid64):
    rng = np.random.default_rng(1)
    fields = [
        twisted_generic.normalize(
            field_from_function(
                grid64,
                lambda c, a=rng.uniform(-1, 1, 3): a[0] * np.cos(c[..., 0])
                + a[1] * np.sin(c[..., 1])
                + a[2] * np.cos(c[..., 0] + 2 * c[..., 1]),
            )
        )
        for _ in range(3)
    ]
    h, k, l = fields
    assert inner(h, k) == pytest.approx(inner(k, h), rel=1e-12)
    lhs = twisted_generic.inner_values(h.values + 2.0 * k.values, l.values)
    rhs = inner(h, l) + 2.0 * inner(k, l)
    assert lhs == pytest.approx(rhs, rel=1e-12)
    assert inner(h, h) > 0.0
    zero = twisted_generic.normalize(constant_field(grid64, 5.0))
    assert abs(inner(zero, h)) < 1e-12


def test_grad_inner_flat(flat_zero, grid64):
    h = flat_zero.normalize(field_from_function(grid64, lambda c: np.cos(c[..., 0])))
    k = flat_zero.normalize(field_from_function(grid64, lambda c: np.cos(c[..., 1])))
    hh = grad_inner(h, h)
    assert np.abs(hh.values - np.sin(grid64.coords[..., 0]) ** 2).max() < 1e-12
    assert grad_inner(h, k).sup_norm() < 1e-12


def test_grad_inner_one_dimensional_inverse():
    grid = PeriodicGrid(1, 64)
    model = AlmostCYModel(1)
    a = 0.3
    phi = field_from_function(grid, lambda c: a * np.cos(c[..., 0]))
    gamma = build(model, phi)
    x = grid.coords[..., 0]
    h_vals = np.sin(x)
    pairing = gamma.grad_inner_values(h_vals, h_vals)
    expected = np.cos(x) ** 2 / (1.0 + (a * np.cos(x)) ** 2)
    assert np.abs(pairing - expected).max() < 1e-12


def test_gamma_mismatch(flat_zero, twisted_zero, grid64):
    f = field_from_function(grid64, lambda c: np.cos(c[..., 0]))
    h1 = flat_zero.normalize(f)
    h2 = twisted_zero.normalize(f)
    with pytest.raises(GammaMismatch):
        inner(h1, h2)
    with pytest.raises(GammaMismatch):
        grad_inner(h1, h2)


def test_laplacian_eigenfunction(flat_zero, grid64):
    h = field_from_function(grid64, lambda c: np.cos(c[..., 0]))
    lap = flat_zero.laplace_beltrami(h)
    # Nonnegative convention: Lap cos = +cos.
    assert np.abs(lap.values - h.values).max() < 1e-12
    assert flat_zero.laplace_beltrami(constant_field(grid64, 2.0)).sup_norm() < 1e-13


def test_laplacian_integration_by_parts(twisted_generic, grid64):
    rng = np.random.default_rng(3)
    for _ in range(3):
        coeffs = rng.uniform(-1, 1, 4)
        h = field_from_function(
            grid64,
            lambda c: coeffs[0] * np.cos(c[..., 0]) + coeffs[1] * np.sin(2 * c[..., 1]),
        )
        k = field_from_function(
            grid64,
            lambda c: coeffs[2] * np.sin(c[..., 0] + c[..., 1]) + coeffs[3] * np.cos(c[..., 1]),
        )
        lap_h = twisted_generic.laplace_beltrami(h)
        vol = twisted_generic.sqrt_det_metric
        lhs = integrate(ScalarField(grid64, lap_h.values * k.values * vol))
        rhs = integrate(
            ScalarField(
                grid64, twisted_generic.grad_inner_values(h.values, k.values) * vol
            )
        )
        assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-12)


def test_covariant_hessian_flat(flat_zero, grid64):
    h = field_from_function(grid64, lambda c: np.cos(c[..., 0] + c[..., 1]))
    hess = flat_zero.covariant_hessian(h)
    expected = -np.cos(grid64.coords[..., 0] + grid64.coords[..., 1])
    for a in range(2):
        for b in range(2):
            assert np.abs(hess.values[..., a, b] - expected).max() < 1e-11


def test_covariant_hessian_symmetry_and_trace(twisted_generic, grid64):
    h = field_from_function(
        grid64, lambda c: np.cos(c[..., 0]) + 0.5 * np.sin(c[..., 0] + 2 * c[..., 1])
    )
    hess = twisted_generic.covariant_hessian(h)
    sym_defect = np.abs(hess.values - np.swapaxes(hess.values, -1, -2)).max()
    assert sym_defect < 1e-12
    trace = -np.einsum("...ab,...ab->...", twisted_generic.inverse_metric, hess.values)
    lap = twisted_generic.laplace_beltrami(h).values
    assert np.abs(trace - lap).max() < 1e-8


def test_build_rejects_mismatched_grid(flat_model):
    grid = PeriodicGrid(1, 64)
    with pytest.raises(ValueError):
        build(flat_model, constant_field(grid))
