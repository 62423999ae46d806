import numpy as np
import pytest

from laglab.ambient import AlmostCYModel
from laglab.curvature import (
    curvature_report,
    flat_family_check,
    mean_zero_residual,
    riemann_field,
    riemann_field_values,
    riemann_quad,
    riemann_quad_values,
    sectional,
)
from laglab.errors import DegeneratePlane, GammaMismatch, MarginTooSmall
from laglab.lagrangian import build
from laglab.torus import PeriodicGrid, field_from_function
from laglab.validation import random_trig_polynomial
from laglab.torus import sample

SECTIONAL_SPOT = -0.025330295910584444  # -1/(4 pi^2)
QUAD_SPOT = -9.869604401089358  # -pi^2


def _tangent(gamma, fn):
    return gamma.normalize(field_from_function(gamma.grid, fn))


def test_riemann_field_spot(flat_zero, grid64):
    h = _tangent(flat_zero, lambda c: np.cos(c[..., 0]))
    k = _tangent(flat_zero, lambda c: np.cos(c[..., 1]))
    r = riemann_field(flat_zero, h, k, k)
    x = grid64.coords
    expected = -np.cos(x[..., 0]) * np.sin(x[..., 1]) ** 2
    assert np.abs(r.values - expected).max() < 1e-11


def test_riemann_antisymmetry(twisted_generic, grid64):
    h = _tangent(twisted_generic, lambda c: np.cos(c[..., 0]) + np.sin(2 * c[..., 1]))
    l = _tangent(twisted_generic, lambda c: np.sin(c[..., 0] + c[..., 1]))
    r = riemann_field(twisted_generic, h, h, l)
    assert np.abs(r.values).max() < 1e-14


def test_riemann_gauge_invariance(twisted_generic, grid64):
    h = field_from_function(grid64, lambda c: np.cos(c[..., 0]))
    k = field_from_function(grid64, lambda c: np.sin(c[..., 1]))
    l = field_from_function(grid64, lambda c: np.cos(c[..., 0] + c[..., 1]))
    base = riemann_field_values(twisted_generic, h.values, k.values, l.values)
    shifted = riemann_field_values(
        twisted_generic, h.values + 3.0, k.values - 1.5, l.values
    )
    assert np.abs(base - shifted).max() < 1e-12


def test_riemann_vanishes_in_dimension_one():
    grid = PeriodicGrid(1, 64)
    for eps in (0.0, 0.1):
        model = AlmostCYModel(1, twist_amplitude=eps)
        phi = field_from_function(grid, lambda c: 0.2 * np.cos(c[..., 0]))
        gamma = build(model, phi)
        rng = np.random.default_rng(9)
        for _ in range(3):
            fields = [sample(random_trig_polynomial(rng, 1), grid).values for _ in range(3)]
            r = riemann_field_values(gamma, *fields)
            assert np.abs(r).max() < 1e-10


def test_riemann_quad_spot(flat_zero, grid64):
    h = _tangent(flat_zero, lambda c: np.cos(c[..., 0]))
    k = _tangent(flat_zero, lambda c: np.cos(c[..., 1]))
    value = riemann_quad(flat_zero, h, k, k, h)
    assert value == pytest.approx(QUAD_SPOT, rel=1e-12)


def test_riemann_quad_antisymmetry_and_pair_symmetry(twisted_generic, grid64):
    rng = np.random.default_rng(17)
    f = [
        twisted_generic.normalize_values(
            sample(random_trig_polynomial(rng, 2), grid64).values
        )
        for _ in range(4)
    ]
    q = lambda a, b, c, d: riemann_quad_values(twisted_generic, a, b, c, d)
    hk = q(f[0], f[1], f[2], f[3])
    kh = q(f[1], f[0], f[2], f[3])
    assert hk == pytest.approx(-kh, rel=1e-12)
    lm = q(f[2], f[3], f[0], f[1])
    assert hk == pytest.approx(lm, rel=1e-10)


def test_pairing_identity_random(flat_generic, twisted_generic, grid64):
    rng = np.random.default_rng(23)
    for gamma in (flat_generic, twisted_generic):
        for _ in range(5):
            f = [
                gamma.normalize_values(
                    sample(random_trig_polynomial(rng, 2), grid64).values
                )
                for _ in range(4)
            ]
            r = riemann_field_values(gamma, f[0], f[1], f[2])
            lhs = gamma.inner_values(r, f[3])
            rhs = riemann_quad_values(gamma, *f)
            assert lhs == pytest.approx(rhs, rel=1e-6, abs=1e-12)


def test_first_bianchi(twisted_generic, grid64):
    rng = np.random.default_rng(29)
    f = [
        twisted_generic.normalize_values(
            sample(random_trig_polynomial(rng, 2), grid64).values
        )
        for _ in range(4)
    ]
    q = lambda a, b, c, d: riemann_quad_values(twisted_generic, a, b, c, d)
    cyclic = q(f[0], f[1], f[2], f[3]) + q(f[1], f[2], f[0], f[3]) + q(f[2], f[0], f[1], f[3])
    scale = max(abs(q(f[0], f[1], f[2], f[3])), 1e-300)
    assert abs(cyclic) / scale < 1e-8


def test_mean_zero_residual(twisted_generic, grid64):
    rng = np.random.default_rng(31)
    f = [
        twisted_generic.normalize(sample(random_trig_polynomial(rng, 2), grid64))
        for _ in range(3)
    ]
    r = riemann_field(twisted_generic, *f)
    residual, scale = mean_zero_residual(r)
    assert residual <= 1e-8 * scale


def test_sectional_spot(flat_zero, grid64):
    h = _tangent(flat_zero, lambda c: np.cos(c[..., 0]))
    k = _tangent(flat_zero, lambda c: np.cos(c[..., 1]))
    value = sectional(flat_zero, h, k)
    assert value == pytest.approx(SECTIONAL_SPOT, rel=1e-6)


def test_sectional_degenerate(flat_zero, grid64):
    h = _tangent(flat_zero, lambda c: np.cos(c[..., 0]))
    parallel = _tangent(flat_zero, lambda c: 2.0 * np.cos(c[..., 0]) + 0.7)
    with pytest.raises(DegeneratePlane):
        sectional(flat_zero, h, parallel)


def test_sectional_one_dimensional_zero():
    grid = PeriodicGrid(1, 64)
    model = AlmostCYModel(1, twist_amplitude=0.1)
    gamma = build(model, field_from_function(grid, lambda c: 0.2 * np.cos(c[..., 0])))
    h = _tangent(gamma, lambda c: np.cos(c[..., 0]))
    k = _tangent(gamma, lambda c: np.sin(2 * c[..., 0]))
    assert abs(sectional(gamma, h, k)) < 1e-10


def test_sectional_nonpositive_random(flat_generic, twisted_generic, grid64):
    rng = np.random.default_rng(37)
    for gamma in (flat_generic, twisted_generic):
        for _ in range(10):
            h = gamma.normalize(sample(random_trig_polynomial(rng, 2), grid64))
            k = gamma.normalize(sample(random_trig_polynomial(rng, 2), grid64))
            try:
                assert sectional(gamma, h, k) <= 1e-10
            except DegeneratePlane:
                continue


def test_margin_threshold(twisted_generic, grid64):
    h = _tangent(twisted_generic, lambda c: np.cos(c[..., 0]))
    k = _tangent(twisted_generic, lambda c: np.cos(c[..., 1]))
    with pytest.raises(MarginTooSmall):
        riemann_field(twisted_generic, h, k, k, margin_threshold=0.95)
    with pytest.raises(MarginTooSmall):
        riemann_quad(twisted_generic, h, k, k, h, margin_threshold=0.95)


def test_gamma_mismatch(flat_zero, twisted_zero, grid64):
    h1 = _tangent(flat_zero, lambda c: np.cos(c[..., 0]))
    h2 = _tangent(twisted_zero, lambda c: np.cos(c[..., 1]))
    with pytest.raises(GammaMismatch):
        riemann_field(flat_zero, h1, h1, h2)


def test_flat_family(flat_zero, twisted_zero, grid64):
    for gamma in (flat_zero, twisted_zero):
        l = _tangent(gamma, lambda c: np.cos(c[..., 0]) + 0.5 * np.cos(c[..., 1]))
        report = flat_family_check(gamma, l, [lambda s: s, lambda s: s**2, lambda s: s**3 - s])
        assert report.max_abs_sectional < 1e-8
        assert len(report.sectionals) == 3


def test_flat_family_single_member(flat_zero, grid64):
    l = _tangent(flat_zero, lambda c: np.cos(c[..., 0]))
    report = flat_family_check(flat_zero, l, [lambda s: s])
    assert report.max_abs_sectional == 0.0
    assert report.sectionals == ()


def test_curvature_report(twisted_generic, grid64):
    h = _tangent(twisted_generic, lambda c: np.cos(c[..., 0]))
    k = _tangent(twisted_generic, lambda c: np.cos(c[..., 1]))
    rep = curvature_report(twisted_generic, h, k, k, h)
    assert rep.quad_r3 == pytest.approx(rep.quad_r4, rel=1e-8)
    assert rep.sectional is not None and rep.sectional <= 0.0
    assert rep.diagnostics["positivity_margin"] == twisted_generic.margin
