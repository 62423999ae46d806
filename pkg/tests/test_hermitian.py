import numpy as np
import pytest

from laglab.errors import DegeneratePlane, NotPositiveDefinite, ShapeMismatch
from laglab.hermitian import (
    HermBase,
    HermPoint,
    HermTangent,
    herm_curvature_quad,
    herm_fd_riemann,
    herm_inner,
    herm_sectional,
    random_point,
    random_tangent,
)

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])

PAULI_SECTIONAL = -0.5
PAULI_QUAD = -2.0


@pytest.fixture
def single_base():
    return HermBase(np.array([1.0]))


@pytest.fixture
def identity_point(single_base):
    return HermPoint(single_base, np.eye(2, dtype=complex)[None])


def _tangent(base, *mats):
    return HermTangent(base, np.stack([np.asarray(m, dtype=complex) for m in mats]))


def test_inner_pauli(single_base, identity_point):
    sx = _tangent(single_base, SIGMA_X)
    sy = _tangent(single_base, SIGMA_Y)
    assert herm_inner(identity_point, sx, sx) == pytest.approx(2.0)
    assert herm_inner(identity_point, sx, sy) == pytest.approx(0.0, abs=1e-15)


def test_inner_diagonal(single_base):
    H = HermPoint(single_base, np.diag([2.0, 1.0]).astype(complex)[None])
    xi = _tangent(single_base, np.diag([1.0, 0.0]))
    assert herm_inner(H, xi, xi) == pytest.approx(0.25)


def test_inner_weighted_sum():
    base = HermBase(np.array([2.0, 3.0]))
    H = HermPoint(base, np.stack([np.eye(2, dtype=complex)] * 2))
    xi = _tangent(base, SIGMA_X, SIGMA_X)
    # each point contributes tr(sigma_x^2) = 2
    assert herm_inner(H, xi, xi) == pytest.approx(2.0 * 2 + 3.0 * 2)


def test_quad_commuting(single_base, identity_point):
    a = _tangent(single_base, np.diag([1.0, 0.0]))
    b = _tangent(single_base, np.diag([0.0, 1.0]))
    assert herm_curvature_quad(identity_point, a, b, b, a) == pytest.approx(0.0, abs=1e-15)


def test_quad_pauli_value(single_base, identity_point):
    sx = _tangent(single_base, SIGMA_X)
    sy = _tangent(single_base, SIGMA_Y)
    corrected = herm_curvature_quad(identity_point, sx, sy, sy, sx)
    literal = herm_curvature_quad(identity_point, sx, sy, sy, sx, literal=True)
    assert corrected == pytest.approx(PAULI_QUAD)
    assert literal == pytest.approx(-PAULI_QUAD)


def test_quad_antisymmetry(single_base):
    rng = np.random.default_rng(2)
    H = random_point(rng, single_base, 3)
    xi = random_tangent(rng, single_base, 3)
    eta = random_tangent(rng, single_base, 3)
    zeta = random_tangent(rng, single_base, 3)
    lam = random_tangent(rng, single_base, 3)
    ab = herm_curvature_quad(H, xi, eta, zeta, lam)
    ba = herm_curvature_quad(H, eta, xi, zeta, lam)
    assert ab == pytest.approx(-ba, rel=1e-12)


def test_sectional_pauli(single_base, identity_point):
    sx = _tangent(single_base, SIGMA_X)
    sy = _tangent(single_base, SIGMA_Y)
    assert herm_sectional(identity_point, sx, sy) == pytest.approx(PAULI_SECTIONAL)


def test_sectional_commuting_zero(single_base, identity_point):
    a = _tangent(single_base, np.diag([1.0, 0.0]))
    b = _tangent(single_base, np.diag([0.0, 1.0]))
    assert herm_sectional(identity_point, a, b) == pytest.approx(0.0, abs=1e-15)


def test_sectional_nonpositive_random():
    rng = np.random.default_rng(7)
    for _ in range(100):
        dim = int(rng.integers(2, 4))
        npts = int(rng.integers(1, 5))
        base = HermBase(rng.uniform(0.5, 2.0, size=npts))
        H = random_point(rng, base, dim)
        xi = random_tangent(rng, base, dim)
        eta = random_tangent(rng, base, dim)
        try:
            assert herm_sectional(H, xi, eta) <= 1e-12
        except DegeneratePlane:
            continue


def test_commuting_family_flat():
    rng = np.random.default_rng(11)
    base = HermBase(np.array([1.0, 0.5]))
    raw = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    q, _ = np.linalg.qr(raw)
    conj = lambda d: q @ np.diag(d) @ q.conj().T
    H = HermPoint(base, np.stack([conj(rng.uniform(0.5, 2.0, 3)) for _ in range(2)]))
    xi = HermTangent(base, np.stack([conj(rng.standard_normal(3)) for _ in range(2)]))
    eta = HermTangent(base, np.stack([conj(rng.standard_normal(3)) for _ in range(2)]))
    assert abs(herm_sectional(H, xi, eta)) < 1e-12


def test_noncommuting_strictly_negative(single_base, identity_point):
    sx = _tangent(single_base, SIGMA_X)
    sz = _tangent(single_base, np.diag([1.0, -1.0]))
    assert herm_sectional(identity_point, sx, sz) < -1e-3


def test_scaling_invariance():
    rng = np.random.default_rng(13)
    base = HermBase(np.array([1.0]))
    H = random_point(rng, base, 2)
    xi = random_tangent(rng, base, 2)
    eta = random_tangent(rng, base, 2)
    k1 = herm_sectional(H, xi, eta)
    c = 3.7
    H2 = HermPoint(base, c * H.matrices)
    xi2 = HermTangent(base, c * xi.matrices)
    eta2 = HermTangent(base, c * eta.matrices)
    k2 = herm_sectional(H2, xi2, eta2)
    assert k1 == pytest.approx(k2, rel=1e-12)


def test_fd_oracle_pauli(single_base, identity_point):
    sx = _tangent(single_base, SIGMA_X)
    sy = _tangent(single_base, SIGMA_Y)
    fd = herm_fd_riemann(identity_point, sx, sy, sy, sx, delta=1e-3)
    assert fd == pytest.approx(PAULI_QUAD, abs=1e-4)
    # Corrected closed form agrees with the oracle; the literal sign cannot.
    corrected = herm_curvature_quad(identity_point, sx, sy, sy, sx)
    literal = herm_curvature_quad(identity_point, sx, sy, sy, sx, literal=True)
    assert abs(corrected - fd) < 1e-4
    assert abs(literal - fd) > 1.0


def test_fd_oracle_commuting(single_base, identity_point):
    a = _tangent(single_base, np.diag([1.0, 0.0]))
    b = _tangent(single_base, np.diag([0.0, 1.0]))
    fd = herm_fd_riemann(identity_point, a, b, b, a, delta=1e-3)
    assert abs(fd) < 1e-6


def test_fd_oracle_generic_base():
    rng = np.random.default_rng(17)
    base = HermBase(np.array([1.0, 0.7]))
    H = random_point(rng, base, 2)
    xi = random_tangent(rng, base, 2)
    eta = random_tangent(rng, base, 2)
    zeta = random_tangent(rng, base, 2)
    lam = random_tangent(rng, base, 2)
    fd = herm_fd_riemann(H, xi, eta, zeta, lam, delta=1e-3)
    closed = herm_curvature_quad(H, xi, eta, zeta, lam)
    assert fd == pytest.approx(closed, rel=1e-3, abs=1e-4)


def test_fd_oracle_linearity(single_base, identity_point):
    rng = np.random.default_rng(19)
    xi = random_tangent(rng, single_base, 2)
    eta = random_tangent(rng, single_base, 2)
    zeta = random_tangent(rng, single_base, 2)
    lam1 = random_tangent(rng, single_base, 2)
    lam2 = random_tangent(rng, single_base, 2)
    lam_sum = HermTangent(single_base, lam1.matrices + lam2.matrices)
    v1 = herm_fd_riemann(identity_point, xi, eta, zeta, lam1)
    v2 = herm_fd_riemann(identity_point, xi, eta, zeta, lam2)
    v12 = herm_fd_riemann(identity_point, xi, eta, zeta, lam_sum)
    assert v12 == pytest.approx(v1 + v2, rel=1e-6, abs=1e-8)


def test_fd_shift_positivity_guard(single_base):
    H = HermPoint(single_base, (1e-4 * np.eye(2, dtype=complex))[None])
    sx = _tangent(single_base, SIGMA_X)
    sy = _tangent(single_base, SIGMA_Y)
    with pytest.raises(NotPositiveDefinite):
        herm_fd_riemann(H, sx, sy, sy, sx, delta=1e-3)


def test_validation_errors(single_base):
    with pytest.raises(ValueError):
        HermBase(np.array([1.0, -1.0]))
    with pytest.raises(NotPositiveDefinite):
        HermPoint(single_base, np.diag([1.0, -2.0]).astype(complex)[None])
    with pytest.raises(ValueError):
        HermPoint(single_base, np.array([[[0.0, 1.0], [0.0, 0.0]]], dtype=complex))
    with pytest.raises(ShapeMismatch):
        HermTangent(single_base, np.zeros((2, 2, 2), dtype=complex))
    other = HermBase(np.array([1.0, 1.0]))
    H = HermPoint(single_base, np.eye(2, dtype=complex)[None])
    xi = HermTangent(other, np.zeros((2, 2, 2), dtype=complex))
    with pytest.raises(ShapeMismatch):
        herm_inner(H, xi, xi)


def test_degenerate_plane(single_base, identity_point):
    sx = _tangent(single_base, SIGMA_X)
    sx2 = _tangent(single_base, 2.0 * SIGMA_X)
    with pytest.raises(DegeneratePlane):
        herm_sectional(identity_point, sx, sx2)
