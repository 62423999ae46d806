"""Flat ambient model X = T*T^n with a holomorphic volume form.

Coordinates are (x, y) with x on the torus base and y the fiber.  The
structure is flat: symplectic form sum_j dy_j ^ dx_j, complex structure
J dx_j = -dy_j (holomorphic coordinate z_j = x_j - i y_j), Euclidean
metric.  The volume form is Omega = e^{g(z)} dz_1 ^ ... ^ dz_n with the
twist g(z) = eps * e^{i kappa z_1}, which is holomorphic, x_1-periodic and
nowhere zero, so positivity data (rho, theta) become nonconstant while the
symplectic and metric structure stay flat.

The conformal factor rho is evaluated from its defining relation

    rho^n * omega^n / n! = (-1)^{n(n-1)/2} * (i/2)^n * Omega ^ conj(Omega)

by explicit exterior algebra on the coordinate frame; the closed form
exp(2 Re g / n) is kept separate as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NonPositiveDensity

# Convention record embedded in every report; the whole set stands or falls
# together (a single global sign cannot be patched in isolation).
CONVENTIONS = {
    "symplectic_form": "omega = sum_j dy_j ^ dx_j",
    "complex_structure": "J dx_j = -dy_j, J dy_j = dx_j  (z_j = x_j - i y_j)",
    "volume_form": "Omega = e^{g(z)} dz_1 ^ ... ^ dz_n, g(z) = eps e^{i kappa z_1}",
    "hamiltonian_sign": "i_xi omega = dH",
    "base_orientation": "dx_1 ^ ... ^ dx_n",
    "laplacian_sign": "nonnegative (Hodge): Lap h = -div grad h",
}


@dataclass(frozen=True)
class AmbientPoint:
    """A point (x, y) of T*T^n."""

    x: tuple[float, ...]
    y: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(float(v) for v in self.x))
        object.__setattr__(self, "y", tuple(float(v) for v in self.y))
        if len(self.x) != len(self.y):
            raise ValueError("x and y must have the same dimension")


# ---------------------------------------------------------------------------
# Minimal exterior algebra over the coordinate frame (dx_1..dx_n, dy_1..dy_n).
# A k-form is a dict mapping a strictly increasing index tuple to a complex
# coefficient.  Only used for the volume-form defining relation, where n <= 3.
# ---------------------------------------------------------------------------


def _merge_indices(a: tuple[int, ...], b: tuple[int, ...]):
    """Sort the concatenation of two increasing tuples; return (tuple, sign).

    Returns None when an index repeats (the wedge vanishes).
    """
    if set(a) & set(b):
        return None
    merged = a + b
    # Count inversions of the concatenation; parity gives the wedge sign.
    inversions = 0
    items = list(merged)
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                inversions += 1
    return tuple(sorted(merged)), (-1) ** inversions


def _wedge(a: dict, b: dict) -> dict:
    out: dict = {}
    for ia, ca in a.items():
        for ib, cb in b.items():
            merged = _merge_indices(ia, ib)
            if merged is None:
                continue
            idx, sign = merged
            out[idx] = out.get(idx, 0.0) + sign * ca * cb
    return {k: v for k, v in out.items() if v != 0}


def _conj(a: dict) -> dict:
    return {k: np.conj(v) for k, v in a.items()}


@lru_cache(maxsize=8)
def _frame_ratio(n: int) -> complex:
    """Evaluate the constant part of the defining relation on the frame.

    Computes [(-1)^{n(n-1)/2} (i/2)^n (dz^n ^ conj(dz^n))] / [omega^n / n!]
    as top-form coefficients; the twist only rescales Omega pointwise, so
    rho^n equals this ratio times |e^{g}|^2.
    """
    # omega = sum_j dy_j ^ dx_j = sum_j (-1) dx_j ^ dy_j with x_j -> j, y_j -> n+j.
    omega = {(j, n + j): -1.0 + 0.0j for j in range(n)}
    omega_n: dict = {(): 1.0 + 0.0j}
    for _ in range(n):
        omega_n = _wedge(omega_n, omega)
    top = tuple(range(2 * n))
    omega_top = omega_n[top] / math.factorial(n)

    dz = [{(j,): 1.0 + 0.0j, (n + j,): -1.0j} for j in range(n)]
    dz_n: dict = {(): 1.0 + 0.0j}
    for j in range(n):
        dz_n = _wedge(dz_n, dz[j])
    zz_top = _wedge(dz_n, _conj(dz_n))[top]

    prefactor = (-1.0) ** (n * (n - 1) // 2) * (0.5j) ** n
    return complex(prefactor * zz_top / omega_top)


@dataclass(frozen=True)
class AlmostCYModel:
    """The flat twisted model on T*T^n.

    Parameters
    ----------
    n : int
        Dimension of the base torus, 1 to 3.
    period : float
        Period P of the base (default 2*pi).
    twist_amplitude : float
        eps >= 0; eps = 0 is the flat Calabi-Yau model.  eps < 1 keeps a
        positivity margin for moderate potentials.
    twist_mode : int
        Positive integer m; the twist wavenumber is kappa = 2*pi*m/P.
    """

    n: int
    period: float = 2.0 * np.pi
    twist_amplitude: float = 0.0
    twist_mode: int = 1

    def __post_init__(self):
        if self.n not in (1, 2, 3):
            raise ValueError(f"dimension must be 1, 2 or 3, got {self.n}")
        if not (self.period > 0):
            raise ValueError("period must be positive")
        if not (0.0 <= self.twist_amplitude < 1.0):
            raise ValueError("twist amplitude must satisfy 0 <= eps < 1")
        if self.twist_mode < 1:
            raise ValueError("twist mode must be a positive integer")

    @property
    def kappa(self) -> float:
        return 2.0 * np.pi * self.twist_mode / self.period

    # -- pointwise evaluators (x, y arrays of shape (..., n)) ---------------

    def twist(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """g(z) = eps * e^{i kappa z_1} with z_1 = x_1 - i y_1."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        z1 = x[..., 0] - 1j * y[..., 0]
        return self.twist_amplitude * np.exp(1j * self.kappa * z1)

    def holomorphic_density(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Scalar c with Omega = c * dz_1 ^ ... ^ dz_n, i.e. c = e^{g(z)}."""
        return np.exp(self.twist(x, y))

    def rho(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Conformal factor from the volume-form defining relation.

        Raises
        ------
        NonPositiveDensity
            If the frame evaluation of the defining relation comes out
            non-positive (or non-real), which signals a convention bug.
        """
        ratio = _frame_ratio(self.n)
        if abs(ratio.imag) > 1e-14 * max(abs(ratio.real), 1.0):
            raise NonPositiveDensity(
                f"defining relation evaluated to non-real ratio {ratio}"
            )
        c = self.holomorphic_density(x, y)
        rho_n = ratio.real * np.abs(c) ** 2
        if np.any(rho_n <= 0):
            raise NonPositiveDensity(
                f"defining relation gave non-positive rho^n (min {rho_n.min():.3e})"
            )
        return rho_n ** (1.0 / self.n)

    def rho_closed_form(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Independent closed form exp(2 Re g / n); used only as an oracle."""
        return np.exp(2.0 * np.real(self.twist(x, y)) / self.n)

    # -- constant structure tensors -----------------------------------------

    def omega_matrix(self) -> np.ndarray:
        """Coefficients W[a, b] = omega(e_a, e_b) on the frame (dx_*, dy_*)."""
        n = self.n
        W = np.zeros((2 * n, 2 * n))
        for j in range(n):
            W[n + j, j] = 1.0
            W[j, n + j] = -1.0
        return W

    def complex_structure_matrix(self) -> np.ndarray:
        """Matrix of J on the frame: J e_{x_j} = -e_{y_j}, J e_{y_j} = e_{x_j}."""
        n = self.n
        J = np.zeros((2 * n, 2 * n))
        for j in range(n):
            J[n + j, j] = -1.0
            J[j, n + j] = 1.0
        return J

    def flat(self) -> bool:
        return self.twist_amplitude == 0.0


# -- single-point wrappers over AmbientPoint --------------------------------


def _point_arrays(p: AmbientPoint) -> tuple[np.ndarray, np.ndarray]:
    return np.asarray(p.x, dtype=float)[None, :], np.asarray(p.y, dtype=float)[None, :]


def eval_twist(model: AlmostCYModel, p: AmbientPoint) -> complex:
    x, y = _point_arrays(p)
    return complex(model.twist(x, y)[0])


def eval_rho(model: AlmostCYModel, p: AmbientPoint) -> float:
    x, y = _point_arrays(p)
    return float(model.rho(x, y)[0])


def eval_omega_density(model: AlmostCYModel, p: AmbientPoint) -> complex:
    x, y = _point_arrays(p)
    return complex(model.holomorphic_density(x, y)[0])
