"""Independent oracles for every closed-form quantity in the library.

Each check compares a closed-form evaluation against a finite-difference,
quadrature or identity-based route that shares as little code as possible
with it, and returns a CheckResult with the measured error.  The full
battery (`run_suite`) is deterministic for a fixed seed and doubles as the
acceptance engine for the command-line driver.

A single convention set (symplectic sign, complex structure, Hamiltonian
sign, orientation, nonnegative Laplacian) underlies all checks; they are
mutually rigid, so a sign flip that fixes one check breaks others loudly.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from typing import Sequence

import numpy as np

from .ambient import AlmostCYModel
from .connection import (
    HamiltonianFamily,
    cov_deriv_pair_values,
    geodesic_shoot,
    w_field_values,
)
from .curvature import (
    flat_family_check,
    riemann_field_values,
    riemann_quad_values,
    sectional,
)
from .errors import DegeneratePlane
from .hermitian import (
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
from .lagrangian import GraphLagrangian, build
from .torus import (
    PeriodicGrid,
    ScalarField,
    TrigPolynomial,
    TrigTerm,
    constant_field,
    gradient_values,
    sample,
)

DEFAULT_TOLERANCES = {
    "sectional_spot": 1e-6,
    "r3_r4_pairing": 1e-6,
    "r3_vs_fd": 1e-4,
    "dijk_zero_section": 1e-4,
    "dtheta": 1e-6,
    "metric_compat": 1e-5,
    "torsion_free": 1e-9,
    "sectional_nonpositive": 1e-10,
    "flat_family": 1e-8,
    "dimension_one": 1e-10,
    "geodesic_energy": 1e-6,
    "geodesic_reversal": 1e-6,
    "mirror_commuting": 1e-12,
    "mirror_nonpositive": 1e-12,
    "mirror_pauli_fd": 1e-4,
    "mirror_sign_consistency": 1e-4,
    "rho_consistency": 1e-12,
    "lagang_identity": 1e-10,
    "mean_zero_residual": 1e-8,
    "bianchi": 1e-8,
}

# Richardson ratios outside this window flag a stencil that is not second
# order; below the floor the ratio is roundoff-dominated and skipped.
RICHARDSON_WINDOW = (3.5, 4.5)
RICHARDSON_FLOOR = 1e-11


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one validation check.

    ``measure`` records which of the two errors governs the pass flag.
    """

    name: str
    error_abs: float
    error_rel: float
    tolerance: float
    measure: str
    passed: bool
    params: dict

    @property
    def error(self) -> float:
        return self.error_abs if self.measure == "abs" else self.error_rel

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "error_abs": self.error_abs,
            "error_rel": self.error_rel,
            "tolerance": self.tolerance,
            "measure": self.measure,
            "passed": self.passed,
            "params": self.params,
        }


def _result(
    name: str,
    error_abs: float,
    error_rel: float,
    tolerance: float,
    measure: str,
    params: dict,
    extra_ok: bool = True,
) -> CheckResult:
    governing = error_abs if measure == "abs" else error_rel
    return CheckResult(
        name=name,
        error_abs=float(error_abs),
        error_rel=float(error_rel),
        tolerance=float(tolerance),
        measure=measure,
        passed=bool(governing <= tolerance) and extra_ok,
        params=params,
    )


# ---------------------------------------------------------------------------
# Random band-limited inputs
# ---------------------------------------------------------------------------


def random_trig_polynomial(
    rng: np.random.Generator,
    n: int,
    max_mode: int = 3,
    terms: int = 3,
    amplitude: float = 0.2,
) -> TrigPolynomial:
    """Random band-limited trig polynomial with sup norm at most ``amplitude``.

    Coefficients are rescaled so their absolute sum equals ``amplitude``;
    modes stay at or below ``max_mode`` so quartic products remain fully
    resolved on grids of 64 points and up.
    """
    chosen: list[TrigTerm] = []
    while len(chosen) < terms:
        wave = tuple(int(v) for v in rng.integers(-max_mode, max_mode + 1, size=n))
        if all(v == 0 for v in wave):
            continue
        coeff = float(rng.uniform(-1.0, 1.0))
        phase = "cos" if rng.integers(0, 2) == 0 else "sin"
        chosen.append(TrigTerm(coeff, wave, phase))
    total = sum(abs(t.coefficient) for t in chosen)
    scale = amplitude / total
    return TrigPolynomial(tuple(TrigTerm(t.coefficient * scale, t.wavevector, t.phase) for t in chosen))


def _random_field(rng: np.random.Generator, grid: PeriodicGrid, amplitude: float = 0.2) -> ScalarField:
    return sample(random_trig_polynomial(rng, grid.n, amplitude=amplitude), grid)


# ---------------------------------------------------------------------------
# Standard base points
# ---------------------------------------------------------------------------

GENERIC_POTENTIAL = TrigPolynomial((TrigTerm(0.2, (1, 1), "cos"),))


def standard_base_points(
    grid_points: int = 64,
    period: float = 2.0 * np.pi,
    twist_amplitude: float = 0.1,
    twist_mode: int = 1,
) -> list[tuple[str, GraphLagrangian]]:
    """Zero-section and generic graphs in the flat and twisted models."""
    grid = PeriodicGrid(2, grid_points, period)
    flat = AlmostCYModel(2, period)
    twisted = AlmostCYModel(2, period, twist_amplitude, twist_mode)
    zero = constant_field(grid)
    generic = sample(GENERIC_POTENTIAL, grid)
    return [
        ("flat_zero", build(flat, zero)),
        ("twisted_zero", build(twisted, zero)),
        ("flat_generic", build(flat, generic)),
        ("twisted_generic", build(twisted, generic)),
    ]


def _require_zero_section(gamma: GraphLagrangian, check: str):
    if np.abs(gamma.grad_phi).max() > 1e-13:
        raise ValueError(f"{check} requires a zero-section base point")


# ---------------------------------------------------------------------------
# Individual checks
# ---------------------------------------------------------------------------


def _dtheta_error(gamma: GraphLagrangian, h: ScalarField, delta: float) -> float:
    model, grid = gamma.model, gamma.grid
    theta_plus = build(model, ScalarField(grid, delta * h.values)).theta
    theta_minus = build(model, ScalarField(grid, -delta * h.values)).theta
    fd = (theta_plus - theta_minus) / (2.0 * delta)
    lap = gamma.laplace_beltrami(h).values
    grad_h = gradient_values(grid, h.values)
    pairing = np.einsum(
        "...ab,...a,...b->...", gamma.inverse_metric, gamma.grad_rho, grad_h
    )
    closed = lap - (grid.n / 2.0) * pairing / gamma.rho
    return float(np.abs(fd - closed).max())


def check_dtheta(
    gamma: GraphLagrangian,
    h: ScalarField,
    delta: float = 1e-4,
    tolerance: float = DEFAULT_TOLERANCES["dtheta"],
    richardson: bool = True,
    label: str = "dtheta",
) -> CheckResult:
    """Angle derivative along the vertical flow vs its closed form.

    Valid only at zero sections, where the vertical graph flow realizes the
    parametrization hypothesis of the closed form (perpendicular fibers).
    """
    _require_zero_section(gamma, "check_dtheta")
    err = _dtheta_error(gamma, h, delta)
    grad_h = gradient_values(gamma.grid, h.values)
    rho_term = np.einsum(
        "...ab,...a,...b->...", gamma.inverse_metric, gamma.grad_rho, grad_h
    ) * (gamma.grid.n / 2.0) / gamma.rho
    params = {
        "delta": delta,
        "model_eps": gamma.model.twist_amplitude,
        "rho_term_sup": float(np.abs(rho_term).max()),
    }
    ratio_ok = True
    if richardson:
        err_half = _dtheta_error(gamma, h, delta / 2.0)
        params["error_half_delta"] = err_half
        if err_half > RICHARDSON_FLOOR:
            ratio = err / err_half
            params["richardson_ratio"] = ratio
            ratio_ok = RICHARDSON_WINDOW[0] <= ratio <= RICHARDSON_WINDOW[1]
    theta_scale = max(np.abs(gamma.theta).max(), 1.0)
    return _result(label, err, err / theta_scale, tolerance, "abs", params, ratio_ok)


def _metric_compat_error(
    family: HamiltonianFamily, h: ScalarField, k: ScalarField, delta: float
) -> float:
    gamma_plus = family.gamma_at([delta])
    gamma_minus = family.gamma_at([-delta])
    fd = (
        gamma_plus.inner_values(h.values, k.values)
        - gamma_minus.inner_values(h.values, k.values)
    ) / (2.0 * delta)
    gamma0 = family.gamma_at([0.0])
    w = w_field_values(gamma0, family.generators[0].values)
    wh = np.einsum("...a,...a->...", w, gradient_values(gamma0.grid, h.values))
    wk = np.einsum("...a,...a->...", w, gradient_values(gamma0.grid, k.values))
    covariant = gamma0.inner_values(wh, k.values) + gamma0.inner_values(h.values, wk)
    return abs(fd - covariant)


def check_metric_compat(
    family: HamiltonianFamily,
    h: ScalarField,
    k: ScalarField,
    delta: float = 1e-3,
    tolerance: float = DEFAULT_TOLERANCES["metric_compat"],
    richardson: bool = True,
    label: str = "metric_compat",
) -> CheckResult:
    """d/dt (h,k) against the covariant product rule, by central differences."""
    if len(family.generators) != 1:
        raise ValueError("metric compatibility check expects a one-parameter family")
    err = _metric_compat_error(family, h, k, delta)
    params = {"delta": delta, "model_eps": family.model.twist_amplitude}
    ratio_ok = True
    if richardson:
        err_half = _metric_compat_error(family, h, k, delta / 2.0)
        params["error_half_delta"] = err_half
        if err_half > RICHARDSON_FLOOR:
            ratio = err / err_half
            params["richardson_ratio"] = ratio
            ratio_ok = RICHARDSON_WINDOW[0] <= ratio <= RICHARDSON_WINDOW[1]
    gamma0 = family.gamma_at([0.0])
    scale = max(abs(gamma0.inner_values(h.values, k.values)), 1.0)
    return _result(label, err, err / scale, tolerance, "abs", params, ratio_ok)


def check_torsion_free(
    family: HamiltonianFamily,
    t: Sequence[float],
    j: int = 0,
    k: int = 1,
    tolerance: float = DEFAULT_TOLERANCES["torsion_free"],
    label: str = "torsion_free",
) -> CheckResult:
    """Pointwise symmetry of the coordinate covariant derivative."""
    gamma = family.gamma_at(t)
    jk = cov_deriv_pair_values(
        gamma, family.generators[j].values, family.generators[k].values
    )
    kj = cov_deriv_pair_values(
        gamma, family.generators[k].values, family.generators[j].values
    )
    err = float(np.abs(jk - kj).max())
    scale = max(np.abs(jk).max(), 1.0)
    params = {"t": list(float(v) for v in t), "model_eps": family.model.twist_amplitude}
    return _result(label, err, err / scale, tolerance, "abs", params)


def _second_cov_deriv_fd(
    gamma: GraphLagrangian,
    hi: np.ndarray,
    hj: np.ndarray,
    hk: np.ndarray,
    delta: float,
) -> np.ndarray:
    """D_{h^i} D_{h^j} h^k by differencing the coordinate derivative along i."""
    model, grid = gamma.model, gamma.grid
    phi = gamma.phi.values
    plus = cov_deriv_pair_values(build(model, ScalarField(grid, phi + delta * hi)), hj, hk)
    minus = cov_deriv_pair_values(build(model, ScalarField(grid, phi - delta * hi)), hj, hk)
    fd = (plus - minus) / (2.0 * delta)
    center = cov_deriv_pair_values(gamma, hj, hk)
    w = w_field_values(gamma, hi)
    advect = np.einsum("...a,...a->...", w, gradient_values(grid, center))
    return fd + advect


def _riemann_fd_values(
    gamma: GraphLagrangian,
    h: np.ndarray,
    k: np.ndarray,
    l: np.ndarray,
    delta: float,
) -> np.ndarray:
    return _second_cov_deriv_fd(gamma, h, k, l, delta) - _second_cov_deriv_fd(
        gamma, k, h, l, delta
    )


def check_r3_vs_fd(
    gamma: GraphLagrangian,
    h: ScalarField,
    k: ScalarField,
    l: ScalarField,
    delta: float = 1e-3,
    tolerance: float = DEFAULT_TOLERANCES["r3_vs_fd"],
    richardson: bool = True,
    label: str = "r3_vs_fd",
) -> CheckResult:
    """Curvature field against nested finite differences of the connection.

    The oracle assembles D_h D_k l - D_k D_h l on a two-parameter graph
    family, sharing nothing with the closed-form route except the coordinate
    covariant derivative itself.
    """
    closed = riemann_field_values(gamma, h.values, k.values, l.values)
    scale = max(1.0, float(np.abs(closed).max()))

    def err_at(d: float) -> float:
        fd = _riemann_fd_values(gamma, h.values, k.values, l.values, d)
        return float(np.abs(fd - closed).max()) / scale

    err = err_at(delta)
    params = {"delta": delta, "model_eps": gamma.model.twist_amplitude, "scale": scale}
    ratio_ok = True
    if richardson:
        err_half = err_at(delta / 2.0)
        params["error_half_delta"] = err_half
        if err_half > RICHARDSON_FLOOR:
            ratio = err / err_half
            params["richardson_ratio"] = ratio
            ratio_ok = RICHARDSON_WINDOW[0] <= ratio <= RICHARDSON_WINDOW[1]
    return _result(label, err, err, tolerance, "abs", params, ratio_ok)


def check_dijk_zero_section(
    gamma: GraphLagrangian,
    hi: ScalarField,
    hj: ScalarField,
    hk: ScalarField,
    delta: float = 1e-3,
    tolerance: float = DEFAULT_TOLERANCES["dijk_zero_section"],
    label: str = "dijk_zero_section",
) -> CheckResult:
    """Non-antisymmetrized second covariant derivative at the flat zero
    section against its reduced closed form
    -<dh^k, dh^j> Lap h^i - Hess h^i(grad h^j, grad h^k)."""
    _require_zero_section(gamma, "check_dijk_zero_section")
    if gamma.model.twist_amplitude != 0.0:
        raise ValueError("check_dijk_zero_section requires the flat model")
    grid = gamma.grid
    fd = _second_cov_deriv_fd(gamma, hi.values, hj.values, hk.values, delta)
    grad_j = gradient_values(grid, hj.values)
    grad_k = gradient_values(grid, hk.values)
    lap_i = gamma.laplace_beltrami(hi).values
    hess_i = gamma.covariant_hessian(hi).values
    closed = -np.einsum("...a,...a->...", grad_k, grad_j) * lap_i - np.einsum(
        "...ab,...a,...b->...", hess_i, grad_j, grad_k
    )
    err = float(np.abs(fd - closed).max())
    scale = max(np.abs(closed).max(), 1.0)
    return _result(label, err, err / scale, tolerance, "abs", {"delta": delta})


def check_r3_r4_pairing(
    gamma: GraphLagrangian,
    h: np.ndarray,
    k: np.ndarray,
    l: np.ndarray,
    m: np.ndarray,
    tolerance: float = DEFAULT_TOLERANCES["r3_r4_pairing"],
    label: str = "r3_r4_pairing",
) -> CheckResult:
    """Pointwise-curvature pairing against the integrated quadruple form.

    This is the integration-by-parts content of the curvature computation:
    every Laplacian, Christoffel and angle-gradient term of the pointwise
    route must cancel into the single Cauchy-Schwarz bracket.
    """
    r_vals = riemann_field_values(gamma, h, k, l)
    lhs = gamma.inner_values(r_vals, m)
    rhs = riemann_quad_values(gamma, h, k, l, m)
    # L1 size of the quadrature integrand, the natural scale of the identity.
    hm = np.abs(gamma.grad_inner_values(h, m) * gamma.grad_inner_values(k, l))
    hl = np.abs(gamma.grad_inner_values(h, l) * gamma.grad_inner_values(k, m))
    scale = float(
        np.mean((hm + hl) / gamma.cos_theta * gamma._rho_half * gamma.sqrt_det_metric)
        * gamma.grid.period**gamma.grid.n
    )
    err_abs = abs(lhs - rhs)
    denom = max(abs(rhs), 1e-3 * scale, 1e-300)
    err_rel = err_abs / denom
    params = {
        "lhs": lhs,
        "rhs": rhs,
        "integrand_scale": scale,
        "model_eps": gamma.model.twist_amplitude,
    }
    return _result(label, err_abs, err_rel, tolerance, "rel", params)


# ---------------------------------------------------------------------------
# Suite configuration and runner
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SuiteConfig:
    """Deterministic configuration of the validation battery."""

    grid_points: int = 64
    seed: int = 7
    period: float = 2.0 * np.pi
    twist_amplitude: float = 0.1
    twist_mode: int = 1
    quadruples: int = 20
    fd_triples: int = 10
    sectional_samples: int = 100
    mirror_samples: int = 100
    rho_points: int = 1000
    delta_fd: float = 1e-3
    delta_dtheta: float = 1e-4
    geodesic_time: float = 0.1
    geodesic_steps: int = 100
    tolerances: dict = dataclass_field(default_factory=dict)

    def tolerance(self, name: str) -> float:
        if name in self.tolerances:
            return float(self.tolerances[name])
        return DEFAULT_TOLERANCES[name]


@dataclass(frozen=True)
class SuiteReport:
    config: SuiteConfig
    results: tuple[CheckResult, ...]

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self) -> dict:
        return {
            "all_passed": self.all_passed,
            "results": [r.to_dict() for r in self.results],
        }


def _suite_sectional_spot(cfg: SuiteConfig, bases: dict) -> CheckResult:
    gamma = bases["flat_zero"]
    grid = gamma.grid
    h = gamma.normalize(sample(TrigPolynomial((TrigTerm(1.0, (1, 0)),)), grid))
    k = gamma.normalize(sample(TrigPolynomial((TrigTerm(1.0, (0, 1)),)), grid))
    value = sectional(gamma, h, k)
    expected = -1.0 / (4.0 * np.pi**2)
    err_abs = abs(value - expected)
    err_rel = err_abs / abs(expected)
    return _result(
        "sectional_spot",
        err_abs,
        err_rel,
        cfg.tolerance("sectional_spot"),
        "rel",
        {"value": value, "expected": expected},
    )


def _suite_pairing(cfg: SuiteConfig, bases: dict, rng: np.random.Generator) -> list[CheckResult]:
    out = []
    for name, gamma in bases.items():
        worst = None
        for trial in range(cfg.quadruples):
            fields = [
                gamma.normalize_values(_random_field(rng, gamma.grid).values)
                for _ in range(4)
            ]
            res = check_r3_r4_pairing(
                gamma, *fields, tolerance=cfg.tolerance("r3_r4_pairing"),
                label=f"r3_r4_pairing[{name}]",
            )
            if worst is None or res.error_rel > worst.error_rel:
                worst = res
        params = dict(worst.params)
        params["quadruples"] = cfg.quadruples
        out.append(
            _result(worst.name, worst.error_abs, worst.error_rel, worst.tolerance,
                    "rel", params)
        )
    return out


def _suite_fd_curvature(cfg: SuiteConfig, bases: dict, rng: np.random.Generator) -> list[CheckResult]:
    out = []
    for name, gamma in bases.items():
        trials = []
        ratios = []
        for trial in range(cfg.fd_triples):
            h = _random_field(rng, gamma.grid)
            k = _random_field(rng, gamma.grid)
            l = _random_field(rng, gamma.grid)
            res = check_r3_vs_fd(
                gamma, h, k, l, delta=cfg.delta_fd,
                tolerance=cfg.tolerance("r3_vs_fd"),
                label=f"r3_vs_fd[{name}]",
            )
            trials.append(res)
            if "richardson_ratio" in res.params:
                ratios.append(res.params["richardson_ratio"])
        worst = max(trials, key=lambda r: r.error_abs)
        params = dict(worst.params)
        params["triples"] = cfg.fd_triples
        if ratios:
            params["richardson_ratio_range"] = [min(ratios), max(ratios)]
        out.append(
            _result(worst.name, worst.error_abs, worst.error_rel, worst.tolerance,
                    "abs", params, all(r.passed for r in trials))
        )
    return out


def _suite_dtheta(cfg: SuiteConfig, bases: dict, rng: np.random.Generator) -> list[CheckResult]:
    out = []
    grid = bases["flat_zero"].grid
    h_main = sample(TrigPolynomial((TrigTerm(1.0, (1, 0)),)), grid)
    for name in ("flat_zero", "twisted_zero"):
        gamma = bases[name]
        results = [
            check_dtheta(gamma, h_main, cfg.delta_dtheta,
                         cfg.tolerance("dtheta"), label=f"dtheta[{name}]"),
            check_dtheta(gamma, _random_field(rng, grid), cfg.delta_dtheta,
                         cfg.tolerance("dtheta"), label=f"dtheta[{name}]"),
        ]
        worst = max(results, key=lambda r: r.error_abs)
        params = dict(worst.params)
        # The twist term must be genuinely exercised for the x1 mode.
        params["rho_term_sup"] = results[0].params["rho_term_sup"]
        extra_ok = all(r.passed for r in results)
        if name == "twisted_zero":
            extra_ok = extra_ok and params["rho_term_sup"] >= 1e-3
        out.append(
            _result(worst.name, worst.error_abs, worst.error_rel, worst.tolerance,
                    "abs", params, extra_ok)
        )
    return out


def _suite_levi_civita(cfg: SuiteConfig, rng: np.random.Generator) -> list[CheckResult]:
    grid = PeriodicGrid(2, cfg.grid_points, cfg.period)
    flat = AlmostCYModel(2, cfg.period)
    twisted = AlmostCYModel(2, cfg.period, cfg.twist_amplitude, cfg.twist_mode)
    zero = constant_field(grid)
    generic = sample(GENERIC_POTENTIAL, grid)
    cos1 = sample(TrigPolynomial((TrigTerm(1.0, (1, 0)),)), grid)
    cos2 = sample(TrigPolynomial((TrigTerm(1.0, (0, 1)),)), grid)

    compat = []
    compat.append(
        check_metric_compat(
            HamiltonianFamily(flat, zero, (cos1,)), cos2, cos2,
            cfg.delta_fd, cfg.tolerance("metric_compat"), label="metric_compat[flat]",
        )
    )
    gen_dir = _random_field(rng, grid)
    compat.append(
        check_metric_compat(
            HamiltonianFamily(twisted, generic, (gen_dir,)),
            _random_field(rng, grid), _random_field(rng, grid),
            cfg.delta_fd, cfg.tolerance("metric_compat"), label="metric_compat[twisted]",
        )
    )

    torsion = []
    for label, model, base in (
        ("flat_zero", flat, zero),
        ("twisted_zero", twisted, zero),
        ("flat_generic", flat, generic),
        ("twisted_generic", twisted, generic),
    ):
        family = HamiltonianFamily(
            model, base, (_random_field(rng, grid), _random_field(rng, grid))
        )
        torsion.append(
            check_torsion_free(family, (0.0, 0.0),
                               tolerance=cfg.tolerance("torsion_free"),
                               label=f"torsion_free[{label}]")
        )
        torsion.append(
            check_torsion_free(family, (0.05, -0.03),
                               tolerance=cfg.tolerance("torsion_free"),
                               label=f"torsion_free[{label},t!=0]")
        )
    return compat + torsion


def _suite_sectional_nonpositive(cfg: SuiteConfig, bases: dict, rng: np.random.Generator) -> CheckResult:
    gammas = list(bases.values())
    max_val = -np.inf
    drawn = 0
    attempts = 0
    while drawn < cfg.sectional_samples and attempts < 10 * cfg.sectional_samples:
        attempts += 1
        gamma = gammas[drawn % len(gammas)]
        h = gamma.normalize(_random_field(rng, gamma.grid))
        k = gamma.normalize(_random_field(rng, gamma.grid))
        try:
            val = sectional(gamma, h, k)
        except DegeneratePlane:
            continue
        max_val = max(max_val, val)
        drawn += 1
    tol = cfg.tolerance("sectional_nonpositive")
    err = max(max_val, 0.0)
    return _result(
        "sectional_nonpositive", err, err, tol, "abs",
        {"samples": drawn, "max_sectional": max_val},
    )


def _suite_flat_families(cfg: SuiteConfig, bases: dict) -> list[CheckResult]:
    out = []
    reparams = [lambda s: s, lambda s: s**2, lambda s: s**3 - s]
    for name in ("flat_zero", "twisted_zero"):
        gamma = bases[name]
        poly = TrigPolynomial((TrigTerm(1.0, (1, 0)), TrigTerm(0.5, (0, 1))))
        l = gamma.normalize(sample(poly, gamma.grid))
        report = flat_family_check(gamma, l, reparams)
        tol = cfg.tolerance("flat_family")
        out.append(
            _result(
                f"flat_family[{name}]", report.max_abs_sectional,
                report.max_abs_sectional, tol, "abs",
                {"pairs": len(report.sectionals), "skipped": len(report.skipped)},
            )
        )
    return out


def _suite_dimension_one(cfg: SuiteConfig, rng: np.random.Generator) -> CheckResult:
    grid = PeriodicGrid(1, cfg.grid_points, cfg.period)
    models = [
        AlmostCYModel(1, cfg.period),
        AlmostCYModel(1, cfg.period, cfg.twist_amplitude, cfg.twist_mode),
    ]
    potentials = [constant_field(grid), sample(TrigPolynomial((TrigTerm(0.2, (1,)),)), grid)]
    worst_field = 0.0
    worst_sec = 0.0
    for model in models:
        for phi in potentials:
            gamma = build(model, phi)
            for _ in range(3):
                h = _random_field(rng, grid)
                k = _random_field(rng, grid)
                l = _random_field(rng, grid)
                r = riemann_field_values(gamma, h.values, k.values, l.values)
                worst_field = max(worst_field, float(np.abs(r).max()))
                try:
                    val = sectional(gamma, gamma.normalize(h), gamma.normalize(k))
                except DegeneratePlane:
                    continue
                worst_sec = max(worst_sec, abs(val))
    err = max(worst_field, worst_sec)
    return _result(
        "dimension_one", err, err, cfg.tolerance("dimension_one"), "abs",
        {"sup_riemann": worst_field, "max_abs_sectional": worst_sec},
    )


def _suite_geodesic(cfg: SuiteConfig) -> list[CheckResult]:
    grid = PeriodicGrid(2, cfg.grid_points, cfg.period)
    flat = AlmostCYModel(2, cfg.period)
    gamma0 = build(flat, constant_field(grid))
    h0 = gamma0.normalize(sample(TrigPolynomial((TrigTerm(0.1, (1, 0)),)), grid))
    forward = geodesic_shoot(gamma0, h0, cfg.geodesic_time, cfg.geodesic_steps)
    drift = forward.energy_drift()

    gamma_T = build(flat, forward.potentials[-1])
    h_back = gamma_T.normalize(ScalarField(grid, -forward.velocities[-1].values))
    backward = geodesic_shoot(gamma_T, h_back, cfg.geodesic_time, cfg.geodesic_steps)
    ret = backward.potentials[-1].values - backward.potentials[-1].values.mean()
    start = forward.potentials[0].values - forward.potentials[0].values.mean()
    reversal = float(np.abs(ret - start).max())

    return [
        _result("geodesic_energy", drift, drift,
                cfg.tolerance("geodesic_energy"), "rel",
                {"steps": cfg.geodesic_steps, "time": cfg.geodesic_time,
                 "initial_energy": float(forward.energies[0])}),
        _result("geodesic_reversal", reversal, reversal,
                cfg.tolerance("geodesic_reversal"), "abs",
                {"steps": cfg.geodesic_steps, "time": cfg.geodesic_time}),
    ]


def _suite_model_consistency(cfg: SuiteConfig, bases: dict, rng: np.random.Generator) -> list[CheckResult]:
    out = []
    worst = 0.0
    for n in (1, 2, 3):
        for eps in (0.0, cfg.twist_amplitude):
            model = AlmostCYModel(n, cfg.period, eps, cfg.twist_mode)
            count = max(cfg.rho_points // 6, 1)
            x = rng.uniform(0.0, cfg.period, size=(count, n))
            y = rng.uniform(-1.0, 1.0, size=(count, n))
            defect = np.abs(model.rho(x, y) - model.rho_closed_form(x, y)).max()
            worst = max(worst, float(defect))
    out.append(
        _result("rho_consistency", worst, worst,
                cfg.tolerance("rho_consistency"), "abs",
                {"points": cfg.rho_points}),
    )
    lagang = max(gamma.lagang_residual for gamma in bases.values())
    out.append(
        _result("lagang_identity", lagang, lagang,
                cfg.tolerance("lagang_identity"), "abs",
                {"base_points": list(bases.keys())}),
    )
    return out


def _suite_tensor_structure(cfg: SuiteConfig, bases: dict, rng: np.random.Generator) -> list[CheckResult]:
    gamma = bases["twisted_generic"]
    fields = [gamma.normalize_values(_random_field(rng, gamma.grid).values) for _ in range(4)]
    h, k, l, m = fields
    r = riemann_field_values(gamma, h, k, l)
    residual = abs(np.mean(r * gamma.re_omega) * gamma.grid.period**2)
    scale = float(np.mean(np.abs(r) * gamma.re_omega) * gamma.grid.period**2)
    res_rel = residual / scale
    out = [
        _result("mean_zero_residual", residual, res_rel,
                cfg.tolerance("mean_zero_residual"), "rel", {"scale": scale}),
    ]
    q = lambda a, b, c, d: riemann_quad_values(gamma, a, b, c, d)
    bianchi = abs(q(h, k, l, m) + q(k, l, h, m) + q(l, h, k, m))
    bscale = max(abs(q(h, k, l, m)), abs(q(k, l, h, m)), abs(q(l, h, k, m)), 1e-300)
    out.append(
        _result("bianchi", bianchi, bianchi / bscale,
                cfg.tolerance("bianchi"), "rel", {"scale": bscale}),
    )
    return out


def _suite_mirror(cfg: SuiteConfig, rng: np.random.Generator) -> list[CheckResult]:
    out = []

    # Commuting families stay flat: simultaneously diagonalizable directions.
    worst_comm = 0.0
    for _ in range(10):
        dim = int(rng.integers(2, 4))
        npts = int(rng.integers(1, 5))
        base = HermBase(rng.uniform(0.5, 2.0, size=npts))
        raw = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        q_mat, _ = np.linalg.qr(raw)
        def conj_diag(diag):
            return q_mat @ np.diag(diag) @ q_mat.conj().T
        H = HermPoint(base, np.stack([conj_diag(rng.uniform(0.5, 2.0, size=dim)) for _ in range(npts)]))
        xi = HermTangent(base, np.stack([conj_diag(rng.standard_normal(dim)) for _ in range(npts)]))
        eta = HermTangent(base, np.stack([conj_diag(rng.standard_normal(dim)) for _ in range(npts)]))
        try:
            worst_comm = max(worst_comm, abs(herm_sectional(H, xi, eta)))
        except DegeneratePlane:
            continue
    out.append(
        _result("mirror_commuting", worst_comm, worst_comm,
                cfg.tolerance("mirror_commuting"), "abs", {"families": 10}),
    )

    # Non-positivity across random pairs.
    max_k = -np.inf
    drawn = 0
    while drawn < cfg.mirror_samples:
        dim = int(rng.integers(2, 4))
        npts = int(rng.integers(1, 5))
        base = HermBase(rng.uniform(0.5, 2.0, size=npts))
        H = random_point(rng, base, dim)
        xi = random_tangent(rng, base, dim)
        eta = random_tangent(rng, base, dim)
        try:
            max_k = max(max_k, herm_sectional(H, xi, eta))
        except DegeneratePlane:
            continue
        drawn += 1
    err = max(max_k, 0.0)
    out.append(
        _result("mirror_nonpositive", err, err,
                cfg.tolerance("mirror_nonpositive"), "abs",
                {"samples": drawn, "max_sectional": max_k}),
    )

    # Pauli plane at the identity: closed form vs the FD oracle.
    base = HermBase(np.array([1.0]))
    sx = HermTangent(base, np.array([[[0.0, 1.0], [1.0, 0.0]]], dtype=complex))
    sy = HermTangent(base, np.array([[[0.0, -1.0j], [1.0j, 0.0]]]))
    ident = HermPoint(base, np.eye(2, dtype=complex)[None, :, :])
    fd = herm_fd_riemann(ident, sx, sy, sy, sx, delta=1e-3)
    gram = (
        herm_inner(ident, sx, sx) * herm_inner(ident, sy, sy)
        - herm_inner(ident, sx, sy) ** 2
    )
    fd_sectional = fd / gram
    closed_sectional = herm_sectional(ident, sx, sy)
    err = abs(fd_sectional - closed_sectional)
    out.append(
        _result("mirror_pauli_fd", err, err, cfg.tolerance("mirror_pauli_fd"), "abs",
                {"fd_sectional": fd_sectional,
                 "closed_sectional": closed_sectional,
                 "expected": -0.5}),
    )

    # Sign agreement between the corrected quadruple form and the FD oracle,
    # and disagreement of the literal transcription, at a generic point.
    # Inputs are normalized so the FD truncation error stays well below tol.
    base = HermBase(np.array([1.0, 0.7]))
    H = random_point(rng, base, 2, margin=1.0)

    def unit_tangent():
        t = random_tangent(rng, base, 2)
        scale = np.linalg.norm(t.matrices, axis=(1, 2)).max()
        return HermTangent(base, t.matrices / scale)

    xi = unit_tangent()
    eta = unit_tangent()
    corrected = herm_curvature_quad(H, xi, eta, eta, xi)
    literal = herm_curvature_quad(H, xi, eta, eta, xi, literal=True)
    fd_val = herm_fd_riemann(H, xi, eta, eta, xi, delta=1e-3)
    err = abs(corrected - fd_val) / max(abs(fd_val), 1.0)
    signs_ok = corrected * fd_val >= 0.0 and literal == -corrected
    out.append(
        _result("mirror_sign_consistency", abs(corrected - fd_val), err,
                cfg.tolerance("mirror_sign_consistency"), "rel",
                {"corrected": corrected, "literal": literal, "fd": fd_val},
                signs_ok),
    )
    return out


def run_suite(cfg: SuiteConfig | None = None) -> SuiteReport:
    """Run the full validation battery; deterministic for a fixed seed."""
    cfg = cfg or SuiteConfig()
    rng = np.random.default_rng(cfg.seed)
    bases = dict(
        standard_base_points(
            cfg.grid_points, cfg.period, cfg.twist_amplitude, cfg.twist_mode
        )
    )

    results: list[CheckResult] = []
    results.append(_suite_sectional_spot(cfg, bases))
    results.extend(_suite_pairing(cfg, bases, rng))
    results.extend(_suite_fd_curvature(cfg, bases, rng))
    results.extend(_suite_dtheta(cfg, bases, rng))
    results.extend(_suite_levi_civita(cfg, rng))
    grid = bases["flat_zero"].grid
    results.append(
        check_dijk_zero_section(
            bases["flat_zero"],
            sample(TrigPolynomial((TrigTerm(1.0, (1, 0)),)), grid),
            sample(TrigPolynomial((TrigTerm(1.0, (0, 1)),)), grid),
            sample(TrigPolynomial((TrigTerm(1.0, (0, 1)),)), grid),
            delta=cfg.delta_fd,
            tolerance=cfg.tolerance("dijk_zero_section"),
        )
    )
    results.append(_suite_sectional_nonpositive(cfg, bases, rng))
    results.extend(_suite_flat_families(cfg, bases))
    results.append(_suite_dimension_one(cfg, rng))
    results.extend(_suite_geodesic(cfg))
    results.extend(_suite_model_consistency(cfg, bases, rng))
    results.extend(_suite_tensor_structure(cfg, bases, rng))
    results.extend(_suite_mirror(cfg, rng))
    return SuiteReport(cfg, tuple(results))
