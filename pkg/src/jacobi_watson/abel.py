"""Fourier-Jacobi expansions and their Abel regularization.

Coefficients, partial sums, Abel means computed by the series and by the
kernel-quadrature route, the modified (Jacobi-function) mean, the maximal
function over the Abel parameter, and convergence diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .kernels import AbelParameter, watson_series_matrix
from .measure import WeightedMeasure
from .polynomials import (
    JacobiParams,
    jacobi_eval,
    jacobi_norm_sequence,
    jacobi_weighted_sum,
)
from .quadrature import composite_rule, graded_breakpoints, _gauss_jacobi_raw

__all__ = [
    "Expansion",
    "TestFunction",
    "abel_mean",
    "default_r_grid",
    "fourier_jacobi_coefficients",
    "jacobi_maximal",
    "lp_convergence_probe",
    "lp_norm",
    "modified_abel_mean",
    "partial_sum",
    "test_function_family",
    "weak11_probe",
]

_MAX_SERIES_TERMS = 16384


@dataclass(frozen=True)
class Expansion:
    """Finite Fourier-Jacobi coefficient vector c(n), n = 0..N."""

    params: JacobiParams
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.ndim != 1 or c.size == 0:
            raise DomainError("coeffs must be a nonempty 1-d vector")
        if not np.all(np.isfinite(c)):
            raise DomainError("coefficients must be finite")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def energy(self) -> float:
        """Sum of c(n)^2 h_n, the squared L2(J) norm of the represented sum."""
        h = jacobi_norm_sequence(self.params, self.degree)
        return float(np.sum(self.coeffs**2 * h))


@dataclass(frozen=True, eq=False)
class TestFunction:
    """Named pointwise function on [-1, 1] with optional smoothness breakpoints.

    breakpoints lists interior points where the function is not smooth, so
    quadrature rules can split there. p_norms caches computed Lp(J) norms.
    """

    tag: str
    fn: object
    breakpoints: tuple = ()
    p_norms: dict = field(default_factory=dict)

    def __call__(self, x):
        return self.fn(np.asarray(x, dtype=float))


def test_function_family(p: JacobiParams):
    """The fixed test family: constant, sign, P_3, F_3, a narrow bump, and a
    clipped endpoint-singular profile."""

    def clipped(x):
        with np.errstate(divide="ignore"):
            raw = (1.0 - x) ** -0.2
        return np.minimum(raw, 10.0)

    return [
        TestFunction("const", lambda x: np.ones_like(x)),
        TestFunction("sign", np.sign, breakpoints=(0.0,)),
        TestFunction("pk:3", lambda x: jacobi_eval(p, 3, x)),
        TestFunction(
            "fk:3",
            lambda x: jacobi_eval(p, 3, x)
            * (1.0 - x) ** (0.5 * p.alpha)
            * (1.0 + x) ** (0.5 * p.beta),
        ),
        TestFunction("bump", lambda x: np.exp(-0.5 * (x / 0.1) ** 2)),
        # the clip at 10 puts the kink where (1-x)^(-0.2) crosses it
        TestFunction("clipped", clipped, breakpoints=(1.0 - 1e-5,)),
    ]


def _measure_rule(p: JacobiParams, order: int, breakpoints=()):
    """Nodes/weights integrating against J(dx) on [-1, 1], one Gauss rule per
    smooth piece between breakpoints.

    A single high-order rule per piece keeps polynomial projections exact up
    to the rule degree; subdividing instead would alias high-degree modes.
    """
    m = WeightedMeasure.jacobi(p.alpha, p.beta)
    bps = sorted(b for b in breakpoints if -1.0 < b < 1.0)
    if not bps:
        x, w = _gauss_jacobi_raw(order, p.alpha, p.beta)
        return x, w
    edges = [-1.0] + bps + [1.0]
    per_piece = max(24, order // (len(edges) - 1))
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        t, ww = m.cell_rule(lo, hi, per_piece)
        nodes.append(t)
        weights.append(ww)
    return np.concatenate(nodes), np.concatenate(weights)


def fourier_jacobi_coefficients(
    f, p: JacobiParams, degree: int, order: int | None = None
) -> Expansion:
    """Coefficients c(n) = (1/h_n) int f P_n dJ for n = 0..degree.

    order is the quadrature size; it must be at least degree + 1 so the rule
    resolves every projected polynomial. The projection loop streams the
    recurrence, so no (degree x order) table is materialized.
    """
    if degree < 0:
        raise DomainError(f"need degree >= 0, got {degree}")
    if order is None:
        order = max(2 * (degree + 1), 64)
    if order < degree + 1:
        raise DomainError(f"order {order} cannot resolve degree {degree}")
    breakpoints = getattr(f, "breakpoints", ())
    x, w = _measure_rule(p, order, breakpoints)
    wf = w * f(x)
    h = jacobi_norm_sequence(p, degree)
    a, b = p.alpha, p.beta
    coeffs = np.empty(degree + 1)
    prev = np.ones_like(x)
    coeffs[0] = np.dot(wf, prev) / h[0]
    if degree >= 1:
        cur = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x
        coeffs[1] = np.dot(wf, cur) / h[1]
        for n in range(2, degree + 1):
            c0 = 2.0 * n * (n + a + b) * (2.0 * n + a + b - 2.0)
            c1 = (2.0 * n + a + b - 1.0) * (a * a - b * b)
            c2 = (2.0 * n + a + b - 1.0) * (2.0 * n + a + b) * (2.0 * n + a + b - 2.0)
            c3 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * (2.0 * n + a + b)
            prev, cur = cur, ((c1 + c2 * x) * cur - c3 * prev) / c0
            coeffs[n] = np.dot(wf, cur) / h[n]
    return Expansion(params=p, coeffs=coeffs)


def partial_sum(e: Expansion, m: int, x):
    """Sum of c(n) P_n(x) for n <= m."""
    if not (0 <= m <= e.degree):
        raise DomainError(f"need 0 <= m <= {e.degree}, got {m}")
    vals = jacobi_weighted_sum(e.params, e.coeffs[: m + 1], x)
    return float(vals[0]) if np.ndim(x) == 0 else vals


def _default_terms(r: float, tol: float) -> int:
    n = int(math.ceil(math.log(tol) / math.log(r))) + 64
    return min(max(n, 32), _MAX_SERIES_TERMS)


def _trim(coeffs: np.ndarray) -> np.ndarray:
    """Drop the trailing coefficient tail that sits at quadrature-noise level."""
    mags = np.abs(coeffs)
    top = float(mags.max())
    if top == 0.0:
        return coeffs[:1]
    keep = np.nonzero(mags > 1e-14 * top)[0]
    return coeffs[: keep[-1] + 1]


def _as_expansion(f, p: JacobiParams, r_max: float, tol: float) -> Expansion:
    if isinstance(f, Expansion):
        return f
    n = _default_terms(r_max, tol)
    order = min(max(2 * (n + 1), 64), 2 * _MAX_SERIES_TERMS)
    e = fourier_jacobi_coefficients(f, p, n, order)
    return Expansion(params=p, coeffs=_trim(e.coeffs))


def abel_mean(
    f,
    p: JacobiParams,
    ab: AbelParameter,
    x,
    route: str = "series",
    order: int | None = None,
    tol: float = 1e-9,
):
    """Abel mean at parameter r: sum_n r^n c(n) P_n(x).

    route "series" sums the damped expansion; route "kernel" integrates the
    Watson kernel against f in the Jacobi measure. The two agree within the
    stated series tolerance plus quadrature error.
    """
    r = ab.r
    if route == "series":
        e = _as_expansion(f, p, r, tol)
        damped = e.coeffs * r ** np.arange(e.coeffs.size)
        vals = jacobi_weighted_sum(p, damped, x)
        return float(vals[0]) if np.ndim(x) == 0 else vals
    if route != "kernel":
        raise DomainError(f"unknown route {route!r}")
    if order is None:
        order = 1024 if r > 0.9 else 512
    breakpoints = getattr(f, "breakpoints", ())
    ynodes, yweights = _measure_rule(p, order, breakpoints)
    if isinstance(f, Expansion):
        fvals = jacobi_weighted_sum(p, f.coeffs, ynodes)
    else:
        fvals = f(ynodes)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    mat, _, _ = watson_series_matrix(p, r, xs, ynodes, tol_abs=tol * 1e-3)
    vals = mat @ (yweights * fvals)
    return float(vals[0]) if np.ndim(x) == 0 else vals


def modified_abel_mean(
    f,
    p: JacobiParams,
    ab: AbelParameter,
    x: float,
    route: str = "halfweight",
    order: int = 160,
    f_exponents: tuple[float, float] = (0.0, 0.0),
) -> float:
    """Abel mean of the Jacobi-function expansion, a Lebesgue-measure integral
    of the half-weighted kernel.

    route "halfweight" folds (1-y)^(a/2) (1+y)^(b/2) into the quadrature
    weights and integrates K(x, y) f(y); route "lebesgue" evaluates the full
    modified-kernel integrand on graded Gauss-Legendre cells, so the two
    routes share no nodes or weight machinery. f_exponents = (at -1, at +1)
    declares endpoint exponents carried by f itself; the halfweight rule then
    absorbs them too, keeping eigenfunction integrands polynomial.
    """
    r = ab.r
    el, er = f_exponents
    wx = (1.0 - x) ** (0.5 * p.alpha) * (1.0 + x) ** (0.5 * p.beta)
    if route == "halfweight":
        ynodes, yweights = _gauss_jacobi_raw(order, 0.5 * p.alpha + er, 0.5 * p.beta + el)
        row, _, _ = watson_series_matrix(p, r, np.array([float(x)]), ynodes)
        rest = f(ynodes) / ((1.0 - ynodes) ** er * (1.0 + ynodes) ** el)
        return wx * float(np.dot(yweights, row[0] * rest))
    if route != "lebesgue":
        raise DomainError(f"unknown route {route!r}")
    # the end cells carry an unabsorbed integrable singularity; their mass is
    # ~ min_scale^(1 + e/2) ~ 1e-9 at worst, and nodes stay clear of +-1
    pts = set()
    pts.update(graded_breakpoints(-1.0, 1.0, lean_left=True, min_scale=1e-12))
    pts.update(graded_breakpoints(-1.0, 1.0, lean_left=False, min_scale=1e-12))
    ynodes, yweights = composite_rule(sorted(pts), max(12, order // 8))
    row, _, _ = watson_series_matrix(p, r, np.array([float(x)]), ynodes)
    wy = (1.0 - ynodes) ** (0.5 * p.alpha) * (1.0 + ynodes) ** (0.5 * p.beta)
    return wx * float(np.dot(yweights, row[0] * wy * f(ynodes)))


def default_r_grid(levels: int = 12) -> np.ndarray:
    """Geometric approach to 1: r_j = 1 - 2^-j, j = 1..levels."""
    j = np.arange(1, levels + 1)
    return 1.0 - 2.0 ** (-j.astype(float))


def jacobi_maximal(f, p: JacobiParams, x, r_grid=None, tol: float = 1e-8):
    """max over the r grid of |Abel mean at x|; x may be scalar or an array.

    The expansion is resolved once at the largest grid r; all grid values then
    come from one streaming recurrence pass.
    """
    grid = default_r_grid() if r_grid is None else np.asarray(r_grid, dtype=float)
    if grid.size == 0 or np.any(grid <= 0.0) or np.any(grid >= 1.0):
        raise DomainError("r grid must be nonempty inside (0, 1)")
    e = _as_expansion(f, p, float(grid.max()), tol)
    n = np.arange(e.coeffs.size)
    damped = grid[:, None] ** n[None, :] * e.coeffs[None, :]
    vals = jacobi_weighted_sum(p, damped, x)
    best = np.max(np.abs(vals), axis=0)
    return float(best[0]) if np.ndim(x) == 0 else best


def lp_norm(f, p: JacobiParams, p_exp: float, order: int = 256) -> float:
    """Lp norm with respect to J(dx); p_exp = inf takes a dense-grid sup."""
    if p_exp != math.inf and p_exp < 1.0:
        raise DomainError(f"need p >= 1, got {p_exp}")
    breakpoints = getattr(f, "breakpoints", ())
    if p_exp == math.inf:
        xs = np.cos(np.linspace(0.0, math.pi, 4096))[1:-1]
        return float(np.max(np.abs(f(xs))))
    x, w = _measure_rule(p, order, breakpoints)
    return float(np.dot(w, np.abs(f(x)) ** p_exp)) ** (1.0 / p_exp)


def lp_convergence_probe(
    f,
    p: JacobiParams,
    p_exp: float,
    r_sequence,
    tol: float = 1e-8,
    n_cell: int = 10,
):
    """Norms ||f(r, .) - f||_p,J along the given r sequence.

    The quadrature grid is graded toward the function's breakpoints, where the
    Abel error concentrates in a layer of width about 1 - r.
    """
    rs = np.asarray(r_sequence, dtype=float)
    if np.any(rs <= 0.0) or np.any(rs >= 1.0):
        raise DomainError("r sequence must lie inside (0, 1)")
    e = _as_expansion(f, p, float(rs.max()), tol)
    m = WeightedMeasure.jacobi(p.alpha, p.beta)
    breakpoints = getattr(f, "breakpoints", ())
    edges = [-1.0] + sorted(b for b in breakpoints if -1.0 < b < 1.0) + [1.0]
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        pts = set()
        pts.update(graded_breakpoints(lo, hi, lean_left=True, min_scale=1e-10))
        pts.update(graded_breakpoints(lo, hi, lean_left=False, min_scale=1e-10))
        cells = sorted(pts)
        for cl, cr in zip(cells[:-1], cells[1:]):
            t, w = m.cell_rule(cl, cr, n_cell)
            nodes.append(t)
            weights.append(w)
    x = np.concatenate(nodes)
    w = np.concatenate(weights)
    if isinstance(f, Expansion):
        fx = jacobi_weighted_sum(p, f.coeffs, x)
    else:
        fx = f(x)
    n = np.arange(e.coeffs.size)
    damped = rs[:, None] ** n[None, :] * e.coeffs[None, :]
    vals = jacobi_weighted_sum(p, damped, x)
    err = np.abs(vals - fx[None, :])
    if p_exp == math.inf:
        return [float(v) for v in err.max(axis=1)]
    norms = (err**p_exp) @ w
    return [float(v) ** (1.0 / p_exp) for v in norms]


def weak11_probe(
    f,
    p: JacobiParams,
    lambda_grid=None,
    n_cells: int = 2048,
    r_grid=None,
    tol: float = 1e-6,
) -> float:
    """Worst lambda * J{maximal > lambda} / ||f||_1 over the lambda grid.

    The level-set measure is a sum of exact cell masses on a cosine-spaced
    partition, with the maximal function sampled at cell midpoints.
    """
    if lambda_grid is None:
        lambda_grid = np.geomspace(0.1, 10.0, 25)
    lam = np.asarray(lambda_grid, dtype=float)
    if np.any(lam <= 0.0):
        raise DomainError("lambda grid must be positive")
    theta = np.linspace(math.pi, 0.0, n_cells + 1)
    edges = np.cos(theta)
    mids = 0.5 * (edges[:-1] + edges[1:])
    m = WeightedMeasure.jacobi(p.alpha, p.beta)
    masses = np.array(
        [m.interval_mass_exact(l, r) for l, r in zip(edges[:-1], edges[1:])]
    )
    maximal = jacobi_maximal(f, p, mids, r_grid=r_grid, tol=tol)
    norm1 = lp_norm(f, p, 1.0)
    worst = 0.0
    for lv in lam:
        level_mass = float(masses[maximal > lv].sum())
        worst = max(worst, lv * level_mass / norm1)
    return worst
