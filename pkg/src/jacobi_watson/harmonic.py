"""Maximal functions, equal-measure stopping-time decompositions, kernel
variation constants, and Muckenhoupt-type weight characteristics.

Everything here is relative to a WeightedMeasure. Averages use exact interval
masses wherever the measure family has a closed-form CDF; integrals of point
functions use singular-aware cell quadrature. The non-centered maximal
function over a finite window family is computed exactly (for the family) by
a cumulative-average profile, so property tests can rely on sharp
inequalities instead of sampling slack.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, DomainError
from .measure import WeightedMeasure, equal_measure_split, interval_mass
from .quadrature import graded_breakpoints

__all__ = [
    "CZDecomposition",
    "ZygmundConstants",
    "PowerWeight",
    "hl_maximal",
    "lateral_maximal",
    "cz_decompose",
    "zygmund_constants",
    "zygmund_bound_check",
    "kernel_level_bound_check",
    "weighted_interval_average",
    "ap_constant",
    "a1_constant",
    "ap_divergence_probe",
]


# ---- grids and cumulative profiles -------------------------------------


def _window_grid(m: WeightedMeasure, window_family) -> np.ndarray:
    """Endpoint grid for the interval family: graded toward both support ends
    plus a uniform part. An explicit array is used as-is (clipped)."""
    a, b = m.support
    if window_family is not None and not isinstance(window_family, (int, np.integer)):
        g = np.unique(np.clip(np.asarray(window_family, dtype=float), a, b))
        if g.size < 2:
            raise DegenerateInputError("window family needs at least two endpoints")
        if g[0] != a or g[-1] != b:
            g = np.unique(np.concatenate([[a, b], g]))
        return g
    n_uniform = 256 if window_family is None else int(window_family)
    if n_uniform < 4:
        raise DomainError(f"need at least 4 grid points, got {n_uniform}")
    left = graded_breakpoints(a, b, lean_left=True, min_scale=1e-10, n_uniform=n_uniform)
    right = graded_breakpoints(a, b, lean_left=False, min_scale=1e-10, n_uniform=n_uniform)
    return np.unique(np.concatenate([left, right]))


def _cell_data(m: WeightedMeasure, f, grid: np.ndarray, n_quad: int):
    """Per-cell exact masses and quadrature integrals of |f| d(mu)."""
    bps = sorted(
        b for b in getattr(f, "breakpoints", ()) if grid[0] < b < grid[-1]
    )
    if bps:
        grid = np.unique(np.concatenate([grid, np.asarray(bps)]))
    n = grid.size - 1
    masses = np.empty(n)
    integrals = np.empty(n)
    for i in range(n):
        l, r = grid[i], grid[i + 1]
        masses[i] = m.interval_mass_exact(l, r)
        t, w = m.cell_rule(l, r, n_quad)
        integrals[i] = float(np.dot(w, np.abs(f(t))))
    return grid, masses, integrals


def _maximal_profile(masses: np.ndarray, integrals: np.ndarray) -> np.ndarray:
    """profile[c] = max over grid intervals containing cell c of the average
    integrals/masses. Suffix-max over right endpoints then prefix-max over
    left endpoints turns the O(n^2) pair search into two accumulations."""
    cm = np.concatenate([[0.0], np.cumsum(masses)])
    ci = np.concatenate([[0.0], np.cumsum(integrals)])
    dm = cm[None, :] - cm[:, None]
    with np.errstate(invalid="ignore", divide="ignore"):
        avg = (ci[None, :] - ci[:, None]) / dm
    avg[~(dm > 0.0)] = -np.inf
    # S[i, j] = best average over [g_i, g_j'] with j' >= j
    s = np.flip(np.maximum.accumulate(np.flip(avg, axis=1), axis=1), axis=1)
    p = np.maximum.accumulate(s, axis=0)
    return np.diagonal(p, offset=1).copy()


def _locate(grid: np.ndarray, x: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(grid, x, side="right") - 1
    return np.clip(idx, 0, grid.size - 2)


def hl_maximal(m: WeightedMeasure, f, x, window_family=None, n_quad: int = 16):
    """Non-centered maximal function sup over intervals I containing x of
    (1/mu(I)) int_I |f| dmu, the sup running over all intervals with endpoints
    in the window family's grid.

    Exact for the family: the value at x is the true maximum over every grid
    interval whose interior meets x, so it dominates the absolute average
    over any single probed interval and grows under family refinement.
    """
    grid = _window_grid(m, window_family)
    grid, masses, integrals = _cell_data(m, f, grid, n_quad)
    profile = _maximal_profile(masses, integrals)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    a, b = m.support
    if np.any(xs < a) or np.any(xs > b):
        raise DomainError("evaluation points must lie in the support")
    idx = _locate(grid, xs)
    out = profile[idx]
    # a point sitting exactly on an interior grid line belongs to both cells
    on_edge = (xs == grid[idx]) & (idx > 0)
    out = np.where(on_edge, np.maximum(out, profile[np.maximum(idx - 1, 0)]), out)
    return float(out[0]) if np.ndim(x) == 0 else out


def lateral_maximal(
    m: WeightedMeasure,
    f,
    a: float,
    side: str,
    n_points: int = 200,
    n_quad: int = 16,
) -> float:
    """One-sided maximal value at a: sup over intervals (x, a) (side "left")
    or (a, b) (side "right") of the measure average of |f|.

    Candidate endpoints are graded toward a so the sup picks up the one-sided
    limit f(a+-) when f is monotone.
    """
    sa, sb = m.support
    if not (sa < a < sb):
        raise DomainError(f"need an interior point, got {a} in [{sa}, {sb}]")
    if side == "left":
        grid = graded_breakpoints(sa, a, lean_left=False, min_scale=1e-12, n_uniform=n_points)
    elif side == "right":
        grid = graded_breakpoints(a, sb, lean_left=True, min_scale=1e-12, n_uniform=n_points)
    else:
        raise DomainError(f"side must be 'left' or 'right', got {side!r}")
    grid, masses, integrals = _cell_data(m, f, grid, n_quad)
    if side == "left":
        cm = np.cumsum(masses[::-1])
        ci = np.cumsum(integrals[::-1])
    else:
        cm = np.cumsum(masses)
        ci = np.cumsum(integrals)
    keep = cm > 0.0
    if not np.any(keep):
        raise DegenerateInputError("every candidate window has zero mass")
    return float(np.max(ci[keep] / cm[keep]))


# ---- stopping-time decomposition ----------------------------------------


@dataclass(frozen=True)
class CZDecomposition:
    """Result of the equal-measure stopping-time decomposition at threshold
    lam: disjoint selected intervals with averages in (lam, 2 lam], the
    bounded part g (= interval average on each selected interval, = f off
    them), the mean-zero part b = f - g, and the masses of the selection G
    and its measure-inflated triple G*.

    When trivial is True the global average already exceeds lam; no selection
    is performed (nothing to decompose at this threshold) and g = f, b = 0.
    """

    lam: float
    intervals: tuple
    good: object
    bad: object
    mass_G: float
    mass_Gstar: float
    gstar_intervals: tuple
    norm1: float
    trivial: bool = False


def _piecewise_integral(m: WeightedMeasure, f, l: float, r: float, n_quad: int) -> float:
    bps = sorted(b for b in getattr(f, "breakpoints", ()) if l < b < r)
    edges = [l] + bps + [r]
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        t, w = m.cell_rule(lo, hi, n_quad)
        total += float(np.dot(w, f(t)))
    return total


def _integral_and_sup(m: WeightedMeasure, f, l: float, r: float, n_quad: int):
    """Integral of f dmu plus the max of f over the quadrature nodes; the
    node max certifies cells that can never produce a selectable child."""
    bps = sorted(b for b in getattr(f, "breakpoints", ()) if l < b < r)
    edges = [l] + bps + [r]
    total, top = 0.0, -math.inf
    for lo, hi in zip(edges[:-1], edges[1:]):
        t, w = m.cell_rule(lo, hi, n_quad)
        fv = np.asarray(f(t), dtype=float)
        total += float(np.dot(w, fv))
        top = max(top, float(np.max(fv)))
    return total, top


def _extend_by_mass(m: WeightedMeasure, point: float, target: float, direction: str) -> float:
    """Endpoint t with mu between t and `point` equal to target, clipped at
    the support; direction "left" searches below the point."""
    a, b = m.support
    if direction == "left":
        if m.interval_mass_exact(a, point) <= target:
            return a
        lo, hi = a, point
        for _ in range(100):
            c = 0.5 * (lo + hi)
            if m.interval_mass_exact(c, point) > target:
                lo = c
            else:
                hi = c
        return 0.5 * (lo + hi)
    if m.interval_mass_exact(point, b) <= target:
        return b
    lo, hi = point, b
    for _ in range(100):
        c = 0.5 * (lo + hi)
        if m.interval_mass_exact(point, c) > target:
            hi = c
        else:
            lo = c
    return 0.5 * (lo + hi)


def _merged_mass(m: WeightedMeasure, intervals) -> tuple:
    """Union mass of possibly overlapping intervals; returns (mass, merged)."""
    if not intervals:
        return 0.0, ()
    ordered = sorted(intervals)
    merged = [list(ordered[0])]
    for l, r in ordered[1:]:
        if l <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], r)
        else:
            merged.append([l, r])
    mass = sum(m.interval_mass_exact(l, r) for l, r in merged)
    return mass, tuple((l, r) for l, r in merged)


def cz_decompose(
    m: WeightedMeasure,
    f,
    lam: float,
    max_depth: int = 40,
    min_mass_rel: float = 1e-9,
    n_quad: int = 24,
) -> CZDecomposition:
    """Equal-measure bisection selection at threshold lam for f >= 0.

    Each interval is split at its measure midpoint; a half whose average
    exceeds lam is selected (the parent average <= lam forces the half's
    average <= 2 lam), the rest are subdivided until the depth or mass floor.
    Both halves exceeding lam under a parent at or below lam is impossible
    and raises, rather than being assumed away.
    """
    if lam <= 0.0:
        raise DomainError(f"need a positive threshold, got {lam}")
    a, b = m.support
    probe, _ = m.quadrature_rule(256)
    fv = np.asarray(f(probe), dtype=float)
    scale = max(1.0, float(np.max(np.abs(fv))))
    if np.min(fv) < -1e-10 * scale:
        raise DomainError("decomposition requires f >= 0 on the support")

    total_mass = m.interval_mass_exact(a, b)
    norm1 = _piecewise_integral(m, f, a, b, n_quad)
    mass_floor = min_mass_rel * total_mass

    def _evaluators(selected):
        lefts = np.array([iv[0] for iv in selected])
        rights = np.array([iv[1] for iv in selected])
        avgs = np.array([iv[2] for iv in selected])

        def good(x):
            x = np.asarray(x, dtype=float)
            out = np.asarray(f(x), dtype=float).copy()
            if lefts.size:
                idx = np.searchsorted(lefts, x, side="right") - 1
                inside = (idx >= 0) & (x <= rights[np.clip(idx, 0, None)])
                out[inside] = avgs[idx[inside]]
            return out

        def bad(x):
            x = np.asarray(x, dtype=float)
            return np.asarray(f(x), dtype=float) - good(x)

        return good, bad

    if norm1 / total_mass > lam:
        good, bad = _evaluators([])
        return CZDecomposition(
            lam=lam, intervals=(), good=good, bad=bad, mass_G=0.0,
            mass_Gstar=0.0, gstar_intervals=(), norm1=norm1, trivial=True,
        )

    selected = []
    stack = [(a, b, 0)]
    while stack:
        l, r, depth = stack.pop()
        if depth >= max_depth:
            continue
        (ll, c), (_, rr) = equal_measure_split(m, (l, r))
        over = 0
        for lo, hi in ((ll, c), (c, rr)):
            mass = m.interval_mass_exact(lo, hi)
            if mass <= 0.0:
                continue
            integral, sup = _integral_and_sup(m, f, lo, hi, n_quad)
            avg = integral / mass
            if avg > lam:
                over += 1
                if avg > 2.0 * lam * (1.0 + 1e-8):
                    raise AssertionError(
                        "half average exceeds twice the threshold below a "
                        "parent at or under it; quadrature is inconsistent"
                    )
                selected.append((lo, hi, avg))
            elif mass >= mass_floor and sup > lam:
                # f <= lam across the cell means no descendant is selectable;
                # recursing is only useful where the level set still crosses
                stack.append((lo, hi, depth + 1))
        # the parent average was <= lam, so at most one half can exceed it
        if over == 2:
            raise AssertionError("both halves exceed the threshold")
    selected.sort(key=lambda iv: iv[0])

    mass_G = sum(m.interval_mass_exact(l, r) for l, r, _ in selected)
    inflated = []
    for l, r, _ in selected:
        mu = m.interval_mass_exact(l, r)
        inflated.append(
            (_extend_by_mass(m, l, mu, "left"), _extend_by_mass(m, r, mu, "right"))
        )
    mass_gstar, merged = _merged_mass(m, inflated)
    good, bad = _evaluators(selected)
    return CZDecomposition(
        lam=lam,
        intervals=tuple(selected),
        good=good,
        bad=bad,
        mass_G=mass_G,
        mass_Gstar=mass_gstar,
        gstar_intervals=merged,
        norm1=norm1,
        trivial=False,
    )


# ---- variation constants --------------------------------------------------


@dataclass(frozen=True)
class ZygmundConstants:
    """M1 bounds kernel mass, M2 the measure-weighted second variation, and
    M = M1 + 2 M2 is the constant dominating kernel averages by the maximal
    function. m2_trace records (depth, value) refinements; stable is False
    when the finest refinement still grew by more than 10x."""

    M1: float
    M2: float
    M: float
    stable: bool
    m2_trace: tuple


def _weighted_variation(kernel, m: WeightedMeasure, r: float, x: float, depth: int) -> float:
    """max of the two one-sided Stieltjes sums sum mu(x, y_i) |dK| on a
    uniform partition of each side at the given dyadic depth."""
    a, b = m.support
    n = 2**depth
    cx = m.cdf(x)
    worst = 0.0
    if b - x > 1e-14 * (b - a):
        ys = np.linspace(x, b, n + 1)
        kv = np.asarray(kernel(r, x, ys), dtype=float)
        wts = np.array([m.cdf(y) for y in ys[1:]]) - cx
        worst = max(worst, float(np.dot(wts, np.abs(np.diff(kv)))))
    if x - a > 1e-14 * (b - a):
        ys = np.linspace(a, x, n + 1)
        kv = np.asarray(kernel(r, x, ys), dtype=float)
        wts = cx - np.array([m.cdf(y) for y in ys[1:]])
        worst = max(worst, float(np.dot(wts, np.abs(np.diff(kv)))))
    return worst


def zygmund_constants(
    kernel,
    m: WeightedMeasure,
    r_grid,
    x_grid,
    partition_depth: int = 12,
    order: int = 512,
) -> ZygmundConstants:
    """Kernel-mass and weighted-variation constants over an (r, x) grid.

    kernel is a callable (r, x, y_array) -> values. M1 takes quadrature
    masses of |K|; M2 takes Stieltjes sums on nested uniform partitions,
    reported at the finest depth with a growth flag.
    """
    if partition_depth < 5:
        raise DomainError(f"need partition_depth >= 5, got {partition_depth}")
    rs = np.atleast_1d(np.asarray(r_grid, dtype=float))
    xs = np.atleast_1d(np.asarray(x_grid, dtype=float))
    nodes, weights = m.quadrature_rule(order)
    m1 = 0.0
    for r in rs:
        for x in xs:
            vals = np.asarray(kernel(float(r), float(x), nodes), dtype=float)
            m1 = max(m1, float(np.dot(weights, np.abs(vals))))
    depths = [max(5, partition_depth - 4), max(6, partition_depth - 2), partition_depth]
    trace = []
    for d in depths:
        m2_d = 0.0
        for r in rs:
            for x in xs:
                m2_d = max(m2_d, _weighted_variation(kernel, m, float(r), float(x), d))
        trace.append((d, m2_d))
    m2 = trace[-1][1]
    prev = trace[-2][1]
    stable = not (prev > 0.0 and m2 > 10.0 * prev) and not (prev == 0.0 and m2 > 0.0)
    return ZygmundConstants(M1=m1, M2=m2, M=m1 + 2.0 * m2, stable=stable, m2_trace=tuple(trace))


def zygmund_bound_check(
    kernel,
    m: WeightedMeasure,
    f,
    r_grid,
    x_grid,
    constants: ZygmundConstants | None = None,
    order: int = 512,
    window_family=None,
) -> float:
    """Worst ratio over the x grid of sup_r |int K f dmu| against
    (M1 + 2 M2) times the maximal function; at most 1 + discretization slack
    when the variation constants hold."""
    if constants is None:
        constants = zygmund_constants(kernel, m, r_grid, x_grid)
    rs = np.atleast_1d(np.asarray(r_grid, dtype=float))
    xs = np.atleast_1d(np.asarray(x_grid, dtype=float))
    nodes, weights = m.quadrature_rule(order)
    fvals = np.asarray(f(nodes), dtype=float)
    fstar = hl_maximal(m, f, xs, window_family=window_family)
    worst = 0.0
    tiny = 1e-14 * max(1.0, float(np.max(fstar)))
    for x, fs in zip(xs, np.atleast_1d(fstar)):
        if fs <= tiny:
            continue
        t = max(
            abs(float(np.dot(weights, np.asarray(kernel(float(r), float(x), nodes)) * fvals)))
            for r in rs
        )
        worst = max(worst, t / (constants.M * fs))
    return worst


def kernel_level_bound_check(
    kernel,
    m: WeightedMeasure,
    f,
    lam: float,
    r_grid,
    n_x: int = 64,
    order: int = 512,
) -> float:
    """Fitted constant C with sup_r |int K f dmu| <= C lam for x outside the
    inflated selection at threshold lam. Returns 0 when no probe point falls
    outside."""
    cz = cz_decompose(m, f, lam)
    a, b = m.support
    xs = np.linspace(a, b, n_x + 2)[1:-1]
    outside = np.ones(xs.size, dtype=bool)
    for l, r in cz.gstar_intervals:
        outside &= (xs < l) | (xs > r)
    xs = xs[outside]
    if xs.size == 0:
        return 0.0
    rs = np.atleast_1d(np.asarray(r_grid, dtype=float))
    nodes, weights = m.quadrature_rule(order)
    fvals = np.asarray(f(nodes), dtype=float)
    worst = 0.0
    for x in xs:
        t = max(
            abs(float(np.dot(weights, np.asarray(kernel(float(r), float(x), nodes)) * fvals)))
            for r in rs
        )
        worst = max(worst, t)
    return worst / lam


# ---- weights ---------------------------------------------------------------


@dataclass(frozen=True)
class PowerWeight:
    """Weight of the form prod |x - c|^e, the admissible endpoint-power
    family. factors is a tuple of (anchor, exponent) pairs; an empty tuple is
    the unit weight."""

    factors: tuple = ()

    def __post_init__(self):
        object.__setattr__(
            self, "factors", tuple((float(c), float(e)) for c, e in self.factors)
        )

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.ones_like(x)
        for c, e in self.factors:
            out = out * np.abs(x - c) ** e
        return out

    def scaled(self, s: float) -> "PowerWeight":
        return PowerWeight(tuple((c, e * s) for c, e in self.factors))


def _combined_measure(m: WeightedMeasure, w: PowerWeight, scale: float = 1.0):
    """Measure w^scale dmu as a WeightedMeasure, or None when the combined
    density is not integrable (or needs an interior singularity the measure
    layer cannot represent)."""
    merged: dict = {}
    for c, e in m._factors():
        merged[c] = merged.get(c, 0.0) + e
    for c, e in w.factors:
        merged[c] = merged.get(c, 0.0) + e * scale
    merged = {c: e for c, e in merged.items() if abs(e) > 1e-15}
    a, b = m.support
    for c, e in merged.items():
        if e <= -1.0 and a <= c <= b:
            return None
        if e < 0.0 and a < c < b:
            return None
    if not merged:
        return WeightedMeasure.lebesgue(a, b)
    anchors = set(merged)
    try:
        if (a, b) == (-1.0, 1.0) and anchors <= {-1.0, 1.0}:
            return WeightedMeasure.jacobi(merged.get(1.0, 0.0), merged.get(-1.0, 0.0))
        if (a, b) in ((0.0, 1.0), (-1.0, 0.0)) and anchors == {0.0}:
            return WeightedMeasure.power(merged[0.0], (a, b))
        return WeightedMeasure.product(sorted(merged.items()), (a, b))
    except DomainError:
        return None


def weighted_interval_average(m: WeightedMeasure, w: PowerWeight, interval) -> float:
    """(1/mu(I)) int_I w dmu through exact masses of the product measure."""
    mw = _combined_measure(m, w, 1.0)
    if mw is None:
        return math.inf
    l, r = interval
    base = interval_mass(m, (l, r))
    if base <= 0.0:
        raise DegenerateInputError(f"interval [{l}, {r}] has zero mass")
    return interval_mass(mw, (l, r)) / base


def _grid_masses(meas: WeightedMeasure, grid: np.ndarray) -> np.ndarray:
    return np.array(
        [meas.interval_mass_exact(l, r) for l, r in zip(grid[:-1], grid[1:])]
    )


def ap_constant(
    w: PowerWeight,
    m: WeightedMeasure,
    p_exp: float,
    interval_family=None,
    grid_size: int = 512,
) -> float:
    """Muckenhoupt characteristic: sup over the interval family of
    [avg of w] [avg of w^(-1/(p-1))]^(p-1), averages in dmu.

    Infinite (returned as inf) when either combined density fails to be
    integrable. The family is every sub-interval with endpoints on a graded
    grid, denser near the support endpoints.
    """
    if p_exp <= 1.0:
        raise DomainError("need p > 1; use a1_constant for p = 1")
    mw = _combined_measure(m, w, 1.0)
    mv = _combined_measure(m, w, -1.0 / (p_exp - 1.0))
    if mw is None or mv is None:
        return math.inf
    grid = _window_grid(m, interval_family if interval_family is not None else grid_size)
    base = _grid_masses(m, grid)
    top = _grid_masses(mw, grid)
    dual = _grid_masses(mv, grid)
    cb = np.concatenate([[0.0], np.cumsum(base)])
    ct = np.concatenate([[0.0], np.cumsum(top)])
    cd = np.concatenate([[0.0], np.cumsum(dual)])
    db = cb[None, :] - cb[:, None]
    with np.errstate(invalid="ignore", divide="ignore"):
        prod = ((ct[None, :] - ct[:, None]) / db) * (
            ((cd[None, :] - cd[:, None]) / db) ** (p_exp - 1.0)
        )
    prod[~(db > 0.0)] = -np.inf
    return float(np.max(prod))


def a1_constant(
    w: PowerWeight,
    m: WeightedMeasure,
    x_grid=None,
    grid_size: int = 512,
) -> float:
    """sup over the grid of (maximal function of w in dmu) / w, with the
    maximal function computed from exact product-measure masses."""
    mw = _combined_measure(m, w, 1.0)
    if mw is None:
        return math.inf
    grid = _window_grid(m, grid_size)
    masses = _grid_masses(m, grid)
    wmasses = _grid_masses(mw, grid)
    profile = _maximal_profile(masses, wmasses)
    if x_grid is None:
        keep = masses > 0.0
        mids = (0.5 * (grid[:-1] + grid[1:]))[keep]
        vals = profile[keep]
    else:
        xs = np.asarray(x_grid, dtype=float)
        idx = _locate(grid, xs)
        mids = xs
        vals = profile[idx]
    return float(np.max(vals / w(mids)))


def ap_divergence_probe(
    w: PowerWeight,
    m: WeightedMeasure,
    p_exp: float,
    levels: int = 6,
    grid_size: int = 128,
    n_quad: int = 24,
) -> dict:
    """A_p products over families kept a shrinking distance 4^-j from the
    support ends. Divergence (>10x growth across levels) flags a weight
    outside the admissible class; admissible weights plateau.
    """
    if p_exp <= 1.0:
        raise DomainError("need p > 1")
    a, b = m.support
    width = b - a
    s = -1.0 / (p_exp - 1.0)
    sups = []
    for j in range(1, levels + 1):
        delta = width * 0.25**j
        lo, hi = a + delta, b - delta
        pts = set()
        pts.update(graded_breakpoints(lo, hi, lean_left=True, min_scale=1e-6, n_uniform=grid_size))
        pts.update(graded_breakpoints(lo, hi, lean_left=False, min_scale=1e-6, n_uniform=grid_size))
        grid = np.array(sorted(pts))
        base = np.empty(grid.size - 1)
        top = np.empty(grid.size - 1)
        dual = np.empty(grid.size - 1)
        for i in range(grid.size - 1):
            t, wt = m.cell_rule(grid[i], grid[i + 1], n_quad)
            wv = w(t)
            base[i] = float(np.sum(wt))
            top[i] = float(np.dot(wt, wv))
            dual[i] = float(np.dot(wt, wv**s))
        cb = np.concatenate([[0.0], np.cumsum(base)])
        ct = np.concatenate([[0.0], np.cumsum(top)])
        cd = np.concatenate([[0.0], np.cumsum(dual)])
        db = cb[None, :] - cb[:, None]
        with np.errstate(invalid="ignore", divide="ignore"):
            prod = ((ct[None, :] - ct[:, None]) / db) * (
                ((cd[None, :] - cd[:, None]) / db) ** (p_exp - 1.0)
            )
        prod[~(db > 0.0)] = -np.inf
        sups.append(float(np.max(prod)))
    divergent = sups[-1] > 10.0 * sups[0]
    return {"sups": sups, "divergent": divergent}
