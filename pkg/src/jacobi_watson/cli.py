"""Command-line front end: verification suites and plot-ready grids.

Each subcommand dispatches to one module's checks and emits a report whose
JSON form is byte-stable for a fixed configuration and seed (timing is only
embedded on request). Exit status: 0 when every hard check passes, 1 when a
check fails or a computation diverges, 2 for unusable configuration.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import abel, estimates, harmonic
from .errors import (
    ConvergenceError,
    DegenerateInputError,
    DomainError,
    RegimeError,
    RegionError,
    SingularEvaluationError,
)
from .kernels import (
    AbelParameter,
    BaileyArguments,
    kernel_mass,
    watson_kernel_bailey,
    watson_kernel_integral,
    watson_kernel_series,
    watson_series_matrix,
)
from .measure import WeightedMeasure
from .polynomials import JacobiParams, jacobi_eval, jacobi_weighted_sum
from .reporting import Report, grid_csv

_NUMERIC_ERRORS = (
    ConvergenceError,
    DegenerateInputError,
    RegimeError,
    RegionError,
    SingularEvaluationError,
    FloatingPointError,
    OverflowError,
    ZeroDivisionError,
)

SUITES = {
    "kernel": ("mass", "positivity", "crossval", "grid"),
    "abel": ("mean", "maximal", "lp", "grid"),
    "cz": ("decompose",),
    "weights": ("identity", "power", "jacobi-a1", "ap", "divergence"),
    "estimates": (
        "poisson",
        "dyadic",
        "auxiliary",
        "shift",
        "mainest",
        "joperator",
        "sxy",
    ),
}


@dataclass
class RunConfig:
    """Everything a run needs; flags override --config file entries."""

    command: str
    suite: str = ""
    alpha: float = 0.0
    beta: float = 0.0
    r_grid: tuple = (0.5, 0.9)
    lam_grid: tuple = (0.7,)
    x_points: int = 25
    y_point: float = 0.25
    measure: str = "jacobi:0.5,0.5"
    f_name: str = "bump"
    tol: float = 1e-8
    seed: int = 0
    refine: int = 1
    out: str = ""
    fmt: str = "json"
    timing: bool = False
    threads: int = 1

    def validate(self) -> None:
        if not (self.alpha > -1.0 and self.beta > -1.0):
            raise DomainError(f"need alpha, beta > -1, got ({self.alpha}, {self.beta})")
        if len(self.r_grid) == 0 or len(self.lam_grid) == 0 or self.x_points < 2:
            raise DomainError("grids must be nonempty")
        if any(not (0.0 < r < 1.0) for r in self.r_grid):
            raise DomainError("r grid must lie inside (0, 1)")
        if self.tol <= 0.0:
            raise DomainError(f"tolerance must be positive, got {self.tol}")
        if self.fmt not in ("json", "csv"):
            raise DomainError(f"format must be json or csv, got {self.fmt!r}")
        if self.command in SUITES and self.suite not in SUITES[self.command]:
            raise DomainError(
                f"suite {self.suite!r} not in {SUITES[self.command]} for {self.command}"
            )
        _parse_measure(self.measure)  # fail fast on a bad measure spec

    def echo(self) -> dict:
        return {
            "command": self.command,
            "suite": self.suite,
            "alpha": self.alpha,
            "beta": self.beta,
            "r_grid": list(self.r_grid),
            "lambda_grid": list(self.lam_grid),
            "x_points": self.x_points,
            "y_point": self.y_point,
            "measure": self.measure,
            "f": self.f_name,
            "tol": self.tol,
            "seed": self.seed,
            "refine": self.refine,
            "format": self.fmt,
        }

    @property
    def params(self) -> JacobiParams:
        return JacobiParams(self.alpha, self.beta)


def _parse_measure(spec: str) -> WeightedMeasure:
    head, _, rest = spec.partition(":")
    try:
        nums = [float(t) for t in rest.split(",") if t != ""]
        if head == "lebesgue":
            a, b = nums if nums else (0.0, 1.0)
            return WeightedMeasure.lebesgue(a, b)
        if head == "jacobi":
            return WeightedMeasure.jacobi(*nums)
        if head == "power":
            if len(nums) == 1:
                return WeightedMeasure.power(nums[0])
            return WeightedMeasure.power(nums[0], (nums[1], nums[2]))
    except (TypeError, ValueError) as exc:
        raise DomainError(f"bad measure spec {spec!r}: {exc}") from None
    raise DomainError(f"unknown measure family {head!r}")


def _pick_function(cfg: RunConfig, p: JacobiParams):
    for tf in abel.test_function_family(p):
        if tf.tag == cfg.f_name:
            return tf
    names = [tf.tag for tf in abel.test_function_family(p)]
    raise DomainError(f"unknown test function {cfg.f_name!r}; have {names}")


def _x_grid(cfg: RunConfig, lo=-1.0, hi=1.0, jitter=False):
    xs = np.linspace(lo, hi, cfg.x_points)
    if jitter and cfg.x_points > 2:
        rng = np.random.default_rng(cfg.seed)
        h = (hi - lo) / (cfg.x_points - 1)
        xs[1:-1] = xs[1:-1] + 0.4 * h * rng.uniform(-1.0, 1.0, cfg.x_points - 2)
    return xs


# ---- kernel ------------------------------------------------------------------


def _suite_kernel(cfg: RunConfig) -> Report:
    rep = Report("kernel", cfg.echo())
    p = cfg.params
    if cfg.suite == "mass":
        xs = np.linspace(-0.9, 0.9, 5)
        for r in cfg.r_grid:
            tol = 1e-8 if r <= 0.95 else 1e-6
            worst = max(abs(kernel_mass(p, AbelParameter(r), x) - 1.0) for x in xs)
            rep.add(f"mass r={r:g}", "mass-conservation", worst, tol, worst <= tol)
    elif cfg.suite == "positivity":
        xs = _x_grid(cfg, jitter=True)
        for r in cfg.r_grid:
            mat, _, _ = watson_series_matrix(p, r, xs, xs)
            low = float(mat.min())
            rep.add(f"min r={r:g}", "kernel-nonnegative", low, -1e-10, low >= -1e-10)
    elif cfg.suite == "crossval":
        xs = np.linspace(-0.9, 0.9, 8)
        for r in cfg.r_grid:
            ab = AbelParameter(r)
            worst = 0.0
            for x in xs:
                for y in xs:
                    if BaileyArguments.from_points(ab, x, y).margin <= 0.1:
                        continue
                    a = watson_kernel_series(p, ab, x, y).value
                    b = watson_kernel_bailey(p, ab, x, y).value
                    worst = max(worst, abs(a - b) / max(abs(a), 1e-300))
            rep.add(
                f"series-vs-product r={r:g}",
                "dual-route-agreement",
                worst,
                1e-8,
                worst <= 1e-8,
            )
            if p.alpha + p.beta > -1.0:
                worst = 0.0
                for x in np.linspace(-0.8, 0.8, 3):
                    a = watson_kernel_series(p, ab, x, 0.3).value
                    c = watson_kernel_integral(p, ab, x, 0.3).value
                    worst = max(worst, abs(a - c) / max(abs(a), 1e-300))
                rep.add(
                    f"series-vs-integral r={r:g}",
                    "integral-route-agreement",
                    worst,
                    1e-4,
                    worst <= 1e-4,
                )
    return rep


def _grid_kernel(cfg: RunConfig):
    p = cfg.params
    rows = []
    xs = _x_grid(cfg)
    for r in cfg.r_grid:
        ab = AbelParameter(r)
        for x in xs:
            ev = watson_kernel_series(p, ab, float(x), cfg.y_point)
            rows.append((x, r, ev.value, ev.method, ev.error_estimate))
    return rows


# ---- abel --------------------------------------------------------------------


def _suite_abel(cfg: RunConfig) -> Report:
    rep = Report("abel", cfg.echo())
    p = cfg.params
    f = _pick_function(cfg, p)
    xs = _x_grid(cfg)
    if cfg.suite == "mean":
        for r in cfg.r_grid:
            ab = AbelParameter(r)
            vals = abel.abel_mean(f, p, ab, xs)
            if f.tag == "pk:3":
                want = r**3 * jacobi_eval(p, 3, xs)
                worst = float(np.max(np.abs(vals - want)))
                rep.add(
                    f"single-term r={r:g}",
                    "damped-eigenvector",
                    worst,
                    1e-10,
                    worst <= 1e-10,
                )
            else:
                sub = xs[:: max(1, xs.size // 5)]
                dual = abel.abel_mean(f, p, ab, sub, route="kernel")
                ser = abel.abel_mean(f, p, ab, sub)
                worst = float(np.max(np.abs(dual - ser)))
                rep.add(
                    f"dual-route r={r:g}",
                    "series-vs-kernel-mean",
                    worst,
                    1e-6,
                    worst <= 1e-6,
                )
    elif cfg.suite == "maximal":
        coarse = abel.default_r_grid(10)
        fine = abel.default_r_grid(12)
        va = np.asarray(abel.jacobi_maximal(f, p, xs, coarse))
        vb = np.asarray(abel.jacobi_maximal(f, p, xs, fine))
        mono = bool(np.all(vb >= va - 1e-12))
        rep.add(
            "refinement-monotone",
            "maximal-grid-growth",
            float(np.min(vb - va)),
            0.0,
            mono,
        )
        top = float(np.max(vb))
        rep.add("sup finite", "maximal-finite", top, None, math.isfinite(top))
    elif cfg.suite == "lp":
        norms = abel.lp_convergence_probe(f, p, 2.0, cfg.r_grid)
        dec = bool(np.all(np.diff(norms) < 0.0)) if len(norms) > 1 else True
        rep.add(
            "L2 error decreasing",
            "mean-converges",
            float(norms[-1]),
            float(norms[0]),
            dec,
        )
    return rep


def _grid_abel(cfg: RunConfig):
    p = cfg.params
    f = _pick_function(cfg, p)
    xs = _x_grid(cfg)
    if cfg.suite == "maximal":
        n_r = 8 * cfg.refine
        vals = np.asarray(abel.jacobi_maximal(f, p, xs, abel.default_r_grid(n_r)))
        prev = np.asarray(abel.jacobi_maximal(f, p, xs, abel.default_r_grid(max(2, n_r - 2))))
        r_top = 1.0 - 2.0**-n_r
        return [
            (x, r_top, v, f"maximal:{n_r}", abs(v - q))
            for x, v, q in zip(xs, vals, prev)
        ]
    deg = 48
    coeffs = abel.fourier_jacobi_coefficients(f, p, deg).coeffs
    rows = []
    n = np.arange(coeffs.size)
    for r in cfg.r_grid:
        full = jacobi_weighted_sum(p, coeffs * r**n, xs)
        half = jacobi_weighted_sum(p, (coeffs * r**n)[: deg // 2], xs)
        for x, v, h in zip(xs, full, half):
            rows.append((x, r, v, "series", abs(v - h)))
    return rows


# ---- cz ------------------------------------------------------------------------


def _suite_cz(cfg: RunConfig) -> Report:
    rep = Report("cz", cfg.echo())
    m = _parse_measure(cfg.measure)
    p = cfg.params
    f = _pick_function(cfg, p)
    a, b = m.support
    norm1 = None
    for lam in cfg.lam_grid:
        d = harmonic.cz_decompose(m, f, lam)
        norm1 = d.norm1
        tag = f"lam={lam:g}"
        if d.trivial:
            avg = d.norm1 / m.total_mass
            rep.add(
                f"{tag} trivial certificate",
                "global-average-above",
                avg,
                lam,
                avg > lam and len(d.intervals) == 0,
            )
            continue
        avgs = [iv[2] for iv in d.intervals]
        sel_lo = min(avgs) if avgs else lam + 1
        sel_hi = max(avgs) if avgs else 0.0
        rep.add(
            f"{tag} selected averages > lam",
            "selection-lower",
            sel_lo,
            lam,
            sel_lo > lam,
        )
        rep.add(
            f"{tag} selected averages <= 2 lam",
            "selection-upper",
            sel_hi,
            2.0 * lam,
            sel_hi <= 2.0 * lam * (1.0 + 1e-12),
        )
        tot, _ = harmonic._merged_mass(m, [(iv[0], iv[1]) for iv in d.intervals])
        rep.add(
            f"{tag} selected mass",
            "selection-mass",
            tot,
            d.norm1 / lam,
            tot <= d.norm1 / lam * (1.0 + 1e-10),
        )
        rep.add(
            f"{tag} inflated mass",
            "inflated-mass",
            d.mass_Gstar,
            3.0 * d.norm1 / lam,
            d.mass_Gstar <= 3.0 * d.norm1 / lam * (1.0 + 1e-10),
        )
        xs = np.linspace(a + 1e-9, b - 1e-9, 101)
        recon = float(np.max(np.abs(f(xs) - d.good(xs) - d.bad(xs))))
        rep.add(f"{tag} f = g + b", "reconstruction", recon, 1e-9, recon <= 1e-9)
    if norm1 is not None:
        rep.add("norm echo", "l1-norm", norm1, None, True, hard=False)
    return rep


# ---- weights -------------------------------------------------------------------


def _suite_weights(cfg: RunConfig) -> Report:
    rep = Report("weights", cfg.echo())
    if cfg.suite == "identity":
        m = WeightedMeasure.lebesgue(0.0, 1.0)
        one = harmonic.PowerWeight(())
        v = harmonic.a1_constant(one, m)
        rep.add("a1 of unit weight", "unit-a1", v, 1.0, abs(v - 1.0) <= 1e-10)
        v2 = harmonic.ap_constant(one, m, 2.0)
        rep.add("a2 of unit weight", "unit-ap", v2, 1.0, abs(v2 - 1.0) <= 1e-10)
    elif cfg.suite == "power":
        worst = 0.0
        for a_out, a_in in ((2.0, -0.5), (1.0, -0.3)):
            base = WeightedMeasure.power(a_out)
            w = harmonic.PowerWeight(((0.0, a_in),))
            for x in np.linspace(0.05, 1.0, 20):
                got = harmonic.weighted_interval_average(base, w, (0.0, x))
                want = (a_out + 1.0) / (a_out + a_in + 1.0) * x**a_in
                worst = max(worst, abs(got - want) / want)
        rep.add(
            "left-average identity",
            "power-average-closed-form",
            worst,
            1e-8,
            worst <= 1e-8,
        )
    elif cfg.suite == "jacobi-a1":
        m = WeightedMeasure.jacobi(0.5, 0.5)
        w = harmonic.PowerWeight(((1.0, -0.3), (-1.0, -0.3)))
        v1 = harmonic.a1_constant(w, m, grid_size=256)
        v2 = harmonic.a1_constant(w, m, grid_size=512)
        ok = math.isfinite(v2) and v2 < 2.0 * v1
        rep.add("jacobi a1 refinement", "a1-stable", v2, 2.0 * v1, ok)
    elif cfg.suite == "ap":
        m = WeightedMeasure.lebesgue(0.0, 1.0)
        good = harmonic.ap_constant(harmonic.PowerWeight(((0.0, 0.5),)), m, 2.0)
        bad = harmonic.ap_constant(harmonic.PowerWeight(((0.0, 1.5),)), m, 2.0)
        rep.add("inside class finite", "ap-admissible", good, None, math.isfinite(good))
        rep.add(
            "outside class infinite",
            "ap-inadmissible",
            bad,
            None,
            math.isinf(bad),
        )
    elif cfg.suite == "divergence":
        m = WeightedMeasure.lebesgue(0.0, 1.0)
        probe = harmonic.ap_divergence_probe(harmonic.PowerWeight(((0.0, 1.5),)), m, 2.0)
        rep.add(
            "probe flags divergence",
            "ap-divergence",
            probe["sups"][-1],
            None,
            probe["divergent"],
        )
    return rep


# ---- estimates -----------------------------------------------------------------


def _suite_estimates(cfg: RunConfig) -> Report:
    rep = Report("estimates", cfg.echo())
    p = cfg.params
    if cfg.suite == "poisson":
        for tag, alpha, want in (
            ("k1", None, 4.0),
            ("k2", None, 2.0),
            ("k3", None, math.pi),
        ):
            got = estimates.poisson_mass(tag, alpha)
            rep.add(
                f"mass {tag}",
                "comparison-kernel-mass",
                got,
                want,
                abs(got - want) <= 1e-6,
            )
        a = cfg.alpha
        kern = estimates.PoissonTypeKernel("k4", a if a > -1 else 0.5)
        got = estimates.poisson_mass("k4", kern.alpha)
        rep.add(
            f"mass k4 alpha={kern.alpha:g}",
            "comparison-kernel-mass",
            got,
            kern.analytic_mass,
            abs(got - kern.analytic_mass) <= 1e-6,
        )
    elif cfg.suite == "dyadic":
        ab = AbelParameter(max(cfg.r_grid))
        maj = estimates.DyadicMajorant(p, ab, 0.5)
        iv = maj.intervals
        nested = all(
            iv[i][0] >= iv[i + 1][0] and iv[i][1] <= iv[i + 1][1]
            for i in range(len(iv) - 1)
        )
        rep.add("intervals nested", "dyadic-nesting", float(nested), None, nested)
        c = estimates.dyadic_domination_constant(
            p, cfg.r_grid, [0.2, 0.5, 0.9], np.linspace(-0.9, 0.9, 13)
        )
        rep.add("domination constant", "dyadic-domination", c, None, math.isfinite(c), hard=False)
    elif cfg.suite == "auxiliary":
        sups = [0.0, 0.0, 0.0]
        for j in range(1, 13):
            ab = AbelParameter(1.0 - 2.0**-j)
            v1, v2 = estimates.estm_integrals(ab, 0.7)
            pv = estimates.estm_proof_variant(ab)
            sups = [max(sups[0], v1), max(sups[1], v2), max(sups[2], pv)]
        rep.add(
            "windowed integral sup",
            "auxiliary-bounded",
            sups[0],
            None,
            math.isfinite(sups[0]),
        )
        rep.add(
            "endpoint-weighted sup",
            "auxiliary-bounded",
            sups[1],
            None,
            math.isfinite(sups[1]),
        )
        rep.add(
            "rearranged variant sup",
            "auxiliary-mass-bound",
            sups[2],
            4.0,
            sups[2] <= 4.0,
        )
    elif cfg.suite == "shift":
        for eta in (1.1, 1.5, 3.0):
            out = estimates.kernel_shift_check(eta)
            rep.add(
                f"regional bounds eta={eta:g}",
                "shift-stability",
                max(out["worst_far"] / out["bound_far"], out["worst_near"] / out["bound_near"]),
                1.0,
                out["holds"],
            )
    elif cfg.suite == "mainest":
        worst_ratio = 0.0
        sup = 0.0
        for a in (-0.5, 0.0, 1.7):
            pp = JacobiParams(a, cfg.beta)
            for r in cfg.r_grid:
                ab = AbelParameter(r)
                v = estimates.mainest_integral(pp, ab, 0.5)
                w = estimates.mainest_integral(pp, ab, 0.5, n_y=96, n_s=32, level=3)
                sup = max(sup, w)
                worst_ratio = max(worst_ratio, max(v, w) / max(min(v, w), 1e-300))
        rep.add(
            "superposition sup",
            "mainest-finite",
            sup,
            None,
            math.isfinite(sup),
        )
        rep.add(
            "refinement ratio",
            "mainest-stable",
            worst_ratio,
            1.5,
            worst_ratio <= 1.5,
        )
    elif cfg.suite == "joperator":
        f = _pick_function(cfg, cfg.params)
        worst = estimates.j_domination_probe(
            p, f, cfg.r_grid, np.linspace(0.05, 0.9, 5)
        )
        rep.add(
            "maximal domination ratio",
            "averaging-dominated",
            worst,
            None,
            math.isfinite(worst),
        )
    elif cfg.suite == "sxy":
        out = estimates.sxy_inequalities_check()
        rep.add(
            "literal comparison constants",
            "box-inequalities",
            float(out["holds"]),
            1.0,
            out["holds"],
        )
        rep.add("lower rate constant", "localization-rate", out["vii"]["rate_range"][0], 0.125, out["vii"]["lower_holds"])
        for key in ("iii", "iv", "v"):
            fit = out[key].get("C2_fit", out[key].get("C_fit"))
            rep.add(f"fitted constant {key}", "box-fitted", fit, None, True, hard=False)
    return rep


# ---- plumbing ------------------------------------------------------------------


_SUITE_RUNNERS = {
    "kernel": _suite_kernel,
    "abel": _suite_abel,
    "cz": _suite_cz,
    "weights": _suite_weights,
    "estimates": _suite_estimates,
}


def run(cfg: RunConfig) -> Report:
    """Dispatch one configuration; numerical failures become failed checks."""
    cfg.validate()
    if cfg.command == "report-all":
        return _report_all(cfg)
    runner = _SUITE_RUNNERS[cfg.command]
    try:
        return runner(cfg)
    except _NUMERIC_ERRORS:
        # a diverging computation is a failed check, never a crash
        rep = Report(cfg.command, cfg.echo())
        rep.add(f"{cfg.suite} completed", "no-numerical-divergence", math.nan, None, False)
        return rep


def _report_all(cfg: RunConfig) -> Report:
    combos = [
        ("kernel", "mass"),
        ("kernel", "positivity"),
        ("abel", "mean"),
        ("cz", "decompose"),
        ("weights", "identity"),
        ("weights", "power"),
        ("estimates", "poisson"),
        ("estimates", "shift"),
        ("estimates", "sxy"),
    ]

    def one(pair):
        cmd, suite = pair
        sub = RunConfig(
            command=cmd,
            suite=suite,
            alpha=cfg.alpha,
            beta=cfg.beta,
            r_grid=cfg.r_grid,
            lam_grid=cfg.lam_grid,
            x_points=cfg.x_points,
            measure=cfg.measure,
            f_name="pk:3" if (cmd, suite) == ("abel", "mean") else cfg.f_name,
            seed=cfg.seed,
        )
        return suite, run(sub)

    rep = Report("report-all", cfg.echo())
    with ThreadPoolExecutor(max_workers=max(1, cfg.threads)) as pool:
        results = list(pool.map(one, combos))
    for _, sub in sorted(results, key=lambda t: t[0]):
        rep.extend(sub)
    return rep


def emit_grid(cfg: RunConfig) -> str:
    """CSV grid for the current command/suite; deterministic row order."""
    cfg.validate()
    if cfg.command == "kernel":
        rows = _grid_kernel(cfg)
    elif cfg.command == "abel":
        rows = _grid_abel(cfg)
    else:
        raise DomainError(f"no grid emitter for command {cfg.command!r}")
    return grid_csv(rows)


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="jacobi-watson",
        description="verification suites and grids for weighted expansion summability",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    for cmd in ("kernel", "abel", "cz", "weights", "estimates", "report-all"):
        sp = sub.add_parser(cmd)
        sp.add_argument("--config", default=None, help="JSON file with defaults")
        sp.add_argument("--alpha", type=float, default=None)
        sp.add_argument("--beta", type=float, default=None)
        sp.add_argument("--r", default=None, help="comma list of r values in (0,1)")
        sp.add_argument("--x-points", type=int, default=None)
        sp.add_argument("--y", type=float, default=None, help="second kernel argument")
        sp.add_argument("--lambda", dest="lam", default=None, help="comma list of levels")
        sp.add_argument("--measure", default=None, help="lebesgue[:a,b] | jacobi:a,b | power:e[:l,r]")
        sp.add_argument("--f", default=None, help="test function name")
        sp.add_argument("--tol", type=float, default=None)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--refine", type=int, default=None)
        sp.add_argument("--out", default=None)
        sp.add_argument("--format", dest="fmt", choices=("json", "csv"), default=None)
        sp.add_argument("--timing", action="store_true", default=None)
        if cmd in SUITES:
            sp.add_argument("--suite", choices=SUITES[cmd], default=None)
    return ap


def _config_from_args(args) -> RunConfig:
    base: dict = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            base = json.load(fh)
    cfg = RunConfig(command=args.command)
    if args.command in SUITES:
        cfg.suite = SUITES[args.command][0]
    merged = dict(base)
    overrides = {
        "suite": getattr(args, "suite", None),
        "alpha": args.alpha,
        "beta": args.beta,
        "r_grid": tuple(float(t) for t in args.r.split(",")) if args.r else None,
        "lam_grid": tuple(float(t) for t in args.lam.split(",")) if args.lam else None,
        "x_points": args.x_points,
        "y_point": args.y,
        "measure": args.measure,
        "f_name": args.f,
        "tol": args.tol,
        "seed": args.seed,
        "refine": args.refine,
        "out": args.out,
        "fmt": args.fmt,
        "timing": args.timing,
    }
    for key, val in overrides.items():
        if val is not None:
            merged[key] = val
    for key, val in merged.items():
        if not hasattr(cfg, key):
            raise DomainError(f"unknown config key {key!r}")
        if key in ("r_grid", "lam_grid"):
            val = tuple(float(v) for v in val)
        setattr(cfg, key, val)
    cfg.threads = max(1, int(os.environ.get("JW_THREADS", "1")))
    return cfg


def main(argv=None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        cfg.validate()
    except (DomainError, OSError, json.JSONDecodeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    t0 = time.perf_counter()
    if cfg.fmt == "csv":
        try:
            text = emit_grid(cfg)
        except DomainError as exc:
            print(f"configuration error: {exc}", file=sys.stderr)
            return 2
        status = 0
    else:
        report = run(cfg)
        text = report.to_json(time.perf_counter() - t0 if cfg.timing else None)
        status = 0 if report.aggregate_pass else 1
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        if cfg.fmt == "json":
            print(report.summary())
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
