"""Weighted measures on an interval: densities, CDFs, splitting, doubling.

A measure is described by a family tag, parameters, and a support interval.
Densities are products of |x - c|^e factors; singular anchors must sit at the
support endpoints. CDFs use closed forms (incomplete beta, power laws) where
available and graded singular-aware quadrature otherwise; tiny intervals fall
back to local quadrature so relative precision survives cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import special

from .errors import DegenerateInputError, DomainError
from .quadrature import gauss_legendre, graded_breakpoints, _gauss_jacobi_raw

__all__ = [
    "WeightedMeasure",
    "DyadicInterval",
    "interval_mass",
    "equal_measure_split",
    "doubling_ratio",
    "doubling_sweep",
    "dyadic_doubling_ratio_closed_form",
    "doubling_bracket",
]

_TINY_REL = 1e-6


@dataclass(frozen=True, eq=False)
class WeightedMeasure:
    """Measure rho(x) dx on [support[0], support[1]].

    family is one of "lebesgue", "jacobi", "power", "product"; params hold the
    exponents. Treat instances as immutable.
    """

    family: str
    params: tuple
    support: tuple

    def __post_init__(self):
        a, b = self.support
        if not (b > a):
            raise DegenerateInputError(f"empty support [{a}, {b}]")
        if self.family not in ("lebesgue", "jacobi", "power", "product"):
            raise DomainError(f"unknown family {self.family!r}")
        for c, e in self._factors():
            if e <= -1.0:
                raise DomainError(f"factor exponent {e} at {c} is not integrable")
            if e < 0.0 and a < c < b:
                raise DomainError("negative exponents must anchor at a support endpoint")
        object.__setattr__(self, "_cum_cache", None)

    # ---- constructors -------------------------------------------------

    @classmethod
    def lebesgue(cls, a: float = 0.0, b: float = 1.0) -> "WeightedMeasure":
        return cls("lebesgue", (), (float(a), float(b)))

    @classmethod
    def jacobi(cls, alpha: float, beta: float) -> "WeightedMeasure":
        if alpha <= -1.0 or beta <= -1.0:
            raise DomainError(f"need alpha, beta > -1, got ({alpha}, {beta})")
        return cls("jacobi", (float(alpha), float(beta)), (-1.0, 1.0))

    @classmethod
    def power(cls, a: float, support=(0.0, 1.0)) -> "WeightedMeasure":
        """|x|^a dx on (0, 1) or (-1, 0)."""
        support = (float(support[0]), float(support[1]))
        if support not in ((0.0, 1.0), (-1.0, 0.0)):
            raise DomainError("power family lives on (0, 1) or (-1, 0)")
        if a <= -1.0:
            raise DomainError(f"need a > -1, got {a}")
        return cls("power", (float(a),), support)

    @classmethod
    def product(cls, factors, support) -> "WeightedMeasure":
        """Density prod |x - c|^e for (c, e) pairs in `factors`."""
        params = tuple((float(c), float(e)) for c, e in factors)
        return cls("product", params, (float(support[0]), float(support[1])))

    # ---- descriptor serialization --------------------------------------

    def to_descriptor(self) -> dict:
        params = [list(f) for f in self.params] if self.family == "product" else list(self.params)
        return {"family": self.family, "params": params, "support": list(self.support)}

    @classmethod
    def from_descriptor(cls, d: dict) -> "WeightedMeasure":
        family = d["family"]
        support = tuple(float(v) for v in d["support"])
        if family == "product":
            return cls.product(d["params"], support)
        return cls(family, tuple(float(v) for v in d["params"]), support)

    # ---- density -------------------------------------------------------

    def _factors(self):
        if self.family == "lebesgue":
            return ()
        if self.family == "jacobi":
            alpha, beta = self.params
            return ((1.0, alpha), (-1.0, beta))
        if self.family == "power":
            return ((0.0, self.params[0]),)
        return self.params

    def density(self, x):
        x = np.asarray(x, dtype=float)
        out = np.ones_like(x)
        for c, e in self._factors():
            out = out * np.abs(x - c) ** e
        return out

    # ---- cdf and interval mass -----------------------------------------

    @property
    def total_mass(self) -> float:
        return self.cdf(self.support[1])

    def cdf(self, x: float) -> float:
        """Mass of [support_left, x]."""
        a, b = self.support
        x = min(max(float(x), a), b)
        if self.family == "lebesgue":
            return x - a
        if self.family == "power":
            (p,) = self.params
            if a == 0.0:
                return x ** (p + 1.0) / (p + 1.0)
            return (1.0 - (-x) ** (p + 1.0)) / (p + 1.0)
        if self.family == "jacobi":
            alpha, beta = self.params
            v = 0.5 * (1.0 + x)
            scale = 2.0 ** (alpha + beta + 1.0) * special.beta(beta + 1.0, alpha + 1.0)
            return scale * special.betainc(beta + 1.0, alpha + 1.0, v)
        return self._generic_cdf(x)

    def _quad_interval_mass(self, l: float, r: float) -> float:
        nodes, weights = self.cell_rule(l, r, 24)
        return float(np.sum(weights))

    def interval_mass_exact(self, l: float, r: float) -> float:
        """Mass of [l, r], using cancellation-safe branches for tiny intervals."""
        a, b = self.support
        if r <= l:
            return 0.0
        if self.family == "lebesgue":
            return r - l
        if self.family == "power":
            (p,) = self.params
            if a == 0.0:
                lo, hi = l, r
            else:
                lo, hi = -r, -l
            if lo <= 0.0:
                return hi ** (p + 1.0) / (p + 1.0) - (
                    lo ** (p + 1.0) / (p + 1.0) if lo > 0.0 else 0.0
                )
            # hi^(p+1) - lo^(p+1) without cancellation
            return lo ** (p + 1.0) * math.expm1((p + 1.0) * math.log(hi / lo)) / (p + 1.0)
        if r - l < _TINY_REL * (b - a):
            return self._quad_interval_mass(l, r)
        if self.family == "jacobi":
            alpha, beta = self.params
            scale = 2.0 ** (alpha + beta + 1.0) * special.beta(beta + 1.0, alpha + 1.0)
            vl, vr = 0.5 * (1.0 + l), 0.5 * (1.0 + r)
            if vl + vr > 1.0:
                # both ends near +1: difference of complementary tails
                return scale * (
                    special.betainc(alpha + 1.0, beta + 1.0, 1.0 - vl)
                    - special.betainc(alpha + 1.0, beta + 1.0, 1.0 - vr)
                )
            return scale * (
                special.betainc(beta + 1.0, alpha + 1.0, vr)
                - special.betainc(beta + 1.0, alpha + 1.0, vl)
            )
        return self._generic_cdf(r) - self._generic_cdf(l)

    def _cumulative_table(self):
        cache = getattr(self, "_cum_cache")
        if cache is not None:
            return cache
        a, b = self.support
        mid = 0.5 * (a + b)
        anchors = sorted({c for c, _ in self._factors() if a < c < b})
        bp = np.concatenate(
            [
                graded_breakpoints(a, mid, lean_left=True),
                graded_breakpoints(mid, b, lean_left=False)[1:],
            ]
        )
        bp = np.sort(np.unique(np.concatenate([bp, np.asarray(anchors)])))
        masses = [0.0]
        for lo, hi in zip(bp[:-1], bp[1:]):
            masses.append(masses[-1] + self._quad_interval_mass(lo, hi))
        table = (bp, np.asarray(masses))
        object.__setattr__(self, "_cum_cache", table)
        return table

    def _generic_cdf(self, x: float) -> float:
        a, b = self.support
        if x <= a:
            return 0.0
        bp, cum = self._cumulative_table()
        if x >= b:
            return float(cum[-1])
        i = int(np.searchsorted(bp, x, side="right") - 1)
        i = min(max(i, 0), bp.size - 2)
        partial = self._quad_interval_mass(bp[i], x) if x > bp[i] else 0.0
        return float(cum[i] + partial)

    # ---- quadrature against the measure ---------------------------------

    def cell_rule(self, l: float, r: float, n: int = 24):
        """Nodes/weights with the density folded in: sum w f(x) ~ int_l^r f dmu.

        Singular endpoint factors are absorbed by Gauss-Jacobi weights when l
        or r is an anchor; cells must not contain an anchor strictly inside.
        """
        if not (r > l):
            raise DegenerateInputError(f"need r > l, got [{l}, {r}]")
        factors = self._factors()
        e_l = sum(e for c, e in factors if c == l)
        e_r = sum(e for c, e in factors if c == r)
        rest = [(c, e) for c, e in factors if c != l and c != r]
        for c, _ in rest:
            if l < c < r:
                raise DomainError(f"anchor {c} lies inside cell [{l}, {r}]")
        half = 0.5 * (r - l)
        mid = 0.5 * (r + l)
        if e_l == 0.0 and e_r == 0.0:
            xi, wi = gauss_legendre(n)
            t = mid + half * xi
            w = half * wi
        else:
            xi, wi = _gauss_jacobi_raw(n, e_r, e_l)
            t = mid + half * xi
            w = half ** (1.0 + e_l + e_r) * wi
        for c, e in rest:
            w = w * np.abs(t - c) ** e
        return t, w

    def quadrature_rule(self, n: int):
        """Rule for the whole support, graded into cells toward the endpoints."""
        a, b = self.support
        if self.family == "jacobi":
            alpha, beta = self.params
            x, w = _gauss_jacobi_raw(n, alpha, beta)
            return x, w
        if self.family == "lebesgue":
            xi, wi = gauss_legendre(n)
            half = 0.5 * (b - a)
            return 0.5 * (a + b) + half * xi, half * wi
        if self.family == "power":
            return self.cell_rule(a, b, n)
        bp, _ = self._cumulative_table()
        per_cell = max(8, n // 8)
        nodes, weights = [], []
        for lo, hi in zip(bp[:-1], bp[1:]):
            t, w = self.cell_rule(lo, hi, per_cell)
            nodes.append(t)
            weights.append(w)
        return np.concatenate(nodes), np.concatenate(weights)


@dataclass(frozen=True)
class DyadicInterval:
    """The interval [k 2^-j, (k+1) 2^-j] with its concentric triple."""

    k: int
    j: int

    def __post_init__(self):
        if self.k < 0 or self.j < 0:
            raise DomainError(f"need k >= 0 and j >= 0, got k={self.k}, j={self.j}")

    @property
    def endpoints(self):
        h = 2.0 ** (-self.j)
        return (self.k * h, (self.k + 1) * h)

    @property
    def triple(self):
        h = 2.0 ** (-self.j)
        return ((self.k - 1) * h, (self.k + 2) * h)


def _check_inside(m: WeightedMeasure, interval) -> tuple:
    a, b = m.support
    l, r = float(interval[0]), float(interval[1])
    slack = 1e-12 * (b - a)
    if l < a - slack or r > b + slack:
        raise DomainError(f"interval [{l}, {r}] leaves the support [{a}, {b}]")
    return (min(max(l, a), b), min(max(r, a), b))


def interval_mass(m: WeightedMeasure, interval) -> float:
    """Mass of a closed subinterval of the support."""
    l, r = _check_inside(m, interval)
    if r <= l:
        return 0.0
    return m.interval_mass_exact(l, r)


def equal_measure_split(m: WeightedMeasure, interval, tol: float = 1e-12,
                        max_iter: int = 200):
    """Split an interval into two halves of equal measure by CDF bisection."""
    l, r = _check_inside(m, interval)
    total = interval_mass(m, (l, r))
    if total <= 0.0:
        raise DegenerateInputError(f"interval [{l}, {r}] has zero mass")
    lo, hi = l, r
    c = 0.5 * (l + r)
    for _ in range(max_iter):
        c = 0.5 * (lo + hi)
        left = interval_mass(m, (l, c))
        err = left - 0.5 * total
        if abs(err) <= 0.5 * tol * total or hi - lo <= 1e-17 * (r - l):
            break
        if err > 0.0:
            hi = c
        else:
            lo = c
    return (l, c), (c, r)


def doubling_ratio(m: WeightedMeasure, interval) -> float:
    """mu(3I)/mu(I) with 3I the concentric triple clipped to the support."""
    l, r = _check_inside(m, interval)
    base = interval_mass(m, (l, r))
    if base <= 0.0:
        raise DegenerateInputError(f"interval [{l}, {r}] has zero mass")
    a, b = m.support
    c, w = 0.5 * (l + r), r - l
    tl, tr = max(c - 1.5 * w, a), min(c + 1.5 * w, b)
    return interval_mass(m, (tl, tr)) / base


def doubling_sweep(m: WeightedMeasure, max_depth: int) -> float:
    """Sup of doubling ratios over the dyadic cells of the support up to a depth."""
    a, b = m.support
    best = 0.0
    for j in range(1, max_depth + 1):
        edges = np.linspace(a, b, 2**j + 1)
        for lo, hi in zip(edges[:-1], edges[1:]):
            if interval_mass(m, (lo, hi)) <= 0.0:
                continue
            best = max(best, doubling_ratio(m, (lo, hi)))
    return best


def dyadic_doubling_ratio_closed_form(a: float, k: int, j: int = 0) -> float:
    """Doubling ratio of x^a dx over [k 2^-j, (k+1) 2^-j], k >= 2.

    Equals ((k+2)^(a+1) - (k-1)^(a+1)) / ((k+1)^(a+1) - k^(a+1)); the scale
    2^-j cancels, so the value does not depend on j. Evaluated through
    expm1/log1p so the k -> infinity approach to 3 keeps full precision.
    """
    if a <= -1.0:
        raise DomainError(f"need a > -1, got {a}")
    if k < 2:
        raise DomainError(f"need k >= 2, got {k}")
    if j < 0:
        raise DomainError(f"need j >= 0, got {j}")
    s = a + 1.0
    num = math.expm1(s * math.log1p(2.0 / k)) - math.expm1(s * math.log1p(-1.0 / k))
    den = math.expm1(s * math.log1p(1.0 / k))
    return num / den


def doubling_bracket(a: float):
    """Sharp two-sided bracket for the dyadic doubling ratios of x^a dx.

    One end is the scale-free limit 3 (k -> infinity), the other the extreme
    value 3^(a+1)/(2^(a+1)-1); orientation depends on the sign of a(a-1).
    """
    if a <= -1.0:
        raise DomainError(f"need a > -1, got {a}")
    extreme = 3.0 ** (a + 1.0) / (2.0 ** (a + 1.0) - 1.0)
    return (min(3.0, extreme), max(3.0, extreme))
