"""Jacobi polynomials, their norms, Jacobi functions, and Gauss-Jacobi quadrature.

The polynomials P_n are normalized so that P_n(1) = C(n+alpha, n). Everything
downstream (kernels, expansions, maximal functions) is built on the evaluation
table produced here and on the quadrature rules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special

from .errors import DomainError, RegimeError, SingularEvaluationError

__all__ = [
    "JacobiParams",
    "QuadratureRule",
    "binomial_real",
    "gauss_jacobi_rule",
    "growth_bound_probe",
    "jacobi_eval",
    "jacobi_eval_table",
    "jacobi_function_eval",
    "jacobi_norm",
    "jacobi_norm_sequence",
    "jacobi_weighted_sum",
]


@dataclass(frozen=True)
class JacobiParams:
    """Exponent pair of the weight (1-x)^alpha (1+x)^beta on [-1, 1]."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > -1.0 and self.beta > -1.0):
            raise DomainError(
                f"need alpha > -1 and beta > -1, got ({self.alpha}, {self.beta})"
            )

    @property
    def q(self) -> float:
        """max(alpha, beta), the exponent controlling sup-norm growth of P_n."""
        return max(self.alpha, self.beta)

    def weight(self, x):
        """Density (1-x)^alpha (1+x)^beta of the measure J(dx)."""
        x = np.asarray(x, dtype=float)
        return (1.0 - x) ** self.alpha * (1.0 + x) ** self.beta


def binomial_real(top: float, n: int) -> float:
    """Generalized binomial coefficient C(top, n) for real top > -1 + n... safe range."""
    if n < 0:
        raise DomainError(f"need n >= 0, got {n}")
    return math.exp(
        math.lgamma(top + 1.0) - math.lgamma(top - n + 1.0) - math.lgamma(n + 1.0)
    )


def jacobi_eval_table(p: JacobiParams, n_max: int, x) -> np.ndarray:
    """Table P_n(x) for n = 0..n_max by the three-term recurrence.

    Returns an array of shape (n_max+1, len(x)). The recurrence coefficients
    are nonzero for n >= 2 whenever alpha, beta > -1; n = 1 uses the explicit
    linear polynomial, so the alpha+beta = 0 degeneracy never divides by zero.
    """
    if n_max < 0:
        raise DomainError(f"need n_max >= 0, got {n_max}")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    a, b = p.alpha, p.beta
    out = np.empty((n_max + 1, x.size), dtype=float)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x
    for n in range(2, n_max + 1):
        c0 = 2.0 * n * (n + a + b) * (2.0 * n + a + b - 2.0)
        c1 = (2.0 * n + a + b - 1.0) * (a * a - b * b)
        c2 = (2.0 * n + a + b - 1.0) * (2.0 * n + a + b) * (2.0 * n + a + b - 2.0)
        c3 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * (2.0 * n + a + b)
        out[n] = ((c1 + c2 * x) * out[n - 1] - c3 * out[n - 2]) / c0
    return out


def jacobi_eval(p: JacobiParams, n: int, x):
    """P_n(x) with P_n(1) = C(n+alpha, n); x may be a scalar or an array."""
    if n < 0:
        raise DomainError(f"need n >= 0, got {n}")
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    xv = np.atleast_1d(arr)
    a, b = p.alpha, p.beta
    prev = np.ones_like(xv)
    if n == 0:
        return float(prev[0]) if scalar else prev
    cur = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * xv
    for m in range(2, n + 1):
        c0 = 2.0 * m * (m + a + b) * (2.0 * m + a + b - 2.0)
        c1 = (2.0 * m + a + b - 1.0) * (a * a - b * b)
        c2 = (2.0 * m + a + b - 1.0) * (2.0 * m + a + b) * (2.0 * m + a + b - 2.0)
        c3 = 2.0 * (m + a - 1.0) * (m + b - 1.0) * (2.0 * m + a + b)
        prev, cur = cur, ((c1 + c2 * xv) * cur - c3 * prev) / c0
    return float(cur[0]) if scalar else cur


def jacobi_weighted_sum(p: JacobiParams, weights, x) -> np.ndarray:
    """Streaming evaluation of sum_n weights[n] P_n(x).

    Runs the three-term recurrence with two rolling rows, so memory stays
    O(len(x)) no matter how long the coefficient vector is. weights may be a
    1-d array or a (m, n_terms) matrix; the matrix form accumulates one sum
    per row (shape (m, len(x))), sharing a single recurrence pass.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    w = np.asarray(weights, dtype=float)
    matrix = w.ndim == 2
    if not matrix:
        w = w[None, :]
    n_terms = w.shape[1]
    if n_terms == 0:
        raise DomainError("empty coefficient vector")
    a, b = p.alpha, p.beta
    prev = np.ones_like(x)
    acc = w[:, 0][:, None] * prev
    if n_terms >= 2:
        cur = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x
        acc += w[:, 1][:, None] * cur
        for n in range(2, n_terms):
            c0 = 2.0 * n * (n + a + b) * (2.0 * n + a + b - 2.0)
            c1 = (2.0 * n + a + b - 1.0) * (a * a - b * b)
            c2 = (2.0 * n + a + b - 1.0) * (2.0 * n + a + b) * (2.0 * n + a + b - 2.0)
            c3 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * (2.0 * n + a + b)
            prev, cur = cur, ((c1 + c2 * x) * cur - c3 * prev) / c0
            acc += w[:, n][:, None] * cur
    return acc if matrix else acc[0]


def jacobi_norm(p: JacobiParams, n: int) -> float:
    """Squared L2(J) norm h_n of P_n.

    h_n = 2^(a+b+1)/(2n+a+b+1) * G(n+a+1)G(n+b+1) / (G(n+1)G(n+a+b+1)).
    """
    if n < 0:
        raise DomainError(f"need n >= 0, got {n}")
    a, b = p.alpha, p.beta
    if n == 0:
        # the generic form is 0/0 here when a+b+1 = 0; the limit is clean
        log_h = (
            (a + b + 1.0) * math.log(2.0)
            + math.lgamma(a + 1.0)
            + math.lgamma(b + 1.0)
            - math.lgamma(a + b + 2.0)
        )
        return math.exp(log_h)
    log_h = (
        (a + b + 1.0) * math.log(2.0)
        - math.log(2.0 * n + a + b + 1.0)
        + math.lgamma(n + a + 1.0)
        + math.lgamma(n + b + 1.0)
        - math.lgamma(n + 1.0)
        - math.lgamma(n + a + b + 1.0)
    )
    return math.exp(log_h)


def jacobi_norm_sequence(p: JacobiParams, n_max: int) -> np.ndarray:
    """h_n for n = 0..n_max, computed by the stable ratio recurrence."""
    a, b = p.alpha, p.beta
    h = np.empty(n_max + 1, dtype=float)
    h[0] = jacobi_norm(p, 0)
    if n_max >= 1:
        # the 0 -> 1 ratio degenerates when a+b+1 = 0, so start the
        # recurrence from the directly computed h_1
        h[1] = jacobi_norm(p, 1)
    for n in range(1, n_max):
        s = 2.0 * n + a + b
        h[n + 1] = h[n] * (
            (s + 1.0)
            / (s + 3.0)
            * ((n + a + 1.0) * (n + b + 1.0))
            / ((n + 1.0) * (n + a + b + 1.0))
        )
    return h


def jacobi_function_eval(p: JacobiParams, n: int, x):
    """Jacobi function F_n(x) = P_n(x) (1-x)^(a/2) (1+x)^(b/2).

    The F_n are orthogonal in plain Lebesgue measure on [-1, 1] with the same
    norms h_n. Evaluation at an endpoint whose exponent is negative is refused.
    """
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    xv = np.atleast_1d(arr)
    if p.alpha < 0.0 and np.any(xv >= 1.0):
        raise SingularEvaluationError("F_n is singular at x = 1 for alpha < 0")
    if p.beta < 0.0 and np.any(xv <= -1.0):
        raise SingularEvaluationError("F_n is singular at x = -1 for beta < 0")
    vals = jacobi_eval(p, n, xv)
    vals = vals * (1.0 - xv) ** (0.5 * p.alpha) * (1.0 + xv) ** (0.5 * p.beta)
    return float(vals[0]) if scalar else vals


def growth_bound_probe(p: JacobiParams, n_max: int, grid_size: int = 400) -> float:
    """Fit C in sup |P_n| <= C n^(q+1/2), q = max(alpha, beta) >= -1/2.

    Returns the sup over 1 <= n <= n_max and a cosine-spaced x grid (endpoints
    included) of |P_n(x)| / n^(q+1/2). The profile decays after small n, so the
    returned constant stops growing once n_max clears the first few degrees.
    """
    if p.q < -0.5:
        raise RegimeError(
            f"growth bound requires max(alpha, beta) >= -1/2, got q = {p.q}"
        )
    if n_max < 1:
        raise DomainError(f"need n_max >= 1, got {n_max}")
    x = np.cos(np.linspace(0.0, np.pi, grid_size))
    table = jacobi_eval_table(p, n_max, x)
    n = np.arange(1, n_max + 1, dtype=float)
    return float(np.max(np.abs(table[1:]) / n[:, None] ** (p.q + 0.5)))


def _growth_constant(p: JacobiParams, n_max: int = 64) -> float:
    """Internal growth-constant fit with q clamped to -1/2 (valid for all params)."""
    q_eff = max(p.q, -0.5)
    x = np.cos(np.linspace(0.0, np.pi, 200))
    table = jacobi_eval_table(p, n_max, x)
    n = np.arange(1, n_max + 1, dtype=float)
    return float(np.max(np.abs(table[1:]) / n[:, None] ** (q_eff + 0.5)))


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and weights for integration against (1-x)^alpha (1+x)^beta dx."""

    nodes: np.ndarray
    weights: np.ndarray

    @property
    def order(self) -> int:
        return self.nodes.size

    def integrate(self, f) -> float:
        """Integrate a callable (or an array of node values) against the rule."""
        vals = f(self.nodes) if callable(f) else np.asarray(f, dtype=float)
        return float(np.dot(self.weights, vals))


@lru_cache(maxsize=128)
def _roots_jacobi_cached(order: int, alpha: float, beta: float):
    nodes, weights = special.roots_jacobi(order, alpha, beta)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_jacobi_rule(p: JacobiParams, order: int) -> QuadratureRule:
    """Gauss rule of the given order for the measure J(dx) = (1-x)^a (1+x)^b dx.

    Exact for polynomials of degree <= 2*order - 1.
    """
    if order < 1:
        raise DomainError(f"need order >= 1, got {order}")
    nodes, weights = _roots_jacobi_cached(order, p.alpha, p.beta)
    return QuadratureRule(nodes=nodes, weights=weights)
