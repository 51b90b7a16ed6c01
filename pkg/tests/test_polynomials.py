"""Polynomial recurrence, normalization, norms, and the Gauss rules."""

import math

import numpy as np
import pytest
from scipy import special

from jacobi_watson import (
    DomainError,
    JacobiParams,
    binomial_real,
    gauss_jacobi_rule,
    growth_bound_probe,
    jacobi_eval,
    jacobi_eval_table,
    jacobi_function_eval,
    jacobi_norm,
    jacobi_norm_sequence,
    jacobi_weighted_sum,
)
from jacobi_watson.quadrature import interval_rule
from jacobi_watson.errors import SingularEvaluationError

BOXES = [(-0.5, -0.5), (0.0, 0.0), (0.5, 0.3), (1.7, 0.4)]


@pytest.mark.parametrize("a,b", BOXES)
def test_recurrence_matches_reference_evaluator(a, b):
    """scipy's eval_jacobi is a fully independent implementation."""
    p = JacobiParams(a, b)
    x = np.linspace(-1.0, 1.0, 41)
    for n in range(0, 25):
        mine = jacobi_eval(p, n, x)
        ref = special.eval_jacobi(n, a, b, x)
        np.testing.assert_allclose(mine, ref, rtol=1e-11, atol=1e-13)


@pytest.mark.parametrize("a,b", BOXES)
def test_value_at_one_is_binomial(a, b):
    p = JacobiParams(a, b)
    for n in range(0, 31):
        want = binomial_real(n + a, n)
        assert jacobi_eval(p, n, 1.0) == pytest.approx(want, rel=1e-12)


def test_parameter_swap_reflection():
    pa = JacobiParams(0.7, -0.2)
    pb = JacobiParams(-0.2, 0.7)
    x = np.linspace(-1.0, 1.0, 21)
    for n in range(0, 12):
        lhs = jacobi_eval(pa, n, -x)
        rhs = (-1.0) ** n * jacobi_eval(pb, n, x)
        np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-13)


def test_eval_table_consistent_with_single_eval():
    p = JacobiParams(0.3, 1.1)
    x = np.linspace(-0.99, 0.99, 17)
    table = jacobi_eval_table(p, 10, x)
    assert table.shape == (11, 17)
    for n in (0, 3, 10):
        np.testing.assert_allclose(table[n], jacobi_eval(p, n, x), rtol=1e-13)


class TestNorms:
    @pytest.mark.parametrize("a,b", BOXES)
    def test_closed_form_vs_quadrature(self, a, b):
        p = JacobiParams(a, b)
        rule = gauss_jacobi_rule(p, 64)
        for n in (0, 1, 5, 12):
            vals = jacobi_eval(p, n, rule.nodes)
            quad = rule.integrate(vals * vals)
            assert math.sqrt(quad) == pytest.approx(
                math.sqrt(jacobi_norm(p, n)), rel=1e-11
            )

    def test_sequence_matches_scalar(self):
        p = JacobiParams(-0.4, 0.9)
        seq = jacobi_norm_sequence(p, 8)
        for n in range(9):
            assert seq[n] == pytest.approx(jacobi_norm(p, n), rel=1e-14)

    def test_orthogonality(self):
        p = JacobiParams(0.5, 0.3)
        rule = gauss_jacobi_rule(p, 48)
        table = jacobi_eval_table(p, 12, rule.nodes)
        gram = (table * rule.weights) @ table.T
        h = jacobi_norm_sequence(p, 12)
        off = gram - np.diag(np.diag(gram))
        scale = np.sqrt(np.outer(h, h))
        assert np.max(np.abs(off) / scale) < 1e-12


def test_weighted_sum_equals_direct_sum():
    p = JacobiParams(0.2, -0.3)
    c = np.array([0.5, -1.0, 0.0, 2.0, 0.25])
    x = np.linspace(-1.0, 1.0, 15)
    direct = sum(c[n] * jacobi_eval(p, n, x) for n in range(c.size))
    np.testing.assert_allclose(jacobi_weighted_sum(p, c, x), direct, rtol=1e-13)


def test_weighted_sum_accepts_matrix_of_coefficient_rows():
    p = JacobiParams(0.0, 0.0)
    c = np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    x = np.array([0.3, -0.7])
    out = jacobi_weighted_sum(p, c, x)
    np.testing.assert_allclose(out[0], np.ones(2))
    np.testing.assert_allclose(out[1], jacobi_eval(p, 2, x), rtol=1e-13)


class TestJacobiFunctions:
    def test_half_weight_product(self):
        p = JacobiParams(0.5, 1.2)
        x = np.linspace(-0.9, 0.9, 9)
        got = jacobi_function_eval(p, 4, x)
        want = (
            jacobi_eval(p, 4, x)
            * (1.0 - x) ** 0.25
            * (1.0 + x) ** 0.6
        )
        np.testing.assert_allclose(got, want, rtol=1e-13)

    def test_lebesgue_orthogonality(self):
        # same norms as the polynomials, but in the flat measure; the
        # endpoint-aware rule resolves the (1 -+ x)^(1/2) factors of F^2
        p = JacobiParams(0.5, 0.5)
        t, w = interval_rule(-1.0, 1.0, 80, e_left=0.5, e_right=0.5)
        f2 = jacobi_function_eval(p, 2, t)
        f5 = jacobi_function_eval(p, 5, t)
        assert abs(np.dot(w, f2 * f5)) < 1e-13
        assert np.dot(w, f5 * f5) == pytest.approx(jacobi_norm(p, 5), rel=1e-10)

    def test_singular_endpoint_refused(self):
        p = JacobiParams(-0.5, 0.0)
        with pytest.raises(SingularEvaluationError):
            jacobi_function_eval(p, 3, 1.0)


def test_growth_probe_finite_and_stable():
    p = JacobiParams(0.5, 0.3)
    c32 = growth_bound_probe(p, 32)
    c64 = growth_bound_probe(p, 64)
    assert math.isfinite(c64)
    assert c64 <= c32 * 1.0 + 1e-12 or c64 == pytest.approx(c32, rel=0.05)


def test_params_validation():
    with pytest.raises(DomainError):
        JacobiParams(-1.0, 0.0)
    with pytest.raises(DomainError):
        JacobiParams(0.0, -1.5)


def test_gauss_rule_moment_exactness():
    from scipy.integrate import quad

    p = JacobiParams(0.7, -0.4)
    rule = gauss_jacobi_rule(p, 10)
    # exact through degree 19; the oracle is QUADPACK's algebraic-weight
    # integrator, nothing shared with the Golub-Welsch construction
    for k in (0, 3, 11, 19):
        got = rule.integrate(rule.nodes**k)
        want, err = quad(
            lambda x: x**k, -1.0, 1.0, weight="alg", wvar=(p.beta, p.alpha)
        )
        assert got == pytest.approx(want, rel=1e-11, abs=1e-13)
