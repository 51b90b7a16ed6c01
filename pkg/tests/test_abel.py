"""Abel means, both integral routes, maximal function, Lp probes."""

import math

import numpy as np
import pytest

from jacobi_watson import (
    AbelParameter,
    DomainError,
    Expansion,
    JacobiParams,
    abel_mean,
    default_r_grid,
    fourier_jacobi_coefficients,
    jacobi_eval,
    jacobi_function_eval,
    jacobi_maximal,
    jacobi_norm,
    lp_convergence_probe,
    lp_norm,
    modified_abel_mean,
    partial_sum,
    weak11_probe,
)
from jacobi_watson import test_function_family as function_family


def family(p):
    return {tf.tag: tf for tf in function_family(p)}


def test_family_has_the_six_profiles():
    fam = family(JacobiParams(0.5, 0.3))
    assert sorted(fam) == ["bump", "clipped", "const", "fk:3", "pk:3", "sign"]
    assert fam["sign"].breakpoints == (0.0,)


class TestSingleTermMeans:
    """A single polynomial P_3 is an eigenvector: its mean is r^3 P_3(x)."""

    def test_series_route(self):
        p = JacobiParams(0.5, 0.3)
        pk = family(p)["pk:3"]
        for r in (0.5, 0.9):
            for x in (-0.6, 0.0, 0.85):
                want = r**3 * jacobi_eval(p, 3, x)
                got = abel_mean(pk, p, AbelParameter(r), x, route="series")
                assert got == pytest.approx(want, abs=1e-12)

    def test_kernel_route(self):
        p = JacobiParams(0.5, 0.3)
        pk = family(p)["pk:3"]
        got = abel_mean(pk, p, AbelParameter(0.7), 0.4, route="kernel")
        assert got == pytest.approx(0.7**3 * jacobi_eval(p, 3, 0.4), abs=1e-10)

    def test_modified_mean_eigenvector(self):
        # F_3 carries endpoint exponents (b/2 at -1, a/2 at +1); once declared,
        # the halfweight rule absorbs them and the integrand is a polynomial
        p = JacobiParams(0.5, 0.3)
        fk = family(p)["fk:3"]
        for r in (0.5, 0.9):
            for x in (-0.3, 0.4):
                got = modified_abel_mean(
                    fk, p, AbelParameter(r), x,
                    f_exponents=(0.5 * p.beta, 0.5 * p.alpha),
                )
                want = r**3 * jacobi_function_eval(p, 3, x)
                assert got == pytest.approx(want, abs=1e-13)


class TestDualRoutes:
    @pytest.mark.parametrize("a,b", [(0.5, 0.3), (-0.5, -0.5)])
    @pytest.mark.parametrize("tag", ["bump", "const"])
    def test_smooth_functions_agree_tightly(self, a, b, tag):
        p = JacobiParams(a, b)
        f = family(p)[tag]
        for r in (0.5, 0.9):
            for x in (0.0, 0.6):
                h = modified_abel_mean(f, p, AbelParameter(r), x, route="halfweight")
                l = modified_abel_mean(f, p, AbelParameter(r), x, route="lebesgue")
                assert h == pytest.approx(l, abs=1e-9)

    def test_kinked_function_agrees_coarsely(self):
        # clipping kinks are not in the lebesgue route's cell grading, so
        # agreement degrades to quadrature-across-a-kink level
        p = JacobiParams(0.5, 0.3)
        f = family(p)["clipped"]
        h = modified_abel_mean(f, p, AbelParameter(0.9), 0.0, route="halfweight")
        l = modified_abel_mean(f, p, AbelParameter(0.9), 0.0, route="lebesgue")
        assert h == pytest.approx(l, abs=2e-5)

    def test_series_vs_kernel_for_jump_function(self):
        p = JacobiParams(0.0, 0.0)
        f = family(p)["sign"]
        for x in (-0.5, 0.3):
            s = abel_mean(f, p, AbelParameter(0.9), x, route="series")
            k = abel_mean(f, p, AbelParameter(0.9), x, route="kernel")
            assert s == pytest.approx(k, abs=1e-7)


class TestCoefficients:
    def test_projection_is_a_delta_on_basis_elements(self):
        p = JacobiParams(0.5, 0.3)
        e = fourier_jacobi_coefficients(family(p)["pk:3"], p, 6)
        assert e.coeffs[3] == pytest.approx(1.0, rel=1e-12)
        mask = np.ones(7, dtype=bool)
        mask[3] = False
        assert np.max(np.abs(e.coeffs[mask])) < 1e-12

    def test_constant_projects_to_constant(self):
        p = JacobiParams(0.0, 0.0)
        e = fourier_jacobi_coefficients(family(p)["const"], p, 4)
        assert e.coeffs[0] == pytest.approx(1.0, rel=1e-13)
        assert np.max(np.abs(e.coeffs[1:])) < 1e-13

    def test_partial_sum_reconstructs_polynomials(self):
        p = JacobiParams(0.2, 0.8)
        e = fourier_jacobi_coefficients(lambda x: x**4 - 0.5 * x, p, 6)
        xs = np.linspace(-1.0, 1.0, 11)
        np.testing.assert_allclose(
            partial_sum(e, 6, xs), xs**4 - 0.5 * xs, atol=1e-12
        )

    def test_degree_and_energy(self):
        p = JacobiParams(0.0, 0.0)
        e = Expansion(params=p, coeffs=np.array([1.0, 0.0, 2.0]))
        assert e.degree == 2
        assert e.energy() == pytest.approx(
            jacobi_norm(p, 0) + 4.0 * jacobi_norm(p, 2), rel=1e-14
        )

    def test_order_must_resolve_degree(self):
        p = JacobiParams(0.0, 0.0)
        with pytest.raises(DomainError):
            fourier_jacobi_coefficients(lambda x: x, p, 10, order=5)


class TestLpConvergence:
    def test_jump_function_l1_decay(self):
        # frozen trace: the L1 error of the sign function drops by roughly
        # the factor (1-r) ladder, never stalls
        p = JacobiParams(0.0, 0.0)
        errs = lp_convergence_probe(
            family(p)["sign"], p, 1.0, [0.9, 0.99, 0.999], tol=1e-6
        )
        assert errs[0] == pytest.approx(0.390778, rel=1e-4)
        assert errs[0] > errs[1] > errs[2] > 0.0

    def test_single_term_l2_law(self):
        # || r^3 P_3 - P_3 ||_2 = (1 - r^3) h_3^(1/2) exactly
        p = JacobiParams(0.0, 0.0)
        errs = lp_convergence_probe(family(p)["pk:3"], p, 2.0, [0.5, 0.9])
        for err, r in zip(errs, (0.5, 0.9)):
            assert err == pytest.approx(
                (1.0 - r**3) * math.sqrt(jacobi_norm(p, 3)), rel=1e-8
            )

    def test_sup_norm_error_for_smooth_function(self):
        p = JacobiParams(0.5, 0.5)
        errs = lp_convergence_probe(family(p)["bump"], p, math.inf, [0.9, 0.99])
        assert errs[0] > errs[1] > 0.0

    def test_r_sequence_validated(self):
        p = JacobiParams(0.0, 0.0)
        with pytest.raises(DomainError):
            lp_convergence_probe(family(p)["const"], p, 2.0, [0.5, 1.0])


class TestMaximalFunction:
    def test_dominates_every_grid_mean(self):
        p = JacobiParams(0.0, 0.0)
        f = family(p)["sign"]
        xs = np.linspace(-0.9, 0.9, 7)
        grid = default_r_grid(6)
        mx = jacobi_maximal(f, p, xs, r_grid=grid)
        for r in grid:
            means = np.abs(
                np.array([abel_mean(f, p, AbelParameter(float(r)), float(x)) for x in xs])
            )
            assert np.all(mx >= means - 1e-10)

    def test_monotone_under_grid_refinement(self):
        # default_r_grid(j) is nested in default_r_grid(j+k)
        p = JacobiParams(0.5, 0.3)
        f = family(p)["bump"]
        xs = np.linspace(-0.95, 0.95, 9)
        coarse = jacobi_maximal(f, p, xs, r_grid=default_r_grid(6), tol=1e-6)
        fine = jacobi_maximal(f, p, xs, r_grid=default_r_grid(8), tol=1e-6)
        assert np.all(fine >= coarse - 1e-12)

    def test_scalar_input_gives_scalar(self):
        p = JacobiParams(0.0, 0.0)
        out = jacobi_maximal(family(p)["const"], p, 0.25, r_grid=default_r_grid(4))
        assert isinstance(out, float)
        assert out == pytest.approx(1.0, rel=1e-10)

    def test_empty_or_bad_grid_rejected(self):
        p = JacobiParams(0.0, 0.0)
        with pytest.raises(DomainError):
            jacobi_maximal(family(p)["const"], p, 0.0, r_grid=[])
        with pytest.raises(DomainError):
            jacobi_maximal(family(p)["const"], p, 0.0, r_grid=[0.5, 1.0])


def test_weak11_probe_is_finite_and_order_one():
    p = JacobiParams(0.0, 0.0)
    worst = weak11_probe(family(p)["sign"], p, n_cells=512)
    assert 0.0 < worst < 10.0


def test_lp_norm_basics():
    p = JacobiParams(0.0, 0.0)
    fam = family(p)
    assert lp_norm(fam["const"], p, 1.0) == pytest.approx(2.0, rel=1e-12)
    assert lp_norm(fam["sign"], p, 2.0) == pytest.approx(math.sqrt(2.0), rel=1e-10)
    assert lp_norm(fam["sign"], p, math.inf) == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(DomainError):
        lp_norm(fam["const"], p, 0.5)


def test_unknown_route_rejected():
    p = JacobiParams(0.0, 0.0)
    f = family(p)["const"]
    with pytest.raises(DomainError):
        abel_mean(f, p, AbelParameter(0.5), 0.0, route="fancy")
    with pytest.raises(DomainError):
        modified_abel_mean(f, p, AbelParameter(0.5), 0.0, route="fancy")


def test_default_r_grid_shape():
    g = default_r_grid(5)
    np.testing.assert_allclose(g, [0.5, 0.75, 0.875, 0.9375, 0.96875])
