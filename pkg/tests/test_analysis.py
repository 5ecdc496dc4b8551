import math

import numpy as np
import pytest
from oracles import random_density, random_state, scalar_kl

from qspoof.analysis import (
    decay_rate_fit,
    product_test,
    relative_entropy,
    robustness_check,
    separability_report,
    wasserstein_single,
)
from qspoof.errors import AllErrorsZero, DomainError, InsufficientData, ShapeMismatch
from qspoof.qmat import DensityOperator, eig_hermitian, matrix_exp, trace_norm

TILT = [0.242766, 0.161844, 0.595390]
RHO1_DIAG = [0.12, 0.08, 0.8]


class TestRelativeEntropy:
    def test_self_entropy_is_zero(self):
        rng = np.random.default_rng(1)
        rho = random_density(rng, 4, complex_field=True)
        assert abs(relative_entropy(rho, rho)) < 1e-12

    def test_classical_two_point(self):
        val = relative_entropy(np.diag([1.0, 0.0]), np.diag([0.5, 0.5]))
        assert abs(val - math.log(2)) < 1e-10

    def test_support_violation(self):
        val = relative_entropy(np.diag([0.5, 0.5]), np.diag([1.0, 0.0]))
        assert math.isinf(val)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            relative_entropy(np.eye(2) / 2, np.eye(3) / 3)

    def test_matches_scalar_oracle_on_diagonals(self):
        rng = np.random.default_rng(2)
        p = rng.dirichlet(np.ones(5))
        q = rng.dirichlet(np.ones(5))
        val = relative_entropy(np.diag(p), np.diag(q))
        assert abs(val - scalar_kl(p, q)) < 1e-10

    def test_additivity_over_tensor_products(self):
        rng = np.random.default_rng(3)
        for complex_field in (False, True):
            a = random_density(rng, 3, complex_field)
            b = random_density(rng, 2, complex_field)
            ap = random_density(rng, 3, complex_field)
            bp = random_density(rng, 2, complex_field)
            joint = relative_entropy(np.kron(a, b), np.kron(ap, bp))
            split = relative_entropy(a, ap) + relative_entropy(b, bp)
            assert abs(joint - split) < 1e-9

    def test_klein_inequality(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            a = random_density(rng, 4, complex_field=bool(rng.integers(2)))
            b = random_density(rng, 4, complex_field=bool(rng.integers(2)))
            assert relative_entropy(a, b) >= -1e-12


class TestWassersteinSingle:
    def test_identical_states(self):
        rho = np.diag([0.3, 0.7])
        assert wasserstein_single(rho, rho) == 0.0

    def test_orthogonal_pure_states(self):
        val = wasserstein_single(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
        assert abs(val - 2.0) < 1e-12

    def test_diagonal_difference(self):
        val = wasserstein_single(np.diag([0.6, 0.4]), np.diag([0.5, 0.5]))
        assert abs(val - 0.2) < 1e-12

    def test_triangle_inequality(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            a = random_density(rng, 3, complex_field=True)
            b = random_density(rng, 3, complex_field=True)
            c = random_density(rng, 3, complex_field=True)
            assert wasserstein_single(a, c) <= (
                wasserstein_single(a, b) + wasserstein_single(b, c) + 1e-9
            )


class TestRobustnessCheck:
    def test_identical_states_pass_any_tolerance(self):
        rho = np.diag([0.3, 0.7])
        ok, margin = robustness_check(rho, rho, 0.25)
        assert ok and margin == 0.25

    def test_orthogonal_states_fail_unit_tolerance(self):
        ok, margin = robustness_check(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]), 1.0)
        assert not ok
        assert abs(margin - (-1.0)) < 1e-12

    def test_radar_tilt_distance(self):
        dist = wasserstein_single(np.diag(TILT), np.diag(RHO1_DIAG))
        assert abs(dist - 0.409220) < 1e-6
        ok, margin = robustness_check(np.diag(TILT), np.diag(RHO1_DIAG), 0.5)
        assert ok and abs(margin - (0.5 - dist)) < 1e-12

    def test_negative_tolerance_rejected(self):
        with pytest.raises(DomainError):
            robustness_check(np.eye(2) / 2, np.eye(2) / 2, -0.1)


class TestProductTest:
    def test_basis_product_vector(self):
        v = np.zeros(4)
        v[1] = 1.0  # |0> x |1>
        ok, resid = product_test(v, [2, 2])
        assert ok and resid < 1e-12

    def test_bell_state(self):
        v = np.zeros(4)
        v[0] = v[3] = 1 / math.sqrt(2)
        ok, resid = product_test(v, [2, 2])
        assert not ok
        assert abs(resid - math.sqrt(0.5)) < 1e-6

    def test_three_factor_roundtrip(self):
        rng = np.random.default_rng(6)
        for complex_field in (False, True):
            a = random_state(rng, 2, complex_field)
            b = random_state(rng, 3, complex_field)
            c = random_state(rng, 2, complex_field)
            v = np.kron(np.kron(a, b), c)
            ok, resid = product_test(v, [2, 3, 2])
            assert ok and resid <= 1e-10

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            product_test(np.ones(4) / 2, [2, 3])

    def test_kronecker_power_eigenvectors(self):
        # eigenvectors of A x A for nondegenerate A admit a product basis;
        # the report's cluster refinement recovers it even when the raw
        # solver mixes the swap-degenerate pairs
        rng = np.random.default_rng(7)
        from oracles import random_hermitian, random_unitary

        a = random_unitary(rng, 3) @ np.diag([0.6, 0.3, 0.1]) @ random_unitary(rng, 3).T
        a = (a + a.T) / 2
        report = separability_report(np.kron(a, a), [3, 3], reconstruction="exp")
        assert report.all_product
        for _, ok, resid in report.per_vector:
            assert ok and resid <= 1e-9


class TestSeparabilityReport:
    def test_single_factor_vacuously_product(self):
        rho = np.diag([0.2, 0.8])
        report = separability_report(rho, [2], reconstruction="trace")
        assert report.all_product
        assert report.reconstruction_distance < 1e-12
        np.testing.assert_allclose(report.factors[0].mat, rho, atol=1e-12)

    def test_swap_operator_has_entangled_eigenvector(self):
        swap = np.array(
            [
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 0.0, 1.0, 0.0],
                [0.0, 1.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, 1.0],
            ]
        )
        report = separability_report(swap, [2, 2])
        assert not report.all_product
        assert report.factors is None

    def test_trace_reconstruction_of_kronecker_square(self):
        rng = np.random.default_rng(8)
        rho = random_density(rng, 3)
        report = separability_report(np.kron(rho, rho), [3, 3], reconstruction="trace")
        assert report.all_product
        assert report.reconstruction_distance <= 1e-8
        np.testing.assert_allclose(report.factors[0].mat, rho, atol=1e-9)

    def test_exp_reconstruction_of_local_sum(self):
        # exp of a sum of local terms factorizes exactly
        rng = np.random.default_rng(9)
        from oracles import random_hermitian

        local = random_hermitian(rng, 3) * 0.5
        op = np.kron(local, np.eye(3)) + np.kron(np.eye(3), local)
        report = separability_report(op, [3, 3], reconstruction="exp")
        assert report.all_product
        assert report.reconstruction_distance <= 1e-8
        direct = matrix_exp(local).mat
        expected = np.kron(direct, direct)
        expected /= np.trace(expected).real
        marg = report.factors[0].mat
        np.testing.assert_allclose(np.kron(marg, report.factors[1].mat), expected, atol=1e-9)

    def test_all_product_is_conjunction(self):
        swap = np.array(
            [
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 0.0, 1.0, 0.0],
                [0.0, 1.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, 1.0],
            ]
        )
        report = separability_report(swap, [2, 2])
        assert report.all_product == all(ok for _, ok, _ in report.per_vector)

    def test_unknown_mode_rejected(self):
        with pytest.raises(DomainError):
            separability_report(np.eye(4), [2, 2], reconstruction="other")


class TestDecayRateFit:
    def test_exact_geometric_sequence(self):
        fit = decay_rate_fit([(n, 0.2**n) for n in range(1, 6)])
        assert abs(fit.slope - math.log(0.2)) < 1e-9
        assert abs(fit.r_squared - 1.0) < 1e-12
        assert fit.dropped == []

    def test_constant_error(self):
        fit = decay_rate_fit([(n, 0.3) for n in range(1, 5)])
        assert abs(fit.slope) < 1e-12
        assert fit.r_squared == 1.0

    def test_unit_exponent(self):
        fit = decay_rate_fit([(n, math.exp(-n)) for n in range(1, 7)])
        assert abs(fit.slope - (-1.0)) < 1e-9

    def test_planted_slope_recovery(self):
        rng = np.random.default_rng(10)
        for _ in range(5):
            slope = float(rng.uniform(-3.0, -0.1))
            intercept = float(rng.uniform(-1.0, 1.0))
            pts = [(n, math.exp(intercept + slope * n)) for n in range(1, 8)]
            fit = decay_rate_fit(pts)
            assert abs(fit.slope - slope) < 1e-9
            assert abs(fit.intercept - intercept) < 1e-9

    def test_zero_errors_dropped_and_reported(self):
        fit = decay_rate_fit([(1, 0.5), (2, 0.25), (3, 0.0), (4, 0.0625)])
        assert fit.dropped == [3]
        assert len(fit.points) == 3

    def test_insufficient_data(self):
        with pytest.raises(InsufficientData):
            decay_rate_fit([(1, 0.5), (2, 0.25)])

    def test_all_errors_zero(self):
        with pytest.raises(AllErrorsZero):
            decay_rate_fit([(1, 0.0), (2, 0.0), (3, 0.0)])
