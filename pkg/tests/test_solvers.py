"""ADMM weighted lasso and iteratively reweighted l1."""

import numpy as np
import pytest
from numpy.testing import assert_allclose
from pydantic import ValidationError

from src.errors import DimensionMismatchError, DomainError, UnsupportedModelError
from src.harness import trial_problem, trial_seed
from src.penalties import Family, PenaltyModel
from src.solvers import (
    AdmmConfig,
    Irl1Config,
    MeasurementProblem,
    StopReason,
    irl1,
    objective,
    rescale_dual,
    soft_threshold,
    solve_l1,
    solve_weighted_lasso,
    weighted_lasso_objective,
)

TIGHT = AdmmConfig(max_iter=50_000, tol_primal=1e-10, tol_dual=1e-10, tol_rel=0.0)


def weibull(k, sigma):
    return PenaltyModel(Family.WEIBULL, {"k": k, "sigma": sigma})


def coordinate_descent(A, y, lam, w, sweeps=5000):
    """Cyclic coordinate descent for the weighted lasso."""
    n = A.shape[1]
    x = np.zeros(n)
    r = y.astype(float).copy()
    col_sq = np.sum(A * A, axis=0)
    for _ in range(sweeps):
        biggest = 0.0
        for j in range(n):
            old = x[j]
            rho = A[:, j] @ r + col_sq[j] * old
            new = np.sign(rho) * max(abs(rho) - lam * w[j], 0.0) / col_sq[j]
            if new != old:
                r -= A[:, j] * (new - old)
                x[j] = new
                biggest = max(biggest, abs(new - old))
        if biggest < 1e-14:
            break
    return x


def random_problem(rng, m, n, s=3):
    A = rng.standard_normal((m, n)) / np.sqrt(m)
    x = np.zeros(n)
    x[rng.choice(n, s, replace=False)] = rng.standard_normal(s)
    return MeasurementProblem(A=A, y=A @ x, truth=x)


class TestSoftThreshold:
    @pytest.mark.parametrize("v, tau, expected", [(3.0, 1.0, 2.0), (-0.5, 1.0, 0.0), (-3.0, 0.5, -2.5)])
    def test_scalars(self, v, tau, expected):
        out = soft_threshold(v, tau)
        assert isinstance(out, float)
        assert out == expected

    def test_elementwise(self):
        assert_allclose(soft_threshold([3.0, -0.5, -3.0], [1.0, 1.0, 0.5]), [2.0, 0.0, -2.5])

    def test_negative_threshold(self):
        with pytest.raises(DomainError):
            soft_threshold(1.0, -0.1)


class TestMeasurementProblem:
    def test_shape_checks(self):
        with pytest.raises(DimensionMismatchError):
            MeasurementProblem(A=np.ones((3, 4)), y=np.ones(2))
        with pytest.raises(DimensionMismatchError):
            MeasurementProblem(A=np.ones((3, 4)), y=np.ones(3), truth=np.ones(3))

    def test_non_finite(self):
        with pytest.raises(DomainError):
            MeasurementProblem(A=np.array([[1.0, np.inf]]), y=[1.0])

    def test_arrays_are_read_only(self):
        problem = MeasurementProblem(A=np.eye(2), y=[1.0, 2.0])
        with pytest.raises(ValueError):
            problem.A[0, 0] = 5.0

    def test_rel_error(self):
        problem = MeasurementProblem(A=np.eye(2), y=[3.0, 4.0], truth=[3.0, 4.0])
        assert problem.rel_error(np.zeros(2)) == pytest.approx(1.0)
        assert MeasurementProblem(A=np.eye(2), y=[0.0, 0.0]).rel_error(np.zeros(2)) is None


class TestConfigs:
    def test_lambda_alias(self):
        assert Irl1Config(**{"lambda": 0.1}).lam == 0.1
        assert Irl1Config(lam=0.2).lam == 0.2

    def test_extra_fields_rejected(self):
        with pytest.raises(ValidationError):
            AdmmConfig(step=1.0)

    def test_relative_rho(self):
        assert AdmmConfig(rho=2.0).effective_rho(1e-3) == pytest.approx(2e-3)
        assert AdmmConfig(rho=2.0, relative_rho=False).effective_rho(1e-3) == 2.0

    def test_relative_rho_follows_largest_weight(self):
        cfg = AdmmConfig(rho=2.0)
        assert cfg.effective_rho(1e-3, np.array([0.5, 40.0, 0.0])) == pytest.approx(8e-2)
        assert cfg.effective_rho(1e-3, np.zeros(3)) == pytest.approx(2e-3)
        assert AdmmConfig(rho=2.0, relative_rho=False).effective_rho(1e-3, np.full(3, 40.0)) == 2.0


class TestWeightedLasso:
    def test_zero_weights_give_least_squares(self, rng):
        A = np.eye(5) + 0.1 * rng.standard_normal((5, 5))
        y = rng.standard_normal(5)
        result = solve_weighted_lasso(MeasurementProblem(A=A, y=y), np.zeros(5), 1.0)
        assert result.converged
        assert_allclose(result.xhat, np.linalg.solve(A, y), atol=1e-6)

    def test_identity_matrix_gives_soft_threshold(self, rng):
        y = rng.standard_normal(8)
        result = solve_weighted_lasso(MeasurementProblem(A=np.eye(8), y=y), np.ones(8), 0.3)
        assert_allclose(result.xhat, soft_threshold(y, 0.3), atol=1e-6)

    def test_matches_coordinate_descent(self, rng):
        for _ in range(50):
            problem = random_problem(rng, 10, 20)
            w = rng.uniform(0.5, 2.0, 20)
            lam = 0.1
            admm = solve_weighted_lasso(problem, w, lam, TIGHT)
            reference = weighted_lasso_objective(problem, w, lam, coordinate_descent(problem.A, problem.y, lam, w))
            assert abs(admm.objective - reference) <= 1e-6 * max(1.0, abs(reference))

    def test_optimality_conditions(self, rng):
        for _ in range(10):
            problem = random_problem(rng, 10, 20)
            w = rng.uniform(0.5, 2.0, 20)
            lam = 0.05
            x = solve_weighted_lasso(problem, w, lam, TIGHT).xhat
            g = problem.A.T @ (problem.A @ x - problem.y)
            on = x != 0
            assert np.all(np.abs(g[on] + lam * w[on] * np.sign(x[on])) <= 1e-5)
            assert np.all(np.abs(g[~on]) <= lam * w[~on] + 1e-5)

    def test_large_lambda_gives_zero(self, small_problem):
        lam = 1.5 * np.max(np.abs(small_problem.A.T @ small_problem.y))
        result = solve_l1(small_problem, lam, TIGHT)
        assert np.max(np.abs(result.xhat)) <= 1e-8

    def test_objective_not_above_zero_solution(self, small_problem):
        result = solve_l1(small_problem, 0.1)
        assert result.objective <= 0.5 * small_problem.y @ small_problem.y + 1e-12

    def test_iteration_cap_is_not_an_error(self, small_problem):
        result = solve_l1(small_problem, 1e-3, AdmmConfig(max_iter=1))
        assert not result.converged
        assert result.stop_reason is StopReason.MAX_ITER
        assert result.total_inner_iters == 1
        assert len(result.objective_trace) == 1

    def test_converged_means_within_tolerance(self, rng):
        cfg = AdmmConfig(max_iter=20_000)
        for _ in range(20):
            problem = random_problem(rng, 10, 20)
            w = rng.uniform(0.0, 3.0, 20)
            lam = 10.0 ** rng.uniform(-7, -1)
            result = solve_weighted_lasso(problem, w, lam, cfg)
            assert result.converged
            assert result.stop_reason is StopReason.CONVERGED
            assert result.primal_residual <= result.primal_tolerance
            assert result.dual_residual <= result.dual_tolerance
            assert result.rho == pytest.approx(cfg.effective_rho(lam, w))

    def test_dual_residual_uses_effective_penalty(self, small_problem):
        lam = 1e-7
        w = np.linspace(0.5, 4.0, 20)
        first = solve_weighted_lasso(small_problem, w, lam, AdmmConfig(max_iter=1))
        second = solve_weighted_lasso(small_problem, w, lam, AdmmConfig(max_iter=2))
        c = AdmmConfig().effective_rho(lam, w)
        assert c == pytest.approx(4e-7)
        assert second.dual_residual == pytest.approx(c * np.linalg.norm(second.xhat - first.xhat))

    def test_noiseless_small_lambda_converges(self):
        cfg = AdmmConfig.from_settings()
        converged = 0
        for rep in range(5):
            problem = trial_problem(64, 256, 10, trial_seed(0, 10, rep))
            result = solve_l1(problem, 1e-7, cfg)
            if result.converged:
                converged += 1
                assert result.primal_residual <= result.primal_tolerance
                assert result.dual_residual <= result.dual_tolerance
                assert result.total_inner_iters < cfg.max_iter
        assert converged >= 4

    def test_rescale_dual(self):
        u = np.array([0.5, -1.0, 0.2, 0.3])
        tau_old = np.array([1.0, 1.0, 0.0, 0.5])
        tau_new = np.array([2.0, 0.5, 1.0, 0.5])
        assert_allclose(rescale_dual(u, tau_old, tau_new), [1.0, -0.5, 0.0, 0.3])

    def test_argument_checks(self, small_problem):
        with pytest.raises(DimensionMismatchError):
            solve_weighted_lasso(small_problem, np.ones(3), 0.1)
        with pytest.raises(DomainError):
            solve_weighted_lasso(small_problem, -np.ones(20), 0.1)
        with pytest.raises(DomainError):
            solve_weighted_lasso(small_problem, np.ones(20), 0.0)

    def test_result_serializes(self, small_problem):
        payload = solve_l1(small_problem, 0.1).to_dict()
        assert payload["solver"] == "l1"
        assert len(payload["xhat"]) == 20
        assert payload["rel_error"] is not None
        assert payload["stop_reason"] == "converged"
        assert payload["dual_tolerance"] > 0


class TestIrl1:
    def test_zero_observations(self):
        problem = MeasurementProblem(A=np.random.default_rng(3).standard_normal((4, 8)), y=np.zeros(4))
        result = irl1(problem, weibull(0.5, 1.0), Irl1Config(lam=1e-3))
        assert result.converged
        assert result.stop_reason is StopReason.CONVERGED
        assert result.outer_iters == 1
        assert np.all(result.xhat == 0.0)
        assert result.objective == 0.0

    def test_single_outer_step_is_lasso(self, small_problem):
        lam = 1e-2
        reweighted = irl1(small_problem, weibull(1.0, 1e6), Irl1Config(lam=lam, max_outer=1))
        assert_allclose(reweighted.xhat, solve_l1(small_problem, lam).xhat, atol=1e-6)

    @pytest.mark.parametrize("k", [0.5, 1.0])
    def test_objective_never_increases(self, k, rng):
        model = weibull(k, 1.0)
        for _ in range(25):
            problem = random_problem(rng, 20, 60, s=5)
            result = irl1(problem, model, Irl1Config(lam=1e-2))
            assert np.all(np.diff(result.objective_trace) <= 1e-9)
            assert result.objective == pytest.approx(objective(problem, model, 1e-2, result.xhat))

    def test_non_concave_model_rejected(self, small_problem):
        with pytest.raises(UnsupportedModelError, match="concave"):
            irl1(small_problem, weibull(2.0, 1.0), Irl1Config(lam=1e-3))

    def test_dirac_rejected(self, small_problem):
        with pytest.raises(UnsupportedModelError, match="density"):
            irl1(small_problem, PenaltyModel.create("l0"), Irl1Config(lam=1e-3))

    def test_column_sign_flip(self, small_problem):
        j = 7
        flip = np.ones(20)
        flip[j] = -1.0
        flipped = MeasurementProblem(A=small_problem.A * flip, y=small_problem.y, truth=small_problem.truth * flip)
        cfg = Irl1Config(lam=1e-4)
        base = irl1(small_problem, weibull(0.5, 1.0), cfg).xhat
        mirrored = irl1(flipped, weibull(0.5, 1.0), cfg).xhat
        assert_allclose(mirrored, base * flip, atol=1e-8)

    def test_recovers_sparse_signals(self):
        model = weibull(1.0, 1.0)
        cfg = Irl1Config.from_settings(1e-7)
        successes = 0
        for rep in range(5):
            problem = trial_problem(64, 256, 10, trial_seed(0, 10, rep))
            result = irl1(problem, model, cfg)
            successes += result.rel_error <= 1e-3
        assert successes >= 3

    def test_outer_cap_is_not_converged(self, small_problem):
        result = irl1(small_problem, weibull(1.0, 1.0), Irl1Config(lam=1e-4, max_outer=1))
        assert not result.converged
        assert result.stop_reason is StopReason.MAX_OUTER

    def test_converged_run_has_converged_inner_solve(self):
        model = weibull(1.0, 1.0)
        cfg = Irl1Config.from_settings(1e-7)
        converged = 0
        for rep in range(5):
            problem = trial_problem(64, 256, 10, trial_seed(0, 10, rep))
            result = irl1(problem, model, cfg)
            if result.converged:
                converged += 1
                assert result.outer_iters >= 2
                assert result.primal_residual <= result.primal_tolerance
                assert result.dual_residual <= result.dual_tolerance
        assert converged >= 4

    def test_reweighting_moves_past_lasso_solution(self):
        # s = 20 of 64 measurements is beyond what the lasso recovers
        lam = 1e-7
        model = weibull(1.0, 0.01)
        moved = 0
        for rep in range(4):
            problem = trial_problem(64, 256, 20, trial_seed(0, 20, rep))
            lasso = solve_l1(problem, lam)
            result = irl1(problem, model, Irl1Config.from_settings(lam))
            assert result.outer_iters >= 2
            assert result.stop_reason is not StopReason.ASCENT
            assert result.objective_trace[0] == pytest.approx(objective(problem, model, lam, lasso.xhat))
            if (
                np.linalg.norm(result.xhat - lasso.xhat) > 1e-6 * np.linalg.norm(lasso.xhat)
                and result.objective < result.objective_trace[0]
            ):
                moved += 1
        assert moved >= 3

    @pytest.mark.parametrize("k", [0.5, 0.8])
    def test_heavy_tailed_weights_take_outer_steps(self, k):
        lam = 1e-7
        for rep in range(3):
            problem = trial_problem(64, 256, 20, trial_seed(0, 20, rep))
            result = irl1(problem, weibull(k, 1.0), Irl1Config.from_settings(lam))
            assert result.outer_iters >= 2
            assert result.stop_reason is not StopReason.ASCENT
            assert np.all(np.diff(result.objective_trace) <= 1e-9)
