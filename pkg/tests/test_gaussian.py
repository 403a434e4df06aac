import math

import numpy as np
import pytest
from scipy import integrate

from beliefinfo import gaussian as g
from beliefinfo.errors import DimensionMismatch, InputError, NotSPD

from conftest import random_spd

LN41 = math.log(41)
I2 = np.eye(2)


def npdf(z, mu, var):
    return math.exp(-0.5 * (z - mu) ** 2 / var) / math.sqrt(2 * math.pi * var)


def quad_info(nu, C, mu, B, muA, A):
    """Independent oracle: integrate N(z|nu,C) * ln(N(z|mu,B) / N(z|muA,A)) over the real line."""
    def integrand(z):
        log_ratio = (-0.5 * (z - mu) ** 2 / B - 0.5 * math.log(B)) - (-0.5 * (z - muA) ** 2 / A - 0.5 * math.log(A))
        return npdf(z, nu, C) * log_ratio

    s = math.sqrt(C)
    val, _ = integrate.quad(integrand, nu - 40 * s, nu + 40 * s, epsabs=1e-12, epsrel=1e-12, limit=200)
    return val


class TestTypes:
    def test_validation(self):
        with pytest.raises(NotSPD):
            g.Gaussian([0, 0], [[1, 2], [2, 1]])
        with pytest.raises(NotSPD):
            g.Gaussian([0, 0], [[1, 0.5], [0.4, 1]])
        with pytest.raises(DimensionMismatch):
            g.Gaussian([0, 0, 0], I2)
        with pytest.raises(NotSPD):
            g.LocationModel([[0.0]])

    def test_scalar_promotion_and_json(self):
        q = g.Gaussian(1.0, 2.0)
        assert q.dim == 1 and q.cov.shape == (1, 1)
        assert g.Gaussian.from_json(q.to_json()).to_json() == {"mean": [1.0], "cov": [[2.0]]}
        with pytest.raises(InputError):
            g.Gaussian.from_json({"mean": [0]})

    def test_logpdf_matches_scipy(self, rng):
        from scipy.stats import multivariate_normal

        for _ in range(5):
            S = random_spd(rng, 3)
            mu, x = rng.normal(size=3), rng.normal(size=3)
            assert g.Gaussian(mu, S).logpdf(x) == pytest.approx(multivariate_normal(mu, S).logpdf(x), rel=1e-12)


class TestPosterior:
    def test_experiment_constants(self):
        post = g.posterior(g.Gaussian.standard(2), g.LocationModel(0.25 * I2), 10, [0, 0])
        np.testing.assert_allclose(post.mean, 0, atol=1e-15)
        np.testing.assert_allclose(post.cov, I2 / 41, rtol=1e-14)

    def test_scalar_hand_value(self):
        post = g.posterior(g.Gaussian(0.0, 1.0), g.LocationModel(1.0), 1, 2.0)
        assert post.mean[0] == pytest.approx(1.0, rel=1e-15)
        assert post.cov[0, 0] == pytest.approx(0.5, rel=1e-15)

    def test_large_n_consistency(self):
        ybar = np.array([0.7, -1.2])
        S = np.array([[0.3, 0.1], [0.1, 0.2]])
        post = g.posterior(g.Gaussian.standard(2), g.LocationModel(S), 1e8, ybar)
        np.testing.assert_allclose(post.mean, ybar, rtol=1e-7)
        np.testing.assert_allclose(post.cov, S / 1e8, rtol=1e-7)

    def test_nonzero_prior_mean_matches_joint_gaussian_conditioning(self, rng):
        # Oracle: condition the joint Gaussian of (theta, ybar) directly.
        A, S = random_spd(rng, 3), random_spd(rng, 3)
        muA, ybar, n = rng.normal(size=3), rng.normal(size=3), 7
        K = A @ np.linalg.inv(A + S / n)
        post = g.posterior(g.Gaussian(muA, A), g.LocationModel(S), n, ybar)
        np.testing.assert_allclose(post.mean, muA + K @ (ybar - muA), rtol=1e-10)
        np.testing.assert_allclose(post.cov, A - K @ A, rtol=1e-10, atol=1e-14)

    def test_sequential_equals_batch(self, rng):
        prior, model = g.Gaussian(rng.normal(size=2), random_spd(rng, 2)), g.LocationModel(random_spd(rng, 2))
        y1, y2 = rng.normal(size=2), rng.normal(size=2)
        seq = g.posterior(g.posterior(prior, model, 4, y1), model, 6, y2)
        batch = g.posterior(prior, model, 10, (4 * y1 + 6 * y2) / 10)
        np.testing.assert_allclose(seq.mean, batch.mean, rtol=1e-12)
        np.testing.assert_allclose(seq.cov, batch.cov, rtol=1e-12)

    def test_zero_count_is_prior(self):
        prior = g.Gaussian.standard(2)
        assert g.posterior(prior, g.LocationModel(I2), 0, [5, 5]) is prior

    def test_errors(self):
        with pytest.raises(DimensionMismatch):
            g.posterior(g.Gaussian.standard(2), g.LocationModel(np.eye(3)), 1, [0, 0])
        with pytest.raises(InputError):
            g.posterior(g.Gaussian.standard(1), g.LocationModel(1.0), -1, 0.0)


class TestClosedForms:
    def test_mutual_info_experiment_value(self):
        mi = g.mutual_info_gaussian(g.Gaussian.standard(2), g.LocationModel(0.25 * I2), 10)
        assert mi.nats == pytest.approx(LN41, rel=1e-14)
        assert mi.bits == pytest.approx(5.357552004618084, rel=1e-12)

    def test_mutual_info_small_cases(self):
        assert g.mutual_info_gaussian(g.Gaussian.standard(2), g.LocationModel(0.25 * I2), 0) == 0.0
        assert g.mutual_info_gaussian(g.Gaussian(0.0, 1.0), g.LocationModel(1.0), 3).bits == pytest.approx(1.0, rel=1e-14)

    def test_mutual_info_matches_direct_determinant(self, rng):
        A, S = random_spd(rng, 3), random_spd(rng, 3)
        direct = 0.5 * np.linalg.slogdet(5 * np.linalg.solve(S, A) + np.eye(3))[1]
        assert g.mutual_info_gaussian(g.Gaussian(np.zeros(3), A), g.LocationModel(S), 5) == pytest.approx(direct, rel=1e-12)

    def test_predictive(self):
        p = g.predictive(g.Gaussian.standard(2), g.LocationModel(0.25 * I2), 1)
        np.testing.assert_allclose(p.cov, 1.25 * I2)
        p = g.predictive(g.Gaussian(3.0, 2.0), g.LocationModel(1.0), 4)
        assert p.mean[0] == 3.0 and p.cov[0, 0] == pytest.approx(2.25)
        p = g.predictive(g.Gaussian.standard(2), g.LocationModel(I2), 1e12)
        np.testing.assert_allclose(p.cov, I2, rtol=1e-11)
        with pytest.raises(InputError):
            g.predictive(g.Gaussian.standard(2), g.LocationModel(I2), 0)

    def test_view_info_lower_bound_value(self):
        A, B = g.Gaussian.standard(2), g.Gaussian([0, 0], I2 / 41)
        v = g.info_gaussian_view(B, B, A)
        assert v.nats == pytest.approx(LN41 - 40 / 41, rel=1e-13)
        assert v.bits == pytest.approx(3.950044647653241, rel=1e-12)
        assert g.kl_gaussian(B, A).bits == pytest.approx(3.95, abs=0.005)

    def test_view_info_matches_zero_mean_closed_form(self, rng):
        A, B, C = (random_spd(rng, 3) for _ in range(3))
        mu, nu = rng.normal(size=3), rng.normal(size=3)
        Ai, Bi = np.linalg.inv(A), np.linalg.inv(B)
        closed = 0.5 * (np.linalg.slogdet(A @ Bi)[1] + np.trace((Ai - Bi) @ C) + nu @ Ai @ nu - (nu - mu) @ Bi @ (nu - mu))
        ours = g.info_gaussian_view(g.Gaussian(nu, C), g.Gaussian(mu, B), g.Gaussian(np.zeros(3), A))
        assert ours == pytest.approx(closed, rel=1e-10)

    def test_same_beliefs_give_zero(self, rng):
        q = g.Gaussian(rng.normal(size=2), random_spd(rng, 2))
        view = g.Gaussian(rng.normal(size=2), random_spd(rng, 2))
        assert g.info_gaussian_view(view, q, g.Gaussian(q.mean.copy(), q.cov.copy())) == 0.0

    def test_scalar_kl(self):
        assert g.kl_gaussian(g.Gaussian(1.0, 1.0), g.Gaussian(0.0, 1.0)) == pytest.approx(0.5, rel=1e-15)
        q = g.Gaussian(0.3, 2.0)
        assert g.kl_gaussian(q, q) == 0.0

    def test_view_info_against_quadrature(self, rng):
        for _ in range(100):
            nu, mu, muA = rng.normal(scale=2, size=3)
            C, B, A = rng.uniform(0.05, 3.0, size=3)
            ours = g.info_gaussian_view(g.Gaussian(nu, C), g.Gaussian(mu, B), g.Gaussian(muA, A))
            assert ours == pytest.approx(quad_info(nu, C, mu, B, muA, A), abs=1e-6)

    def test_realization_limit(self):
        A, B = g.Gaussian.standard(2), g.Gaussian([0, 0], I2 / 41)
        assert g.realization_limit_info([0, 0], B, A) == pytest.approx(LN41, rel=1e-14)
        assert g.realization_limit_info([0.2, 0.1], A, A) == 0.0
        v = g.realization_limit_info(1.0, g.Gaussian(1.0, 0.5), g.Gaussian(0.0, 1.0))
        assert v == pytest.approx(0.5 * math.log(2) + 0.5, rel=1e-14)
        with pytest.raises(DimensionMismatch):
            g.realization_limit_info([0, 0, 0], B, A)


class TestProperties:
    def test_view_info_additivity(self, rng):
        for _ in range(200):
            d = rng.integers(1, 4)
            q0, q1, q2, view = (g.Gaussian(rng.normal(size=d), random_spd(rng, d)) for _ in range(4))
            whole = g.info_gaussian_view(view, q2, q0)
            parts = g.info_gaussian_view(view, q2, q1) + g.info_gaussian_view(view, q1, q0)
            assert whole == pytest.approx(parts, rel=1e-9, abs=1e-9)

    def test_consistent_future_expectation_monte_carlo(self, rng):
        prior = g.Gaussian([0.2, -0.1], [[1.0, 0.3], [0.3, 0.8]])
        model = g.LocationModel([[0.5, 0.1], [0.1, 0.4]])
        q1 = g.Gaussian([0.5, 0.5], [[0.3, 0.0], [0.0, 0.2]])
        q0 = g.Gaussian([0.0, 0.0], [[2.0, 0.2], [0.2, 1.5]])
        n, N = 3, 20_000
        pred = g.predictive(prior, model, n)
        ws = pred.mean + rng.standard_normal((N, 2)) @ pred.chol.T
        vals = np.array([g.info_gaussian_view(g.posterior(prior, model, n, w), q1, q0) for w in ws])
        se = vals.std(ddof=1) / math.sqrt(N)
        assert abs(vals.mean() - g.info_gaussian_view(prior, q1, q0)) < 3 * se

    def test_mutual_info_is_expected_posterior_kl(self, rng):
        prior, model, n, N = g.Gaussian.standard(2), g.LocationModel(0.25 * I2), 10, 20_000
        pred = g.predictive(prior, model, n)
        ws = pred.mean + rng.standard_normal((N, 2)) @ pred.chol.T
        vals = np.array([g.kl_gaussian(g.posterior(prior, model, n, w), prior) for w in ws])
        se = vals.std(ddof=1) / math.sqrt(N)
        assert abs(vals.mean() - g.mutual_info_gaussian(prior, model, n)) < 3 * se
