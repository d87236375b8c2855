"""Score models: formulas, floors, samplers, and their independent oracles."""

import numpy as np
import pytest
from scipy import integrate

from steinbet.errors import SamplerError
from steinbet.kernels import SteinKernel
from steinbet.models import (
    GaussianBernoulliRbm,
    GaussianModel,
    IntractableModel,
    sample,
    structured_rbm,
)


def _fd_score(model, x, h=1e-5):
    g = np.zeros_like(x, dtype=float)
    for i in range(x.size):
        e = np.zeros_like(g)
        e[i] = h
        g[i] = (
            model.log_unnormalized_density(x + e)
            - model.log_unnormalized_density(x - e)
        ) / (2 * h)
    return g


class TestScores:
    def test_gaussian_formula(self):
        m = GaussianModel(mean=[0.0])
        assert m.score([2.0])[0] == -2.0
        m3 = GaussianModel(mean=[1.0, -1.0, 0.5])
        np.testing.assert_allclose(m3.score([0.0, 0.0, 0.0]), [1.0, -1.0, 0.5])

    def test_intractable_zero_theta_is_gaussian(self):
        m = IntractableModel(theta=[0.0, 0.0])
        x = np.array([0.7, -1.2, 2.0])
        np.testing.assert_array_equal(m.score(x), -x)

    def test_intractable_formula(self):
        m = IntractableModel(theta=[1.0, -2.0])
        x = np.array([0.5, 1.5, -0.3])
        expected = np.array(
            [
                1.0 * (1 - np.tanh(0.5) ** 2) - 0.5,
                -2.0 * (1 - np.tanh(1.5) ** 2) - 1.5,
                0.3,
            ]
        )
        np.testing.assert_allclose(m.score(x), expected, rtol=1e-12)

    def test_rbm_zero_weights_collapse(self):
        m = GaussianBernoulliRbm(
            weights=np.zeros((3, 2)),
            visible_bias=np.zeros(3),
            hidden_bias=np.array([0.4, -0.1]),
        )
        x = np.array([1.0, -2.0, 0.5])
        np.testing.assert_array_equal(m.score(x), -x)

    def test_score_matches_density_gradient(self, model_zoo):
        rng = np.random.default_rng(10)
        for name, model in model_zoo.items():
            for _ in range(100):
                x = rng.standard_normal(model.dim) * 2
                fd = _fd_score(model, x)
                np.testing.assert_allclose(
                    model.score(x), fd, rtol=1e-4, atol=1e-6, err_msg=name
                )

    def test_batched_score_matches_single(self, model_zoo):
        rng = np.random.default_rng(11)
        for model in model_zoo.values():
            pts = rng.standard_normal((8, model.dim))
            batch = model.score(pts)
            for i in range(8):
                np.testing.assert_allclose(
                    batch[i], model.score(pts[i]), rtol=1e-12, atol=1e-14
                )


class TestPayoffBounds:
    def test_gaussian_hand_values(self):
        m = GaussianModel(mean=[0.0])
        assert m.payoff_bound([1.0]) == 5.0
        assert m.payoff_bound([0.0]) == 3.0

    def test_rbm_hand_value(self):
        m = GaussianBernoulliRbm(
            weights=np.zeros((2, 1)), visible_bias=np.zeros(2), hidden_bias=np.zeros(1)
        )
        # ||s|| = ||x|| = 2 with zero weights: (2 + 1 + 0) * 2 + 0 + 1 = 7
        assert m.payoff_bound([0.0, 2.0]) == 7.0

    def test_intractable_zero_theta_value(self):
        m = IntractableModel(theta=[0.0, 0.0])
        x = np.array([3.0, 0.0, 4.0])  # ||s|| = ||x|| = 5
        assert m.payoff_bound(x) == (5.0 + 1.0) * 5.0 + 1.0

    def test_scale_multiplies(self, model_zoo):
        rng = np.random.default_rng(12)
        for model in model_zoo.values():
            x = rng.standard_normal(model.dim)
            assert model.payoff_bound(x, scale=3.0) == pytest.approx(
                3.0 * model.payoff_bound(x), rel=1e-15
            )

    def test_scale_below_one_rejected(self, model_zoo):
        for model in model_zoo.values():
            with pytest.raises(ValueError):
                model.payoff_bound(np.zeros(model.dim), scale=0.5)

    def test_frobenius_dominates_spectral(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            w = rng.standard_normal((6, 4))
            fro = GaussianBernoulliRbm(
                weights=w, visible_bias=np.zeros(6), hidden_bias=np.zeros(4)
            )
            op = GaussianBernoulliRbm(
                weights=w,
                visible_bias=np.zeros(6),
                hidden_bias=np.zeros(4),
                spectral_bound=True,
            )
            x = rng.standard_normal(6)
            assert fro.payoff_bound(x) >= op.payoff_bound(x)

    def test_floor_holds_under_random_probing(self, model_zoo):
        # Reduced sweep of the full acceptance check: h(x, y) >= -M(y).
        rng = np.random.default_rng(14)
        for name, model in model_zoo.items():
            kernel = SteinKernel(model)
            anchors = rng.standard_normal((20, model.dim)) * 2
            floors = model.payoff_bound(anchors)
            probes = np.concatenate(
                [
                    rng.standard_normal((2000, model.dim)) * s
                    for s in (0.5, 2.0, 8.0, 25.0)
                ]
            )
            block = kernel.cross(probes, anchors)
            worst = block.min(axis=0)
            assert np.all(worst >= -floors - 1e-9), name

    def test_mean_floor_finite_and_seed_stable(self, model_zoo):
        for model in model_zoo.values():
            means = []
            for seed in (0, 1):
                rng = np.random.default_rng(seed)
                draws = sample(model, rng, 20_000, burn_in=200)
                m = model.payoff_bound(draws)
                assert np.isfinite(m).all()
                means.append(m.mean())
            assert abs(means[0] - means[1]) / means[0] < 0.1


class TestGaussianSampler:
    def test_law_of_large_numbers(self):
        m = GaussianModel(mean=[2.0, -1.0])
        draws = m.sample(np.random.default_rng(20), 10**6)
        se = 1.0 / np.sqrt(draws.shape[0])
        assert np.all(np.abs(draws.mean(axis=0) - m.mean) <= 4 * se)

    def test_unit_variance(self):
        m = GaussianModel(mean=[0.5])
        draws = m.sample(np.random.default_rng(21), 10**6)
        assert draws.var(ddof=1) == pytest.approx(1.0, abs=0.01)

    def test_seed_determinism(self):
        m = GaussianModel(mean=[0.0, 0.0, 0.0])
        a = m.sample(np.random.default_rng(22), 100)
        b = m.sample(np.random.default_rng(22), 100)
        np.testing.assert_array_equal(a, b)


class TestIntractableSampler:
    def test_zero_theta_matches_standard_normal_moments(self):
        m = IntractableModel(theta=[0.0, 0.0])
        draws = m.sample(np.random.default_rng(23), 200_000)
        assert np.abs(draws.mean(axis=0)).max() < 0.01
        np.testing.assert_allclose(draws.var(axis=0, ddof=1), 1.0, atol=0.02)

    def test_tilt_matches_quadrature(self):
        # E[tanh(x1)] from the sampler against 1-d quadrature of the
        # unnormalized marginal exp(tanh(u) - u^2/2).
        m = IntractableModel(theta=[1.0, 1.0])
        draws = m.sample(np.random.default_rng(24), 10**6)
        num = integrate.quad(
            lambda u: np.tanh(u) * np.exp(np.tanh(u) - 0.5 * u * u), -12, 12
        )[0]
        den = integrate.quad(lambda u: np.exp(np.tanh(u) - 0.5 * u * u), -12, 12)[0]
        assert np.tanh(draws[:, 0]).mean() == pytest.approx(num / den, abs=1e-2)
        # third coordinate is untilted standard normal
        assert abs(draws[:, 2].mean()) < 0.01

    def test_seed_determinism(self):
        m = IntractableModel(theta=[1.5, -0.5])
        a = m.sample(np.random.default_rng(25), 500)
        b = m.sample(np.random.default_rng(25), 500)
        np.testing.assert_array_equal(a, b)

    def test_proposal_budget_enforced(self, monkeypatch):
        import steinbet.models as models_mod

        monkeypatch.setattr(models_mod, "_PROPOSAL_CAP", 0)
        with pytest.raises(SamplerError):
            IntractableModel(theta=[1.0, 1.0]).sample(np.random.default_rng(0), 10)


class TestGibbsSampler:
    def test_zero_weights_iid_gaussian(self):
        m = GaussianBernoulliRbm(
            weights=np.zeros((2, 3)),
            visible_bias=np.array([1.0, -2.0]),
            hidden_bias=np.zeros(3),
        )
        draws = m.sample_gibbs(np.random.default_rng(26), 100_000, burn_in=1)
        np.testing.assert_allclose(draws.mean(axis=0), [1.0, -2.0], atol=0.02)
        np.testing.assert_allclose(draws.var(axis=0, ddof=1), 1.0, atol=0.02)

    def test_small_rbm_matches_exact_mixture_mean(self):
        # d_h = 1: the marginal is an equal-form two-component Gaussian
        # mixture with weights exp(+-c + ||b +- w/2||^2 / 2).
        w = np.array([[0.8], [-0.5]])
        b = np.array([0.3, -0.2])
        c = np.array([0.4])
        m = GaussianBernoulliRbm(weights=w, visible_bias=b, hidden_bias=c)
        mu_p, mu_m = b + 0.5 * w[:, 0], b - 0.5 * w[:, 0]
        wp = np.exp(c[0] + 0.5 * mu_p @ mu_p)
        wm = np.exp(-c[0] + 0.5 * mu_m @ mu_m)
        exact = (wp * mu_p + wm * mu_m) / (wp + wm)
        draws = m.sample_gibbs(np.random.default_rng(27), 300_000, burn_in=1000)
        np.testing.assert_allclose(draws.mean(axis=0), exact, atol=2e-2)

    def test_seed_determinism_and_thinning(self):
        m = structured_rbm(d=6, d_h=2, per_hidden=3)
        a = m.sample_gibbs(np.random.default_rng(28), 50, burn_in=10, thin=3)
        b = m.sample_gibbs(np.random.default_rng(28), 50, burn_in=10, thin=3)
        np.testing.assert_array_equal(a, b)
        # thinning keeps every third post-burn-in state of the same chain
        dense = m.sample_gibbs(np.random.default_rng(28), 150, burn_in=10, thin=1)
        np.testing.assert_array_equal(a, dense[2::3])

    def test_argument_validation(self):
        m = structured_rbm(d=4, d_h=2, per_hidden=2)
        with pytest.raises(ValueError):
            m.sample_gibbs(np.random.default_rng(0), 0)
        with pytest.raises(ValueError):
            m.sample_gibbs(np.random.default_rng(0), 5, thin=0)


class TestStructuredRbm:
    def test_five_per_hidden_and_partition_at_full_size(self):
        m = structured_rbm(d=50, d_h=10, per_hidden=5)
        w = m.weights
        assert w.shape == (50, 10)
        np.testing.assert_array_equal(w.sum(axis=0), 5.0)  # five visibles each
        np.testing.assert_array_equal(w.sum(axis=1), 1.0)  # exact partition

    def test_desk_scale_has_no_duplicate_columns(self):
        w = structured_rbm(d=20, d_h=5, per_hidden=5).weights
        np.testing.assert_array_equal(w.sum(axis=0), 5.0)
        for i in range(5):
            for j in range(i + 1, 5):
                assert not np.array_equal(w[:, i], w[:, j])

    def test_shift_applies_to_every_entry(self):
        base = structured_rbm(d=6, d_h=2, per_hidden=3).weights
        shifted = structured_rbm(d=6, d_h=2, per_hidden=3, weight_shift=0.5).weights
        np.testing.assert_array_equal(shifted, base + 0.5)


class TestLogDensity:
    def test_gaussian_quadratic(self):
        m = GaussianModel(mean=[0.0])
        xs = np.linspace(-3, 3, 7)
        vals = np.array([m.log_unnormalized_density([x]) for x in xs])
        np.testing.assert_allclose(vals, -0.5 * xs**2, rtol=1e-12)

    def test_intractable_zero_at_origin(self):
        m = IntractableModel(theta=[1.0, 1.0])
        assert m.log_unnormalized_density([0.0, 0.0, 0.0]) == 0.0

    def test_rbm_factorized_form_matches_hidden_enumeration(self):
        # Brute-force sum over {-1, 1}^dh as an independent oracle.
        rng = np.random.default_rng(29)
        m = GaussianBernoulliRbm(
            weights=rng.standard_normal((3, 3)) * 0.5,
            visible_bias=rng.standard_normal(3) * 0.2,
            hidden_bias=rng.standard_normal(3) * 0.2,
        )
        for _ in range(20):
            x = rng.standard_normal(3)
            total = 0.0
            for bits in range(2**3):
                h = np.array([1.0 if bits >> j & 1 else -1.0 for j in range(3)])
                total += np.exp(
                    0.5 * x @ m.weights @ h
                    + m.visible_bias @ x
                    + m.hidden_bias @ h
                    - 0.5 * x @ x
                )
            assert m.log_unnormalized_density(x) == pytest.approx(
                np.log(total), rel=1e-10
            )

    def test_rbm_large_hidden_layer_supported(self):
        m = structured_rbm(d=10, d_h=25, per_hidden=2)
        assert np.isfinite(m.log_unnormalized_density(np.zeros(10)))
