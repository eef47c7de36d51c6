"""
Test suite for TRAINING-001 module

Tests for:
- TrainConfig validation
- nll objective and the clamped critic
- FlowTrainer (MLE and Wasserstein-regularized)
- Divergence oracles and the mixture toy
"""

import math

import numpy as np
import pandas as pd
import pytest
from scipy import stats

from src.modules.data_001 import WindowDataset
from src.modules.flow_001 import FlowModel, sample
from src.modules.numerics_001 import Adam
from src.modules.training_001 import (
    CriticNet,
    EmpiricalQuantile,
    FlowTrainer,
    GaussianQuantile,
    MixtureQuantile,
    QuantileFn,
    ToyMetric,
    ToySpec,
    TrainConfig,
    critic_update,
    empirical_kl,
    nll,
    select_by_likelihood,
    toy_fit,
    train_mle,
    train_wflow,
    w1_closed_form,
    wasserstein_dual_estimate,
)
from src.utils.errors import ConfigError, InputError

SHORT_GRID = np.round(np.arange(1, 2001) * 0.001, 3)


def linear_dataset(n: int = 200, seed: int = 0, split: str = "train") -> WindowDataset:
    """Future = (c, -0.5 c) plus small noise for a scalar history c."""
    rng = np.random.default_rng(seed)
    c = rng.normal(size=(n, 1))
    future = np.hstack([c, -0.5 * c]) + 0.2 * rng.normal(size=(n, 2))
    return WindowDataset(
        past=c,
        future=future,
        h=1,
        k=2,
        forecast_start=pd.date_range("2017-01-01", periods=n, freq="D"),
        split=split,
    )


def small_model(seed: int = 0) -> FlowModel:
    return FlowModel(2, 1, n_blocks=2, hidden_channels=4, cond_hidden=8, seed=seed)


def peaked_dataset(n: int, seed: int, split: str = "train") -> WindowDataset:
    """Future = (c, -0.5 c) plus Laplace noise, peaked at the conditional mean."""
    rng = np.random.default_rng(seed)
    c = rng.normal(size=(n, 1))
    future = np.hstack([c, -0.5 * c]) + rng.laplace(0.0, 1.0, size=(n, 2))
    return WindowDataset(
        past=c,
        future=future,
        h=1,
        k=2,
        forecast_start=pd.date_range("2017-01-01", periods=n, freq="D"),
        split=split,
    )


def gaussian_dataset(n: int, seed: int, split: str = "train") -> WindowDataset:
    """Future ~ N(mean(c), 0.1 I) for a 3-hour history c."""
    rng = np.random.default_rng(seed)
    c = rng.normal(size=(n, 3))
    future = c.mean(axis=1, keepdims=True) + math.sqrt(0.1) * rng.normal(size=(n, 2))
    return WindowDataset(
        past=c,
        future=future,
        h=3,
        k=2,
        forecast_start=pd.date_range("2017-01-01", periods=n, freq="D"),
        split=split,
    )


class TestTrainConfig:
    """Test suite for TrainConfig."""

    def test_defaults_are_valid(self):
        """Test the default configuration validates."""
        config = TrainConfig().validate()

        assert config.beta == 0.0
        assert config.to_dict()["batch_size"] == 64

    @pytest.mark.parametrize(
        "field,value",
        [
            ("learning_rate", 0.0),
            ("batch_size", 1),
            ("epochs", 0),
            ("beta", -0.1),
            ("clamp", 0.0),
            ("validation_fraction", 1.0),
        ],
    )
    def test_invalid_fields(self, field, value):
        """Test each invalid field raises ConfigError naming it."""
        config = TrainConfig(**{field: value})

        with pytest.raises(ConfigError, match=field):
            config.validate()


class TestObjectives:
    """Test suite for nll and the critic."""

    def setup_method(self):
        """Set up test fixtures."""
        self.rng = np.random.default_rng(0)

    def test_identity_model_nll(self):
        """Test nll of an untrained model is the standard normal negative log-density."""
        model = small_model()
        x = self.rng.normal(size=(10, 2))
        expected = -np.mean(stats.norm.logpdf(x).sum(axis=1))

        assert nll(x, self.rng.normal(size=(10, 1)), model) == pytest.approx(expected, abs=1e-10)

    def test_nll_leaves_training_mode(self):
        """Test nll evaluates with frozen statistics and restores the mode."""
        model = small_model().train()
        nll(np.zeros(2), np.zeros(1), model)

        assert model.is_training is True

    def test_empty_batch_rejected(self):
        """Test nll of an empty batch raises InputError."""
        with pytest.raises(InputError):
            nll(np.zeros((0, 2)), np.zeros((0, 1)), small_model())

    def test_critic_weights_stay_clamped(self):
        """Test every critic update leaves weights within the clamp."""
        critic = CriticNet(2, 1, self.rng, hidden=8, clamp=0.01)
        optimizer = Adam(critic.parameters(), learning_rate=0.1)
        x_data = self.rng.normal(2.0, 1.0, size=(32, 2))
        x_model = self.rng.normal(size=(32, 2))
        c = self.rng.normal(size=(32, 1))
        for _ in range(5):
            estimate = critic_update(critic, optimizer, x_data, x_model, c, c)
            assert math.isfinite(estimate)

        assert critic.max_abs_weight() <= 0.01

    def test_critic_separates_shifted_batches(self):
        """Test ascent makes the dual estimate positive for distinct batches."""
        critic = CriticNet(1, 0, self.rng, hidden=16, clamp=0.05)
        optimizer = Adam(critic.parameters(), learning_rate=0.01)
        x_data = self.rng.normal(3.0, 0.5, size=(64, 1))
        x_model = self.rng.normal(-3.0, 0.5, size=(64, 1))
        for _ in range(50):
            critic_update(critic, optimizer, x_data, x_model)

        assert critic_update(critic, optimizer, x_data, x_model) > 0.0

    def test_dual_estimate_is_antisymmetric(self):
        """Test swapping the batches negates the estimate and equal batches give 0."""
        critic = CriticNet(2, 1, self.rng, hidden=8)
        x_data = self.rng.normal(size=(16, 2))
        x_model = self.rng.normal(1.0, 1.0, size=(16, 2))
        c = self.rng.normal(size=(16, 1))

        forward = wasserstein_dual_estimate(x_data, x_model, critic, c, c)
        backward = wasserstein_dual_estimate(x_model, x_data, critic, c, c)

        assert backward == pytest.approx(-forward, abs=1e-15)
        assert wasserstein_dual_estimate(x_data, x_data, critic, c, c) == 0.0

    def test_estimate_bounded_by_empirical_w1(self):
        """Test the rescaled critic never exceeds the sorted-sample W1 in one dimension."""
        x_data = self.rng.normal(1.0, 1.0, size=(64, 1))
        x_model = self.rng.normal(size=(64, 1))
        empirical = float(np.mean(np.abs(np.sort(x_data[:, 0]) - np.sort(x_model[:, 0]))))
        for seed in range(5):
            critic = CriticNet(1, 0, np.random.default_rng(seed), hidden=16, clamp=0.05)
            optimizer = Adam(critic.parameters(), learning_rate=0.01)
            for _ in range(20):
                critic_update(critic, optimizer, x_data, x_model)

            assert abs(wasserstein_dual_estimate(x_data, x_model, critic)) <= empirical + 1e-12

    def test_estimate_on_the_scale_of_w1(self):
        """Test a trained critic recovers a sizeable share of a shift of 3."""
        critic = CriticNet(1, 0, self.rng, hidden=16, clamp=0.05)
        optimizer = Adam(critic.parameters(), learning_rate=0.01)
        x_data = self.rng.normal(3.0, 1.0, size=(256, 1))
        x_model = self.rng.normal(0.0, 1.0, size=(256, 1))
        for _ in range(200):
            critic_update(critic, optimizer, x_data, x_model)

        assert wasserstein_dual_estimate(x_data, x_model, critic) > 1.0

    def test_invalid_clamp(self):
        """Test a non-positive clamp raises InputError."""
        with pytest.raises(InputError):
            CriticNet(2, 1, self.rng, clamp=0.0)

    def test_conditional_critic_requires_condition(self):
        """Test a conditional critic refuses a missing condition batch."""
        critic = CriticNet(2, 1, self.rng)

        with pytest.raises(InputError):
            critic.score(np.zeros((3, 2)))


class TestFlowTrainer:
    """Test suite for FlowTrainer."""

    def setup_method(self):
        """Set up test fixtures."""
        self.train = linear_dataset(200, seed=0)
        self.validation = linear_dataset(40, seed=1, split="validation")
        self.config = TrainConfig(learning_rate=1e-2, batch_size=32, epochs=40, patience=40, seed=0)

    def test_training_reduces_validation_nll(self):
        """Test maximum likelihood improves on the untrained model."""
        result = FlowTrainer(self.config).train_mle(self.train, small_model(), self.validation)

        assert result.final_val_nll < result.initial_val_nll - 0.5
        assert result.history[0].epoch == 0
        assert result.model.trained is True
        assert result.model.is_training is False

    def test_learns_condition_dependence(self):
        """Test samples follow the sign of the history value."""
        result = FlowTrainer(self.config).train_mle(self.train, small_model(), self.validation)
        z = np.random.default_rng(5).standard_normal((2000, 2))
        up = sample(result.model, np.array([1.0]), z).mean(axis=0)
        down = sample(result.model, np.array([-1.0]), z).mean(axis=0)

        assert up[0] - down[0] > 1.0
        assert up[1] - down[1] < -0.5

    def test_same_seed_same_history(self):
        """Test identical seeds give identical loss histories."""
        config = TrainConfig(learning_rate=1e-2, batch_size=32, epochs=3, seed=4)
        first = train_mle(self.train, config, small_model(1), self.validation)
        second = train_mle(self.train, config, small_model(1), self.validation)

        assert first.loss_rows() == second.loss_rows()

    def test_zero_beta_matches_mle(self):
        """Test train_wflow with beta = 0 reproduces maximum likelihood."""
        config = TrainConfig(learning_rate=1e-2, batch_size=32, epochs=3, beta=0.0)
        mle = train_mle(self.train, config, small_model(2), self.validation)
        wflow = train_wflow(self.train, config, small_model(2), self.validation)

        assert [r.val_nll for r in mle.history] == [r.val_nll for r in wflow.history]
        assert all(math.isnan(r.w_estimate) for r in wflow.history)

    def test_wasserstein_term_records_estimates(self):
        """Test beta > 0 trains and logs critic estimates per epoch."""
        messages = []
        config = TrainConfig(learning_rate=1e-2, batch_size=32, epochs=2, beta=0.5,
                             critic_steps=2, critic_hidden=16)
        result = FlowTrainer(config, callback=messages.append).train_wflow(
            self.train, small_model(3), self.validation
        )

        assert result.beta == 0.5
        assert math.isnan(result.history[0].w_estimate)
        assert all(math.isfinite(r.w_estimate) for r in result.history[1:])
        assert any("W-flow" in m for m in messages)

    def test_wasserstein_term_narrows_peaked_data(self):
        """Test beta = 1 gives lower per-hour sample variance than beta = 0 on Laplace noise."""
        train = peaked_dataset(400, seed=0)
        validation = peaked_dataset(100, seed=1, split="validation")
        z = np.random.default_rng(9).standard_normal((4000, 2))
        variances = {}
        for beta in (0.0, 1.0):
            config = TrainConfig(learning_rate=1e-2, batch_size=32, epochs=30, patience=30, seed=0,
                                 beta=beta, critic_steps=3, critic_hidden=32)
            result = train_wflow(train, config, small_model(0), validation)
            variances[beta] = sample(result.model, np.zeros(1), z).var(axis=0)

        assert np.all(variances[1.0] < variances[0.0])

    def test_conditional_gaussian_oracle(self):
        """Test held-out nll reaches the true entropy and sample means track mean(c)."""
        train = gaussian_dataset(1000, seed=0)
        validation = gaussian_dataset(200, seed=1, split="validation")
        test = gaussian_dataset(2000, seed=2, split="test")
        model = FlowModel(2, 3, n_blocks=4, hidden_channels=8, cond_hidden=16, seed=0)
        config = TrainConfig(learning_rate=1e-2, batch_size=64, epochs=80, patience=20, seed=0)
        result = train_mle(train, config, model, validation)

        mean_c = test.past.mean(axis=1, keepdims=True)
        true_nll = -np.mean(stats.norm.logpdf(test.future, mean_c, math.sqrt(0.1)).sum(axis=1))
        assert true_nll == pytest.approx(math.log(2 * math.pi * math.e * 0.1), abs=0.1)
        assert nll(test.future, test.past, result.model) <= true_nll + 0.1

        z = np.random.default_rng(3).standard_normal((4000, 2))
        for c in ([0.5, 1.0, -0.3], [-1.0, -0.5, 0.2], [0.0, 0.0, 0.0]):
            means = sample(result.model, np.array(c), z).mean(axis=0)
            assert np.all(np.abs(means - np.mean(c)) < 0.1)

    def test_identical_samples_concentrate(self):
        """Test a constant target drives nll at least 2 nats below its start within 50 epochs."""
        rng = np.random.default_rng(0)
        c = rng.normal(size=(128, 1))
        dataset = WindowDataset(
            past=c,
            future=np.tile([1.0, -1.0], (128, 1)),
            h=1,
            k=2,
            forecast_start=pd.date_range("2017-01-01", periods=128, freq="D"),
        )
        config = TrainConfig(learning_rate=1e-2, batch_size=32, epochs=50, patience=50, seed=0,
                             validation_fraction=0.25)
        result = train_mle(dataset, config, small_model(0))

        assert result.final_val_nll <= result.initial_val_nll - 2.0

    def test_holdout_when_no_validation(self):
        """Test the trailing fraction is held out when no validation set is given."""
        config = TrainConfig(batch_size=32, epochs=1, validation_fraction=0.25)
        result = FlowTrainer(config).train_mle(self.train, small_model())

        assert len(result.history) == 2

    def test_too_few_windows(self):
        """Test two windows cannot be split into train and validation."""
        with pytest.raises(InputError):
            FlowTrainer(TrainConfig(epochs=1)).train_mle(linear_dataset(2), small_model())

    def test_model_dimension_mismatch(self):
        """Test a model of the wrong width raises InputError."""
        model = FlowModel(3, 1, n_blocks=2)

        with pytest.raises(InputError):
            FlowTrainer(TrainConfig(epochs=1)).train_mle(self.train, model, self.validation)


class TestDivergences:
    """Test suite for the divergence oracles."""

    @pytest.mark.parametrize("shift", [0.5, 1.0, 2.0])
    def test_w1_of_translation(self, shift):
        """Test W1 between N(0,1) and N(mu,1) equals |mu|."""
        value = w1_closed_form(GaussianQuantile(0.0, 1.0), GaussianQuantile(shift, 1.0))

        assert value == pytest.approx(shift, abs=1e-3)

    def test_w1_of_identical(self):
        """Test W1 of a distribution with itself is zero."""
        q = GaussianQuantile(1.0, 2.0)

        assert w1_closed_form(q, q) == 0.0

    def test_w1_against_point_mass(self):
        """Test W1(N(0,1), delta_0) = E|Z|."""
        value = w1_closed_form(GaussianQuantile(0.0, 1.0), GaussianQuantile(0.0, 0.0), n_quad=20000)

        assert value == pytest.approx(math.sqrt(2.0 / math.pi), abs=2e-3)

    def test_w1_empirical_close_to_gaussian(self):
        """Test an empirical quantile of many draws is close to its source."""
        draws = np.random.default_rng(0).normal(size=20000)

        assert w1_closed_form(EmpiricalQuantile(draws), GaussianQuantile()) < 0.05

    def test_w1_too_few_nodes(self):
        """Test n_quad below 100 raises InputError."""
        with pytest.raises(InputError):
            w1_closed_form(GaussianQuantile(), GaussianQuantile(), n_quad=50)

    def test_w1_rejects_non_monotone(self):
        """Test a decreasing quantile function is refused."""

        class Decreasing(QuantileFn):
            name = "decreasing"

            def __call__(self, u):
                return -np.asarray(u)

        with pytest.raises(InputError, match="monotone"):
            w1_closed_form(Decreasing(), GaussianQuantile())

    def test_mixture_quantile_inverts_cdf(self):
        """Test the bisection quantile inverts the mixture CDF."""
        mixture = ToySpec().mixture()
        u = np.array([0.01, 0.25, 0.5, 0.75, 0.99])

        np.testing.assert_allclose(mixture.cdf(mixture(u)), u, atol=1e-8)
        assert mixture.second_moment() == pytest.approx(1.1)

    def test_mixture_weights_validated(self):
        """Test weights not summing to one raise InputError."""
        with pytest.raises(InputError):
            MixtureQuantile([0.0, 1.0], [1.0, 1.0], [0.5, 0.6])

    def test_empirical_kl_of_true_model(self):
        """Test empirical KL of the generating density is zero."""
        samples = np.random.default_rng(1).normal(size=100)

        assert empirical_kl(samples, stats.norm.logpdf, stats.norm.logpdf) == 0.0

    def test_likelihood_and_kl_select_the_same(self):
        """Test max likelihood and min empirical KL pick the same candidate."""
        samples = np.random.default_rng(2).normal(size=5000)
        candidates = {
            "standard": stats.norm.logpdf,
            "wide": lambda x: stats.norm.logpdf(x, scale=2.0),
            "shifted": lambda x: stats.norm.logpdf(x, loc=1.0),
        }
        by_likelihood, by_kl = select_by_likelihood(samples, stats.norm.logpdf, candidates)

        assert by_likelihood == by_kl == "standard"


class TestToyFit:
    """Test suite for the mixture toy."""

    def test_kl_argmin_is_second_moment(self):
        """Test the KL fit lands on the mixture second moment."""
        result = toy_fit(metric="kl", grid=SHORT_GRID)

        assert result.argmin == pytest.approx(1.1, abs=2e-3)
        assert result.analytic_argmin == pytest.approx(1.1)
        assert result.matches_claim is True
        assert result.warnings == []

    def test_w1_result_is_curve_minimum(self):
        """Test the W1 fit reports the minimum of its curve."""
        result = toy_fit(metric=ToyMetric.W1, grid=SHORT_GRID, n_quad=1000)

        assert result.minimum == pytest.approx(float(result.curve.min()))
        assert result.grid[int(np.argmin(result.curve))] == result.argmin
        assert result.claimed_argmin == 0.0

    def test_single_mode_spec(self):
        """Test both metrics recover sigma0^2 when the modes coincide."""
        spec = ToySpec(mu1=0.0, mu2=0.0, sigma0_sq=0.1)
        kl = toy_fit(spec, "kl", grid=SHORT_GRID)
        w1 = toy_fit(spec, "w1", grid=SHORT_GRID, n_quad=1000)

        assert kl.argmin == pytest.approx(0.1, abs=2e-3)
        assert w1.argmin == pytest.approx(0.1, abs=2e-3)
        assert kl.claimed_argmin is None

    def test_rows_and_summary(self):
        """Test the curve rows and summary dict."""
        grid = np.array([0.5, 1.0, 1.5])
        result = toy_fit(metric="kl", grid=grid)
        summary = result.summary()

        assert [row[0] for row in result.rows()] == [0.5, 1.0, 1.5]
        assert summary["metric"] == "kl"
        assert summary["grid_points"] == 3

    def test_invalid_grid(self):
        """Test empty or non-positive grids raise InputError."""
        with pytest.raises(InputError):
            toy_fit(metric="kl", grid=np.array([]))
        with pytest.raises(InputError):
            toy_fit(metric="kl", grid=np.array([0.0, 1.0]))

    def test_unknown_metric(self):
        """Test unknown metric tags raise ConfigError."""
        with pytest.raises(ConfigError, match="Must be one of"):
            toy_fit(metric="tv", grid=SHORT_GRID)

    def test_invalid_spec(self):
        """Test a non-positive component variance raises ConfigError."""
        with pytest.raises(ConfigError):
            toy_fit(ToySpec(sigma0_sq=0.0), "kl", grid=SHORT_GRID)
