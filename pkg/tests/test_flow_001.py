"""
Test suite for FLOW-001 module

Tests for:
- Coupling blocks (vanilla / reinforced): invertibility, log-det exactness
- FlowModel: log-density, sampling, gradients, normalization
- Checkpoint codec
"""

import numpy as np
import pytest
from scipy import stats

from src.modules.flow_001 import (
    CouplingBlock,
    CouplingVariant,
    FlowModel,
    coupling_forward,
    coupling_inverse,
    load_checkpoint,
    log_prob,
    sample,
    save_checkpoint,
)
from src.modules.numerics_001 import Graph, numerical_gradient, numerical_jacobian, relative_error
from src.utils.errors import ConfigError, DimensionMismatchError, InputError

VARIANTS = ["vanilla", "reinforced"]


def randomize(module, seed: int = 0, scale: float = 0.1):
    """Move every parameter off its identity initialization."""
    rng = np.random.default_rng(seed)
    for param in module.parameters():
        param.value = param.value + rng.normal(0.0, scale, size=param.shape)
    return module


class TestCouplingBlock:
    """Test suite for single coupling blocks."""

    def setup_method(self):
        """Set up test fixtures."""
        self.rng = np.random.default_rng(0)

    def make_block(self, variant, dim=6, cond_dim=4, orientation=0):
        block = CouplingBlock(variant, dim, cond_dim, orientation, self.rng, hidden_channels=4, cond_hidden=8)
        return randomize(block, seed=orientation + 1, scale=0.3).eval()

    def test_identity_at_initialization(self):
        """Test zero readouts make a fresh block the identity."""
        block = CouplingBlock("reinforced", 4, 3, 0, self.rng).eval()
        x = self.rng.normal(size=4)
        y, logdet = coupling_forward(x, self.rng.normal(size=3), block)

        np.testing.assert_allclose(y, x, atol=1e-12)
        assert logdet == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("variant", VARIANTS)
    @pytest.mark.parametrize("orientation", [0, 1])
    def test_inverse_recovers_input(self, variant, orientation):
        """Test coupling_inverse(coupling_forward(x)) = x."""
        block = self.make_block(variant, orientation=orientation)
        x = self.rng.normal(size=(50, 6))
        c = self.rng.normal(size=(50, 4))
        y, _ = coupling_forward(x, c, block)

        np.testing.assert_allclose(coupling_inverse(y, c, block), x, atol=1e-10)

    @pytest.mark.parametrize("variant", VARIANTS)
    def test_logdet_matches_jacobian(self, variant):
        """Test log|det| against a finite-difference Jacobian determinant."""
        block = self.make_block(variant)
        for _ in range(10):
            x = self.rng.normal(size=6)
            c = self.rng.normal(size=4)
            _, logdet = coupling_forward(x, c, block)
            jac = numerical_jacobian(lambda v: coupling_forward(v, c, block)[0], x)
            _, numeric = np.linalg.slogdet(jac)
            assert abs(logdet - numeric) <= 1e-4 * max(1.0, abs(numeric))

    def test_vanilla_pass_half_unchanged(self):
        """Test the vanilla block copies its pass-through half."""
        block = self.make_block("vanilla")
        x = self.rng.normal(size=6)
        y, _ = coupling_forward(x, self.rng.normal(size=4), block)

        np.testing.assert_array_equal(y[:3], x[:3])

    def test_reinforced_moves_pass_half(self):
        """Test the reinforced block transforms both halves."""
        block = self.make_block("reinforced")
        x = self.rng.normal(size=6)
        y, _ = coupling_forward(x, self.rng.normal(size=4), block)

        assert not np.allclose(y[:3], x[:3])

    def test_odd_dimension_split(self):
        """Test odd D splits into floor(D/2) and the rest."""
        block = CouplingBlock("vanilla", 5, 2, 0, self.rng)

        assert block.pass_idx == [0, 1]
        assert block.trans_idx == [2, 3, 4]

    def test_dimension_one_rejected(self):
        """Test D = 1 cannot be split."""
        with pytest.raises(ConfigError):
            CouplingBlock("vanilla", 1, 2, 0, self.rng)

    def test_wrong_condition_width(self):
        """Test a condition of the wrong width raises DimensionMismatchError."""
        block = self.make_block("vanilla")

        with pytest.raises(DimensionMismatchError):
            coupling_forward(np.zeros(6), np.zeros(5), block)

    def test_unknown_variant(self):
        """Test unknown variant tags raise ConfigError."""
        with pytest.raises(ConfigError, match="Must be one of"):
            CouplingVariant.parse("glow")


class TestFlowModel:
    """Test suite for FlowModel."""

    def setup_method(self):
        """Set up test fixtures."""
        self.rng = np.random.default_rng(1)

    def make_model(self, variant="reinforced", dim=6, cond_dim=4, n_blocks=3, scale=0.2):
        model = FlowModel(dim, cond_dim, n_blocks=n_blocks, variant=variant,
                          hidden_channels=4, cond_hidden=8, seed=3)
        return randomize(model, seed=5, scale=scale).eval()

    def test_identity_model_is_standard_normal(self):
        """Test an initialized model has log p = log N(x; 0, I)."""
        model = FlowModel(4, 3, n_blocks=2).eval()
        x = self.rng.normal(size=(5, 4))
        values, trace = log_prob(x, self.rng.normal(size=(5, 3)), model)

        np.testing.assert_allclose(values, stats.norm.logpdf(x).sum(axis=1), atol=1e-10)
        np.testing.assert_allclose(trace.total_logdet, 0.0, atol=1e-12)

    @pytest.mark.parametrize("variant", VARIANTS)
    def test_nine_block_invertibility(self, variant):
        """Test max |x - f^-1(f(x))| < 1e-6 on 1000 random pairs."""
        model = self.make_model(variant, dim=8, cond_dim=6, n_blocks=9, scale=0.1)
        x = self.rng.normal(size=(1000, 8))
        c = self.rng.normal(size=(1000, 6))
        _, trace = log_prob(x, c, model)

        assert np.max(np.abs(sample(model, c, trace.z) - x)) < 1e-6

    def test_training_mode_invertible(self):
        """Test batch statistics leave the block invertible for the same batch."""
        model = self.make_model().train()
        x = self.rng.normal(size=(16, 6))
        c = self.rng.normal(size=(16, 4))
        graph = Graph(grad_enabled=False)
        z, _, _ = model.forward_graph(graph, graph.constant(x), graph.constant(c))
        back = model.inverse_graph(graph, z, graph.constant(c))

        np.testing.assert_allclose(back.value, x, atol=1e-9)

    @pytest.mark.parametrize("variant", VARIANTS)
    def test_flow_logdet_matches_jacobian(self, variant):
        """Test the summed log-det against the full-flow Jacobian."""
        model = self.make_model(variant)
        for _ in range(5):
            x = self.rng.normal(size=6)
            c = self.rng.normal(size=4)
            _, trace = log_prob(x, c, model)
            jac = numerical_jacobian(lambda v: log_prob(v, c, model)[1].z, x)
            _, numeric = np.linalg.slogdet(jac)
            assert abs(trace.total_logdet - numeric) <= 1e-4 * max(1.0, abs(numeric))

    @pytest.mark.parametrize("variant", VARIANTS)
    def test_parameter_gradients(self, variant):
        """Test every flow parameter gradient against central differences."""
        model = FlowModel(4, 3, n_blocks=2, variant=variant, hidden_channels=2, cond_hidden=3, seed=0)
        randomize(model, seed=9, scale=0.3).eval()
        x = self.rng.normal(size=(5, 4))
        c = self.rng.normal(size=(5, 3))

        def loss():
            graph = Graph()
            value = graph.sum(model.log_prob_graph(graph, graph.constant(x), graph.constant(c)))
            return graph, value

        graph, out = loss()
        model.zero_grad()
        graph.backward(out)
        for name, param in model.named_parameters():
            numeric = numerical_gradient(lambda: float(loss()[1].value), param)
            assert relative_error(param.grad, numeric) < 1e-4, name

    def test_density_integrates_to_one(self):
        """Test a 2-D conditional density integrates to 1 over a wide grid."""
        model = self.make_model("reinforced", dim=2, cond_dim=2, n_blocks=4, scale=0.1)
        axis = np.linspace(-8.0, 8.0, 321)
        step = axis[1] - axis[0]
        xx, yy = np.meshgrid(axis, axis)
        points = np.column_stack([xx.ravel(), yy.ravel()])
        for c in ([0.0, 0.0], [1.0, -1.0], [-2.0, 0.5]):
            values, _ = log_prob(points, np.asarray(c), model)
            assert np.exp(values).sum() * step * step == pytest.approx(1.0, abs=0.02)

    def test_sample_moments_match_density(self):
        """Test Monte-Carlo sample moments against moments of the grid-integrated density."""
        model = self.make_model("reinforced", dim=2, cond_dim=2, n_blocks=4, scale=0.1)
        c = np.array([1.0, -1.0])
        axis = np.linspace(-8.0, 8.0, 321)
        xx, yy = np.meshgrid(axis, axis)
        points = np.column_stack([xx.ravel(), yy.ravel()])
        values, _ = log_prob(points, c, model)
        weights = np.exp(values)
        weights /= weights.sum()
        mean = weights @ points
        var = weights @ (points - mean) ** 2

        x = sample(model, c, self.rng.normal(size=(20000, 2)))

        np.testing.assert_allclose(x.mean(axis=0), mean, atol=0.03)
        np.testing.assert_allclose(x.var(axis=0), var, rtol=0.05)

    def test_single_sample_returns_scalar(self):
        """Test 1-D input gives a float log-density."""
        model = self.make_model()
        value, trace = log_prob(np.zeros(6), np.zeros(4), model)

        assert isinstance(value, float)
        assert trace.z.shape == (6,)

    def test_sample_shape_and_shared_condition(self):
        """Test one condition broadcasts over a latent batch."""
        model = self.make_model()
        x = sample(model, np.zeros(4), self.rng.normal(size=(7, 6)))

        assert x.shape == (7, 6)

    def test_sample_leaves_training_mode(self):
        """Test sampling freezes batch norm only temporarily."""
        model = self.make_model().train()
        sample(model, np.zeros(4), np.zeros(6))

        assert model.is_training is True

    def test_zero_blocks_rejected(self):
        """Test K = 0 raises ConfigError."""
        with pytest.raises(ConfigError):
            FlowModel(4, 3, n_blocks=0)

    def test_batch_of_one_in_training_mode(self):
        """Test single-sample log-density needs inference mode."""
        model = self.make_model().train()

        with pytest.raises(InputError):
            log_prob(np.zeros(6), np.zeros(4), model)


class TestCheckpoint:
    """Test suite for the checkpoint codec."""

    def setup_method(self):
        """Set up test fixtures."""
        self.model = randomize(FlowModel(4, 3, n_blocks=2, hidden_channels=2, cond_hidden=4, seed=1), seed=2)
        self.model.batchnorms()[0].running_mean = np.array([0.5, -0.5])
        self.model.trained = True
        self.model.eval()

    def test_round_trip(self, tmp_path):
        """Test a loaded model reproduces log-densities and metadata."""
        save_checkpoint(self.model, tmp_path / "ckpt", {"method": "reinforced"})
        loaded, metadata = load_checkpoint(tmp_path / "ckpt")
        x = np.random.default_rng(0).normal(size=(3, 4))
        c = np.random.default_rng(1).normal(size=(3, 3))

        np.testing.assert_array_equal(log_prob(x, c, loaded)[0], log_prob(x, c, self.model)[0])
        assert metadata == {"method": "reinforced"}
        assert loaded.trained is True
        assert loaded.is_training is False

    def test_byte_identical(self, tmp_path):
        """Test identical parameters give identical files."""
        save_checkpoint(self.model, tmp_path / "a")
        save_checkpoint(self.model, tmp_path / "b")

        for name in ("manifest.json", "parameters.bin"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_missing_checkpoint(self, tmp_path):
        """Test a missing directory raises InputError."""
        with pytest.raises(InputError):
            load_checkpoint(tmp_path / "absent")

    def test_truncated_parameters(self, tmp_path):
        """Test a short parameter file is rejected."""
        save_checkpoint(self.model, tmp_path / "ckpt")
        params = tmp_path / "ckpt" / "parameters.bin"
        params.write_bytes(params.read_bytes()[:-8])

        with pytest.raises(InputError):
            load_checkpoint(tmp_path / "ckpt")
