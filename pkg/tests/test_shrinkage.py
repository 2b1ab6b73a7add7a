import numpy as np
import pytest

from lrtc import (
    ConfigError,
    InvalidInputError,
    TruncationSpec,
    svt,
    tensor_truncated_nuclear_norm,
    thin_svd,
    truncated_nuclear_norm,
    truncated_svt,
    truncation_for_mode,
    weighted_svt,
)


def tnn_objective(x, z, trunc, tau):
    """Objective whose minimizer truncated_svt claims to be (alpha=tau, rho=1)."""
    sv = np.linalg.svd(x, compute_uv=False)
    return tau * sv[trunc:].sum() + 0.5 * np.sum((x - z) ** 2)


DIAG31 = np.diag([3.0, 1.0])


class TestThinSvd:
    @pytest.mark.parametrize("shape", [(4, 7), (7, 4), (5, 5), (1, 6), (6, 1)])
    def test_factor_invariants(self, shape):
        rng = np.random.default_rng(11)
        a = rng.standard_normal(shape)
        u, sigma, vt = thin_svd(a)
        p = min(shape)
        assert sigma.shape == (p,)
        assert (np.diff(sigma) <= 0).all() and (sigma >= 0).all()
        assert np.allclose(u.T @ u, np.eye(p), atol=1e-8)
        assert np.allclose(vt @ vt.T, np.eye(p), atol=1e-8)
        recon = (u * sigma) @ vt
        assert np.linalg.norm(recon - a) <= 1e-8 * max(np.linalg.norm(a), 1.0)

    def test_rejects_non_finite(self):
        with pytest.raises(InvalidInputError):
            thin_svd(np.array([[1.0, np.nan]]))


class TestTruncatedNuclearNorm:
    def test_diagonal_hand_case(self):
        # singular values of diag(3, 1) are (3, 1)
        assert truncated_nuclear_norm(DIAG31, 1) == pytest.approx(1.0, abs=1e-12)

    def test_no_truncation_is_nuclear_norm(self):
        rng = np.random.default_rng(12)
        a = rng.standard_normal((5, 3))
        expected = np.linalg.svd(a, compute_uv=False).sum()
        assert truncated_nuclear_norm(a, 0) == pytest.approx(expected, rel=1e-12)

    def test_zero_matrix(self):
        assert truncated_nuclear_norm(np.zeros((4, 6)), 2) == 0.0

    def test_truncation_too_large(self):
        with pytest.raises(ConfigError):
            truncated_nuclear_norm(np.ones((3, 5)), 3)
        with pytest.raises(ConfigError):
            truncated_nuclear_norm(DIAG31, -1)

    def test_monotone_in_truncation(self):
        rng = np.random.default_rng(13)
        a = rng.standard_normal((6, 4))
        values = [truncated_nuclear_norm(a, r) for r in range(4)]
        full = truncated_nuclear_norm(a, 0)
        for r in range(3):
            assert values[r + 1] <= values[r] + 1e-12
            assert values[r] <= full + 1e-12


class TestTruncationForMode:
    def test_hand_cases(self):
        assert truncation_for_mode((214, 61, 144), 0, 0.30) == 65
        assert truncation_for_mode((30, 77, 18), 2, 0.05) == 1

    def test_zero_theta(self):
        for mode in (0, 1, 2):
            assert truncation_for_mode((9, 4, 17), mode, 0.0) == 0

    def test_float_excess_on_exact_product(self):
        # 0.1 * 30 evaluates to 3.0000000000000004 in binary; ceil must give 3
        assert truncation_for_mode((30, 20, 40), 0, 0.1) == 3
        assert truncation_for_mode((30, 20, 40), 1, 0.1) == 2
        assert truncation_for_mode((30, 20, 40), 2, 0.1) == 4

    def test_saturating_theta_raises(self):
        with pytest.raises(ConfigError):
            truncation_for_mode((10, 10, 10), 0, 0.95)

    def test_saturating_theta_clamps_with_warning(self):
        with pytest.warns(UserWarning):
            assert truncation_for_mode((10, 10, 10), 0, 0.95, clamp=True) == 9

    def test_unit_dim_clamps_to_zero(self):
        with pytest.warns(UserWarning):
            assert truncation_for_mode((1, 4, 5), 0, 0.5, clamp=True) == 0

    def test_theta_out_of_range(self):
        for theta in (-0.1, 1.0, 1.5):
            with pytest.raises(ConfigError):
                truncation_for_mode((4, 4, 4), 0, theta)

    def test_spec_for_dims(self):
        spec = TruncationSpec.for_dims((214, 61, 144), 0.30)
        assert spec.per_mode == (65, 19, 44)
        assert TruncationSpec.for_dims((214, 61, 144), 0.0).per_mode == (0, 0, 0)


class TestTensorTruncatedNuclearNorm:
    def test_zero_tensor(self):
        spec = TruncationSpec.for_dims((3, 4, 5), 0.2)
        assert tensor_truncated_nuclear_norm(np.zeros((3, 4, 5)), spec, (1 / 3,) * 3) == 0.0

    def test_theta_zero_is_mean_nuclear_norm(self):
        rng = np.random.default_rng(14)
        x = rng.standard_normal((3, 4, 5))
        spec = TruncationSpec.for_dims(x.shape, 0.0)
        # independent bijection: C-order unfolding has the same singular values
        norms = [
            np.linalg.svd(np.moveaxis(x, mode, 0).reshape(x.shape[mode], -1),
                          compute_uv=False).sum()
            for mode in (0, 1, 2)
        ]
        expected = sum(norms) / 3.0
        assert tensor_truncated_nuclear_norm(x, spec, (1 / 3,) * 3) == pytest.approx(
            expected, rel=1e-10
        )

    def test_rank_one_fully_truncated(self):
        rng = np.random.default_rng(15)
        a, b, c = (rng.standard_normal(3) for _ in range(3))
        a, b, c = (v / np.linalg.norm(v) for v in (a, b, c))
        x = np.einsum("i,j,k->ijk", a, b, c)
        spec = TruncationSpec.for_dims(x.shape, 0.5)
        assert min(spec.per_mode) >= 1
        value = tensor_truncated_nuclear_norm(x, spec, (1 / 3,) * 3)
        assert value == pytest.approx(0.0, abs=1e-8)

    def test_bad_weights(self):
        spec = TruncationSpec.for_dims((3, 3, 3), 0.0)
        with pytest.raises(ConfigError):
            tensor_truncated_nuclear_norm(np.zeros((3, 3, 3)), spec, (0.5, 0.5, 0.5))
        with pytest.raises(ConfigError):
            tensor_truncated_nuclear_norm(np.zeros((3, 3, 3)), spec, (1.5, -0.5, 0.0))

    def test_invariant_to_unfolding_convention(self):
        # any fixed bijection leaves singular values unchanged, so the norm
        # must agree with one computed over an independently coded unfolding
        rng = np.random.default_rng(16)
        x = rng.standard_normal((3, 4, 5))
        spec = TruncationSpec.for_dims(x.shape, 0.25)
        alt = 0.0
        for mode, trunc in zip((0, 1, 2), spec.per_mode):
            sv = np.linalg.svd(
                np.moveaxis(x, mode, 0).reshape(x.shape[mode], -1), compute_uv=False
            )
            alt += sv[trunc:].sum() / 3.0
        assert tensor_truncated_nuclear_norm(x, spec, (1 / 3,) * 3) == pytest.approx(
            alt, rel=1e-10
        )


class TestTruncatedSvt:
    def test_diagonal_hand_case(self):
        out = truncated_svt(DIAG31, 1, 1.0)
        assert np.allclose(out, np.diag([3.0, 0.0]), atol=1e-10)

    def test_vanishing_tau_returns_input(self):
        rng = np.random.default_rng(17)
        z = rng.standard_normal((4, 6))
        assert np.allclose(truncated_svt(z, 1, 0.0), z, atol=1e-10)
        assert np.allclose(truncated_svt(z, 0, 1e-300), z, atol=1e-10)

    def test_zero_matrix(self):
        assert np.array_equal(truncated_svt(np.zeros((3, 5)), 1, 0.7), np.zeros((3, 5)))

    def test_rejects_bad_inputs(self):
        with pytest.raises(InvalidInputError):
            truncated_svt(np.array([[np.inf, 0.0]]), 0, 1.0)
        with pytest.raises(ConfigError):
            truncated_svt(np.ones((3, 4)), 3, 1.0)
        with pytest.raises(ConfigError):
            truncated_svt(np.ones((3, 4)), 0, -1.0)

    @pytest.mark.parametrize("shape", [(5, 8), (8, 5)])
    @pytest.mark.parametrize("trunc", [0, 1, 2])
    @pytest.mark.parametrize("tau", [0.1, 1.0])
    def test_singular_value_contract(self, shape, trunc, tau):
        rng = np.random.default_rng(18)
        z = rng.standard_normal(shape)
        sigma = np.linalg.svd(z, compute_uv=False)
        expected = sigma.copy()
        expected[trunc:] = np.maximum(sigma[trunc:] - tau, 0.0)
        out_sigma = np.linalg.svd(truncated_svt(z, trunc, tau), compute_uv=False)
        assert np.allclose(out_sigma, expected, atol=1e-8)

    def test_objective_local_optimality_sample(self):
        rng = np.random.default_rng(19)
        z = rng.standard_normal((4, 5))
        trunc, tau = 1, 0.5
        out = truncated_svt(z, trunc, tau)
        best = tnn_objective(out, z, trunc, tau)
        for _ in range(300):
            scale = 10.0 ** rng.uniform(-4, 0)
            candidate = out + scale * rng.standard_normal(z.shape)
            assert best <= tnn_objective(candidate, z, trunc, tau) + 1e-9
        for _ in range(100):
            candidate = rng.standard_normal(z.shape)
            assert best <= tnn_objective(candidate, z, trunc, tau) + 1e-9


class TestSvt:
    def test_diagonal_hand_case(self):
        assert np.allclose(svt(DIAG31, 1.0), np.diag([2.0, 0.0]), atol=1e-10)

    def test_zero_tau(self):
        rng = np.random.default_rng(20)
        z = rng.standard_normal((3, 7))
        assert np.allclose(svt(z, 0.0), z, atol=1e-10)

    def test_is_zero_truncation(self):
        rng = np.random.default_rng(21)
        for _ in range(5):
            z = rng.standard_normal((4, 6))
            assert np.array_equal(svt(z, 0.6), truncated_svt(z, 0, 0.6))


class TestWeightedSvt:
    def test_zero_weights_identity(self):
        rng = np.random.default_rng(22)
        z = rng.standard_normal((4, 5))
        assert np.allclose(weighted_svt(z, np.zeros(4), 1.0), z, atol=1e-10)

    def test_step_weights_reproduce_truncated_svt(self):
        rng = np.random.default_rng(23)
        z = rng.standard_normal((5, 7))
        for trunc in (0, 1, 2):
            weights = np.r_[np.zeros(trunc), np.ones(5 - trunc)]
            assert np.allclose(
                weighted_svt(z, weights, 0.8), truncated_svt(z, trunc, 0.8), atol=1e-10
            )

    def test_diagonal_hand_case(self):
        out = weighted_svt(DIAG31, np.array([0.0, 1.0]), 1.0)
        assert np.allclose(out, np.diag([3.0, 0.0]), atol=1e-10)

    def test_order_constraint(self):
        with pytest.raises(ConfigError):
            weighted_svt(np.ones((3, 3)), np.array([1.0, 0.5, 2.0]), 1.0)
        with pytest.raises(ConfigError):
            weighted_svt(np.ones((3, 3)), np.array([-0.1, 0.5, 2.0]), 1.0)
        with pytest.raises(ConfigError):
            weighted_svt(np.ones((3, 3)), np.array([0.0, 1.0]), 1.0)

    def test_special_case_coherence(self):
        rng = np.random.default_rng(24)
        for shape in ((4, 6), (6, 4)):
            z = rng.standard_normal(shape)
            tau = 0.9
            a = truncated_svt(z, 0, tau)
            b = svt(z, tau)
            c = weighted_svt(z, np.ones(min(shape)), tau)
            assert np.allclose(a, b, atol=1e-8)
            assert np.allclose(b, c, atol=1e-8)
