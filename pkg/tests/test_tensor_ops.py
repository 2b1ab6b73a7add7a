import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from lrtc import (
    DimensionError,
    fold,
    frobenius_norm,
    project_missing,
    project_observed,
    unfold,
)


def column_index(indices, dims, mode):
    """Independent oracle for the unfolding bijection: remaining axes vary
    fastest in ascending axis order."""
    j, stride = 0, 1
    for axis in range(3):
        if axis == mode:
            continue
        j += indices[axis] * stride
        stride *= dims[axis]
    return j


small_dims = st.tuples(st.integers(1, 5), st.integers(1, 5), st.integers(1, 5))
finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False, width=64)


@st.composite
def tensors(draw):
    return draw(arrays(np.float64, draw(small_dims), elements=finite))


@st.composite
def tensor_mask_pairs(draw):
    dims = draw(small_dims)
    t = draw(arrays(np.float64, dims, elements=finite))
    m = draw(arrays(np.bool_, dims))
    return t, m


class TestUnfold:
    def test_degenerate_singleton(self):
        x = np.array([[[2.5]]])
        for mode in (0, 1, 2):
            assert unfold(x, mode).shape == (1, 1)
            assert unfold(x, mode)[0, 0] == 2.5

    def test_matches_column_index_formula(self):
        # x[i1, i2, i3] = 4*i1 + 2*i2 + i3, enumerated by hand against the
        # canonical column order
        x = np.arange(8, dtype=float).reshape(2, 2, 2)
        expected_mode0 = np.array([[0.0, 2.0, 1.0, 3.0], [4.0, 6.0, 5.0, 7.0]])
        assert np.array_equal(unfold(x, 0), expected_mode0)
        for mode in (0, 1, 2):
            mat = unfold(x, mode)
            for idx in np.ndindex(x.shape):
                j = column_index(idx, x.shape, mode)
                assert mat[idx[mode], j] == x[idx]

    def test_formula_on_rectangular_tensor(self):
        rng = np.random.default_rng(0)
        x = rng.standard_normal((3, 4, 5))
        for mode in (0, 1, 2):
            mat = unfold(x, mode)
            for idx in np.ndindex(x.shape):
                assert mat[idx[mode], column_index(idx, x.shape, mode)] == x[idx]

    def test_bad_mode(self):
        x = np.zeros((2, 2, 2))
        for mode in (-1, 3, "1"):
            with pytest.raises(DimensionError):
                unfold(x, mode)

    def test_rejects_non_third_order(self):
        with pytest.raises(DimensionError):
            unfold(np.zeros((2, 2)), 0)


class TestFold:
    def test_inverse_of_unfold(self):
        rng = np.random.default_rng(1)
        x = rng.standard_normal((3, 4, 5))
        for mode in (0, 1, 2):
            assert np.array_equal(fold(unfold(x, mode), mode, x.shape), x)

    def test_single_row_mode0(self):
        rng = np.random.default_rng(2)
        row = rng.standard_normal((1, 12))
        t = fold(row, 0, (1, 3, 4))
        for i2 in range(3):
            for i3 in range(4):
                assert t[0, i2, i3] == row[0, column_index((0, i2, i3), (1, 3, 4), 0)]

    def test_zero_matrix(self):
        assert np.array_equal(fold(np.zeros((3, 20)), 1, (4, 3, 5)), np.zeros((4, 3, 5)))

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            fold(np.zeros((3, 19)), 1, (4, 3, 5))
        with pytest.raises(DimensionError):
            fold(np.zeros((3, 20)), 5, (4, 3, 5))

    def test_bad_dims(self):
        with pytest.raises(DimensionError):
            fold(np.zeros((3, 20)), 1, (4, 3))


class TestProjections:
    def test_full_support_identity(self):
        rng = np.random.default_rng(3)
        x = rng.standard_normal((2, 3, 4))
        assert np.array_equal(project_observed(x, np.ones(x.shape, bool)), x)
        assert np.array_equal(project_missing(x, np.zeros(x.shape, bool)), x)

    def test_single_support(self):
        x = np.arange(8, dtype=float).reshape(2, 2, 2) + 1
        mask = np.zeros(x.shape, bool)
        mask[1, 0, 1] = True
        kept = project_observed(x, mask)
        assert kept[1, 0, 1] == x[1, 0, 1]
        assert kept.sum() == x[1, 0, 1]

    def test_empty_complement(self):
        x = np.ones((2, 2, 2))
        assert np.array_equal(project_missing(x, np.ones(x.shape, bool)), np.zeros(x.shape))

    def test_complement_involution(self):
        rng = np.random.default_rng(4)
        x = rng.standard_normal((3, 2, 4))
        mask = rng.random(x.shape) < 0.5
        assert np.array_equal(project_missing(x, ~mask), project_observed(x, mask))

    def test_decomposition_identity(self):
        rng = np.random.default_rng(5)
        x = rng.standard_normal((3, 4, 2))
        mask = rng.random(x.shape) < 0.4
        assert np.array_equal(project_observed(x, mask) + project_missing(x, mask), x)

    def test_idempotence(self):
        rng = np.random.default_rng(6)
        x = rng.standard_normal((2, 4, 3))
        mask = rng.random(x.shape) < 0.6
        once = project_observed(x, mask)
        assert np.array_equal(project_observed(once, mask), once)

    def test_dims_mismatch(self):
        with pytest.raises(DimensionError):
            project_observed(np.zeros((2, 2, 2)), np.ones((2, 2, 3), bool))


class TestFrobeniusNorm:
    def test_zero(self):
        assert frobenius_norm(np.zeros((3, 2, 4))) == 0.0

    def test_absolute_value(self):
        assert frobenius_norm(np.array([[[-3.0]]])) == 3.0

    def test_hand_computed(self):
        # sqrt(9 + 16) = 5
        assert frobenius_norm(np.array([3.0, 4.0]).reshape(2, 1, 1)) == 5.0

    def test_matches_unfolding_norms(self):
        rng = np.random.default_rng(7)
        x = rng.standard_normal((4, 5, 3))
        reference = frobenius_norm(x)
        for mode in (0, 1, 2):
            assert np.linalg.norm(unfold(x, mode)) == pytest.approx(reference, rel=1e-12)


@given(tensors())
def test_roundtrip_property(x):
    for mode in (0, 1, 2):
        assert np.array_equal(fold(unfold(x, mode), mode, x.shape), x)


@given(tensor_mask_pairs())
@settings(max_examples=50)
def test_projection_decomposition_property(pair):
    x, mask = pair
    assert np.array_equal(project_observed(x, mask) + project_missing(x, mask), x)
