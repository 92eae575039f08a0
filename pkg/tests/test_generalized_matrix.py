"""
一般化行列・コチェイン・添字ヘルパーのテスト
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from core.models.cochain import Cochain
from core.models.generalized_matrix import (
    GeneralizedMatrix,
    levi_civita,
    lincomb,
    max_abs_diff,
    new_zero,
)
from utils.errors import IndexRangeError, ShapeError
from utils.index_tools import (
    cyclic_shift,
    distinct_mask,
    permutation_sign,
    single_pair_mask,
    sorted_distinct_tuples,
    sorting_sign,
    to_offsets,
)


class TestGeneralizedMatrix:
    """GeneralizedMatrix の構築と成分アクセス"""

    def test_rank_and_dim_must_be_at_least_two(self):
        with pytest.raises(ShapeError):
            new_zero(1, 3)
        with pytest.raises(ShapeError):
            new_zero(3, 1)

    def test_flat_data_is_reshaped(self):
        m = GeneralizedMatrix(3, 2, np.arange(8))
        assert m.shape == (2, 2, 2)
        assert m.get((2, 1, 2)) == 5

    def test_wrong_component_count_is_rejected(self):
        with pytest.raises(ShapeError):
            GeneralizedMatrix(3, 2, np.arange(7))

    def test_from_array_requires_equal_axes(self):
        with pytest.raises(ShapeError):
            GeneralizedMatrix.from_array(np.zeros((2, 3)))
        m = GeneralizedMatrix.from_array(np.ones((3, 3, 3)))
        assert (m.rank, m.dim) == (3, 3)

    def test_one_based_get_and_set(self):
        m = new_zero(3, 4)
        m.set((1, 2, 4), 2.5 - 1j)
        assert m.get((1, 2, 4)) == 2.5 - 1j
        assert m.data[0, 1, 3] == 2.5 - 1j

    @pytest.mark.parametrize("idx", [(0, 1, 1), (1, 5, 1), (1, 2)])
    def test_out_of_range_index(self, idx):
        with pytest.raises(IndexRangeError):
            new_zero(3, 4).get(idx)

    def test_shape_mismatch_in_arithmetic(self):
        with pytest.raises(ShapeError):
            new_zero(3, 3) + new_zero(3, 4)
        with pytest.raises(ShapeError):
            max_abs_diff(new_zero(2, 3), new_zero(3, 3))

    def test_lincomb_and_scalar_product(self, rng):
        a = GeneralizedMatrix(3, 3, rng.normal(size=27))
        b = GeneralizedMatrix(3, 3, rng.normal(size=27))
        combined = lincomb(2.0, a, -1j, b)
        assert np.allclose(combined.data, 2.0 * a.data - 1j * b.data)
        assert np.allclose((3 * a).data, (a * 3).data)
        assert max_abs_diff(a - a, new_zero(3, 3)) == 0.0


class TestLeviCivita:
    """Levi-Civita 記号"""

    def test_rank_three_values(self):
        eps = levi_civita(3, 3)
        assert eps.get((1, 2, 3)) == 1
        assert eps.get((2, 3, 1)) == 1
        assert eps.get((2, 1, 3)) == -1
        assert eps.get((1, 1, 2)) == 0

    def test_rank_two_is_antisymmetric_unit(self):
        eps = levi_civita(2, 2)
        assert eps.values.tolist() == [[0, 1], [-1, 0]]

    def test_rank_larger_than_dim_is_zero(self):
        assert not levi_civita(4, 3).values.any()

    @settings(deadline=None, max_examples=15)
    @given(rank=st.integers(2, 4), dim=st.integers(2, 5))
    def test_nonzero_count_is_number_of_arrangements(self, rank, dim):
        expected = math.perm(dim, rank) if rank <= dim else 0
        assert np.count_nonzero(levi_civita(rank, dim).values) == expected


class TestIndexTools:
    """置換の符号と添字マスク"""

    def test_permutation_sign(self):
        assert permutation_sign((0, 1, 2)) == 1
        assert permutation_sign((1, 0, 2)) == -1
        assert permutation_sign((1, 2, 0)) == 1
        assert sorting_sign((5, 2, 9)) == -1

    def test_to_offsets(self):
        assert to_offsets((1, 3), 2, 3) == (0, 2)

    @settings(deadline=None, max_examples=15)
    @given(rank=st.integers(2, 4), dim=st.integers(2, 5))
    def test_mask_counts(self, rank, dim):
        assert distinct_mask(rank, dim).sum() == math.perm(dim, rank)
        assert single_pair_mask(rank, dim).sum() == math.comb(rank, 2) * math.perm(dim, rank - 1)
        assert len(sorted_distinct_tuples(rank, dim)) == math.comb(dim, rank)

    def test_cyclic_shift_moves_indices(self):
        values = np.arange(27).reshape(3, 3, 3)
        shifted = cyclic_shift(values, 1)
        assert shifted[0, 1, 2] == values[1, 2, 0]
        assert np.array_equal(cyclic_shift(values, 3), values)


class TestCochain:
    """Cochain の形状と反対称性"""

    def test_shape_check(self):
        with pytest.raises(ShapeError):
            Cochain(2, 3, np.zeros((3, 2)))

    def test_get_and_scale(self):
        c = Cochain(2, 2, [[0.0, -4.0], [4.0, 0.0]])
        assert c.get((2, 1)) == 4.0
        assert c.scale == 4.0
        assert Cochain(2, 2, np.zeros((2, 2))).scale == 1.0

    def test_antisymmetry_defect(self):
        assert Cochain(2, 2, [[0.0, 1.0], [-1.0, 0.0]]).antisymmetry_defect() == 0.0
        assert Cochain(2, 2, [[0.0, 1.0], [1.0, 0.0]]).antisymmetry_defect() == 2.0
