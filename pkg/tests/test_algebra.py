"""
n 重積・n 重交換子・正規形のテスト
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from core.models.generalized_matrix import GeneralizedMatrix
from core.models.physics_models import PairTable
from core.services.algebra_service import (
    NormalSpec,
    annihilation_defect,
    identity_matrix,
    identity_table,
    nfold_anticommutator,
    nfold_commutator,
    nfold_product,
    nfold_product_at,
    normal_cubic_matrix,
    normal_matrix,
    reordering_sign,
)
from core.services.dynamics_service import normal_form_defect, random_antisymmetric_table, random_matrix
from utils.errors import ArityError, DomainError, TableValidationError
from utils.index_tools import distinct_mask

SEEDS = st.integers(min_value=0, max_value=2 ** 32 - 1)


def _relative(lhs: np.ndarray, rhs: np.ndarray) -> float:
    scale = max(float(np.max(np.abs(lhs))), float(np.max(np.abs(rhs))), 1.0)
    return float(np.max(np.abs(lhs - rhs)) / scale)


class TestProducts:
    """n 重積と交換子"""

    def test_rank_two_is_matrix_product(self, rng):
        a, b = random_matrix(2, 4, rng), random_matrix(2, 4, rng)
        assert np.allclose(nfold_product([a, b]).data, a.data @ b.data)
        assert np.allclose(nfold_commutator([a, b]).data, a.data @ b.data - b.data @ a.data)
        assert np.allclose(nfold_anticommutator([a, b]).data, a.data @ b.data + b.data @ a.data)

    def test_rank_three_product_formula(self, rng):
        a, b, c = (random_matrix(3, 3, rng) for _ in range(3))
        expected = np.einsum("lmk,lkn,kmn->lmn", a.data, b.data, c.data)
        assert np.allclose(nfold_product([a, b, c]).data, expected)

    def test_single_component_matches_full_product(self, rng):
        factors = [random_matrix(4, 3, rng) for _ in range(4)]
        full = nfold_product(factors)
        for idx in [(1, 2, 3, 1), (3, 3, 1, 2), (2, 1, 1, 1)]:
            assert nfold_product_at(factors, idx) == pytest.approx(full.get(idx), abs=1e-12)

    def test_wrong_factor_count(self, rng):
        with pytest.raises(ArityError):
            nfold_product([random_matrix(3, 3, rng)] * 2)
        with pytest.raises(ArityError):
            nfold_commutator([])

    @settings(deadline=None, max_examples=20)
    @given(n=st.integers(2, 4), dim=st.integers(2, 4), seed=SEEDS)
    def test_commutator_is_skew_symmetric(self, n, dim, seed):
        rng = np.random.default_rng(seed)
        args = [random_matrix(n, dim, rng) for _ in range(n)]
        base = nfold_commutator(args).data
        for i in range(n - 1):
            swapped = list(args)
            swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
            assert _relative(nfold_commutator(swapped).data, -base) < 1e-12

    @settings(deadline=None, max_examples=20)
    @given(n=st.integers(2, 4), dim=st.integers(2, 4), seed=SEEDS)
    def test_commutator_is_linear_in_each_slot(self, n, dim, seed):
        rng = np.random.default_rng(seed)
        args = [random_matrix(n, dim, rng) for _ in range(n)]
        extra = random_matrix(n, dim, rng)
        slot = int(rng.integers(n))
        combined, alternative = list(args), list(args)
        combined[slot] = args[slot] * 2.0 + extra
        alternative[slot] = extra
        rhs = 2.0 * nfold_commutator(args).data + nfold_commutator(alternative).data
        assert _relative(nfold_commutator(combined).data, rhs) < 1e-12

    def test_repeated_argument_gives_zero_commutator(self, rng):
        a, b = random_matrix(3, 3, rng), random_matrix(3, 3, rng)
        assert np.max(np.abs(nfold_commutator([a, a, b]).data)) < 1e-12


class TestIdentityAndNormalForms:
    """単位元と正規形"""

    def test_identity_pattern(self):
        identity = identity_matrix(3, 3)
        assert identity.get((1, 1, 2)) == 1
        assert identity.get((2, 1, 2)) == 1
        assert identity.get((1, 2, 3)) == 0
        assert identity.get((2, 2, 2)) == 0
        assert np.array_equal(identity_matrix(2, 3).data, np.eye(3))

    @pytest.mark.parametrize("n,dim", [(2, 3), (3, 3), (3, 4), (4, 4)])
    def test_identity_reproduces_distinct_components(self, rng, n, dim):
        a = random_matrix(n, dim, rng)
        identity = identity_matrix(n, dim)
        mask = distinct_mask(n, dim)
        for position in range(n):
            factors = [identity] * n
            factors[position] = a
            product = nfold_product(factors).data
            assert np.allclose(product[mask], a.data[mask], atol=1e-12)

    def test_identity_table_is_normal_form_of_identity(self):
        for n, dim in [(3, 3), (4, 4), (5, 5)]:
            spec = NormalSpec(n, dim, identity_table(n, dim), require_antisymmetric=False)
            assert np.allclose(normal_matrix(spec).data, identity_matrix(n, dim).data)
        with pytest.raises(DomainError):
            identity_table(2, 3)

    def test_normal_form_requires_antisymmetric_table(self):
        with pytest.raises(TableValidationError):
            normal_matrix(NormalSpec(3, 3, PairTable(np.ones((3, 3)))))

    def test_rank_two_normal_form_is_zero(self, rng):
        spec = NormalSpec(2, 4, random_antisymmetric_table(4, rng))
        assert not normal_matrix(spec).data.any()

    def test_normal_form_lives_on_single_pair_tuples(self, rng):
        for n, dim in [(3, 4), (4, 4), (5, 5)]:
            c = normal_matrix(NormalSpec(n, dim, random_antisymmetric_table(dim, rng)))
            assert normal_form_defect(c) == 0.0

    def test_normal_form_component(self):
        values = np.array([[0.0, 1.0, 2.0], [-1.0, 0.0, 3.0], [-2.0, -3.0, 0.0]])
        c = normal_matrix(NormalSpec(3, 3, PairTable(values)))
        # (l, m, m): 一致位置は 2,3 番目、残りは l
        assert c.get((1, 2, 2)).real == pytest.approx(values[0, 1])
        assert c.get((3, 1, 3)).real == pytest.approx(values[0, 2])

    @pytest.mark.parametrize("dim", [3, 4, 5])
    def test_cubic_normal_form_agrees(self, rng, dim):
        table = random_antisymmetric_table(dim, rng)
        general = normal_matrix(NormalSpec(3, dim, table)).data
        assert np.allclose(normal_cubic_matrix(table).data, general, atol=1e-12)

    @pytest.mark.parametrize("n,dim", [(3, 3), (3, 5), (4, 5)])
    def test_annihilation_lemma(self, rng, n, dim):
        raw = random_matrix(n, dim, rng)
        b = GeneralizedMatrix(n, dim, np.where(distinct_mask(n, dim), 0.0, raw.data))
        normals = [normal_matrix(NormalSpec(n, dim, random_antisymmetric_table(dim, rng)))
                   for _ in range(n - 1)]
        assert annihilation_defect(b, normals) < 1e-12

    def test_reordering_sign(self):
        assert [reordering_sign(n) for n in range(3, 9)] == [1, -1, -1, 1, 1, -1]
        with pytest.raises(DomainError):
            reordering_sign(2)
