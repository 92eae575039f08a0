"""
コバウンダリ作用素・コサイクル判定・Ritz 欠陥のテスト
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from core.models.cochain import Cochain
from core.services.cohomology_service import (
    antisymmetrize,
    coboundary,
    cyclic_defect,
    is_cocycle,
    max_ritz_defect,
    ritz_defect,
    ritz_defect_array,
)
from core.services.spectrum_service import bohr_cochain

SEEDS = st.integers(min_value=0, max_value=2 ** 32 - 1)


class TestCoboundary:
    """δ の定義と δ∘δ = 0"""

    def test_one_cochain(self):
        e = np.array([0.5, -1.0, 2.0])
        assert np.array_equal(coboundary(e).values, e[None, :] - e[:, None])

    def test_arity_grows_by_one(self, rng):
        c = coboundary(Cochain(2, 3, rng.normal(size=(3, 3))))
        assert (c.arity, c.dim) == (3, 3)

    @settings(deadline=None, max_examples=25)
    @given(arity=st.integers(1, 3), dim=st.integers(2, 4), seed=SEEDS)
    def test_coboundary_squared_is_zero(self, arity, dim, seed):
        values = np.random.default_rng(seed).normal(size=(dim,) * arity)
        assert np.max(np.abs(coboundary(coboundary(values)).values)) < 1e-12

    def test_bohr_frequencies_are_cocycle(self, rng):
        ok, defect = is_cocycle(bohr_cochain(rng.normal(size=5)), 1e-10)
        assert ok
        assert defect < 1e-12

    def test_generic_antisymmetric_two_cochain_is_not_cocycle(self, rng):
        raw = rng.normal(size=(4, 4))
        ok, defect = is_cocycle(Cochain(2, 4, raw - raw.T), 1e-10)
        assert not ok
        assert defect > 1e-3


class TestRitz:
    """一般化 Ritz 則"""

    def test_single_entry_matches_array(self, rng):
        nu = antisymmetrize(rng.normal(size=(4, 4, 4)))
        array = ritz_defect_array(nu)
        assert ritz_defect(nu, (1, 3, 2), 4) == pytest.approx(array[0, 2, 1, 3])

    @pytest.mark.parametrize("n,dim", [(2, 4), (3, 4), (3, 5)])
    def test_ritz_defect_equals_coboundary(self, rng, n, dim):
        nu = antisymmetrize(rng.normal(size=(dim,) * n))
        delta = float(np.max(np.abs(coboundary(nu).values)))
        assert max_ritz_defect(nu) == pytest.approx(delta, rel=1e-12, abs=1e-14)

    def test_ritz_rule_holds_for_bohr_frequencies(self, rng):
        assert max_ritz_defect(bohr_cochain(rng.normal(size=4))) < 1e-12


class TestAntisymmetrize:
    """反対称化と巡回シフト"""

    def test_result_is_antisymmetric(self, rng):
        nu = antisymmetrize(rng.normal(size=(3, 3, 3)))
        assert nu.antisymmetry_defect() < 1e-14

    def test_idempotent(self, rng):
        nu = antisymmetrize(rng.normal(size=(4, 4, 4)))
        assert np.allclose(antisymmetrize(nu).values, nu.values)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_antisymmetric_cochain_is_cyclic(self, rng, n):
        nu = antisymmetrize(rng.normal(size=(4,) * n))
        for p in range(1, n):
            assert cyclic_defect(nu, p) < 1e-14
