"""
フェルミオン的調和振動子（n=2, n=3）のテスト
"""

import math

import numpy as np
import pytest

from core.models.physics_models import OscillatorConfig, PlanckConstants
from core.services.algebra_service import identity_matrix, nfold_anticommutator
from core.services.oscillator_service import FermionicOscillatorService, verify_oscillator
from utils.errors import DomainError


@pytest.fixture(params=[2, 3])
def service(request):
    return FermionicOscillatorService(OscillatorConfig(request.param, omega=1.3))


class TestConfig:
    """設定の検証"""

    def test_rank_must_be_two_or_three(self):
        with pytest.raises(DomainError):
            OscillatorConfig(4)

    def test_omega_must_be_positive(self):
        with pytest.raises(DomainError):
            OscillatorConfig(3, omega=0.0)


class TestClosedForms:
    """ξ, η, C の閉形式"""

    def test_anticommutators(self, service):
        xi, eta = service.xi_eta(0.8)
        unit = identity_matrix(service.rank, service.dim)
        if service.rank == 2:
            assert np.allclose(nfold_anticommutator([xi, xi]).data, unit.data)
            assert np.allclose(nfold_anticommutator([xi, eta]).data, 0.0)
        else:
            assert np.allclose(nfold_anticommutator([xi, unit, xi]).data, unit.data)
            assert np.allclose(nfold_anticommutator([eta, unit, eta]).data, unit.data)

    def test_ladder_operators_rotate_with_phase(self, service):
        c0, _ = service.ladder(0.0)
        c_t, _ = service.ladder(0.5)
        assert np.allclose(c_t.data, c0.data * np.exp(-1j * 1.3 * 0.5))

    def test_rank_three_frequency_is_levi_civita(self):
        service = FermionicOscillatorService(OscillatorConfig(3, omega=2.0))
        expected = -(2.0 / (2 * math.pi)) * service.epsilon
        assert np.allclose(service.frequencies().values, expected)

    def test_rank_two_energy_levels(self):
        service = FermionicOscillatorService(OscillatorConfig(2, omega=2.0, constants=PlanckConstants(0.5)))
        h = service.hamiltonians().matrices[0]
        assert h.get((1, 1)).real == pytest.approx(-0.5)
        assert h.get((2, 2)).real == pytest.approx(0.5)

    def test_hamiltonian_constructions_agree(self, service):
        constructions = service.hamiltonian_constructions(1.1)
        canonical = service.hamiltonians().matrices[0].data
        for name, matrix in constructions.items():
            if name == "published_order":
                continue
            assert np.allclose(matrix.data, canonical, atol=1e-12), name

    def test_published_order_has_opposite_sign(self):
        service = FermionicOscillatorService(OscillatorConfig(3))
        constructions = service.hamiltonian_constructions(0.0)
        assert np.allclose(constructions["published_order"].data, -constructions["normal_form"].data)


class TestVerify:
    """verify の全チェック"""

    def test_all_checks_pass(self, service):
        report = service.verify([0.0, 0.4, 2.5])
        failed = [c.check for c in report.checks if not c.passed]
        assert failed == []
        assert report.all_passed

    def test_report_dict(self, service):
        payload = service.verify([0.3]).to_dict()
        assert payload["n"] == service.rank
        assert payload["pass"] is True
        names = {check["check"] for check in payload["checks"]}
        assert "heisenberg_eom_xi" in names
        assert "dxi_dt" in names
        if service.rank == 3:
            assert payload["quantities"]["nu_tilde_123"] == pytest.approx(-1.3 / (2 * math.pi))
        else:
            assert payload["quantities"]["nu_12"] == pytest.approx(-1.3 / (2 * math.pi))


def test_verify_oscillator_function():
    report = verify_oscillator(OscillatorConfig(2, 1.0), [0.0, 0.3, 1.7])
    assert report.all_passed
    assert report.rank == 2
