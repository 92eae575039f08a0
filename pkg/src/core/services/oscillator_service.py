"""
フェルミオン的調和振動子サービス

n=2（2×2 行列）と n=3（3×3×3 立方行列）の閉形式解 ξ, η, 昇降演算子、
ハミルトニアンを構築し、反交換関係・一階方程式・運動方程式を検証する。
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.models.cochain import Cochain
from core.models.generalized_matrix import GeneralizedMatrix, levi_civita, lincomb, max_abs_diff
from core.models.physics_models import (
    EvolvingVariable,
    HamiltonianSet,
    OscillatorConfig,
    PairTable,
)
from core.services.algebra_service import (
    identity_matrix,
    nfold_anticommutator,
    nfold_commutator,
    nfold_product,
)
from core.services.cohomology_service import is_cocycle
from core.services.dynamics_service import (
    build_coboundary_set,
    build_hamiltonian_set,
    eom_residual,
    evolve,
    frequencies_for,
)
from core.services.spectrum_service import pairtable_from_potential
from utils.config_helper import get_tolerance
from utils.log_config import get_logger

logger = get_logger(__name__)

SQRT2 = math.sqrt(2.0)


@dataclass
class OscillatorCheck:
    """振動子の個別チェック結果"""
    check: str
    relation: str
    t: Optional[float]
    max_defect: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_defect <= self.tol

    def to_dict(self) -> Dict[str, Any]:
        return {
            "check": self.check,
            "relation": self.relation,
            "t": self.t,
            "max_defect": self.max_defect,
            "tol": self.tol,
            "pass": self.passed,
        }


@dataclass
class OscillatorReport:
    """verify_oscillator の結果"""
    rank: int
    omega: float
    hbar: float
    checks: List[OscillatorCheck] = field(default_factory=list)
    quantities: Dict[str, Any] = field(default_factory=dict)

    @property
    def all_passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.rank,
            "omega": self.omega,
            "hbar": self.hbar,
            "quantities": self.quantities,
            "checks": [check.to_dict() for check in self.checks],
            "pass": self.all_passed,
        }


class FermionicOscillatorService:
    """フェルミオン的調和振動子サービス"""

    def __init__(self, config: OscillatorConfig):
        """
        Args:
            config: 振動子設定（階数 2 または 3、角振動数、プランク定数）
        """
        self.config = config
        self.rank = config.rank
        self.dim = config.rank
        self.epsilon = levi_civita(self.rank, self.dim).values.astype(np.float64)
        logger.info("FermionicOscillatorService initialized.")

    # ------------------------------------------------------------------
    # 構成要素
    # ------------------------------------------------------------------

    def _phase(self, t: float) -> np.ndarray:
        return np.exp(-1j * self.config.omega * self.epsilon * t)

    def xi_eta(self, t: float) -> Tuple[GeneralizedMatrix, GeneralizedMatrix]:
        """ξ = (1/√2)|ε|e^{-iωεt}, η = (-i/√2)εe^{-iωεt}"""
        phase = self._phase(t)
        xi = GeneralizedMatrix(self.rank, self.dim, np.abs(self.epsilon) * phase / SQRT2)
        eta = GeneralizedMatrix(self.rank, self.dim, -1j * self.epsilon * phase / SQRT2)
        return xi, eta

    def ladder(self, t: float) -> Tuple[GeneralizedMatrix, GeneralizedMatrix]:
        """C = (ξ + iη)/√2, C† = (ξ - iη)/√2"""
        xi, eta = self.xi_eta(t)
        return lincomb(1 / SQRT2, xi, 1j / SQRT2, eta), lincomb(1 / SQRT2, xi, -1j / SQRT2, eta)

    def pair_epsilon(self) -> np.ndarray:
        """ε_{lm} = Σ_k ε_{lmk}（n=3）"""
        return self.epsilon.sum(axis=2)

    def hamiltonian_table(self) -> PairTable:
        """
        n=2: エネルギー準位 (-ħω/2, +ħω/2) の Bohr テーブル
        n=3: H_1 のテーブル h̃_{lm} = -(ħω/6)ε_{lm}（組合せ則を満たさない）
        """
        hbar_omega = self.config.constants.hbar * self.config.omega
        if self.rank == 2:
            return pairtable_from_potential([-hbar_omega / 2, hbar_omega / 2])
        return PairTable(-(hbar_omega / 6.0) * self.pair_epsilon())

    def hamiltonians(self) -> HamiltonianSet:
        """n=2 は対角 H、n=3 は H_1（正規形）と H_2 = I"""
        if self.rank == 2:
            return build_hamiltonian_set([self.hamiltonian_table()], self.config.constants)
        return build_coboundary_set([self.hamiltonian_table()], self.config.constants)

    def hamiltonian_constructions(self, t: float) -> Dict[str, GeneralizedMatrix]:
        """
        同じハミルトニアンの別構成

        n=2: iħω·ξη, (ħω/2)[C†, C], ħω(C†C - δ/2)
        n=3: i(ħω/6)[η, I, ξ], (ħω/6)[C, I, C†], 正規形。公表された順序 i(ħω/6)[ξ, I, η] も併記
        """
        hbar_omega = self.config.constants.hbar * self.config.omega
        xi, eta = self.xi_eta(t)
        c, c_dag = self.ladder(t)
        if self.rank == 2:
            delta = identity_matrix(2, 2)
            return {
                "xi_eta": nfold_product([xi, eta]) * (1j * hbar_omega),
                "ladder_commutator": nfold_commutator([c_dag, c]) * (hbar_omega / 2),
                "number_operator": lincomb(hbar_omega, nfold_product([c_dag, c]), -hbar_omega / 2, delta),
            }
        identity = identity_matrix(3, 3)
        return {
            "eta_identity_xi": nfold_commutator([eta, identity, xi]) * (1j * hbar_omega / 6),
            "ladder_commutator": nfold_commutator([c, identity, c_dag]) * (hbar_omega / 6),
            "normal_form": self.hamiltonians().matrices[0],
            "published_order": nfold_commutator([xi, identity, eta]) * (1j * hbar_omega / 6),
        }

    def frequencies(self) -> Cochain:
        """n=2: Bohr 振動数、n=3: ν̃ = -(ω/2π)ε"""
        return frequencies_for(self.hamiltonians())

    # ------------------------------------------------------------------
    # 検証
    # ------------------------------------------------------------------

    def _anticommutator_checks(self, t: float, tol: float) -> List[OscillatorCheck]:
        xi, eta = self.xi_eta(t)
        c, c_dag = self.ladder(t)
        checks = []
        if self.rank == 2:
            unit = identity_matrix(2, 2)
            zero = unit * 0.0
            relations = [
                ("anticommutator_xi_xi", [xi, xi], unit),
                ("anticommutator_eta_eta", [eta, eta], unit),
                ("anticommutator_xi_eta", [xi, eta], zero),
                ("anticommutator_c_cdag", [c, c_dag], unit),
                ("anticommutator_c_c", [c, c], zero),
                ("anticommutator_cdag_cdag", [c_dag, c_dag], zero),
            ]
        else:
            unit = identity_matrix(3, 3)
            zero = unit * 0.0
            relations = [
                ("anticommutator_xi_i_xi", [xi, unit, xi], unit),
                ("anticommutator_eta_i_eta", [eta, unit, eta], unit),
                ("anticommutator_xi_i_eta", [xi, unit, eta], zero),
                ("anticommutator_c_i_cdag", [c, unit, c_dag], unit),
                ("anticommutator_c_i_c", [c, unit, c], zero),
                ("anticommutator_cdag_i_cdag", [c_dag, unit, c_dag], zero),
            ]
        for name, args, expected in relations:
            checks.append(OscillatorCheck(
                name, "fermionic anti-commutation relation", t,
                max_abs_diff(nfold_anticommutator(args), expected), tol,
            ))
        return checks

    def _first_order_checks(self, t: float, tol_fd: float) -> List[OscillatorCheck]:
        """dξ/dt = ωη, dη/dt = -ωξ, dC/dt = -iωC, d²ξ/dt² = -ω²ξ（中心差分）"""
        omega = self.config.omega
        step = 1e-4 / omega
        xi_p, eta_p = self.xi_eta(t + step)
        xi_m, eta_m = self.xi_eta(t - step)
        xi, eta = self.xi_eta(t)
        c_p, _ = self.ladder(t + step)
        c_m, _ = self.ladder(t - step)
        c, _ = self.ladder(t)

        def relative(numeric: np.ndarray, exact: np.ndarray) -> float:
            return float(np.max(np.abs(numeric - exact)) / max(float(np.max(np.abs(exact))), 1e-300))

        d_xi = (xi_p.data - xi_m.data) / (2 * step)
        d_eta = (eta_p.data - eta_m.data) / (2 * step)
        d_c = (c_p.data - c_m.data) / (2 * step)
        d2_xi = (xi_p.data - 2 * xi.data + xi_m.data) / step ** 2
        return [
            OscillatorCheck("dxi_dt", "first-order oscillator equation", t,
                            relative(d_xi, omega * eta.data), tol_fd),
            OscillatorCheck("deta_dt", "first-order oscillator equation", t,
                            relative(d_eta, -omega * xi.data), tol_fd),
            OscillatorCheck("dc_dt", "ladder operator equation", t,
                            relative(d_c, -1j * omega * c.data), tol_fd),
            OscillatorCheck("d2xi_dt2", "simple harmonic motion", t,
                            relative(d2_xi, -omega ** 2 * xi.data), tol_fd),
        ]

    def _heisenberg_checks(self, t: float, tol: float) -> List[OscillatorCheck]:
        hamiltonians = self.hamiltonians()
        nu = self.frequencies()
        xi0, eta0 = self.xi_eta(0.0)
        c0, c_dag0 = self.ladder(0.0)
        scale = max(self.config.omega, 1.0)
        checks = []
        for name, initial in (("xi", xi0), ("eta", eta0), ("c", c0), ("cdag", c_dag0)):
            residual = eom_residual(EvolvingVariable(initial, nu), hamiltonians, t)
            checks.append(OscillatorCheck(
                f"heisenberg_eom_{name}", "generalized Heisenberg equation of motion", t,
                residual, tol * scale,
            ))
        xi_t, _ = self.xi_eta(t)
        evolved = EvolvingVariable(xi0, nu)
        checks.append(OscillatorCheck(
            "closed_form_evolution", "phase evolution A(0)exp(2πiνt)", t,
            max_abs_diff(evolve(evolved, t), xi_t), tol,
        ))
        return checks

    def _hamiltonian_checks(self, times: Sequence[float], tol: float) -> List[OscillatorCheck]:
        scale = max(self.config.constants.hbar * self.config.omega, 1.0)
        reference = self.hamiltonian_constructions(0.0)
        canonical = self.hamiltonians().matrices[0]
        checks = []
        for t in times:
            constructions = self.hamiltonian_constructions(t)
            for name, matrix in constructions.items():
                if name == "published_order":
                    continue
                checks.append(OscillatorCheck(
                    f"hamiltonian_{name}", "Hamiltonian construction agreement", t,
                    max_abs_diff(matrix, canonical), tol * scale,
                ))
            time_defect = max(max_abs_diff(constructions[k], reference[k]) for k in constructions)
            checks.append(OscillatorCheck(
                "hamiltonian_time_independence", "Hamiltonian is time independent", t,
                time_defect, tol * scale,
            ))
        return checks

    def verify(self, times: Sequence[float]) -> OscillatorReport:
        """指定時刻での全関係式のチェック"""
        try:
            logger.info(f"🚀 振動子検証開始: n={self.rank}, ω={self.config.omega}, 時刻数={len(times)}")
            tol = get_tolerance("oscillator")
            tol_fd = get_tolerance("finite_difference_relative")
            report = OscillatorReport(self.rank, self.config.omega, self.config.constants.hbar)

            for t in times:
                report.checks.extend(self._anticommutator_checks(t, tol))
                report.checks.extend(self._first_order_checks(t, tol_fd))
                report.checks.extend(self._heisenberg_checks(t, get_tolerance("eom")))
            report.checks.extend(self._hamiltonian_checks(times, tol))

            nu = self.frequencies()
            hbar_omega = self.config.constants.hbar * self.config.omega
            if self.rank == 3:
                expected = -(self.config.omega / (2 * math.pi)) * self.epsilon
                report.checks.append(OscillatorCheck(
                    "nu_tilde_levi_civita", "oscillator frequency -(ω/2π)ε", None,
                    float(np.max(np.abs(nu.values - expected))), tol,
                ))
                _, cocycle_defect = is_cocycle(nu, tol)
                report.checks.append(OscillatorCheck(
                    "nu_tilde_cocycle", "frequency cocycle condition", None, cocycle_defect, tol,
                ))
                published = self.hamiltonian_constructions(0.0)["published_order"]
                report.quantities.update({
                    "nu_tilde_123": nu.get((1, 2, 3)),
                    "H1_122": self.hamiltonians().matrices[0].get((1, 2, 2)).real,
                    "published_order_H1_122": published.get((1, 2, 2)).real,
                })
            else:
                energies = self.hamiltonians().matrices[0]
                report.checks.append(OscillatorCheck(
                    "bohr_frequency_12", "Bohr frequency condition", None,
                    abs(nu.get((1, 2)) + self.config.omega / (2 * math.pi)), tol,
                ))
                report.quantities.update({
                    "H_diagonal": [energies.get((1, 1)).real, energies.get((2, 2)).real],
                    "H_diagonal_in_hbar_omega": [energies.get((1, 1)).real / hbar_omega,
                                                 energies.get((2, 2)).real / hbar_omega],
                    "nu_12": nu.get((1, 2)),
                })

            failed = [c.check for c in report.checks if not c.passed]
            if failed:
                logger.warning(f"⚠️ 振動子検証で不合格: {sorted(set(failed))}")
            else:
                logger.info(f"✅ 振動子検証完了: {len(report.checks)} 件すべて合格")
            return report

        except Exception as e:
            logger.error(f"❌ 振動子検証エラー: {e}")
            raise


def verify_oscillator(config: OscillatorConfig, times: Sequence[float]) -> OscillatorReport:
    """設定と評価時刻から振動子の関係式を検証"""
    return FermionicOscillatorService(config).verify(times)
