"""
一般化行列力学システム - コマンドライン

verify / spectrum / oscillator / nambu の各サブコマンドを提供するエントリーポイント。
終了コード: 0 合格, 1 チェック不合格, 2 使い方・入力エラー, 3 入出力エラー, 4 発散
"""

import argparse
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

# プロジェクトルートをPythonパスに追加
src_root = Path(__file__).parent.parent  # src/ ディレクトリ
if str(src_root) not in sys.path:
    sys.path.insert(0, str(src_root))

import numpy as np

from core.models.physics_models import OscillatorConfig, PlanckConstants
from core.models.report_models import SuiteName
from core.services.cohomology_service import is_cocycle, max_ritz_defect
from core.services.dynamics_service import eigenvalue_cochain, frequencies_for
from core.services.nambu_service import integrate
from core.services.oscillator_service import verify_oscillator
from core.workflows.verification_engine import VerificationEngine
from infrastructure.storage.input_loader import hamiltonians_from_spec, load_input_spec, load_nambu_system
from infrastructure.storage.report_storage import ReportStorageManager, dumps_report
from utils.config_helper import (
    get_default_dt,
    get_default_hbar,
    get_default_omega,
    get_tolerance,
    get_verify_defaults,
)
from utils.errors import DivergenceError, ExitCode, InputSpecError, MatrixMechanicsError
from utils.index_tools import distinct_mask, sorted_distinct_tuples
from utils.log_config import debug_log, get_logger, setup_logging

setup_logging()
logger = get_logger(__name__)


# ---------------------------------------------------------------------------
# 引数の型
# ---------------------------------------------------------------------------

def _at_least_two(text: str) -> int:
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError(f"2 以上の整数が必要です: {text}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"正の値が必要です: {text}")
    return value


def _float_list(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"カンマ区切りの数値が必要です: {text}")


def build_parser() -> argparse.ArgumentParser:
    """サブコマンド付きの引数パーサー"""
    defaults = get_verify_defaults()
    parser = argparse.ArgumentParser(
        prog="gmm",
        description="一般化行列力学の数値検証ツール",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    verify = subparsers.add_parser("verify", help="検証スイートを実行して JSON レポートを出力")
    verify.add_argument("--n", type=_at_least_two, default=defaults["n"], help="添字数 n (≥ 2)")
    verify.add_argument("--dim", type=_at_least_two, default=defaults["dim"], help="レベル数 N (≥ 2)")
    verify.add_argument("--seed", type=int, default=defaults["seed"], help="乱数シード")
    verify.add_argument("--tol", type=_positive_float, default=None, help="スケール付き恒等式の許容誤差")
    verify.add_argument("--suite", choices=list(SuiteName.ALL) + ["all"], default="all", help="実行するスイート")
    verify.add_argument("--out", default=None, help="レポートの出力先（未指定で標準出力）")

    spectrum = subparsers.add_parser("spectrum", help="入力ファイルから振動数コチェインを出力")
    spectrum.add_argument("--input", required=True, help="入力 JSON")
    spectrum.add_argument("--out", default=None, help="出力先（未指定で標準出力）")

    oscillator = subparsers.add_parser("oscillator", help="フェルミオン的振動子の関係式を検証")
    oscillator.add_argument("--n", type=int, choices=(2, 3), required=True, help="添字数 (2 または 3)")
    oscillator.add_argument("--omega", type=_positive_float, default=get_default_omega(), help="角振動数 ω (> 0)")
    oscillator.add_argument("--hbar", type=_positive_float, default=get_default_hbar(), help="換算プランク定数")
    oscillator.add_argument("--times", type=_float_list, default=[0.0, 0.3, 1.7], help="評価時刻 t1,t2,...")
    oscillator.add_argument("--out", default=None, help="出力先（未指定で標準出力）")

    nambu = subparsers.add_parser("nambu", help="古典 Nambu 方程式を積分して軌道 CSV を出力")
    nambu.add_argument("--system", required=True, help="システムファイル (JSON)")
    nambu.add_argument("--x0", type=_float_list, required=True, help="初期値 x1,x2,...")
    nambu.add_argument("--t1", type=float, required=True, help="終了時刻")
    nambu.add_argument("--dt", type=_positive_float, default=get_default_dt(), help="時間刻み")
    nambu.add_argument("--out", required=True, help="軌道 CSV の出力先")
    nambu.add_argument("--summary", default=None, help="保存量サマリー JSON の出力先（未指定で標準出力）")
    return parser


def _emit(payload: Dict, out: Optional[str], storage: ReportStorageManager):
    if out:
        storage.save_json(payload, out)
    else:
        sys.stdout.write(dumps_report(payload))


# ---------------------------------------------------------------------------
# サブコマンド
# ---------------------------------------------------------------------------

def cmd_verify(args: argparse.Namespace, storage: ReportStorageManager) -> int:
    """検証スイートを実行（レポートは不合格時も出力）"""
    suites = list(SuiteName.ALL) if args.suite == "all" else [args.suite]
    report = VerificationEngine().run(args.n, args.dim, args.seed, suites=suites, tol=args.tol)
    _emit(report.to_dict(), args.out, storage)
    return ExitCode.SUCCESS if report.all_passed else ExitCode.CHECK_FAILED


def spectrum_payload(input_path: str) -> Dict:
    """入力ファイルから振動数と各欠陥をまとめる"""
    spec = load_input_spec(input_path)
    hamiltonians, _ = hamiltonians_from_spec(spec)
    nu = frequencies_for(hamiltonians)
    tol = spec.tolerances.get("cocycle", get_tolerance("cocycle"))
    cocycle, cocycle_defect = is_cocycle(nu, tol)

    f = eigenvalue_cochain(hamiltonians).values
    mask = distinct_mask(spec.n, spec.dim)
    probe_defect = float(np.max(np.abs(f[mask] + hamiltonians.constants.h * nu.values[mask]))) if mask.any() else 0.0
    debug_log(logger, f"固有値プローブの欠陥: {probe_defect:.3e}", "spectrum")

    return {
        "n": spec.n,
        "N": spec.dim,
        "hbar": spec.hbar,
        "branch": spec.branch,
        "nu": [{"idx": list(idx), "value": nu.get(idx)} for idx in sorted_distinct_tuples(spec.n, spec.dim)],
        "cocycle_defect": cocycle_defect,
        "is_cocycle": cocycle,
        "ritz_defect_max": max_ritz_defect(nu),
        "eigenvalue_probe_defect": probe_defect,
    }


def cmd_spectrum(args: argparse.Namespace, storage: ReportStorageManager) -> int:
    """振動数コチェインの出力"""
    _emit(spectrum_payload(args.input), args.out, storage)
    return ExitCode.SUCCESS


def cmd_oscillator(args: argparse.Namespace, storage: ReportStorageManager) -> int:
    """振動子の関係式の検証"""
    if not args.times:
        raise InputSpecError("評価時刻がありません", field="times")
    config = OscillatorConfig(args.n, args.omega, PlanckConstants(args.hbar))
    report = verify_oscillator(config, args.times)
    payload = report.to_dict()
    payload["times"] = list(args.times)
    _emit(payload, args.out, storage)
    return ExitCode.SUCCESS if report.all_passed else ExitCode.CHECK_FAILED


def _nambu_summary(system, trajectory, args, status: str) -> Dict:
    drift = (np.max(np.abs(trajectory.invariants - trajectory.invariants[0]), axis=0)
             if len(trajectory.times) else np.zeros(system.dim - 1))
    return {
        "system": system.name,
        "dim": system.dim,
        "expressions": list(system.expressions or []),
        "x0": list(args.x0),
        "t1": args.t1,
        "dt": args.dt,
        "steps": max(len(trajectory.times) - 1, 0),
        "final_point": trajectory.points[-1].tolist() if len(trajectory.times) else list(args.x0),
        "max_drift": {f"H{a + 1}": float(value) for a, value in enumerate(drift)},
        "status": status,
        "trajectory_csv": args.out,
    }


def cmd_nambu(args: argparse.Namespace, storage: ReportStorageManager) -> int:
    """Nambu 方程式の積分（発散時は途中までの軌道を出力）"""
    system = load_nambu_system(args.system)
    if len(args.x0) != system.dim:
        raise InputSpecError(f"初期値の次元 {len(args.x0)} が系の次元 {system.dim} と一致しません", field="x0")
    try:
        trajectory = integrate(system, args.x0, args.t1, args.dt)
    except DivergenceError as e:
        storage.save_trajectory(e.partial, args.out)
        _emit(_nambu_summary(system, e.partial, args, "diverged"), args.summary, storage)
        raise
    storage.save_trajectory(trajectory, args.out)
    _emit(_nambu_summary(system, trajectory, args, "completed"), args.summary, storage)
    return ExitCode.SUCCESS


COMMANDS = {
    "verify": cmd_verify,
    "spectrum": cmd_spectrum,
    "oscillator": cmd_oscillator,
    "nambu": cmd_nambu,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """コマンドラインのエントリーポイント"""
    args = build_parser().parse_args(argv)
    storage = ReportStorageManager()
    try:
        logger.info(f"🚀 コマンド開始: {args.command}")
        code = COMMANDS[args.command](args, storage)
        logger.info(f"✅ コマンド終了: {args.command} (exit {code})")
        return code
    except MatrixMechanicsError as e:
        logger.error(f"❌ {args.command} エラー: {e}")
        sys.stderr.write(dumps_report({"error": e.to_dict()}))
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
