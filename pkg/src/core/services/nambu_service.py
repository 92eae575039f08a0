"""
古典 Nambu 力学サービス

有限差分ヤコビアンによる Nambu 括弧、Nambu 方程式の RK4 積分、
保存量の監視、括弧の基本性質（歪対称性・線形性・基本恒等式・導分則）の数値検証。
"""

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
import sympy as sp

from core.models.physics_models import NambuSystem, Trajectory
from utils.config_helper import get_divergence_threshold, get_fd_step_scale
from utils.errors import ArityError, DivergenceError, DomainError, MatrixMechanicsError
from utils.log_config import debug_log, get_logger

logger = get_logger(__name__)

ScalarFunction = Callable[[np.ndarray], float]


# ---------------------------------------------------------------------------
# 括弧
# ---------------------------------------------------------------------------

def _fd_steps(x: np.ndarray, fd_step: Optional[float], scale: float) -> np.ndarray:
    if fd_step is not None:
        return np.full(x.shape, float(fd_step))
    return scale * (1.0 + np.abs(x))


def jacobian_fd(funcs: Sequence[ScalarFunction], x: Sequence[float], fd_step: Optional[float] = None,
                scale: Optional[float] = None) -> np.ndarray:
    """中心差分ヤコビアン J[a][i] = ∂f_a/∂x_i"""
    x = np.asarray(x, dtype=np.float64)
    steps = _fd_steps(x, fd_step, scale if scale is not None else get_fd_step_scale())
    jacobian = np.empty((len(funcs), x.size))
    for i in range(x.size):
        forward, backward = x.copy(), x.copy()
        forward[i] += steps[i]
        backward[i] -= steps[i]
        for a, func in enumerate(funcs):
            upper, lower = float(func(forward)), float(func(backward))
            if not (math.isfinite(upper) and math.isfinite(lower)):
                raise MatrixMechanicsError(
                    f"関数値が有限ではありません (関数 {a + 1}, 点 {x.tolist()})",
                    {"function": a + 1},
                )
            jacobian[a, i] = (upper - lower) / (2.0 * steps[i])
    return jacobian


def nambu_bracket(funcs: Sequence[ScalarFunction], x: Sequence[float], fd_step: Optional[float] = None) -> float:
    """{f_1, …, f_n}_NB = det ∂(f_1…f_n)/∂(x_1…x_n)（中心差分）"""
    x = np.asarray(x, dtype=np.float64)
    if len(funcs) != x.size:
        raise ArityError(f"Nambu 括弧には {x.size} 個の関数が必要です（{len(funcs)} 個指定）")
    return float(np.linalg.det(jacobian_fd(funcs, x, fd_step)))


def bracket_expression(exprs: Sequence[sp.Expr], symbols: Sequence[sp.Symbol]) -> sp.Expr:
    """多項式の厳密な Nambu 括弧（記号式）"""
    if len(exprs) != len(symbols):
        raise ArityError(f"Nambu 括弧には {len(symbols)} 個の式が必要です（{len(exprs)} 個指定）")
    return sp.Matrix(list(exprs)).jacobian(list(symbols)).det(method="berkowitz")


def nambu_bracket_exact(exprs: Sequence[sp.Expr], symbols: Sequence[sp.Symbol], x: Sequence[float]) -> float:
    """厳密な Nambu 括弧の数値"""
    func = sp.lambdify(list(symbols), bracket_expression(exprs, symbols), "numpy")
    return float(func(*np.asarray(x, dtype=np.float64)))


# ---------------------------------------------------------------------------
# 系の構築
# ---------------------------------------------------------------------------

def state_symbols(dim: int) -> List[sp.Symbol]:
    """状態変数 x1..xn"""
    return list(sp.symbols(f"x1:{dim + 1}", real=True))


def build_polynomial_system(expressions: Sequence, dim: int, name: str = "nambu-system",
                            fd_step_scale: Optional[float] = None,
                            exact_derivatives: bool = True) -> NambuSystem:
    """式（文字列または sympy 式）から Nambu 系を作る（勾配は sympy で厳密に求める）"""
    symbols = state_symbols(dim)
    local = {str(s): s for s in symbols}
    exprs = [sp.sympify(e, locals=local) if isinstance(e, str) else sp.sympify(e) for e in expressions]
    unknown = set().union(*(e.free_symbols for e in exprs)) - set(symbols)
    if unknown:
        raise DomainError(f"未知の変数が含まれています: {sorted(map(str, unknown))}")

    def scalar(expr):
        func = sp.lambdify(symbols, expr, "numpy")
        return lambda x: float(func(*x))

    def gradient(expr):
        func = sp.lambdify(symbols, [sp.diff(expr, s) for s in symbols], "numpy")
        return lambda x: np.asarray(func(*x), dtype=np.float64)

    return NambuSystem(
        dim=dim,
        hamiltonians=[scalar(e) for e in exprs],
        fd_step_scale=fd_step_scale or get_fd_step_scale(),
        gradients=[gradient(e) for e in exprs] if exact_derivatives else None,
        expressions=[str(e) for e in exprs],
        name=name,
    )


def rigid_body_system(moments: Sequence[float] = (1.0, 2.0, 3.0)) -> NambuSystem:
    """デモ用の剛体型系: H1 = |x|²/2, H2 = Σ x_i²/(2 I_i)"""
    x1, x2, x3 = state_symbols(3)
    h1 = (x1 ** 2 + x2 ** 2 + x3 ** 2) / 2
    h2 = (x1 ** 2 / moments[0] + x2 ** 2 / moments[1] + x3 ** 2 / moments[2]) / 2
    return build_polynomial_system([h1, h2], 3, name="rigid-body-demo")


def harmonic_oscillator_system() -> NambuSystem:
    """n=2 の調和振動子 H = (q² + p²)/2"""
    q, p = state_symbols(2)
    return build_polynomial_system([(q ** 2 + p ** 2) / 2], 2, name="harmonic-oscillator")


# ---------------------------------------------------------------------------
# 積分
# ---------------------------------------------------------------------------

def _gradients(system: NambuSystem, x: np.ndarray) -> np.ndarray:
    if system.gradients is not None:
        return np.stack([grad(x) for grad in system.gradients])
    return jacobian_fd(system.hamiltonians, x, scale=system.fd_step_scale)


def nambu_rhs(system: NambuSystem, x: Sequence[float]) -> np.ndarray:
    """dx_i/dt = {x_i, H_1, …, H_{n-1}}_NB"""
    x = np.asarray(x, dtype=np.float64)
    grads = _gradients(system, x)
    n = system.dim
    blocks = np.zeros((n, n, n))
    blocks[:, 0, :] = np.eye(n)
    blocks[:, 1:, :] = grads[None, :, :]
    return np.linalg.det(blocks)


def rk4_step(system: NambuSystem, x: np.ndarray, dt: float) -> np.ndarray:
    """古典的 RK4 の 1 ステップ"""
    k1 = nambu_rhs(system, x)
    k2 = nambu_rhs(system, x + 0.5 * dt * k1)
    k3 = nambu_rhs(system, x + 0.5 * dt * k2)
    k4 = nambu_rhs(system, x + dt * k3)
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate(system: NambuSystem, x0: Sequence[float], t1: float, dt: float,
              divergence_threshold: Optional[float] = None) -> Trajectory:
    """
    固定ステップ RK4 で [0, t1] を積分し、各ステップの保存量を記録する

    ノルムが閾値を超えるか非有限になった場合は途中までの軌道を持つ DivergenceError。
    """
    if not dt > 0:
        raise DomainError(f"dt は正の値が必要です: {dt}")
    x = np.asarray(x0, dtype=np.float64)
    if x.size != system.dim:
        raise ArityError(f"初期値の次元 {x.size} が系の次元 {system.dim} と一致しません")
    threshold = divergence_threshold or get_divergence_threshold()
    steps = max(int(round(t1 / dt)), 0)

    times = np.empty(steps + 1)
    points = np.empty((steps + 1, system.dim))
    invariants = np.empty((steps + 1, system.dim - 1))
    times[0], points[0], invariants[0] = 0.0, x, system.invariants(x)

    logger.info(f"🚀 Nambu 積分開始: {system.name}, t1={t1}, dt={dt}, steps={steps}")
    for step in range(1, steps + 1):
        x = rk4_step(system, x, dt)
        if not np.all(np.isfinite(x)) or np.linalg.norm(x) > threshold:
            partial = Trajectory(times[:step], points[:step], invariants[:step])
            logger.error(f"❌ Nambu 積分が発散しました: step={step}, t={step * dt:.6g}")
            raise DivergenceError(
                f"積分が発散しました (t={step * dt:.6g})",
                partial=partial,
                details={"step": step, "t": step * dt},
            )
        times[step] = step * dt
        points[step] = x
        invariants[step] = system.invariants(x)

    trajectory = Trajectory(times, points, invariants)
    logger.info(f"✅ Nambu 積分完了: 保存量ドリフト={trajectory.max_drift():.3e}")
    return trajectory


def convergence_order(coarse_error: float, fine_error: float, step_ratio: float = 2.0) -> float:
    """
    誤差比から観測次数 log(coarse/fine)/log(step_ratio)

    fine_error = 0 で coarse_error > 0 なら inf（細かい刻みで厳密）、
    coarse_error = 0 なら次数は定まらないので nan。
    """
    if coarse_error == 0.0:
        return math.nan
    if fine_error == 0.0:
        return math.inf
    return math.log(coarse_error / fine_error) / math.log(step_ratio)


def observed_order(system: NambuSystem, x0: Sequence[float], t1: float, dt: float) -> float:
    """dt, dt/2, dt/4 の 3 段階の終点差から収束次数を推定"""
    finals = [integrate(system, x0, t1, dt / 2 ** level).points[-1] for level in range(3)]
    coarse = float(np.linalg.norm(finals[0] - finals[1]))
    fine = float(np.linalg.norm(finals[1] - finals[2]))
    order = convergence_order(coarse, fine)
    debug_log(logger, f"RK4 観測次数: {order:.3f}", "nambu")
    return order


def oscillation_period(trajectory: Trajectory, component: int = 0) -> float:
    """上向きゼロ交差（線形補間）の間隔の平均"""
    values = trajectory.points[:, component]
    times = trajectory.times
    crossings = []
    for i in range(len(values) - 1):
        if values[i] < 0.0 <= values[i + 1]:
            fraction = -values[i] / (values[i + 1] - values[i])
            crossings.append(times[i] + fraction * (times[i + 1] - times[i]))
    if len(crossings) < 2:
        raise DomainError("周期の推定には上向きゼロ交差が 2 回以上必要です")
    return float(np.mean(np.diff(crossings)))


@dataclass
class ReductionResult:
    """n=3 → ハミルトン系の縮約チェック結果"""
    max_deviation: float
    t1: float
    dt: float
    reference_dt: float


def stormer_verlet(force: Callable[[float], float], q0: float, p0: float, t1: float, dt: float) -> np.ndarray:
    """2 次元 (q, p) の Störmer–Verlet 参照解（H = p²/2 + V(q)）"""
    steps = int(round(t1 / dt))
    q, p = q0, p0
    path = np.empty((steps + 1, 2))
    path[0] = (q, p)
    for step in range(1, steps + 1):
        p_half = p + 0.5 * dt * force(q)
        q = q + dt * p_half
        p = p_half + 0.5 * dt * force(q)
        path[step] = (q, p)
    return path


def reduction_check(potential, x0: Sequence[float], t1: float, dt: float,
                    refinement: int = 8) -> ReductionResult:
    """
    H_1 = x2²/2 + V(x1), H_2 = x3 の 3 変数 Nambu 流と、(x1, x2) の 2 次元参照解を比較する

    V は x1 の式（文字列可）。参照解は刻み dt/refinement の Störmer–Verlet。
    """
    x1, x2, x3 = state_symbols(3)
    if isinstance(potential, str):
        potential = sp.sympify(potential, locals={"x1": x1})
    if potential.free_symbols - {x1}:
        raise DomainError(f"ポテンシャルは x1 のみの式が必要です: {potential}")
    h1 = x2 ** 2 / 2 + potential
    system = build_polynomial_system([h1, x3], 3, name="hamiltonian-reduction")
    trajectory = integrate(system, x0, t1, dt)

    force_fn = sp.lambdify(x1, -sp.diff(potential, x1), "numpy")
    reference_dt = dt / refinement
    span = (len(trajectory.times) - 1) * dt
    reference = stormer_verlet(lambda q: float(force_fn(q)), float(x0[0]), float(x0[1]), span, reference_dt)
    sampled = reference[::refinement]
    deviation = float(np.max(np.abs(trajectory.points[:, :2] - sampled)))
    logger.info(f"✅ ハミルトン縮約チェック: 最大偏差={deviation:.3e}")
    return ReductionResult(deviation, t1, dt, reference_dt)


# ---------------------------------------------------------------------------
# 括弧の基本性質
# ---------------------------------------------------------------------------

def random_polynomial(symbols: Sequence[sp.Symbol], rng: np.random.Generator, degree: int = 3,
                      terms: int = 4) -> sp.Expr:
    """整数係数の乱数多項式（次数 degree 以下、terms 項）"""
    expr = sp.Integer(0)
    for _ in range(terms):
        powers = rng.integers(0, degree + 1, size=len(symbols))
        while powers.sum() > degree:
            powers[rng.integers(0, len(symbols))] -= 1
            powers = np.maximum(powers, 0)
        coefficient = int(rng.integers(-3, 4)) or 1
        monomial = sp.Integer(coefficient)
        for symbol, power in zip(symbols, powers):
            monomial *= symbol ** int(power)
        expr += monomial
    return expr


def _relative_defect(lhs: float, rhs_terms: Sequence[float]) -> float:
    scale = max(abs(lhs), *(abs(v) for v in rhs_terms), 1.0)
    return abs(lhs - sum(rhs_terms)) / scale


def bracket_properties_report(rng: np.random.Generator, dim: int = 3, points: int = 5,
                              degree: int = 3) -> Dict[str, float]:
    """
    厳密な多項式括弧で 4 性質の最大相対欠陥を測る

    skew_symmetry, linearity, fundamental_identity, derivation_rule
    """
    symbols = state_symbols(dim)
    a = [random_polynomial(symbols, rng, degree) for _ in range(dim)]
    b = [random_polynomial(symbols, rng, degree) for _ in range(dim - 1)]
    extra = random_polynomial(symbols, rng, degree)

    def br(exprs):
        return bracket_expression(exprs, symbols)

    swapped = [a[1], a[0]] + a[2:]
    expressions = {
        "skew_symmetry": (br(a), [-br(swapped)]),
        "linearity": (br([a[0] + extra] + a[1:]), [br(a), br([extra] + a[1:])]),
        "fundamental_identity": (
            br([br(a)] + b),
            [br(a[:i] + [br([a[i]] + b)] + a[i + 1:]) for i in range(dim)],
        ),
        "derivation_rule": (
            br([sp.Mul(*a)] + b),
            [sp.Mul(*(a[:i] + [br([a[i]] + b)] + a[i + 1:])) for i in range(dim)],
        ),
    }

    report = {}
    samples = rng.uniform(-1.0, 1.0, size=(points, dim))
    for name, (lhs, rhs_terms) in expressions.items():
        lhs_fn = sp.lambdify(symbols, lhs, "numpy")
        rhs_fns = [sp.lambdify(symbols, term, "numpy") for term in rhs_terms]
        worst = 0.0
        for x in samples:
            worst = max(worst, _relative_defect(float(lhs_fn(*x)), [float(fn(*x)) for fn in rhs_fns]))
        report[name] = worst
    debug_log(logger, f"括弧の性質: {report}", "nambu")
    return report


def bracket_fd_convergence(exprs: Sequence[sp.Expr], x: Sequence[float],
                           steps: Sequence[float]) -> Dict[str, List[float]]:
    """差分括弧の誤差と、隣り合う刻み間の観測次数"""
    dim = len(exprs)
    symbols = state_symbols(dim)
    funcs = [(lambda f: (lambda v: float(f(*v))))(sp.lambdify(symbols, e, "numpy")) for e in exprs]
    exact = nambu_bracket_exact(exprs, symbols, x)
    errors = [abs(nambu_bracket(funcs, x, fd_step=h) - exact) for h in steps]
    orders = [
        convergence_order(errors[i], errors[i + 1], steps[i] / steps[i + 1])
        for i in range(len(steps) - 1)
    ]
    return {"steps": list(steps), "errors": errors, "orders": orders}
