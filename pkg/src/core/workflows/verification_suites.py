"""
検証スイート定義

各スイートは (n, N) から CaseSpec の一覧を組み立てる。
ケースは乱数生成器を受け取り (最大欠陥, 許容誤差) を返す。
"""

import math
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy as sp

from core.models.generalized_matrix import GeneralizedMatrix
from core.models.physics_models import EvolvingVariable, OscillatorConfig, PlanckConstants
from core.models.report_models import CaseSpec, Expectation, SuiteName
from core.services.algebra_service import (
    NormalSpec,
    annihilation_defect,
    identity_matrix,
    nfold_commutator,
    nfold_product,
    normal_cubic_matrix,
    normal_matrix,
)
from core.services.cohomology_service import (
    antisymmetrize,
    coboundary,
    cyclic_defect,
    is_cocycle,
    max_ritz_defect,
)
from core.services.dynamics_service import (
    build_coboundary_set,
    build_hamiltonian_set,
    commutator_eigenvalue,
    dynamical_variable,
    eigenvalue_cochain,
    eom_residual,
    finite_difference_defect,
    frequencies_for,
    fundamental_identity_defect,
    heisenberg_rhs,
    identity_insertion_defect,
    infinitesimal_transform,
    product_closure_defect,
    random_antisymmetric_table,
    random_matrix,
    random_potential_table,
    reordering_defect,
    repeated_index_rhs,
    residual_scale,
    shift_hamiltonians,
)
from core.services.nambu_service import (
    bracket_fd_convergence,
    bracket_properties_report,
    harmonic_oscillator_system,
    integrate,
    nambu_bracket,
    observed_order,
    oscillation_period,
    reduction_check,
    rigid_body_system,
    state_symbols,
)
from core.services.oscillator_service import FermionicOscillatorService
from core.services.spectrum_service import (
    beta,
    bohr_cochain,
    bohr_frequency,
    correspondence_check_n2,
    correspondence_check_n3,
    gamma,
    hydrogen_levels,
    nu0,
    nu0_array,
    nu0_bruteforce,
    nu_cyclic_cochain,
    nu_cyclic_from_nu0,
    nu_tilde,
    published_gamma,
)
from utils.config_helper import get_default_omega, get_tolerance, get_verify_defaults
from utils.index_tools import distinct_mask, sorted_distinct_tuples

TOLERANCE_NAMES = (
    "cocycle", "eom", "commutator", "oscillator", "finite_difference_relative",
    "bracket", "drift", "counterexample", "coboundary",
)
# --tol で置き換える許容誤差（スケール付きの恒等式チェック）
OVERRIDABLE_TOLERANCES = ("cocycle", "eom", "commutator", "bracket")


class NambuDemo:
    """古典側デモの固定パラメータ"""
    RIGID_BODY_X0 = (1.0, 0.5, 0.2)
    RIGID_BODY_T1 = 10.0
    RIGID_BODY_DT = 1e-3
    ORDER_DT = 0.05
    ORDER_MIN = 3.8
    OSCILLATOR_T1 = 15.0
    OSCILLATOR_DT = 1e-3
    PERIOD_TOL = 1e-4
    REDUCTION_POTENTIAL = "x1**2/2 + x1**4/4"
    REDUCTION_X0 = (0.5, 0.0, 0.0)
    REDUCTION_DT = 5e-3
    REDUCTION_TOL = 1e-6
    FD_STEPS = (1e-2, 5e-3, 2.5e-3)
    FD_ORDER_TOL = 0.1


CORRESPONDENCE_LEVELS = (10, 100, 1000)


def resolve_tolerances(override: Optional[float] = None) -> Dict[str, float]:
    """設定ファイルの許容誤差に --tol の上書きを反映"""
    tolerances = {name: get_tolerance(name) for name in TOLERANCE_NAMES}
    if override is not None:
        for name in OVERRIDABLE_TOLERANCES:
            tolerances[name] = override
    return tolerances


def _relative(lhs: np.ndarray, rhs: np.ndarray) -> float:
    scale = max(float(np.max(np.abs(lhs))), float(np.max(np.abs(rhs))), 1.0)
    return float(np.max(np.abs(lhs - rhs)) / scale)


def _magnitude(*arrays: np.ndarray) -> float:
    return max([1.0] + [float(np.max(np.abs(a))) for a in arrays if a.size])


def _potential_set(n: int, dim: int, rng: np.random.Generator):
    return build_hamiltonian_set([random_potential_table(dim, rng) for _ in range(n - 1)])


def _antisymmetric_set(n: int, dim: int, rng: np.random.Generator):
    return build_hamiltonian_set([random_antisymmetric_table(dim, rng) for _ in range(n - 1)])


def _eom_times(rng: np.random.Generator) -> np.ndarray:
    return rng.uniform(0.0, 10.0, size=get_verify_defaults()["eom_times"])


# ---------------------------------------------------------------------------
# algebra
# ---------------------------------------------------------------------------

def _skew_symmetry(n: int, dim: int, rng: np.random.Generator) -> float:
    args = [random_matrix(n, dim, rng) for _ in range(n)]
    base = nfold_commutator(args).data
    worst = 0.0
    for i in range(n - 1):
        swapped = list(args)
        swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
        worst = max(worst, _relative(nfold_commutator(swapped).data, -base))
    return worst


def _linearity(n: int, dim: int, rng: np.random.Generator) -> float:
    args = [random_matrix(n, dim, rng) for _ in range(n)]
    extra = random_matrix(n, dim, rng)
    slot = int(rng.integers(n))
    combined, alternative = list(args), list(args)
    combined[slot] = args[slot] + extra
    alternative[slot] = extra
    rhs = nfold_commutator(args).data + nfold_commutator(alternative).data
    return _relative(nfold_commutator(combined).data, rhs)


def _identity_placement(n: int, dim: int, rng: np.random.Generator) -> float:
    a = random_matrix(n, dim, rng)
    identity = identity_matrix(n, dim)
    mask = distinct_mask(n, dim)
    if not mask.any():
        return 0.0
    worst = 0.0
    for position in range(n):
        factors = [identity] * n
        factors[position] = a
        product = nfold_product(factors).data
        worst = max(worst, float(np.max(np.abs(product[mask] - a.data[mask]))))
    return worst / _magnitude(a.data)


def _matrix_regression(dim: int, rng: np.random.Generator) -> float:
    a, b = random_matrix(2, dim, rng), random_matrix(2, dim, rng)
    product = _relative(nfold_product([a, b]).data, a.data @ b.data)
    commutator = _relative(nfold_commutator([a, b]).data, a.data @ b.data - b.data @ a.data)
    return max(product, commutator)


def _annihilation(n: int, dim: int, rng: np.random.Generator) -> float:
    raw = random_matrix(n, dim, rng)
    b = GeneralizedMatrix(n, dim, np.where(distinct_mask(n, dim), 0.0, raw.data))
    normals = [normal_matrix(NormalSpec(n, dim, random_antisymmetric_table(dim, rng))) for _ in range(n - 1)]
    return annihilation_defect(b, normals)


def _cubic_normal_agreement(dim: int, rng: np.random.Generator) -> float:
    table = random_antisymmetric_table(dim, rng)
    return _relative(normal_cubic_matrix(table).data, normal_matrix(NormalSpec(3, dim, table)).data)


def _reordering(n: int, dim: int, rng: np.random.Generator) -> float:
    a = random_matrix(n, dim, rng)
    hamiltonians = _antisymmetric_set(n, dim, rng)
    return reordering_defect(a, hamiltonians) / _magnitude(heisenberg_rhs(a, hamiltonians).data)


def _normal_conserved(n: int, dim: int, rng: np.random.Generator) -> float:
    conserved = normal_matrix(NormalSpec(n, dim, random_antisymmetric_table(dim, rng)))
    hamiltonians = _potential_set(n, dim, rng)
    commutator = nfold_commutator([conserved] + list(hamiltonians.matrices)).data
    return float(np.max(np.abs(commutator))) / residual_scale(hamiltonians, conserved)


def algebra_cases(n: int, dim: int, tolerances: Dict[str, float]) -> List[CaseSpec]:
    tol = tolerances["commutator"]
    suite = SuiteName.ALGEBRA
    cases = [
        CaseSpec(suite, n, dim, "commutator_skew_symmetry", "skew symmetry of the n-fold commutator",
                 lambda rng: (_skew_symmetry(n, dim, rng), tol)),
        CaseSpec(suite, n, dim, "commutator_linearity", "linearity of the n-fold commutator in each slot",
                 lambda rng: (_linearity(n, dim, rng), tol)),
        CaseSpec(suite, n, dim, "identity_placement", "identity element on all-distinct components",
                 lambda rng: (_identity_placement(n, dim, rng), tol)),
    ]
    if n == 2:
        cases.append(CaseSpec(
            suite, n, dim, "matrix_mechanics_regression", "n=2 reduces to matrix product and commutator",
            lambda rng: (_matrix_regression(dim, rng), tolerances["oscillator"]),
        ))
        return cases

    cases += [
        CaseSpec(suite, n, dim, "annihilation_lemma", "product with normal matrices has no distinct components",
                 lambda rng: (_annihilation(n, dim, rng), tol)),
        CaseSpec(suite, n, dim, "reordering_sign", "Hamiltonian reordering sign (-1)^{(n-2)(n-3)/2}",
                 lambda rng: (_reordering(n, dim, rng), tol)),
        CaseSpec(suite, n, dim, "normal_form_conserved", "normal-form quantities commute with the Hamiltonians",
                 lambda rng: (_normal_conserved(n, dim, rng), tol)),
    ]
    if n == 3:
        cases.append(CaseSpec(
            suite, n, dim, "cubic_normal_form_agreement", "guarded cubic normal form equals the general pattern",
            lambda rng: (_cubic_normal_agreement(dim, rng), tol),
        ))
    return cases


# ---------------------------------------------------------------------------
# cohomology
# ---------------------------------------------------------------------------

def _coboundary_squared(dim: int, rng: np.random.Generator) -> float:
    worst = 0.0
    for k in range(1, 5):
        values = rng.normal(size=(dim,) * k)
        worst = max(worst, float(np.max(np.abs(coboundary(coboundary(values)).values))))
    return worst


def _ritz_coboundary(n: int, dim: int, rng: np.random.Generator) -> Tuple[float, float]:
    nu = antisymmetrize(rng.normal(size=(dim,) * n))
    delta = float(np.max(np.abs(coboundary(nu).values)))
    return abs(max_ritz_defect(nu) - delta), nu.scale


def _nu_cocycle(n: int, dim: int, rng: np.random.Generator, potential: bool) -> Tuple[float, float]:
    factory = random_potential_table if potential else random_antisymmetric_table
    tables = [factory(dim, rng) for _ in range(n - 1)]
    nu = nu_cyclic_cochain(tables, beta(n))
    _, defect = is_cocycle(nu, 0.0)
    return defect, nu.scale


def _bohr_ritz(dim: int, rng: np.random.Generator) -> Tuple[float, float]:
    nu = bohr_cochain(rng.normal(size=dim))
    return max_ritz_defect(nu), nu.scale


def cohomology_cases(n: int, dim: int, tolerances: Dict[str, float]) -> List[CaseSpec]:
    tol = tolerances["cocycle"]
    suite = SuiteName.COHOMOLOGY
    cases = [
        CaseSpec(suite, n, dim, "coboundary_squared_zero", "δ∘δ = 0 for cochains of arity 1..4",
                 lambda rng: (_coboundary_squared(dim, rng), tolerances["coboundary"])),
    ]

    def ritz_case(rng):
        defect, scale = _ritz_coboundary(n, dim, rng)
        return defect, tol * scale

    cases.append(CaseSpec(suite, n, dim, "ritz_equals_coboundary",
                          "Ritz defect coincides with the coboundary", ritz_case))
    if n == 2:
        def bohr_case(rng):
            defect, scale = _bohr_ritz(dim, rng)
            return defect, tol * scale

        cases.append(CaseSpec(suite, n, dim, "bohr_ritz_rule", "Ritz combination rule for Bohr frequencies",
                              bohr_case))
        return cases

    def cocycle_case(rng):
        defect, scale = _nu_cocycle(n, dim, rng, potential=True)
        return defect, tol * scale

    cases.append(CaseSpec(suite, n, dim, "nu_cocycle", "frequency is a cocycle for combination-rule tables",
                          cocycle_case))
    if dim > n:
        def counterexample_case(rng):
            defect, scale = _nu_cocycle(n, dim, rng, potential=False)
            return defect, tolerances["counterexample"] * scale

        cases.append(CaseSpec(
            suite, n, dim, "nu_cocycle_without_combination_rule",
            "tables violating the combination rule break the cocycle condition",
            counterexample_case, Expectation.VIOLATED,
        ))
    return cases


# ---------------------------------------------------------------------------
# spectrum
# ---------------------------------------------------------------------------

def _correspondence_n2() -> float:
    action = sp.Symbol("J", positive=True)
    return max(
        abs(correspondence_check_n2(action ** 2, action, 1.0, level) - 1.0 / (2 * level))
        for level in CORRESPONDENCE_LEVELS
    )


def _correspondence_n3() -> float:
    j1, j2 = sp.symbols("J1 J2", positive=True)
    return max(
        abs(correspondence_check_n3([j1 ** 2, j1 * j2], [j1, j2], 1.0, level, level) - 1.0 / (2 * level))
        for level in CORRESPONDENCE_LEVELS
    )


def _hydrogen_bohr(dim: int) -> float:
    levels = hydrogen_levels(dim)
    nu = bohr_cochain(levels)
    worst = 0.0
    for m in range(1, dim + 1):
        for k in range(1, dim + 1):
            worst = max(worst, abs(nu.get((m, k)) - bohr_frequency(levels, m, k)))
    return worst


def _bruteforce_agreement(n: int, dim: int, rng: np.random.Generator) -> Tuple[float, float]:
    tables = [random_antisymmetric_table(dim, rng) for _ in range(n - 1)]
    b = beta(n)
    tuples = sorted_distinct_tuples(n, dim)[:12]
    values = [(nu0(tables, idx, b), nu0_bruteforce(tables, idx, b)) for idx in tuples]
    if not values:
        return 0.0, 1.0
    defect = max(abs(x - y) for x, y in values)
    return defect, max([1.0] + [abs(x) for x, _ in values])


def _cyclic_sum(n: int, dim: int, rng: np.random.Generator) -> float:
    tables = [random_antisymmetric_table(dim, rng) for _ in range(n - 1)]
    b = beta(n)
    return _relative(nu_cyclic_from_nu0(nu0_array(tables, b)), nu_cyclic_cochain(tables, b).values)


def _hidden_cyclicity(n: int, dim: int, rng: np.random.Generator) -> Tuple[float, float]:
    tables = [random_potential_table(dim, rng) for _ in range(n - 1)]
    raw = nu0_array(tables, beta(n))
    defect = max(cyclic_defect(raw, p) for p in range(1, n))
    return defect, _magnitude(raw)


def _antisymmetry(n: int, dim: int, rng: np.random.Generator) -> Tuple[float, float]:
    nu = nu_cyclic_cochain([random_potential_table(dim, rng) for _ in range(n - 1)], beta(n))
    return nu.antisymmetry_defect(), nu.scale


def _nu_tilde_cocycle(n: int, dim: int, rng: np.random.Generator) -> Tuple[float, float]:
    nu = nu_tilde([random_antisymmetric_table(dim, rng) for _ in range(n - 2)])
    _, defect = is_cocycle(nu, 0.0)
    return defect, nu.scale


def _nu_tilde_closed_form(dim: int, rng: np.random.Generator) -> float:
    table = random_antisymmetric_table(dim, rng)
    h = table.values
    constants = PlanckConstants()
    expected = (2.0 / constants.h) * (h.T[:, None, :] + h[:, :, None] + h[None, :, :])
    return _relative(nu_tilde([table], constants).values, expected)


def spectrum_cases(n: int, dim: int, tolerances: Dict[str, float]) -> List[CaseSpec]:
    tol = tolerances["cocycle"]
    exact = tolerances["oscillator"]
    suite = SuiteName.SPECTRUM
    cases = [
        CaseSpec(suite, 2, dim, "correspondence_n2", "difference quotient tends to dE/dJ with error 1/(2l)",
                 lambda rng: (_correspondence_n2(), exact)),
        CaseSpec(suite, 3, dim, "correspondence_n3", "difference bracket tends to the Jacobian with error 1/(2l)",
                 lambda rng: (_correspondence_n3(), exact)),
    ]
    if n == 2:
        cases.append(CaseSpec(suite, n, dim, "bohr_hydrogen", "Bohr frequency condition for hydrogen-like levels",
                              lambda rng: (_hydrogen_bohr(dim), exact)))
        return cases

    def scaled(runner):
        def run(rng):
            defect, scale = runner(n, dim, rng)
            return defect, tol * scale
        return run

    cases += [
        CaseSpec(suite, n, dim, "nu_total_antisymmetry", "frequency is totally antisymmetric",
                 scaled(_antisymmetry)),
        CaseSpec(suite, n, dim, "nu0_bruteforce_agreement", "determinant and permutation-sum forms agree",
                 scaled(_bruteforce_agreement)),
        CaseSpec(suite, n, dim, "nu0_cyclic_sum", "cyclic sum of the reference-index frequency",
                 lambda rng: (_cyclic_sum(n, dim, rng), tol)),
        CaseSpec(suite, n, dim, "nu0_hidden_cyclicity", "reference-index frequency is cyclic under the combination rule",
                 scaled(_hidden_cyclicity)),
        CaseSpec(suite, n, dim, "nu_tilde_cocycle", "coboundary frequency is a cocycle",
                 scaled(_nu_tilde_cocycle)),
    ]
    if n == 3:
        cases.append(CaseSpec(suite, n, dim, "nu_tilde_closed_form", "n=3 coboundary frequency (2/h)(h_nl+h_lm+h_mn)",
                              lambda rng: (_nu_tilde_closed_form(dim, rng), tol)))
    return cases


# ---------------------------------------------------------------------------
# dynamics
# ---------------------------------------------------------------------------

def _eom_case(n: int, dim: int, rng: np.random.Generator, tol: float) -> Tuple[float, float]:
    hamiltonians = _potential_set(n, dim, rng)
    a = random_matrix(n, dim, rng)
    variable = EvolvingVariable(a, frequencies_for(hamiltonians))
    worst = max(eom_residual(variable, hamiltonians, t) for t in _eom_times(rng))
    return worst, tol * residual_scale(hamiltonians, a)


def _finite_difference_case(n: int, dim: int, rng: np.random.Generator) -> float:
    hamiltonians = _potential_set(n, dim, rng)
    variable = EvolvingVariable(random_matrix(n, dim, rng), frequencies_for(hamiltonians))
    return max(finite_difference_defect(variable, hamiltonians, t) for t in _eom_times(rng)[:2])


def _n2_regression(dim: int, rng: np.random.Generator) -> float:
    hamiltonians = _potential_set(2, dim, rng)
    a = random_matrix(2, dim, rng)
    h = hamiltonians.matrices[0].data
    direct = (a.data @ h - h @ a.data) / (1j * hamiltonians.constants.hbar)
    return _relative(heisenberg_rhs(a, hamiltonians).data, direct)


def _conservation(n: int, dim: int, rng: np.random.Generator, tol: float) -> Tuple[float, float]:
    hamiltonians = _potential_set(n, dim, rng)
    worst, scale = 0.0, 1.0
    for matrix in hamiltonians.matrices:
        worst = max(worst, float(np.max(np.abs(heisenberg_rhs(matrix, hamiltonians).data))))
        scale = max(scale, residual_scale(hamiltonians, matrix))
    return worst, tol * scale


def _repeated_stationary(n: int, dim: int, rng: np.random.Generator, tol: float) -> Tuple[float, float]:
    hamiltonians = _potential_set(n, dim, rng)
    a = random_matrix(n, dim, rng)
    return repeated_index_rhs(a, hamiltonians), tol * residual_scale(hamiltonians, a)


def _probe(n: int, dim: int, rng: np.random.Generator, published: bool) -> Tuple[float, float]:
    tables = [random_potential_table(dim, rng) for _ in range(n - 1)]
    hamiltonians = build_hamiltonian_set(tables)
    h = hamiltonians.constants.h
    f = eigenvalue_cochain(hamiltonians).values
    nu = nu_cyclic_cochain(tables, beta(n, hamiltonians.constants, published=published)).values
    mask = distinct_mask(n, dim)
    if not mask.any():
        return 0.0, 1.0
    defect = float(np.max(np.abs(f[mask] + h * nu[mask])))
    first = sorted_distinct_tuples(n, dim)[0]
    if not published:
        single = commutator_eigenvalue(hamiltonians, first)
        defect = max(defect, abs(single - f[tuple(i - 1 for i in first)]))
    return defect, _magnitude(f)


def _shift(n: int, dim: int, rng: np.random.Generator) -> float:
    hamiltonians = _potential_set(n, dim, rng)
    shifts = rng.normal(size=n - 1)
    shifted = shift_hamiltonians(hamiltonians, shifts)
    identity = identity_matrix(n, dim)
    form_defect = max(
        _relative(after.data, (before + identity * ((n - 2) * c)).data)
        for before, after, c in zip(hamiltonians.matrices, shifted.matrices, shifts)
    )
    a = dynamical_variable(n, dim, rng)
    mask = distinct_mask(n, dim)
    if not mask.any():
        return form_defect
    original = heisenberg_rhs(a, hamiltonians).data[mask]
    moved = heisenberg_rhs(a, shifted).data[mask]
    return max(form_defect, _relative(moved, original))


def _identity_insertion(n: int, dim: int, rng: np.random.Generator, tol: float) -> Tuple[float, float]:
    hamiltonians = _potential_set(n, dim, rng)
    a = random_matrix(n, dim, rng)
    worst = max(identity_insertion_defect(a, hamiltonians, k) for k in range(n - 1))
    return worst, tol * residual_scale(hamiltonians, a)


def _coboundary_branch(n: int, dim: int, rng: np.random.Generator, tol: float) -> Tuple[float, float]:
    hamiltonians = build_coboundary_set([random_antisymmetric_table(dim, rng) for _ in range(n - 2)])
    a = dynamical_variable(n, dim, rng)
    variable = EvolvingVariable(a, frequencies_for(hamiltonians))
    worst = max(eom_residual(variable, hamiltonians, t, distinct_only=True) for t in _eom_times(rng))
    return worst, tol * residual_scale(hamiltonians, a)


def _fundamental_identity(n: int, dim: int, rng: np.random.Generator, potential: bool) -> float:
    factory = random_potential_table if potential else random_antisymmetric_table
    generators = [normal_matrix(NormalSpec(n, dim, factory(dim, rng))) for _ in range(n - 1)]
    a_list = [random_matrix(n, dim, rng) for _ in range(n)]
    result = fundamental_identity_defect(a_list, generators)
    return max(result.fundamental_identity, result.derivation_rule)


def _product_closure(n: int, dim: int, rng: np.random.Generator, potential: bool) -> float:
    factory = random_potential_table if potential else random_antisymmetric_table
    nu = nu_cyclic_cochain([factory(dim, rng) for _ in range(n - 1)], beta(n))
    a_list = [random_matrix(n, dim, rng) for _ in range(n)]
    return product_closure_defect(a_list, nu, float(rng.uniform(0.1, 1.0)))


def _infinitesimal(dim: int, rng: np.random.Generator, tol: float) -> Tuple[float, float]:
    a = random_matrix(3, dim, rng)
    result = infinitesimal_transform(a, random_antisymmetric_table(dim, rng),
                                     random_antisymmetric_table(dim, rng), epsilon=1e-3)
    return result.multiplier_defect, tol * _magnitude(result.multiplier * a.data)


def dynamics_cases(n: int, dim: int, tolerances: Dict[str, float]) -> List[CaseSpec]:
    eom_tol = tolerances["eom"]
    tol = tolerances["commutator"]
    fd_tol = tolerances["finite_difference_relative"]
    counter = tolerances["counterexample"]
    suite = SuiteName.DYNAMICS
    cases = [
        CaseSpec(suite, n, dim, "eom_residual", "generalized Heisenberg equation of motion",
                 lambda rng: _eom_case(n, dim, rng, eom_tol)),
        CaseSpec(suite, n, dim, "eom_finite_difference", "finite-difference derivative matches the right-hand side",
                 lambda rng: (_finite_difference_case(n, dim, rng), fd_tol)),
        CaseSpec(suite, n, dim, "hamiltonian_conservation", "Hamiltonians are conserved",
                 lambda rng: _conservation(n, dim, rng, eom_tol)),
    ]
    if n == 2:
        cases.append(CaseSpec(suite, n, dim, "heisenberg_regression_n2", "n=2 equals (AH - HA)/iħ",
                              lambda rng: (_n2_regression(dim, rng), tolerances["oscillator"])))
        return cases

    published_holds = published_gamma(n) == gamma(n)

    def published_case(rng):
        defect, scale = _probe(n, dim, rng, published=True)
        return defect, (eom_tol if published_holds else counter) * scale

    def probe_case(rng):
        defect, scale = _probe(n, dim, rng, published=False)
        return defect, eom_tol * scale

    cases += [
        CaseSpec(suite, n, dim, "repeated_index_stationary", "components with repeated indices are constant",
                 lambda rng: _repeated_stationary(n, dim, rng, eom_tol)),
        CaseSpec(suite, n, dim, "eigenvalue_probe_gamma", f"commutator eigenvalue equals -hν with γ={gamma(n)}",
                 probe_case),
        CaseSpec(suite, n, dim, "shift_invariance", "commutators invariant under h → h + c",
                 lambda rng: (_shift(n, dim, rng), tol)),
        CaseSpec(suite, n, dim, "identity_insertion", "identity element inserted among the Hamiltonians",
                 lambda rng: _identity_insertion(n, dim, rng, eom_tol)),
        CaseSpec(suite, n, dim, "coboundary_branch_eom", "equation of motion with the coboundary frequency",
                 lambda rng: _coboundary_branch(n, dim, rng, eom_tol)),
        CaseSpec(suite, n, dim, "fundamental_identity", "fundamental identity and derivation rule when δf = 0",
                 lambda rng: (_fundamental_identity(n, dim, rng, potential=True), tol)),
        CaseSpec(suite, n, dim, "product_closure", "products of evolving variables keep the evolving form",
                 lambda rng: (_product_closure(n, dim, rng, potential=True), tol)),
    ]
    # 公表 γ の破れは全相異タプルが存在するときだけ観測できる
    if published_holds or dim >= n:
        cases.append(CaseSpec(
            suite, n, dim, "eigenvalue_probe_published_gamma",
            f"commutator eigenvalue with published γ={published_gamma(n)}",
            published_case, Expectation.HOLDS if published_holds else Expectation.VIOLATED,
        ))
    if dim > n:
        cases += [
            CaseSpec(suite, n, dim, "fundamental_identity_without_cocycle",
                     "fundamental identity does not necessarily hold when δf ≠ 0",
                     lambda rng: (_fundamental_identity(n, dim, rng, potential=False), counter),
                     Expectation.VIOLATED),
            CaseSpec(suite, n, dim, "product_closure_without_combination_rule",
                     "products leave the evolving form without the Ritz rule",
                     lambda rng: (_product_closure(n, dim, rng, potential=False), counter),
                     Expectation.VIOLATED),
        ]
    if n == 3:
        cases.append(CaseSpec(suite, n, dim, "infinitesimal_transform", "[A, G1, G2] = (G1G2)~ ∘ A",
                              lambda rng: _infinitesimal(dim, rng, tol)))
    return cases


# ---------------------------------------------------------------------------
# oscillator
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8)
def _oscillator_results(rank: int, omega: float, times: Tuple[float, ...]) -> Dict[str, Tuple[str, float, float]]:
    """チェック名ごとに (関係式, 全時刻での最大欠陥, 許容誤差)"""
    report = FermionicOscillatorService(OscillatorConfig(rank, omega)).verify(list(times))
    results: Dict[str, Tuple[str, float, float]] = {}
    for check in report.checks:
        relation, defect, tol = results.get(check.check, (check.relation, 0.0, check.tol))
        results[check.check] = (relation, max(defect, check.max_defect), max(tol, check.tol))
    return results


def oscillator_cases(seed: int) -> List[CaseSpec]:
    omega = get_default_omega()
    times = tuple(float(t) for t in np.random.default_rng(seed).uniform(0.0, 2 * math.pi,
                                                                          get_verify_defaults()["eom_times"]))
    cases = []
    for rank in (2, 3):
        for name, (relation, _, _) in _oscillator_results(rank, omega, times).items():
            def run(rng, rank=rank, name=name):
                _, defect, tol = _oscillator_results(rank, omega, times)[name]
                return defect, tol
            cases.append(CaseSpec(SuiteName.OSCILLATOR, rank, rank, name, relation, run))
    return cases


# ---------------------------------------------------------------------------
# nambu
# ---------------------------------------------------------------------------

@lru_cache(maxsize=4)
def _bracket_report(seed: int) -> Dict[str, float]:
    return bracket_properties_report(np.random.default_rng(seed))


def _coordinate_bracket(rng: np.random.Generator) -> float:
    coordinates = [lambda x, i=i: float(x[i]) for i in range(3)]
    return abs(nambu_bracket(coordinates, rng.uniform(-1.0, 1.0, 3)) - 1.0)


def _rigid_body_drift() -> float:
    trajectory = integrate(rigid_body_system(), NambuDemo.RIGID_BODY_X0,
                           NambuDemo.RIGID_BODY_T1, NambuDemo.RIGID_BODY_DT)
    return trajectory.max_drift()


def _order_shortfall() -> float:
    order = observed_order(rigid_body_system(), NambuDemo.RIGID_BODY_X0,
                           NambuDemo.RIGID_BODY_T1, NambuDemo.ORDER_DT)
    return max(0.0, 4.0 - order)


def _period_error() -> float:
    trajectory = integrate(harmonic_oscillator_system(), (1.0, 0.0),
                           NambuDemo.OSCILLATOR_T1, NambuDemo.OSCILLATOR_DT)
    return abs(oscillation_period(trajectory) - 2 * math.pi)


def _reduction_deviation() -> float:
    return reduction_check(NambuDemo.REDUCTION_POTENTIAL, NambuDemo.REDUCTION_X0,
                           2 * math.pi, NambuDemo.REDUCTION_DT).max_deviation


def _fd_order_error() -> float:
    x1, x2, x3 = state_symbols(3)
    result = bracket_fd_convergence([x1 ** 3 + x2, x2 ** 3 + x3, x3 ** 3 + x1], (0.3, -0.4, 0.5),
                                    NambuDemo.FD_STEPS)
    return max(abs(order - 2.0) for order in result["orders"])


def nambu_cases(seed: int, tolerances: Dict[str, float]) -> List[CaseSpec]:
    suite = SuiteName.NAMBU
    bracket_tol = tolerances["bracket"]
    cases = [
        CaseSpec(suite, 3, 3, "coordinate_bracket", "{x, y, z} = 1",
                 lambda rng: (_coordinate_bracket(rng), tolerances["finite_difference_relative"])),
        CaseSpec(suite, 3, 3, "rigid_body_drift", "conservation of H1 and H2 along the Nambu flow",
                 lambda rng: (_rigid_body_drift(), tolerances["drift"])),
        CaseSpec(suite, 3, 3, "rk4_observed_order", "RK4 order from step halving",
                 lambda rng: (_order_shortfall(), 4.0 - NambuDemo.ORDER_MIN)),
        CaseSpec(suite, 2, 2, "harmonic_period", "n=2 Nambu flow recovers the oscillator period 2π",
                 lambda rng: (_period_error(), NambuDemo.PERIOD_TOL)),
        CaseSpec(suite, 3, 3, "hamiltonian_reduction", "H2 = z reduces the Nambu equation to Hamilton's equations",
                 lambda rng: (_reduction_deviation(), NambuDemo.REDUCTION_TOL)),
        CaseSpec(suite, 3, 3, "bracket_fd_convergence", "central-difference bracket converges at second order",
                 lambda rng: (_fd_order_error(), NambuDemo.FD_ORDER_TOL)),
    ]
    for prop, relation in (
        ("skew_symmetry", "skew symmetry of the Nambu bracket"),
        ("linearity", "linearity of the Nambu bracket"),
        ("fundamental_identity", "fundamental identity of the Nambu bracket"),
        ("derivation_rule", "derivation rule of the Nambu bracket"),
    ):
        cases.append(CaseSpec(suite, 3, 3, f"bracket_{prop}", relation,
                              lambda rng, prop=prop: (_bracket_report(seed)[prop], bracket_tol)))
    return cases


# ---------------------------------------------------------------------------
# 組み立て
# ---------------------------------------------------------------------------

def build_cases(n: int, dim: int, seed: int, suites: Sequence[str],
                tolerances: Dict[str, float]) -> List[CaseSpec]:
    """指定スイートのケースを定義順に並べる"""
    builders = {
        SuiteName.ALGEBRA: lambda: algebra_cases(n, dim, tolerances),
        SuiteName.COHOMOLOGY: lambda: cohomology_cases(n, dim, tolerances),
        SuiteName.SPECTRUM: lambda: spectrum_cases(n, dim, tolerances),
        SuiteName.DYNAMICS: lambda: dynamics_cases(n, dim, tolerances),
        SuiteName.OSCILLATOR: lambda: oscillator_cases(seed),
        SuiteName.NAMBU: lambda: nambu_cases(seed, tolerances),
    }
    cases: List[CaseSpec] = []
    for suite in SuiteName.ALL:
        if suite in suites:
            cases.extend(builders[suite]())
    return cases
