"""Monte Carlo checks of the concentration, symmetrization and generalization bounds."""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Optional

import numpy as np
from numpy.typing import NDArray

from ..bounds.formulas import (
    BoundInputs,
    generalization_bound,
    m_dependence,
    rademacher_bound,
)
from ..chain.core import (
    Relation,
    gap_mixing_relations,
    make_distribution,
    stationary_distribution,
)
from ..kernels.engine import KernelFamily, family_from_dict, kappa
from ..learn.mkl import TrainOptions, estimation_error, train, zero_model
from ..mixed.simulate import MODES, simulate_counts, simulate_dataset
from ..pool.model import (
    ChainPool,
    default_signs,
    load_pool,
    pool_from_dict,
    pool_to_dict,
)
from ..pool.summary import PoolSummary, pool_summary, symmetrization_offset
from ..shared.cli import log_debug, log_info, log_warn
from ..shared.config import AnalysisOptions, worker_count
from ..shared.data import get_sample_kernel_family
from ..shared.errors import ConfigError
from ..shared.io import read_structured, require_mapping
from ..shared.rng import stream

FloatArray = NDArray[np.float64]

MIN_TRIALS = 100
PILOT_FACTOR = 10
STDERR_SLACK = 3.0
PILOT_GATE = 4.0

DEFAULT_T_GRID = tuple(round(0.02 * k, 2) for k in range(1, 11))
DEFAULT_U_GRID = tuple(round(0.05 * k, 2) for k in range(1, 11))
DEFAULT_M_GRID = (2, 4, 8, 16)


def _derived_seed(seed: int, *key: int | str) -> int:
    return int(stream(seed, *key).integers(0, 2**63))


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a verification run needs; reproducible from its fields alone."""

    pool: ChainPool
    n: int = 200
    trials: int = 10_000
    seed: int = 0
    mode: str = "probabilistic"
    g: Optional[FloatArray] = None
    functions: Optional[FloatArray] = None
    n_functions: int = 20
    family: Optional[KernelFamily] = None
    delta: float = 0.5
    alpha: float = 0.05
    t_grid: tuple[float, ...] = DEFAULT_T_GRID
    u_grid: tuple[float, ...] = DEFAULT_U_GRID
    m_grid: tuple[int, ...] = DEFAULT_M_GRID
    runs: int = 200
    iterations: int = 500
    force_zero: bool = False
    initial: Optional[FloatArray] = None
    options: AnalysisOptions = field(default_factory=AnalysisOptions)

    def __post_init__(self) -> None:
        if self.trials < MIN_TRIALS:
            raise ConfigError(f"trials must be at least {MIN_TRIALS}")
        if self.n < 1 or self.runs < 1:
            raise ConfigError("n and runs must be at least 1")
        if not (self.t_grid and self.u_grid and self.m_grid):
            raise ConfigError("grids must be non-empty")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {', '.join(MODES)}")
        if self.g is not None and np.shape(self.g) != (self.pool.n_states,):
            raise ConfigError(f"g needs one value per state ({self.pool.n_states})")
        if self.functions is not None and (
            np.ndim(self.functions) != 2
            or np.shape(self.functions)[1] != self.pool.n_states
        ):
            raise ConfigError("functions must be a list of per-state tables")

    def g_table(self) -> FloatArray:
        """The per-state function g; +1 on even and -1 on odd states by default."""
        if self.g is None:
            return np.asarray(default_signs(self.pool.n_states))
        return np.asarray(self.g, dtype=np.float64)

    def kernel_family(self) -> KernelFamily:
        return self.family or family_from_dict(get_sample_kernel_family())

    def effective_pool(self) -> ChainPool:
        """The pool every check simulates: ``initial`` replaces its start law."""
        if self.initial is None:
            return self.pool
        return self.pool.with_initial(make_distribution(self.initial))

    def to_dict(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "pool": pool_to_dict(self.pool),
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "mode": self.mode,
            "g": self.g_table().tolist(),
            "delta": self.delta,
            "alpha": self.alpha,
            "t_grid": list(self.t_grid),
            "u_grid": list(self.u_grid),
            "m_grid": list(self.m_grid),
            "runs": self.runs,
            "iterations": self.iterations,
            "force_zero": self.force_zero,
            "n_functions": self.n_functions,
        }
        if self.family is not None:
            doc["family"] = self.family.to_dict()
        if self.functions is not None:
            doc["functions"] = np.asarray(self.functions).tolist()
        if self.initial is not None:
            doc["initial"] = np.asarray(self.initial).tolist()
        return doc


def config_from_dict(
    data: Any, pool: Optional[ChainPool] = None, **overrides: Any
) -> ExperimentConfig:
    """Experiment config from a parsed YAML/JSON document; ``overrides`` win."""
    doc = dict(require_mapping(data or {}, "experiment config"))
    doc.update({key: value for key, value in overrides.items() if value is not None})
    if pool is None:
        if "pool" not in doc:
            raise ConfigError("experiment config needs a 'pool'")
        pool = pool_from_dict(doc["pool"])

    def floats(key: str) -> Optional[FloatArray]:
        return None if doc.get(key) is None else np.asarray(doc[key], dtype=np.float64)

    family = doc.get("family")
    kwargs: dict[str, Any] = {
        "pool": pool,
        "g": floats("g"),
        "functions": floats("functions"),
        "initial": floats("initial"),
        "family": None if family is None else family_from_dict(family),
    }
    for key, cast in (
        ("n", int),
        ("trials", int),
        ("seed", int),
        ("mode", str),
        ("n_functions", int),
        ("delta", float),
        ("alpha", float),
        ("runs", int),
        ("iterations", int),
        ("force_zero", bool),
    ):
        if key in doc:
            kwargs[key] = cast(doc[key])
    for key, cast in (("t_grid", float), ("u_grid", float), ("m_grid", int)):
        if key in doc:
            kwargs[key] = tuple(cast(v) for v in doc[key])
    return ExperimentConfig(**kwargs)


def load_config(
    path: Optional[str] = None,
    spec: Optional[str] = None,
    sample: Optional[str] = None,
    **overrides: Any,
) -> ExperimentConfig:
    """Read an experiment file; a pool given by --spec/--sample replaces its pool."""
    doc = read_structured(Path(path)) if path else {}
    pool = load_pool(spec, sample) if (spec or sample) else None
    return config_from_dict(doc, pool, **overrides)


@dataclass(frozen=True)
class TailReport:
    """Empirical tail probabilities against a bound on a grid of thresholds."""

    name: str
    grid_name: str
    grid: tuple[float, ...]
    empirical: tuple[float, ...]
    stderr: tuple[float, ...]
    bound: tuple[float, ...]
    trials: int
    details: dict[str, Any] = field(default_factory=dict)
    gate_passed: bool = True

    @property
    def passes(self) -> tuple[bool, ...]:
        return tuple(
            e <= b + STDERR_SLACK * s
            for e, b, s in zip(self.empirical, self.bound, self.stderr)
        )

    @property
    def passed(self) -> bool:
        return self.gate_passed and all(self.passes)

    def rows(self) -> list[dict[str, Any]]:
        return [
            {self.grid_name: x, "empirical": e, "stderr": s, "bound": b, "pass": p}
            for x, e, s, b, p in zip(
                self.grid, self.empirical, self.stderr, self.bound, self.passes
            )
        ]

    def to_dict(self) -> dict[str, Any]:
        return {
            "check": self.name,
            "passed": self.passed,
            "trials": self.trials,
            "gate_passed": self.gate_passed,
            "details": self.details,
            "grid": self.rows(),
        }


@dataclass(frozen=True)
class ComparisonReport:
    """lhs <= rhs with Monte Carlo error bars on both sides."""

    name: str
    lhs: float
    lhs_stderr: float
    rhs: float
    rhs_stderr: float
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def slack(self) -> float:
        return STDERR_SLACK * math.hypot(self.lhs_stderr, self.rhs_stderr)

    @property
    def passed(self) -> bool:
        return self.lhs <= self.rhs + self.slack

    def to_dict(self) -> dict[str, Any]:
        return {
            "check": self.name,
            "passed": self.passed,
            "lhs": self.lhs,
            "lhs_stderr": self.lhs_stderr,
            "rhs": self.rhs,
            "rhs_stderr": self.rhs_stderr,
            "details": self.details,
        }


@dataclass(frozen=True)
class CoverageReport:
    name: str
    runs: int
    covered: int
    alpha: float
    slack_quantiles: dict[str, float]
    m_scaling: list[dict[str, Any]]
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def coverage(self) -> float:
        return self.covered / self.runs

    @property
    def threshold(self) -> float:
        spread = math.sqrt(self.alpha * (1.0 - self.alpha) / self.runs)
        return 1.0 - self.alpha - STDERR_SLACK * spread

    @property
    def passed(self) -> bool:
        scaling_ok = all(row["matches"] for row in self.m_scaling)
        return self.coverage >= self.threshold and scaling_ok

    def to_dict(self) -> dict[str, Any]:
        return {
            "check": self.name,
            "passed": self.passed,
            "runs": self.runs,
            "covered": self.covered,
            "coverage": self.coverage,
            "threshold": self.threshold,
            "slack_quantiles": self.slack_quantiles,
            "m_scaling": self.m_scaling,
            "details": self.details,
        }


@dataclass(frozen=True)
class RelationReport:
    name: str
    relations: tuple[Relation, ...]

    @property
    def passed(self) -> bool:
        return all(relation.holds for relation in self.relations)

    def to_dict(self) -> dict[str, Any]:
        return {
            "check": self.name,
            "passed": self.passed,
            "relations": [relation.to_dict() for relation in self.relations],
        }


def _tail(
    deviations: FloatArray, grid: tuple[float, ...]
) -> tuple[list[float], list[float]]:
    trials = deviations.size
    empirical = [float(np.mean(deviations >= level)) for level in grid]
    stderr = [math.sqrt(p * (1.0 - p) / trials) for p in empirical]
    return empirical, stderr


def _mean_and_stderr(values: FloatArray) -> tuple[float, float]:
    return float(values.mean()), float(values.std(ddof=1) / math.sqrt(values.size))


def verify_mcdiarmid(
    cfg: ExperimentConfig, summary: Optional[PoolSummary] = None
) -> TailReport:
    """P(|f - E f| >= t) against 2 exp(-2 t^2 / (c^2 n tau_min)) for f = mean of g."""
    g = cfg.g_table()
    pool = cfg.effective_pool()
    summary = summary or pool_summary(pool, cfg.options)
    c = float(g.max() - g.min()) / cfg.n

    batch = simulate_counts(pool, cfg.n, cfg.trials, cfg.seed, cfg.mode)
    main = batch.counts @ g / cfg.n
    pilot_trials = PILOT_FACTOR * cfg.trials
    log_debug(f"McDiarmid pilot run with {pilot_trials} trials")
    pilot_seed = _derived_seed(cfg.seed, "pilot")
    pilot_batch = simulate_counts(pool, cfg.n, pilot_trials, pilot_seed, cfg.mode)
    pilot = pilot_batch.counts @ g / cfg.n
    expected, pilot_se = _mean_and_stderr(pilot)
    main_mean, main_se = _mean_and_stderr(main)
    gate = abs(main_mean - expected) <= PILOT_GATE * math.hypot(pilot_se, main_se)
    if not gate:
        log_warn("Main and pilot means disagree beyond the sanity gate")

    empirical, stderr = _tail(np.abs(main - expected), cfg.t_grid)
    scale = c**2 * cfg.n * summary.tau_min
    bound = [
        2.0 * math.exp(-2.0 * t**2 / scale) if scale > 0.0 else 0.0
        for t in cfg.t_grid
    ]
    return TailReport(
        name="mcdiarmid",
        grid_name="t",
        grid=cfg.t_grid,
        empirical=tuple(empirical),
        stderr=tuple(stderr),
        bound=tuple(bound),
        trials=cfg.trials,
        details={
            "c": c,
            "tau_min": summary.tau_min,
            "pilot_mean": expected,
            "pilot_stderr": pilot_se,
            "main_mean": main_mean,
            "main_stderr": main_se,
        },
        gate_passed=gate,
    )


def bernstein_bound(
    u: float,
    n: int,
    pool_size: int,
    variance: float,
    gamma_aps: float,
    eta: float,
    sup_norm: float,
) -> float:
    """2 eta exp(-n u^2 gamma / (8 |P| V (1 + 1/gamma) + 20 u M))."""
    denominator = (
        8.0 * pool_size * variance * (1.0 + 1.0 / gamma_aps) + 20.0 * u * sup_norm
    )
    if denominator <= 0.0:
        return 2.0 * eta if u == 0.0 else 0.0
    return 2.0 * eta * math.exp(-n * u**2 * gamma_aps / denominator)


def verify_bernstein(cfg: ExperimentConfig) -> TailReport:
    """P(|S/n - sum_P mu_P E_pi_P g| >= u) against the mixed Bernstein bound.

    The start distribution defaults to the stationary law of the first chain.
    """
    g = cfg.g_table()
    pool = cfg.effective_pool()
    if cfg.initial is None:
        first = stationary_distribution(
            pool.chains[0].matrix, cfg.options.tolerances.stationary
        )
        pool = pool.with_initial(first)
    summary = pool_summary(pool, cfg.options)

    means = [float(a.pi.probs @ g) for a in summary.per_chain]
    variance = max(
        float(a.pi.probs @ (g - mean) ** 2) for a, mean in zip(summary.per_chain, means)
    )
    target = float(np.dot(pool.weights, means))
    sup_norm = float(np.max(np.abs(g)))

    batch = simulate_counts(pool, cfg.n, cfg.trials, cfg.seed, cfg.mode)
    averages = batch.counts @ g / cfg.n
    empirical, stderr = _tail(np.abs(averages - target), cfg.u_grid)
    bound = [
        bernstein_bound(
            u, cfg.n, pool.size, variance, summary.gamma_aps, summary.eta, sup_norm
        )
        for u in cfg.u_grid
    ]
    return TailReport(
        name="bernstein",
        grid_name="u",
        grid=cfg.u_grid,
        empirical=tuple(empirical),
        stderr=tuple(stderr),
        bound=tuple(bound),
        trials=cfg.trials,
        details={
            "variance": variance,
            "gamma_aps": summary.gamma_aps,
            "eta": summary.eta,
            "sup_norm": sup_norm,
            "target_mean": target,
            "initial": pool.initial.probs.tolist(),
        },
    )


def function_class(cfg: ExperimentConfig) -> FloatArray:
    """Per-state tables of the class F; random +-1 tables unless configured."""
    if cfg.functions is not None:
        return np.asarray(cfg.functions, dtype=np.float64)
    rng = stream(cfg.seed, "functions")
    return 2.0 * rng.integers(0, 2, size=(cfg.n_functions, cfg.pool.n_states)) - 1.0


def verify_symmetrization(
    cfg: ExperimentConfig, summary: Optional[PoolSummary] = None
) -> ComparisonReport:
    """E sup_F |P_n f - P f| against 2 E sup_F |P_n^0 f| + A_n."""
    tables = function_class(cfg)
    pool = cfg.effective_pool()
    summary = summary or pool_summary(pool, cfg.options)
    sup_norm = float(np.max(np.abs(tables)))
    population = np.zeros(tables.shape[0])
    for weight, analysis in zip(pool.weights, summary.per_chain):
        population += weight * (tables @ analysis.pi.probs)

    batch = simulate_counts(
        pool, cfg.n, cfg.trials, cfg.seed, cfg.mode, with_signs=True
    )
    deviation = np.max(np.abs(batch.counts @ tables.T / cfg.n - population), axis=1)
    symmetrized = np.max(np.abs(batch.require_signed() @ tables.T / cfg.n), axis=1)
    a_n, b_n = symmetrization_offset(pool, cfg.n, sup_norm, summary)

    lhs, lhs_se = _mean_and_stderr(deviation)
    sym, sym_se = _mean_and_stderr(symmetrized)
    return ComparisonReport(
        name="symmetrization",
        lhs=lhs,
        lhs_stderr=lhs_se,
        rhs=2.0 * sym + a_n,
        rhs_stderr=2.0 * sym_se,
        details={
            "A_n": a_n,
            "B_n": b_n,
            "M": sup_norm,
            "functions": int(tables.shape[0]),
        },
    )


def _log_factor(m: int, alpha: float) -> float:
    return math.log(2.0 * (m + 1) / alpha)


def _m_scaling(cfg: ExperimentConfig, inputs: BoundInputs) -> list[dict[str, Any]]:
    """Ratio of the lemma5 deviation term at each m to its value at the first m.

    ``matches`` checks the formula against sqrt(ln(2(m + 1) / alpha)) evaluated
    directly.
    """
    base_m = cfg.m_grid[0]
    base = rademacher_bound("lemma5", replace(inputs, m=base_m)).terms["deviation"]
    rows = []
    for m in cfg.m_grid:
        subterm = rademacher_bound("lemma5", replace(inputs, m=m)).terms["deviation"]
        ratio = subterm / base
        direct = math.sqrt(_log_factor(m, cfg.alpha) / _log_factor(base_m, cfg.alpha))
        rows.append(
            {
                "m": m,
                "subterm": subterm,
                "ratio": ratio,
                "direct_ratio": direct,
                "log_m_ratio": m_dependence(m) / m_dependence(base_m),
                "matches": abs(ratio - direct) <= 1e-9,
            }
        )
    return rows


def verify_generalization(cfg: ExperimentConfig) -> CoverageReport:
    """Coverage of E_delta(f) <= thm1 bound over independent training runs."""
    fam = cfg.kernel_family()
    pool = cfg.effective_pool()
    summary = pool_summary(pool, cfg.options)
    _, b_n = symmetrization_offset(pool, cfg.n, 1.0, summary)
    opts = TrainOptions(iterations=cfg.iterations)

    def one_run(run: int) -> tuple[float, float]:
        seed = _derived_seed(cfg.seed, "run", run)
        ds = simulate_dataset(pool, cfg.n, seed, cfg.mode)
        if cfg.force_zero:
            model = zero_model(fam, ds.features, cfg.delta)
        else:
            model = train(ds, fam, cfg.delta, opts)
        inputs = BoundInputs(
            n=cfg.n,
            m=fam.m,
            B=fam.B,
            kappa=kappa(fam, ds.features),
            delta=cfg.delta,
            alpha=cfg.alpha,
            tau_min=summary.tau_min,
            b_n=b_n,
        )
        bound = generalization_bound("thm1", inputs).value
        return estimation_error(model, ds, pool, cfg.delta), bound

    log_info(f"Running {cfg.runs} train-and-evaluate runs")
    with ThreadPoolExecutor(max_workers=worker_count()) as executor:
        results = list(executor.map(one_run, range(cfg.runs)))

    errors = np.array([error for error, _ in results])
    bounds = np.array([bound for _, bound in results])
    slack = bounds - errors
    quantiles = {
        f"q{int(level * 100):02d}": float(np.quantile(slack, level))
        for level in (0.0, 0.05, 0.5, 0.95, 1.0)
    }
    # B and kappa cancel in the ratios
    reference = BoundInputs(n=cfg.n, m=fam.m, delta=cfg.delta, alpha=cfg.alpha)
    return CoverageReport(
        name="generalization",
        runs=cfg.runs,
        covered=int(np.sum(errors <= bounds)),
        alpha=cfg.alpha,
        slack_quantiles=quantiles,
        m_scaling=_m_scaling(cfg, reference),
        details={
            "tau_min": summary.tau_min,
            "B_n": b_n,
            "mean_estimation_error": float(errors.mean()),
            "mean_bound": float(bounds.mean()),
            "family": fam.to_dict(),
            "force_zero": cfg.force_zero,
        },
    )


def verify_spectral_relations(
    pool: ChainPool, options: Optional[AnalysisOptions] = None
) -> RelationReport:
    """Gap and mixing-time inequalities of every chain and of the pool aggregates."""
    summary = pool_summary(pool, options)
    relations: list[Relation] = []
    for index, analysis in enumerate(summary.per_chain):
        relations.extend(gap_mixing_relations(analysis, f"chain {index}"))
    for eps, t in sorted(summary.t_amix.items()):
        if eps < 0.5 and t > 0:
            relations.append(
                Relation(
                    f"pool: (1 - 2*{eps:g})/t_amix({eps:g}) <= gamma_aps",
                    (1.0 - 2.0 * eps) / t,
                    summary.gamma_aps,
                )
            )
    t_amix = summary.t_amix[0.25]
    if t_amix > 0:
        relations.append(
            Relation(
                "pool: 1/(2 t_amix) <= gamma_aps",
                1.0 / (2.0 * t_amix),
                summary.gamma_aps,
            )
        )
    return RelationReport(name="spectral", relations=tuple(relations))
