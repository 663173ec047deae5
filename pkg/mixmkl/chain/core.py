"""Exact spectral and mixing-time analysis of a single finite-state chain."""

import math
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike, NDArray

from ..shared.config import DEFAULT_TOLERANCES, AnalysisOptions, Tolerances
from ..shared.errors import (
    ConfigError,
    NeverMixesError,
    NonStochasticError,
    NotAbsolutelyContinuousError,
    NotErgodicError,
    NotMixedWithinHorizonError,
    TooSmallError,
    ZeroStationaryMassError,
)

FloatArray = NDArray[np.float64]

# Horizon doublings tried when the default t_max is too short for the epsilon grid.
_MAX_HORIZON_DOUBLINGS = 6


def _frozen(values: ArrayLike) -> FloatArray:
    array = np.array(values, dtype=np.float64)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class TransitionMatrix:
    """Validated row-stochastic matrix."""

    rows: FloatArray

    @property
    def n_states(self) -> int:
        return int(self.rows.shape[0])


@dataclass(frozen=True)
class Distribution:
    """Probability vector over the states of a chain."""

    probs: FloatArray

    @property
    def min_mass(self) -> float:
        """pi_* = smallest entry."""
        return float(self.probs.min())


@dataclass(frozen=True)
class SpectralSummary:
    gamma_star: float
    gamma_reversible: Optional[float]
    lam: float
    is_reversible: bool


@dataclass(frozen=True)
class MixingProfile:
    """Worst-case TV distance d(t) for t = 0..t_max."""

    d: FloatArray

    @property
    def t_max(self) -> int:
        return int(self.d.shape[0] - 1)


@dataclass(frozen=True)
class Relation:
    """One inequality lhs <= rhs evaluated on exact quantities."""

    name: str
    lhs: float
    rhs: float
    holds: bool = field(init=False)

    def __post_init__(self) -> None:
        slack = 1e-12 * max(1.0, abs(self.rhs))
        object.__setattr__(self, "holds", bool(self.lhs <= self.rhs + slack))

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "holds": self.holds,
        }


@dataclass(frozen=True)
class ChainAnalysis:
    """Every single-chain quantity the pool aggregates."""

    pi: Distribution
    spectral: SpectralSummary
    gamma_ps: float
    k_star: int
    profile: MixingProfile
    t_mix: dict[float, int]
    tau_min: float

    @property
    def d1(self) -> float:
        """One-step TV decay d(1)."""
        return float(self.profile.d[1])

    def to_dict(self) -> dict[str, Any]:
        return {
            "pi": self.pi.probs.tolist(),
            "pi_min": self.pi.min_mass,
            "gamma_star": self.spectral.gamma_star,
            "gamma_reversible": self.spectral.gamma_reversible,
            "lambda": self.spectral.lam,
            "is_reversible": self.spectral.is_reversible,
            "gamma_ps": self.gamma_ps,
            "k_star": self.k_star,
            "t_max": self.profile.t_max,
            "t_mix": {f"{eps:g}": t for eps, t in sorted(self.t_mix.items())},
            "tau_min": self.tau_min,
        }


def validate_chain(
    raw_matrix: ArrayLike, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> TransitionMatrix:
    """Check that ``raw_matrix`` is a square row-stochastic matrix."""
    rows = np.asarray(raw_matrix, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[0] != rows.shape[1]:
        raise NonStochasticError(f"transition matrix must be square, got {rows.shape}")
    if rows.shape[0] < 2:
        raise TooSmallError("transition matrix needs at least 2 states")
    if not np.all(np.isfinite(rows)):
        raise NonStochasticError("transition matrix has non-finite entries")
    if np.any(rows < 0.0) or np.any(rows > 1.0 + tolerances.stochastic):
        raise NonStochasticError("transition matrix entries must lie in [0, 1]")
    sums = rows.sum(axis=1)
    worst = int(np.argmax(np.abs(sums - 1.0)))
    if abs(sums[worst] - 1.0) > tolerances.stochastic:
        raise NonStochasticError(f"row {worst} sums to {sums[worst]:.12g}, not 1")
    return TransitionMatrix(_frozen(rows))


def make_distribution(
    probs: ArrayLike, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> Distribution:
    """Validate a probability vector and renormalise it exactly."""
    values = np.asarray(probs, dtype=np.float64)
    if values.ndim != 1 or values.size == 0:
        raise ConfigError("distribution must be a non-empty vector")
    if np.any(values < 0.0) or not np.all(np.isfinite(values)):
        raise ConfigError("distribution entries must be finite and non-negative")
    if abs(values.sum() - 1.0) > tolerances.stochastic:
        raise ConfigError(f"distribution sums to {values.sum():.12g}, not 1")
    return Distribution(_frozen(values / values.sum()))


def is_primitive(P: TransitionMatrix) -> bool:
    """True when some power P^k, k <= (n-1)^2 + 1, is entry-wise positive."""
    n = P.n_states
    bound = (n - 1) ** 2 + 1
    pattern = (P.rows > 0.0).astype(np.int64)
    power = 1
    while power < bound:
        pattern = np.minimum(pattern @ pattern, 1)
        power *= 2
    return bool(np.all(pattern > 0))


def _gth(rows: FloatArray) -> FloatArray:
    """Grassmann-Taksar-Heyman elimination for an irreducible row-stochastic matrix."""
    a = rows.copy()
    n = a.shape[0]
    for k in range(n - 1, 0, -1):
        scale = a[k, :k].sum()
        a[:k, k] /= scale
        a[:k, :k] += np.outer(a[:k, k], a[k, :k])
    pi = np.zeros(n)
    pi[0] = 1.0
    for k in range(1, n):
        pi[k] = pi[:k] @ a[:k, k]
    return pi / pi.sum()


def stationary_distribution(
    P: TransitionMatrix, tol: Optional[float] = None
) -> Distribution:
    """Stationary distribution of an ergodic chain, ||pi P - pi||_1 <= tol."""
    tol = DEFAULT_TOLERANCES.stationary if tol is None else tol
    if tol <= 0:
        raise ConfigError("stationarity tolerance must be positive")
    if not is_primitive(P):
        raise NotErgodicError("chain is not irreducible and aperiodic")

    pi = _gth(P.rows)
    residual = float(np.abs(pi @ P.rows - pi).sum())
    # GTH is subtraction-free; a few power steps absorb leftover rounding
    for _ in range(100):
        if residual <= tol:
            break
        pi = pi @ P.rows
        pi /= pi.sum()
        residual = float(np.abs(pi @ P.rows - pi).sum())
    if residual > tol:
        raise NotErgodicError(
            f"stationary residual {residual:.3g} above tolerance {tol:.3g}"
        )
    return Distribution(_frozen(pi))


def _require_positive(pi: Distribution) -> None:
    if np.any(pi.probs <= 0.0):
        raise ZeroStationaryMassError("stationary distribution has zero entries")


def time_reversal(P: TransitionMatrix, pi: Distribution) -> TransitionMatrix:
    """P*(x, y) = pi(y) P(y, x) / pi(x)."""
    _require_positive(pi)
    p = pi.probs
    reversed_rows = P.rows.T * p[np.newaxis, :] / p[:, np.newaxis]
    return TransitionMatrix(_frozen(reversed_rows))


def is_reversible(
    P: TransitionMatrix, pi: Distribution, tol: Optional[float] = None
) -> bool:
    """Detailed balance pi(x)P(x,y) = pi(y)P(y,x) within ``tol``."""
    tol = DEFAULT_TOLERANCES.reversible if tol is None else tol
    flow = pi.probs[:, np.newaxis] * P.rows
    return bool(np.max(np.abs(flow - flow.T)) <= tol)


def _symmetrized(matrix: FloatArray, pi: Distribution) -> FloatArray:
    # D^{1/2} M D^{-1/2} is symmetric when M is self-adjoint in L2(pi)
    root = np.sqrt(pi.probs)
    sym = root[:, np.newaxis] * matrix / root[np.newaxis, :]
    return (sym + sym.T) / 2.0


def spectral_gaps(
    P: TransitionMatrix,
    pi: Distribution,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> SpectralSummary:
    """Absolute spectral gap, and the spectral gap when the chain is reversible."""
    reversible = is_reversible(P, pi, tolerances.reversible)
    eigenvalues: NDArray[Any]
    if reversible and np.all(pi.probs > 0.0):
        eigenvalues = scipy.linalg.eigvalsh(_symmetrized(P.rows, pi))
    else:
        eigenvalues = scipy.linalg.eigvals(P.rows)

    unit = np.abs(eigenvalues - 1.0) < tolerances.unit_eigenvalue
    if int(unit.sum()) != 1:
        # eigenvalue 1 is not simple
        gamma_star = 0.0
        gamma_rev: Optional[float] = 0.0 if reversible else None
    else:
        rest = eigenvalues[~unit]
        gamma_star = float(np.clip(1.0 - np.max(np.abs(rest)), 0.0, 1.0))
        gamma_rev = None
        if reversible:
            gamma_rev = float(np.clip(1.0 - np.max(np.real(rest)), 0.0, 1.0))
    return SpectralSummary(
        gamma_star=gamma_star,
        gamma_reversible=gamma_rev,
        lam=1.0 - gamma_star,
        is_reversible=reversible,
    )


def pseudo_spectral_gap(
    P: TransitionMatrix, pi: Distribution, k_max: int = 25
) -> tuple[float, int]:
    """max over k = 1..k_max of gamma((P*)^k P^k) / k, with its maximiser."""
    if k_max < 1:
        raise ConfigError("k_max must be at least 1")
    reversed_rows = time_reversal(P, pi).rows

    forward = np.eye(P.n_states)
    backward = np.eye(P.n_states)
    best, k_star = -math.inf, 1
    for k in range(1, k_max + 1):
        forward = forward @ P.rows
        backward = backward @ reversed_rows
        eigenvalues = scipy.linalg.eigvalsh(_symmetrized(backward @ forward, pi))
        gap = max(0.0, 1.0 - float(eigenvalues[-2]))
        if gap / k > best:
            best, k_star = gap / k, k
    return float(best), k_star


def tv_decay_profile(
    P: TransitionMatrix, pi: Distribution, t_max: int
) -> MixingProfile:
    """d(t) = max_x TV(P^t(x, .), pi) for t = 0..t_max."""
    if t_max < 1:
        raise ConfigError("t_max must be at least 1")
    power = np.eye(P.n_states)
    distances = np.empty(t_max + 1)
    distances[0] = 0.5 * np.abs(power - pi.probs).sum(axis=1).max()
    for t in range(1, t_max + 1):
        power = power @ P.rows
        distances[t] = 0.5 * np.abs(power - pi.probs).sum(axis=1).max()
    # d is non-increasing; the running minimum removes rounding wiggles only
    distances = np.minimum.accumulate(np.clip(distances, 0.0, 1.0))
    return MixingProfile(_frozen(distances))


def default_horizon(gamma_ps: float, n_states: int) -> int:
    """10 * ceil(1/gamma_ps), or 10 * n_states for a zero pseudo gap."""
    if gamma_ps > 0.0:
        return 10 * math.ceil(1.0 / gamma_ps)
    return 10 * n_states


def mixing_time(profile: MixingProfile, eps: float) -> int:
    """t_mix(eps) = min{t : d(t) <= eps}."""
    if not 0.0 < eps < 1.0:
        raise ConfigError(f"epsilon must lie in (0, 1), got {eps}")
    hits = np.flatnonzero(profile.d <= eps)
    if hits.size == 0:
        raise NotMixedWithinHorizonError(
            f"d({profile.t_max}) = {profile.d[-1]:.6g} > {eps:g}; raise t_max"
        )
    return int(hits[0])


def tau_min_single(
    profile: MixingProfile, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> float:
    """min over t >= 1 of t * ((2 - d(t)) / (1 - d(t)))^2.

    Only steps where d strictly drops are candidates: at those t the mixing time
    of eps = d(t) is exactly t.
    """
    d = profile.d
    steps = np.arange(1, d.shape[0])
    candidates = (d[1:] < d[:-1]) & (d[1:] < 1.0 - tolerances.never_mixes)
    if not np.any(candidates):
        raise NeverMixesError("TV distance never drops below its starting value")
    t = steps[candidates]
    eps = d[1:][candidates]
    return float(np.min(t * ((2.0 - eps) / (1.0 - eps)) ** 2))


def chi_divergence_norm(nu: Distribution, pi: Distribution) -> float:
    """|| d nu / d pi - 1 ||_{L2(pi)}."""
    if nu.probs.shape != pi.probs.shape:
        raise ConfigError("distributions live on different state spaces")
    support = pi.probs > 0.0
    if np.any(nu.probs[~support] > 0.0):
        raise NotAbsolutelyContinuousError("nu charges states with zero pi mass")
    ratio = nu.probs[support] / pi.probs[support]
    return float(np.sqrt(np.sum(pi.probs[support] * (ratio - 1.0) ** 2)))


def _profile_with_horizon(
    P: TransitionMatrix,
    pi: Distribution,
    gamma_ps: float,
    options: AnalysisOptions,
    hardest_eps: float,
) -> MixingProfile:
    if options.t_max is not None:
        return tv_decay_profile(P, pi, options.t_max)
    t_max = default_horizon(gamma_ps, P.n_states)
    profile = tv_decay_profile(P, pi, t_max)
    for _ in range(_MAX_HORIZON_DOUBLINGS):
        if profile.d[-1] <= hardest_eps:
            break
        t_max *= 2
        profile = tv_decay_profile(P, pi, t_max)
    return profile


def analyze_chain(
    P: TransitionMatrix, options: Optional[AnalysisOptions] = None
) -> ChainAnalysis:
    """Compute pi, gaps, pseudo gap, TV profile, t_mix grid and tau_min of one chain."""
    options = options or AnalysisOptions()
    tolerances = options.tolerances
    pi = stationary_distribution(P, tolerances.stationary)
    spectral = spectral_gaps(P, pi, tolerances)
    gamma_ps, k_star = pseudo_spectral_gap(P, pi, options.k_max)

    grid = sorted(set(options.epsilon_grid) | {0.25})
    profile = _profile_with_horizon(P, pi, gamma_ps, options, min(grid))
    t_mix = {eps: mixing_time(profile, eps) for eps in grid}

    # gamma_ps >= (1 - 2 eps)/t_mix(eps) needs k = t_mix(eps) inside the maximum
    horizon = max(t for eps, t in t_mix.items() if eps < 0.5)
    if horizon > options.k_max:
        gamma_ps, k_star = pseudo_spectral_gap(P, pi, horizon)

    return ChainAnalysis(
        pi=pi,
        spectral=spectral,
        gamma_ps=gamma_ps,
        k_star=k_star,
        profile=profile,
        t_mix=t_mix,
        tau_min=tau_min_single(profile, tolerances),
    )


def gap_mixing_relations(analysis: ChainAnalysis, label: str = "") -> list[Relation]:
    """Gap/mixing-time inequalities of one chain, evaluated exactly."""
    prefix = f"{label}: " if label else ""
    t_mix = float(analysis.t_mix[0.25])
    pi_min = analysis.pi.min_mass
    gamma_star = analysis.spectral.gamma_star
    gamma_ps = analysis.gamma_ps
    relations: list[Relation] = []

    gamma_rev = analysis.spectral.gamma_reversible
    if analysis.spectral.is_reversible and gamma_rev is not None:
        relations.append(
            Relation(f"{prefix}gamma_star <= gamma", gamma_star, gamma_rev)
        )
        if gamma_star > 0.0:
            relations.append(
                Relation(
                    f"{prefix}(1/gamma_star - 1) ln 2 <= t_mix",
                    (1.0 / gamma_star - 1.0) * math.log(2.0),
                    t_mix,
                )
            )
            relations.append(
                Relation(
                    f"{prefix}t_mix <= ln(4/pi_min)/gamma_star",
                    t_mix,
                    math.log(4.0 / pi_min) / gamma_star,
                )
            )
    if gamma_ps > 0.0:
        relations.append(
            Relation(f"{prefix}1/(2 gamma_ps) <= t_mix", 1.0 / (2.0 * gamma_ps), t_mix)
        )
        relations.append(
            Relation(
                f"{prefix}t_mix <= (ln(1/pi_min) + 2 ln 2 + 1)/gamma_ps",
                t_mix,
                (math.log(1.0 / pi_min) + 2.0 * math.log(2.0) + 1.0) / gamma_ps,
            )
        )
    for eps, t in sorted(analysis.t_mix.items()):
        if eps < 0.5 and t > 0:
            relations.append(
                Relation(
                    f"{prefix}(1 - 2*{eps:g})/t_mix({eps:g}) <= gamma_ps",
                    (1.0 - 2.0 * eps) / t,
                    gamma_ps,
                )
            )
    return relations


def random_chain(
    n_states: int, rng: np.random.Generator, reversible: bool = False
) -> TransitionMatrix:
    """Random ergodic chain with strictly positive entries."""
    if n_states < 2:
        raise TooSmallError("random chain needs at least 2 states")
    if reversible:
        weights = rng.random((n_states, n_states)) + 0.01
        weights = weights + weights.T
        rows = weights / weights.sum(axis=1, keepdims=True)
    else:
        rows = rng.dirichlet(np.ones(n_states), size=n_states)
        rows = np.maximum(rows, 1e-6)
        rows = rows / rows.sum(axis=1, keepdims=True)
    return validate_chain(rows)
