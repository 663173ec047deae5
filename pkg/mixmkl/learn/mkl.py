"""Multiple-kernel margin classifier trained by alternating projected subgradient."""

import math
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..chain.core import stationary_distribution
from ..kernels.engine import (
    CombinationWeights,
    KernelFamily,
    as_points,
    combine,
    combined_kernel,
    family_from_dict,
    gram_stack,
)
from ..mixed.simulate import MixedDataset
from ..pool.model import ChainPool
from ..shared.cli import log_debug
from ..shared.errors import (
    ChainError,
    ConfigError,
    InvalidMarginError,
    SingleClassDataError,
)

FloatArray = NDArray[np.float64]


@dataclass(frozen=True)
class TrainOptions:
    iterations: int = 500
    eta_step: float = 0.1
    check_psd: bool = True

    def __post_init__(self) -> None:
        if self.iterations < 1:
            raise ConfigError("iterations must be at least 1")
        if not self.eta_step > 0.0:
            raise ConfigError("eta_step must be positive")


@dataclass(frozen=True)
class MklModel:
    """f(x) = sum_j alpha_j K_eta(x_j, x) with alpha' G(eta) alpha <= B^2."""

    alpha: FloatArray
    eta: CombinationWeights
    train_points: FloatArray
    family: KernelFamily
    delta: float
    objective: float = 0.0
    history: tuple[float, ...] = field(default=(), compare=False)

    @property
    def B(self) -> float:
        return self.family.B

    @property
    def q(self) -> float:
        return self.family.q

    def rkhs_norm_squared(self) -> float:
        stack = gram_stack(self.family, self.train_points, check_psd=False)
        gram = combine(stack, self.eta)
        return float(self.alpha @ gram @ self.alpha)

    def to_dict(self) -> dict[str, Any]:
        return {
            "alpha": self.alpha.tolist(),
            "eta": self.eta.eta.tolist(),
            "family": self.family.to_dict(),
            "train_points": self.train_points.tolist(),
            "delta": self.delta,
            "objective": self.objective,
            "history": list(self.history),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "MklModel":
        try:
            family = family_from_dict(data["family"])
            return cls(
                alpha=np.asarray(data["alpha"], dtype=np.float64),
                eta=CombinationWeights(
                    np.asarray(data["eta"], dtype=np.float64), family.q
                ),
                train_points=as_points(data["train_points"]),
                family=family,
                delta=float(data["delta"]),
                objective=float(data.get("objective", 0.0)),
                history=tuple(float(v) for v in data.get("history", ())),
            )
        except KeyError as e:
            raise ConfigError(f"model document lacks {e}") from e


def _check_margin(delta: float) -> None:
    if not 0.0 < delta <= 1.0:
        raise InvalidMarginError(f"margin delta must lie in (0, 1], got {delta}")


def zero_model(fam: KernelFamily, points: ArrayLike, delta: float) -> MklModel:
    """The model f = 0 on the given training points."""
    _check_margin(delta)
    train_points = as_points(points)
    return MklModel(
        alpha=np.zeros(train_points.shape[0]),
        eta=CombinationWeights.uniform(fam.m, fam.q),
        train_points=train_points,
        family=fam,
        delta=delta,
        objective=1.0,
        history=(1.0,),
    )


def _hinge(margins: FloatArray) -> float:
    return float(np.mean(np.maximum(0.0, 1.0 - margins)))


def _project(beta: FloatArray, gram: FloatArray, radius: float) -> FloatArray:
    norm_sq = float(beta @ gram @ beta)
    if norm_sq > radius**2:
        return beta * (radius / math.sqrt(norm_sq))
    return beta


def _eta_step(
    eta: FloatArray, grad: FloatArray, q: float, step: float
) -> Optional[CombinationWeights]:
    if q == 1.0:
        # exponentiated gradient keeps eta on the simplex
        logits = np.log(np.maximum(eta, 1e-300)) - step * grad
        raw = np.exp(logits - logits.max())
        return CombinationWeights(raw / raw.sum(), q)
    raw = np.maximum(eta - step * grad, 0.0)
    if not np.any(raw > 0.0):
        return None
    return CombinationWeights.normalized(raw, q)


def train(
    ds: MixedDataset,
    fam: KernelFamily,
    delta: float,
    opts: Optional[TrainOptions] = None,
) -> MklModel:
    """Minimise (1/n) sum phi(y_i f(x_i) / delta) over the radius-B ball of H_K.

    The iterate is beta = alpha / delta, so the objective depends on G beta only
    and the feasible ball has radius B / delta. Steps that increase the loss
    are rejected, which keeps the recorded history non-increasing.
    """
    _check_margin(delta)
    opts = opts or TrainOptions()
    y = ds.require_labels().astype(np.float64)
    if np.unique(y).size < 2:
        raise SingleClassDataError("training data needs both labels")

    grams = gram_stack(fam, ds.features, check_psd=opts.check_psd)
    top = np.array([float(np.linalg.eigvalsh(g)[-1]) for g in grams])
    n = ds.n
    radius = fam.B / delta

    weights = CombinationWeights.uniform(fam.m, fam.q)
    gram = combine(grams, weights)
    beta = np.zeros(n)
    loss = _hinge(y * (gram @ beta))
    history = [loss]

    for t in range(1, opts.iterations + 1):
        margins = y * (gram @ beta)
        active = (margins <= 1.0).astype(np.float64)
        if not active.any():
            history.append(loss)
            continue
        lipschitz = float(weights.eta @ top)
        if lipschitz > 0.0:
            direction = gram @ (active * y) / n
            candidate = _project(beta + direction / (lipschitz * t), gram, radius)
            candidate_loss = _hinge(y * (gram @ candidate))
            if candidate_loss <= loss:
                beta, loss = candidate, candidate_loss

        if fam.m > 1:
            margins = y * (gram @ beta)
            active = (margins <= 1.0).astype(np.float64)
            grad = -np.array([(active * y) @ (g @ beta) for g in grams]) / n
            stepped = _eta_step(weights.eta, grad, fam.q, opts.eta_step)
            if stepped is not None:
                new_gram = combine(grams, stepped)
                new_beta = _project(beta, new_gram, radius)
                new_loss = _hinge(y * (new_gram @ new_beta))
                if new_loss <= loss:
                    weights, gram, beta, loss = stepped, new_gram, new_beta, new_loss
        history.append(loss)

    log_debug(
        f"MKL training finished at hinge loss {loss:.6g} "
        f"after {opts.iterations} steps"
    )
    return MklModel(
        alpha=delta * beta,
        eta=weights,
        train_points=as_points(ds.features),
        family=fam,
        delta=delta,
        objective=loss,
        history=tuple(history),
    )


def decision_function(model: MklModel, X: ArrayLike) -> FloatArray:
    """f at every row of X."""
    kernel = combined_kernel(model.family, model.eta, model.train_points, X)
    return kernel.T @ model.alpha


def predict(model: MklModel, x: ArrayLike) -> float:
    """f(x) for a single feature vector."""
    point = np.asarray(x, dtype=np.float64).reshape(1, -1)
    return float(decision_function(model, point)[0])


def empirical_margin_error(
    model: MklModel, ds: MixedDataset, delta: Optional[float] = None
) -> float:
    """Fraction of samples with y f(x) < delta."""
    delta = model.delta if delta is None else delta
    _check_margin(delta)
    y = ds.require_labels()
    values = decision_function(model, ds.features)
    return float(np.mean(y * values < delta))


def true_error_exact(model: MklModel, pool: ChainPool) -> float:
    """sum_P mu_P sum_x pi_P(x) P(y f(psi(x)) <= 0), summed exactly."""
    total = 0.0
    for index, (chain, weight) in enumerate(zip(pool.chains, pool.weights)):
        try:
            pi = stationary_distribution(chain.matrix)
            plus = chain.positive_label_probability()
        except ChainError as e:
            raise e.for_chain(index) from e
        values = decision_function(model, chain.embedding)
        # y f <= 0 counts as an error, so f = 0 is wrong for both labels
        wrong = plus * (values <= 0.0) + (1.0 - plus) * (values >= 0.0)
        total += float(weight) * float(pi.probs @ wrong)
    return total


def estimation_error(
    model: MklModel, ds: MixedDataset, pool: ChainPool, delta: Optional[float] = None
) -> float:
    """R(f) - R_delta(f); may be negative."""
    return true_error_exact(model, pool) - empirical_margin_error(model, ds, delta)
