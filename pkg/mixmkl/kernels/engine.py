"""Base kernels, Gram matrices and L_q-constrained kernel combinations."""

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike, NDArray
from scipy.spatial.distance import cdist

from ..shared.config import DEFAULT_TOLERANCES, Tolerances
from ..shared.errors import (
    ConfigError,
    DimensionMismatchError,
    InvalidWeightsError,
    NotPositiveSemidefiniteError,
    SizeMismatchError,
    UnboundedKernelError,
    UnknownFamilyError,
)
from ..shared.io import require_mapping

FloatArray = NDArray[np.float64]

KERNEL_KINDS = ("linear", "gaussian", "polynomial")
FAMILY_CLASSES = ("finite", "gaussian-metric")


def as_points(X: ArrayLike) -> FloatArray:
    """Feature vectors as an (n, d) float array."""
    try:
        points = np.asarray(X, dtype=np.float64)
    except ValueError as e:
        raise DimensionMismatchError(f"feature vectors of unequal length: {e}") from e
    if points.ndim == 1:
        points = points[:, np.newaxis]
    if points.ndim != 2:
        raise DimensionMismatchError(
            f"expected a list of vectors, got shape {points.shape}"
        )
    if points.shape[0] == 0:
        raise ConfigError("need at least one feature vector")
    return points


@dataclass(frozen=True)
class KernelSpec:
    """linear, gaussian exp(-||x - y||^2 / sigma^2) or polynomial (<x, y> + c)^p."""

    kind: str
    sigma: float = 1.0
    degree: int = 2
    offset: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in KERNEL_KINDS:
            raise ConfigError(f"unknown kernel kind {self.kind!r}")
        if self.kind == "gaussian" and not self.sigma > 0.0:
            raise ConfigError("gaussian width sigma must be positive")
        if self.kind == "polynomial" and (self.degree < 1 or self.offset < 0.0):
            raise ConfigError("polynomial kernel needs degree >= 1 and offset >= 0")

    def evaluate(self, X: FloatArray, Y: FloatArray) -> FloatArray:
        if X.shape[1] != Y.shape[1]:
            raise DimensionMismatchError(
                f"feature dimensions differ: {X.shape[1]} vs {Y.shape[1]}"
            )
        match self.kind:
            case "gaussian":
                return np.exp(-cdist(X, Y, "sqeuclidean") / self.sigma**2)
            case "polynomial":
                return (X @ Y.T + self.offset) ** self.degree
            case _:
                return X @ Y.T

    def diagonal_bound(self, radius: Optional[float]) -> float:
        """sup of K(x, x) over ||x|| <= radius."""
        if self.kind == "gaussian":
            return 1.0
        if radius is None:
            raise UnboundedKernelError(f"{self.kind} kernel needs a domain bound")
        if self.kind == "polynomial":
            return float((radius**2 + self.offset) ** self.degree)
        return float(radius**2)

    def to_dict(self) -> dict[str, Any]:
        match self.kind:
            case "gaussian":
                return {"kind": "gaussian", "sigma": self.sigma}
            case "polynomial":
                return {
                    "kind": "polynomial",
                    "degree": self.degree,
                    "offset": self.offset,
                }
            case _:
                return {"kind": "linear"}


@dataclass(frozen=True)
class KernelFamily:
    """m base kernels combined under sum(eta_i^q) = 1, hypotheses of norm <= B."""

    base: tuple[KernelSpec, ...]
    q: float = 1.0
    B: float = 1.0
    family_class: str = "finite"
    pseudo_dimension: Optional[int] = None

    def __post_init__(self) -> None:
        if not self.base:
            raise ConfigError("kernel family needs at least one base kernel")
        if self.q < 1.0:
            raise ConfigError("q must be at least 1")
        if not self.B > 0.0:
            raise ConfigError("B must be positive")
        if self.family_class not in FAMILY_CLASSES:
            raise ConfigError(f"unknown kernel family class {self.family_class!r}")

    @property
    def m(self) -> int:
        return len(self.base)

    def to_dict(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "B": self.B,
            "q": self.q,
            "class": self.family_class,
            "kernels": [spec.to_dict() for spec in self.base],
        }
        if self.pseudo_dimension is not None:
            doc["pseudo_dimension"] = self.pseudo_dimension
        return doc


def family_from_dict(data: Any) -> KernelFamily:
    doc = require_mapping(data, "kernel family")
    kernels = doc.get("kernels")
    if not isinstance(kernels, list):
        raise ConfigError("kernel family needs a 'kernels' list")
    specs = []
    for entry in kernels:
        entry = require_mapping(entry, "kernel")
        specs.append(
            KernelSpec(
                kind=str(entry.get("kind", "")),
                sigma=float(entry.get("sigma", 1.0)),
                degree=int(entry.get("degree", 2)),
                offset=float(entry.get("offset", 1.0)),
            )
        )
    pseudo = doc.get("pseudo_dimension")
    return KernelFamily(
        base=tuple(specs),
        q=float(doc.get("q", 1.0)),
        B=float(doc.get("B", 1.0)),
        family_class=str(doc.get("class", "finite")),
        pseudo_dimension=None if pseudo is None else int(pseudo),
    )


@dataclass(frozen=True)
class CombinationWeights:
    """Non-negative eta on the L_q unit sphere."""

    eta: FloatArray
    q: float = 1.0
    tol: float = field(default=DEFAULT_TOLERANCES.weights, compare=False)

    def __post_init__(self) -> None:
        eta = np.asarray(self.eta, dtype=np.float64)
        if eta.ndim != 1 or eta.size == 0:
            raise InvalidWeightsError("eta must be a non-empty vector")
        if np.any(eta < 0.0):
            raise InvalidWeightsError("eta must be non-negative")
        total = float(np.sum(eta**self.q))
        if abs(total - 1.0) > self.tol:
            raise InvalidWeightsError(f"sum(eta^q) = {total:.12g}, not 1")
        eta = eta.copy()
        eta.setflags(write=False)
        object.__setattr__(self, "eta", eta)

    @classmethod
    def uniform(cls, m: int, q: float = 1.0) -> "CombinationWeights":
        return cls(np.full(m, m ** (-1.0 / q)), q)

    @classmethod
    def normalized(cls, raw: ArrayLike, q: float = 1.0) -> "CombinationWeights":
        """Scale non-negative ``raw`` onto the L_q sphere."""
        values = np.maximum(np.asarray(raw, dtype=np.float64), 0.0)
        norm = float(np.sum(values**q)) ** (1.0 / q)
        if norm <= 0.0:
            raise InvalidWeightsError("cannot normalise an all-zero weight vector")
        return cls(values / norm, q)


def gram_matrix(
    k: KernelSpec,
    X: ArrayLike,
    check_psd: bool = True,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> FloatArray:
    """G_ij = K(x_i, x_j), symmetric and PSD up to tolerance."""
    points = as_points(X)
    gram = k.evaluate(points, points)
    gram = (gram + gram.T) / 2.0
    if check_psd:
        smallest = float(scipy.linalg.eigvalsh(gram, subset_by_index=[0, 0])[0])
        if smallest < -tolerances.psd:
            raise NotPositiveSemidefiniteError(
                f"{k.kind} Gram has eigenvalue {smallest:.3g}"
            )
    return gram


def cross_gram(k: KernelSpec, X: ArrayLike, Y: ArrayLike) -> FloatArray:
    """K(x_i, y_j) between two point sets."""
    return k.evaluate(as_points(X), as_points(Y))


def gram_stack(
    fam: KernelFamily, X: ArrayLike, check_psd: bool = True
) -> FloatArray:
    """(m, n, n) array of base Gram matrices."""
    points = as_points(X)
    return np.stack([gram_matrix(spec, points, check_psd) for spec in fam.base])


def combine(
    grams: Sequence[FloatArray] | FloatArray, w: CombinationWeights
) -> FloatArray:
    """sum_i eta_i G_i, accumulated in base-kernel order."""
    if len(grams) != w.eta.size:
        raise SizeMismatchError(f"{len(grams)} matrices but {w.eta.size} weights")
    shape = np.shape(grams[0])
    if any(np.shape(g) != shape for g in grams):
        raise SizeMismatchError("matrices to combine differ in size")
    total = w.eta[0] * np.asarray(grams[0], dtype=np.float64)
    for weight, gram in zip(w.eta[1:], grams[1:]):
        total = total + weight * np.asarray(gram, dtype=np.float64)
    return total


def combined_kernel(
    fam: KernelFamily, w: CombinationWeights, X: ArrayLike, Y: ArrayLike
) -> FloatArray:
    """K_eta(x_i, y_j), summed in the same order as ``combine``."""
    return combine([cross_gram(spec, X, Y) for spec in fam.base], w)


def kappa(fam: KernelFamily, domain_hint: float | ArrayLike | None = None) -> float:
    """sup over base kernels and domain points of sqrt(K(x, x)).

    ``domain_hint`` is either the largest feature norm or the feature vectors.
    """
    radius: Optional[float]
    if domain_hint is None:
        radius = None
    elif np.ndim(domain_hint) == 0:
        radius = float(np.asarray(domain_hint))
    else:
        radius = float(np.max(np.linalg.norm(as_points(domain_hint), axis=1)))
    return math.sqrt(max(spec.diagonal_bound(radius) for spec in fam.base))


def pseudo_dimension_bound(fam: KernelFamily, feature_dim: int) -> int:
    """Registered pseudo-dimension bound d_K, or the user-supplied value."""
    if fam.family_class == "gaussian-metric":
        return feature_dim * (feature_dim + 1) // 2
    if fam.pseudo_dimension is not None:
        return fam.pseudo_dimension
    raise UnknownFamilyError(
        "no pseudo-dimension registered for a finite kernel family; supply one"
    )
