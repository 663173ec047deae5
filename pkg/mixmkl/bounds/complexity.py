"""Monte Carlo estimators of Rademacher and chaos complexity over a kernel family.

Each Rademacher draw eps yields c_i = eps' G_i eps >= 0 for every base Gram.
The supremum over the L_q-constrained weights of a linear form in eta is
solved in closed form: the largest c_i for q = 1 (a vertex of the simplex),
the dual norm ||c||_r with 1/q + 1/r = 1 otherwise.
"""

import itertools
import math
from collections.abc import Callable, Iterator

import numpy as np
from numpy.typing import NDArray

from ..kernels.engine import KernelFamily, gram_stack
from ..mixed.simulate import MixedDataset
from ..shared.errors import ConfigError
from ..shared.rng import stream

FloatArray = NDArray[np.float64]

EXHAUSTIVE_LIMIT = 16
_CHUNK = 4096


def sign_draws(n: int, trials: int, seed: int) -> Iterator[FloatArray]:
    """Blocks of Rademacher vectors; row i comes from the stream (seed, "trial", i)."""
    for start in range(0, trials, _CHUNK):
        stop = min(start + _CHUNK, trials)
        yield np.stack(
            [
                2.0 * stream(seed, "trial", i).integers(0, 2, size=n) - 1.0
                for i in range(start, stop)
            ]
        )


def all_sign_vectors(n: int) -> FloatArray:
    """Every vector in {-1, +1}^n, one per row."""
    if n > EXHAUSTIVE_LIMIT:
        raise ConfigError(
            f"exhaustive enumeration is limited to n <= {EXHAUSTIVE_LIMIT}"
        )
    return np.array(list(itertools.product((-1.0, 1.0), repeat=n)))


def quadratic_forms(grams: FloatArray, signs: FloatArray) -> FloatArray:
    """(draws, m) array of eps' G_i eps."""
    return np.stack([((signs @ gram) * signs).sum(axis=1) for gram in grams], axis=1)


def _dual_exponent(q: float) -> float:
    return math.inf if q == 1.0 else q / (q - 1.0)


def weight_supremum(values: FloatArray, q: float) -> FloatArray:
    """sup of sum_i eta_i v_i over eta >= 0 with sum eta_i^q = 1, per row."""
    if q == 1.0:
        return values.max(axis=1)
    r = _dual_exponent(q)
    positive = np.maximum(values, 0.0)
    dual = (positive**r).sum(axis=1) ** (1.0 / r)
    # all-nonpositive rows: the best eta sits on the largest coordinate
    return np.where(values.max(axis=1) > 0.0, dual, values.max(axis=1))


def rademacher_per_draw(
    fam: KernelFamily, grams: FloatArray, signs: FloatArray
) -> FloatArray:
    """(B/n) sqrt(sup_eta eps' G(eta) eps) for each row of ``signs``."""
    n = grams.shape[1]
    forms = np.maximum(quadratic_forms(grams, signs), 0.0)
    return fam.B / n * np.sqrt(weight_supremum(forms, fam.q))


def chaos_per_draw(
    fam: KernelFamily, grams: FloatArray, signs: FloatArray
) -> FloatArray:
    """(1/n) sup_K sum_{i<j} eps_i eps_j K(x_i, x_j) for each row of ``signs``."""
    n = grams.shape[1]
    traces = np.trace(grams, axis1=1, axis2=2)
    off_diagonal = (quadratic_forms(grams, signs) - traces[np.newaxis, :]) / 2.0
    return weight_supremum(off_diagonal, fam.q) / n


def _estimate(
    ds: MixedDataset,
    fam: KernelFamily,
    trials: int,
    seed: int,
    exhaustive: bool,
    per_draw: Callable[[KernelFamily, FloatArray, FloatArray], FloatArray],
) -> tuple[float, float]:
    grams = gram_stack(fam, ds.features)
    if exhaustive:
        values = per_draw(fam, grams, all_sign_vectors(ds.n))
        return float(values.mean()), 0.0
    if trials < 1:
        raise ConfigError("trials must be at least 1")
    values = np.concatenate(
        [per_draw(fam, grams, block) for block in sign_draws(ds.n, trials, seed)]
    )
    stderr = float(values.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return float(values.mean()), stderr


def empirical_rademacher(
    ds: MixedDataset,
    fam: KernelFamily,
    trials: int = 1000,
    seed: int = 0,
    exhaustive: bool = False,
) -> tuple[float, float]:
    """Estimate and Monte Carlo standard error of the empirical Rademacher complexity.

    With ``exhaustive`` the average runs over all 2^n sign vectors and the
    error is zero.
    """
    return _estimate(ds, fam, trials, seed, exhaustive, rademacher_per_draw)


def empirical_chaos_complexity(
    ds: MixedDataset,
    fam: KernelFamily,
    trials: int = 1000,
    seed: int = 0,
    exhaustive: bool = False,
) -> tuple[float, float]:
    """Estimate and standard error of the empirical chaos complexity U_n(K)."""
    return _estimate(ds, fam, trials, seed, exhaustive, chaos_per_draw)
