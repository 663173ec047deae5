"""Closed-form Rademacher bounds and generalization bounds for mixed data."""

import math
from collections.abc import Callable, Mapping, Sequence
from dataclasses import asdict, dataclass, field, replace
from typing import Any, Optional

from ..shared.errors import (
    ConfigError,
    InvalidConjugatesError,
    InvalidMarginError,
    MissingInputError,
)

ETA_0 = 23.0 / 22.0

RADEMACHER_KINDS = ("lemma5", "cortes_q", "cortes_l1", "pseudodim")
GENERALIZATION_KINDS = ("thm1", "thm2", "thm3", "corollary", "master")

# complexity formula each theorem plugs into the master bound
_THEOREM_COMPLEXITY = {
    "thm1": "lemma5",
    "thm2": "pseudodim",
    "thm3": "cortes_q",
    "corollary": "cortes_l1",
}


@dataclass(frozen=True)
class BoundInputs:
    n: int
    m: int = 1
    B: float = 1.0
    kappa: float = 1.0
    delta: float = 1.0
    alpha: float = 0.05
    tau_min: Optional[float] = None
    b_n: Optional[float] = None
    q: Optional[float] = None
    r: Optional[float] = None
    d_k: Optional[int] = None
    c_chaos: float = 1.0

    def __post_init__(self) -> None:
        if self.n < 1 or self.m < 1:
            raise ConfigError("n and m must be at least 1")
        if not 0.0 < self.delta <= 1.0:
            raise InvalidMarginError(f"delta must lie in (0, 1], got {self.delta}")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.B <= 0.0 or self.kappa < 0.0:
            raise ConfigError("B must be positive and kappa non-negative")
        if self.q is not None and self.q < 1.0:
            raise ConfigError("q must be at least 1")
        if self.r is not None and self.r < 1.0:
            raise ConfigError("r must be at least 1")
        if self.q is not None and self.r is not None:
            if abs(1.0 / self.q + 1.0 / self.r - 1.0) > 1e-9:
                raise InvalidConjugatesError(
                    f"1/q + 1/r = {1.0 / self.q + 1.0 / self.r:.12g}, not 1"
                )

    def conjugate(self) -> float:
        """The exponent r of the cortes_q bound."""
        if self.r is not None:
            return self.r
        if self.q is not None and self.q > 1.0:
            return self.q / (self.q - 1.0)
        raise MissingInputError("cortes_q needs r, or q > 1")

    def to_dict(self) -> dict[str, Any]:
        return {key: value for key, value in asdict(self).items() if value is not None}


@dataclass(frozen=True)
class BoundReport:
    """A bound value and the terms that sum to it."""

    kind: str
    terms: dict[str, float]
    inputs: dict[str, Any]
    extras: dict[str, float] = field(default_factory=dict)

    @property
    def value(self) -> float:
        return math.fsum(self.terms.values())

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "value": self.value,
            "terms": dict(self.terms),
            "inputs": dict(self.inputs),
            **({"extras": dict(self.extras)} if self.extras else {}),
        }


def m_dependence(m: int, alpha: float = 1.0) -> float:
    """sqrt(ln(2(m + 1) / alpha)), the m-dependent factor of the lemma5 deviation."""
    if m < 1:
        raise ConfigError("m must be at least 1")
    return math.sqrt(math.log(2.0 * (m + 1) / alpha))


def rademacher_bound(kind: str, inputs: BoundInputs) -> BoundReport:
    """Upper bound on the Rademacher complexity of the kernel class."""
    n, B, kappa, m = inputs.n, inputs.B, inputs.kappa, inputs.m
    extras: dict[str, float] = {}
    match kind:
        case "lemma5":
            terms = {
                "expectation": 2.0 * B * kappa / math.sqrt(n),
                "deviation": 8.0
                * B
                * kappa
                * m_dependence(m, inputs.alpha)
                / math.sqrt(2.0 * n),
            }
        case "cortes_q":
            r = inputs.conjugate()
            terms = {
                "complexity": B * kappa * math.sqrt(ETA_0 * r * m ** (1.0 / r) / n)
            }
        case "cortes_l1":
            ceil_log = math.ceil(math.log(m))
            terms = {"complexity": B * kappa * math.sqrt(ETA_0 * math.e * ceil_log / n)}
            extras["log2_variant"] = B * kappa * math.sqrt(
                ETA_0 * math.e * math.ceil(math.log2(m)) / n
            )
        case "pseudodim":
            if inputs.d_k is None:
                raise MissingInputError("pseudodim needs the pseudo-dimension d_K")
            chaos = (
                inputs.c_chaos
                * (1.0 + kappa) ** 2
                * inputs.d_k
                * math.log(2.0 * math.e * n**2)
            )
            terms = {
                "chaos": B * math.sqrt(chaos / n),
                "diagonal": B * kappa / math.sqrt(n),
            }
        case _:
            raise ConfigError(
                f"unknown Rademacher bound {kind!r}; "
                f"choose from {', '.join(RADEMACHER_KINDS)}"
            )
    return BoundReport(kind=kind, terms=terms, inputs=inputs.to_dict(), extras=extras)


def generalization_bound(
    kind: str, inputs: BoundInputs, rademacher_value: Optional[float] = None
) -> BoundReport:
    """Bound on R(f) - R_delta(f) holding with probability at least 1 - alpha.

    ``master`` needs ``rademacher_value``; the theorem kinds fall back to their
    own closed-form complexity bound when it is absent.
    """
    if kind not in GENERALIZATION_KINDS:
        raise ConfigError(
            f"unknown generalization bound {kind!r}; "
            f"choose from {', '.join(GENERALIZATION_KINDS)}"
        )
    if inputs.tau_min is None:
        raise MissingInputError(f"{kind} needs tau_min")
    if inputs.b_n is None:
        raise MissingInputError(f"{kind} needs B_n")

    extras: dict[str, float] = {}
    if rademacher_value is None:
        if kind == "master":
            raise MissingInputError("master bound needs a Rademacher complexity value")
        complexity = rademacher_bound(_THEOREM_COMPLEXITY[kind], inputs)
        rademacher_value = complexity.value
        extras.update(complexity.extras)
    extras["rademacher"] = rademacher_value

    confidence = math.pi**2 / (3.0 * inputs.alpha)
    if kind != "corollary":
        confidence *= 2.0
    # ln ln(2/delta) is negative for delta > 2/e; kept as is
    margin_term = math.log(math.log(2.0 / inputs.delta))
    scale = math.sqrt(inputs.tau_min / inputs.n)
    terms = {
        "complexity": 8.0 / inputs.delta * rademacher_value,
        "concentration": (math.sqrt(0.5 * math.log(confidence)) + margin_term) * scale,
        "symmetrization": inputs.b_n,
    }
    return BoundReport(kind=kind, terms=terms, inputs=inputs.to_dict(), extras=extras)


def evaluate(
    kind: str, inputs: BoundInputs, rademacher_value: Optional[float] = None
) -> BoundReport:
    """Dispatch to the Rademacher or the generalization family by kind."""
    if kind in RADEMACHER_KINDS:
        return rademacher_bound(kind, inputs)
    return generalization_bound(kind, inputs, rademacher_value)


def bound_sweep(
    kind: str,
    inputs: BoundInputs,
    over: str,
    values: Sequence[int],
    rademacher_value: Optional[float] = None,
    b_n_for: Optional[Callable[[int], float]] = None,
) -> list[dict[str, Any]]:
    """One row per value of ``n`` or ``m``: the bound and its terms.

    ``b_n_for`` recomputes B_n at each n of an n sweep; without it the B_n of
    ``inputs`` is used for every row.
    """
    if over not in ("n", "m"):
        raise ConfigError("sweeps run over n or m")
    if not values:
        raise ConfigError("sweep grid is empty")
    rows = []
    for value in values:
        changes: dict[str, Any] = {over: int(value)}
        if over == "n" and b_n_for is not None:
            changes["b_n"] = b_n_for(int(value))
        report = evaluate(kind, replace(inputs, **changes), rademacher_value)
        rows.append({over: int(value), "value": report.value, **report.terms})
    return rows


def margin_sweep(
    errors_by_delta: Mapping[float, float],
    inputs: BoundInputs,
    kind: str = "thm1",
    rademacher_value: Optional[float] = None,
) -> dict[str, Any]:
    """Minimise R_delta(f) + bound(delta) over a grid of margins.

    The bound holds for every delta in (0, 1] at once, so the smallest total
    is a valid bound on R(f).
    """
    if not errors_by_delta:
        raise ConfigError("margin grid is empty")
    rows = []
    for delta, error in sorted(errors_by_delta.items()):
        at_delta = replace(inputs, delta=delta)
        report = generalization_bound(kind, at_delta, rademacher_value)
        rows.append(
            {
                "delta": delta,
                "margin_error": error,
                "bound": report.value,
                "total": error + report.value,
            }
        )
    best = min(rows, key=lambda row: (row["total"], row["delta"]))
    return {"best_delta": best["delta"], "best_total": best["total"], "rows": rows}
