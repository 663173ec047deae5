"""Tests for complexity estimators and bound formulas."""

import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixmkl.bounds.complexity import (
    all_sign_vectors,
    chaos_per_draw,
    empirical_chaos_complexity,
    empirical_rademacher,
    quadratic_forms,
    rademacher_per_draw,
    sign_draws,
    weight_supremum,
)
from mixmkl.bounds.formulas import (
    ETA_0,
    BoundInputs,
    bound_sweep,
    evaluate,
    generalization_bound,
    m_dependence,
    margin_sweep,
    rademacher_bound,
)
from mixmkl.kernels import KernelFamily, KernelSpec, gram_stack
from mixmkl.mixed.simulate import MixedDataset, simulate_dataset
from mixmkl.pool.model import ChainPool
from mixmkl.shared.errors import (
    ConfigError,
    InvalidConjugatesError,
    InvalidMarginError,
    MissingInputError,
)

LINEAR = KernelFamily(base=(KernelSpec("linear"),))


def _points(features: np.ndarray) -> MixedDataset:
    n = features.shape[0]
    return MixedDataset(
        features=features,
        chain_ids=np.zeros(n, dtype=np.int64),
        state_ids=np.zeros(n, dtype=np.int64),
    )


def test_rademacher_single_point_is_exact() -> None:
    """Test that n = 1 gives B sqrt(K(x, x)) with zero error."""
    family = KernelFamily(base=(KernelSpec("linear"),), B=3.0)
    ds = _points(np.array([[2.0]]))
    estimate, stderr = empirical_rademacher(ds, family, trials=50)
    assert estimate == pytest.approx(6.0)
    assert stderr == pytest.approx(0.0, abs=1e-15)


def test_rademacher_identity_gram() -> None:
    """Test that an identity Gram gives exactly B / sqrt(n) with zero variance."""
    n = 25
    estimate, stderr = empirical_rademacher(_points(np.eye(n)), LINEAR, trials=200)
    assert estimate == pytest.approx(1.0 / math.sqrt(n), abs=1e-15)
    assert stderr == pytest.approx(0.0, abs=1e-15)


def test_rademacher_vertex_attainment(
    six_state_pool: ChainPool, sample_family: KernelFamily
) -> None:
    """Test that for q = 1 every draw attains the best single kernel."""
    ds = simulate_dataset(six_state_pool, 60, seed=1)
    grams = gram_stack(sample_family, ds.features)
    signs = next(sign_draws(ds.n, 1000, seed=2))
    family_values = rademacher_per_draw(sample_family, grams, signs)
    single = np.stack(
        [
            sample_family.B / ds.n * np.sqrt(np.maximum((signs @ g * signs).sum(1), 0))
            for g in grams
        ],
        axis=1,
    )
    np.testing.assert_allclose(family_values, single.max(axis=1), rtol=0, atol=1e-15)


def test_weight_supremum_dual_norm() -> None:
    """Test the closed-form L_q supremum against feasible weights."""
    values = np.array([[3.0, 4.0], [1.0, 0.0], [-1.0, -2.0]])
    np.testing.assert_allclose(weight_supremum(values, 1.0), [4.0, 1.0, -1.0])
    np.testing.assert_allclose(weight_supremum(values, 2.0), [5.0, 1.0, -1.0])
    rng = np.random.default_rng(0)
    for _ in range(100):
        eta = np.abs(rng.normal(size=2))
        eta /= np.sqrt(np.sum(eta**2))
        assert float(values[0] @ eta) <= 5.0 + 1e-12


def test_chaos_identity_with_quadratic_form(sample_family: KernelFamily) -> None:
    """Test eps' G eps = 2 sum_{i<j} eps_i eps_j G_ij + tr(G) on every draw."""
    points = np.random.default_rng(3).normal(size=(8, 2))
    single = KernelFamily(base=(sample_family.base[0],))
    grams = gram_stack(single, points)
    signs = all_sign_vectors(8)
    off = chaos_per_draw(single, grams, signs) * 8
    forms = quadratic_forms(grams, signs)[:, 0]
    np.testing.assert_allclose(2.0 * off + np.trace(grams[0]), forms, atol=1e-12)


def test_chaos_singleton_family_is_zero() -> None:
    """Test that a single kernel has zero chaos complexity over all signs."""
    ds = _points(np.random.default_rng(4).normal(size=(6, 1)))
    estimate, stderr = empirical_chaos_complexity(
        ds, KernelFamily(base=(KernelSpec("gaussian"),)), exhaustive=True
    )
    assert estimate == pytest.approx(0.0, abs=1e-12)
    assert stderr == 0.0


def test_chaos_two_points_two_kernels() -> None:
    """Test (1/2) E[max(a e1 e2, b e1 e2)] = (max - min)/4 by enumeration."""
    family = KernelFamily(
        base=(KernelSpec("gaussian", sigma=1.0), KernelSpec("gaussian", sigma=2.0))
    )
    a, b = math.exp(-1.0), math.exp(-0.25)
    estimate, _ = empirical_chaos_complexity(
        _points(np.array([[0.0], [1.0]])), family, exhaustive=True
    )
    assert estimate == pytest.approx((max(a, b) - min(a, b)) / 4.0)


def test_chaos_below_pseudo_dimension_term(
    six_state_pool: ChainPool, sample_family: KernelFamily
) -> None:
    """Test the one-sided chaos bound C (1 + kappa)^2 d_K ln(2 e n^2)."""
    ds = simulate_dataset(six_state_pool, 40, seed=5)
    estimate, stderr = empirical_chaos_complexity(ds, sample_family, trials=500)
    bound = 4.0 * 21 * math.log(2.0 * math.e * 40**2)
    assert estimate <= bound + 3.0 * stderr


def test_estimators_are_deterministic(
    desk_pool: ChainPool, sample_family: KernelFamily
) -> None:
    """Test that equal seeds reproduce the estimate bit for bit."""
    ds = simulate_dataset(desk_pool, 30, seed=6)
    first = empirical_rademacher(ds, sample_family, trials=300, seed=9)
    again = empirical_rademacher(ds, sample_family, trials=300, seed=9)
    assert first == again
    with pytest.raises(ConfigError):
        empirical_rademacher(ds, sample_family, trials=0)
    with pytest.raises(ConfigError):
        all_sign_vectors(40)


def test_lemma5_value() -> None:
    """Test 0.2 + 8 sqrt(ln 80 / 200) at n = 100, m = 3, alpha = 0.1."""
    report = rademacher_bound("lemma5", BoundInputs(n=100, m=3, alpha=0.1))
    assert report.value == pytest.approx(0.2 + 8.0 * math.sqrt(math.log(80.0) / 200.0))
    assert report.value == pytest.approx(1.3842, abs=5e-5)
    assert report.value == pytest.approx(sum(report.terms.values()), abs=1e-12)


def test_cortes_bounds() -> None:
    """Test the L1 bound at m = 8 and the m = 1 collapse of the L_q bound."""
    l1 = rademacher_bound("cortes_l1", BoundInputs(n=100, m=8))
    assert l1.value == pytest.approx(math.sqrt(ETA_0 * math.e * 3 / 100))
    assert l1.value == pytest.approx(0.2920, abs=5e-5)
    assert "log2_variant" in l1.extras
    collapsed = math.sqrt(ETA_0 / 100)
    at_r1 = rademacher_bound("cortes_q", BoundInputs(n=100, m=1, r=1.0))
    at_q2 = rademacher_bound("cortes_q", BoundInputs(n=100, m=1, q=2.0))
    assert at_r1.value == pytest.approx(collapsed)
    assert at_q2.value == pytest.approx(math.sqrt(2.0) * collapsed)


def test_rademacher_bound_errors() -> None:
    """Test MissingInput and InvalidConjugates."""
    with pytest.raises(MissingInputError):
        rademacher_bound("pseudodim", BoundInputs(n=10))
    with pytest.raises(MissingInputError):
        rademacher_bound("cortes_q", BoundInputs(n=10))
    with pytest.raises(InvalidConjugatesError):
        BoundInputs(n=10, q=2.0, r=3.0)
    with pytest.raises(InvalidMarginError):
        BoundInputs(n=10, delta=0.0)
    with pytest.raises(ConfigError):
        rademacher_bound("vc", BoundInputs(n=10))


def test_pseudodim_bound() -> None:
    """Test B sqrt(C (1 + kappa)^2 d_K ln(2 e n^2) / n) + B kappa / sqrt(n)."""
    report = rademacher_bound("pseudodim", BoundInputs(n=50, d_k=6, c_chaos=0.5))
    expected = math.sqrt(0.5 * 4.0 * 6 * math.log(2.0 * math.e * 2500) / 50)
    assert report.value == pytest.approx(expected + 1.0 / math.sqrt(50))


def test_generalization_margin_term_at_delta_one() -> None:
    """Test that ln ln 2 enters the concentration term unclamped."""
    inputs = BoundInputs(n=100, m=3, alpha=0.1, tau_min=4.0, b_n=0.2)
    report = generalization_bound("thm1", inputs)
    constant = math.sqrt(0.5 * math.log(2.0 * math.pi**2 / 0.3))
    assert report.terms["concentration"] == pytest.approx(
        (constant + math.log(math.log(2.0))) * 0.2
    )
    assert report.terms["complexity"] == pytest.approx(8.0 * 1.3842, abs=5e-4)
    assert report.terms["symmetrization"] == 0.2


def test_corollary_uses_smaller_confidence_constant() -> None:
    """Test the ln(pi^2/(3 alpha)) constant of the L1 corollary."""
    inputs = BoundInputs(n=100, m=8, alpha=0.1, tau_min=1.0, b_n=0.0)
    report = generalization_bound("corollary", inputs)
    constant = math.sqrt(0.5 * math.log(math.pi**2 / 0.3))
    assert report.terms["concentration"] == pytest.approx(
        (constant + math.log(math.log(2.0))) * 0.1
    )


def test_thm1_scales_with_root_n() -> None:
    """Test that n -> 4n halves the complexity and concentration terms."""
    inputs = BoundInputs(n=100, m=3, delta=0.5, tau_min=5.0, b_n=0.1)
    base = generalization_bound("thm1", inputs)
    quad = generalization_bound("thm1", replace(inputs, n=400))
    for term in ("complexity", "concentration"):
        assert quad.terms[term] == pytest.approx(base.terms[term] / 2.0)


def test_generalization_bound_errors() -> None:
    """Test the missing-input paths of the generalization bounds."""
    with pytest.raises(MissingInputError):
        generalization_bound("thm1", BoundInputs(n=10, b_n=0.1))
    with pytest.raises(MissingInputError):
        generalization_bound("thm1", BoundInputs(n=10, tau_min=4.0))
    complete = BoundInputs(n=10, tau_min=4.0, b_n=0.1)
    with pytest.raises(MissingInputError):
        generalization_bound("master", complete)
    master = generalization_bound("master", complete, rademacher_value=0.05)
    assert master.terms["complexity"] == pytest.approx(0.4)
    assert master.extras["rademacher"] == 0.05


def test_log_m_scaling_of_m_dependent_term() -> None:
    """Test the m = 16 over m = 2 ratio sqrt(ln 34 / ln 6)."""
    ratio = m_dependence(16) / m_dependence(2)
    assert ratio == pytest.approx(math.sqrt(math.log(34.0) / math.log(6.0)), abs=1e-9)
    at_alpha = m_dependence(16, 0.05) / m_dependence(2, 0.05)
    assert at_alpha == pytest.approx(math.sqrt(math.log(680.0) / math.log(120.0)))


@settings(max_examples=50, deadline=None)
@given(
    n=st.integers(1, 5000),
    m=st.integers(1, 64),
    delta=st.floats(0.05, 1.0),
    alpha=st.floats(0.01, 0.5),
)
def test_bound_monotonicity(n: int, m: int, delta: float, alpha: float) -> None:
    """Test that thm1 falls in n, delta and alpha and grows with m."""
    inputs = BoundInputs(n=n, m=m, delta=delta, alpha=alpha, tau_min=4.0, b_n=0.1)
    value = evaluate("thm1", inputs).value
    assert evaluate("thm1", replace(inputs, n=n + 1)).value <= value + 1e-12
    assert evaluate("thm1", replace(inputs, m=m + 1)).value >= value - 1e-12
    assert evaluate("thm1", replace(inputs, delta=min(1.0, delta * 1.1))).value <= (
        value + 1e-12
    )
    assert evaluate("thm1", replace(inputs, alpha=alpha * 1.5)).value <= value + 1e-12


def test_bound_sweep_rows() -> None:
    """Test one row per grid value with the value equal to the term sum."""
    inputs = BoundInputs(n=100, m=3, tau_min=4.0, b_n=0.1, delta=0.5)
    rows = bound_sweep("thm1", inputs, "m", [2, 4, 8, 16])
    assert [row["m"] for row in rows] == [2, 4, 8, 16]
    values = [row["value"] for row in rows]
    assert values == sorted(values)
    with pytest.raises(ConfigError):
        bound_sweep("thm1", inputs, "delta", [1])


def test_bound_sweep_recomputes_b_n_per_n() -> None:
    """Test that b_n_for sets B_n at every n, and only on n sweeps."""
    inputs = BoundInputs(n=100, m=3, tau_min=4.0, b_n=0.2, delta=0.5)

    def b_n_for(n: int) -> float:
        return 2.0 / math.sqrt(n)

    rows = bound_sweep("thm1", inputs, "n", [100, 400, 1600], b_n_for=b_n_for)
    assert [row["symmetrization"] for row in rows] == pytest.approx([0.2, 0.1, 0.05])
    fixed = bound_sweep("thm1", inputs, "n", [100, 1600])
    assert [row["symmetrization"] for row in fixed] == [0.2, 0.2]
    by_m = bound_sweep("thm1", inputs, "m", [2, 4], b_n_for=b_n_for)
    assert [row["symmetrization"] for row in by_m] == [0.2, 0.2]


def test_margin_sweep_picks_smallest_total() -> None:
    """Test that the margin sweep returns the delta with the least total."""
    inputs = BoundInputs(n=400, m=4, tau_min=4.0, b_n=0.1)
    errors = {0.25: 0.05, 0.5: 0.1, 1.0: 0.6}
    result = margin_sweep(errors, inputs)
    totals = {row["delta"]: row["total"] for row in result["rows"]}
    assert result["best_delta"] == min(totals, key=totals.__getitem__)
    assert result["best_total"] == min(totals.values())
    with pytest.raises(ConfigError):
        margin_sweep({}, inputs)
