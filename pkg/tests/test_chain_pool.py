"""Tests for pools of chains and their aggregated quantities."""

import math
from dataclasses import replace

import numpy as np
import pytest

from mixmkl.chain.core import analyze_chain, random_chain
from mixmkl.pool.model import (
    ChainPool,
    chain_from_dict,
    load_pool,
    make_chain,
    make_pool,
    pool_from_dict,
    pool_to_dict,
)
from mixmkl.pool.summary import (
    marton_block,
    marton_bound,
    marton_matrix_norm,
    partition_sizes,
    pool_summary,
    symmetrization_offset,
)
from mixmkl.shared.errors import (
    ConfigError,
    DegenerateGapError,
    DimensionMismatchError,
    EmptyPoolError,
    NotErgodicError,
)
from mixmkl.shared.rng import stream

from .conftest import two_state


def _pool_of(*ps: float, weights: list[float] | None = None) -> ChainPool:
    chains = [make_chain(two_state(p).rows, emission_flip=[0.1, 0.1]) for p in ps]
    return make_pool(chains, weights or [1.0 / len(ps)] * len(ps), [0.5, 0.5])


def test_sample_pools_load() -> None:
    """Test that every built-in pool loads and validates."""
    for name in ("two-state", "desk", "iid", "six-state"):
        pool = load_pool(sample=name)
        assert pool.size >= 1
        assert pool.weights.sum() == pytest.approx(1.0)
    with pytest.raises(ConfigError):
        load_pool(sample="nope")
    with pytest.raises(ConfigError):
        load_pool()


def test_pool_document_round_trip(six_state_pool: ChainPool) -> None:
    """Test that a pool survives serialization to its document."""
    again = pool_from_dict(pool_to_dict(six_state_pool))
    np.testing.assert_allclose(again.weights, six_state_pool.weights)
    for a, b in zip(again.chains, six_state_pool.chains):
        np.testing.assert_array_equal(a.matrix.rows, b.matrix.rows)
        np.testing.assert_array_equal(a.emission_sign, b.emission_sign)


def test_chain_document_becomes_single_pool() -> None:
    """Test that a bare chain document loads as a pool of one."""
    pool = pool_from_dict({"states": 2, "rows": [[0.75, 0.25], [0.25, 0.75]]})
    assert pool.size == 1
    assert pool.chains[0].emission_flip is None
    np.testing.assert_array_equal(pool.chains[0].embedding, np.eye(2))


def test_pool_validation_errors() -> None:
    """Test the pool-level validation errors."""
    with pytest.raises(EmptyPoolError):
        pool_from_dict({"chains": []})
    with pytest.raises(ConfigError):
        chain_from_dict({"states": 3, "rows": [[0.5, 0.5], [0.5, 0.5]]})
    small = make_chain(two_state(0.2).rows)
    big = make_chain(np.full((3, 3), 1.0 / 3.0))
    with pytest.raises(DimensionMismatchError):
        make_pool([small, big], [0.5, 0.5])
    with pytest.raises(ConfigError):
        make_pool([small], [0.0])
    with pytest.raises(ConfigError):
        make_chain(two_state(0.2).rows, emission_flip=[0.1, 1.5])


def test_desk_pool_summary(desk_pool: ChainPool) -> None:
    """Test gamma_aps = min(0.75, 0.96) and eta = 1 on the desk pool."""
    summary = pool_summary(desk_pool)
    assert summary.gamma_aps == pytest.approx(0.75)
    assert summary.per_chain[1].gamma_ps == pytest.approx(0.96)
    assert summary.eta == pytest.approx(1.0)
    roots = sum(math.sqrt(0.5 * a.tau_min) for a in summary.per_chain)
    assert summary.tau_min == pytest.approx(roots**2)


def test_single_chain_pool_matches_chain(single_pool: ChainPool) -> None:
    """Test that a pool of one reproduces the chain quantities."""
    summary = pool_summary(single_pool)
    analysis = analyze_chain(single_pool.chains[0].matrix)
    assert summary.tau_min == pytest.approx(analysis.tau_min)
    assert summary.gamma_aps == pytest.approx(analysis.gamma_ps)
    assert summary.t_amix == analysis.t_mix


def test_identical_chains_scale_tau_min() -> None:
    """Test that k identical chains with equal weights give k * tau_min."""
    single = pool_summary(_pool_of(0.3)).tau_min
    for k in (2, 3):
        assert pool_summary(_pool_of(*[0.3] * k)).tau_min == pytest.approx(k * single)


def test_pool_errors_name_the_chain() -> None:
    """Test that a non-ergodic chain is reported with its pool index."""
    periodic = make_chain([[0.0, 1.0], [1.0, 0.0]])
    good = make_chain(two_state(0.3).rows)
    pool = make_pool([good, periodic], [0.5, 0.5])
    with pytest.raises(NotErgodicError, match="chain 1"):
        pool_summary(pool)


def test_aggregated_gap_dominates_mixing(six_state_pool: ChainPool) -> None:
    """Test gamma_aps >= (1 - 2 eps)/t_amix(eps) over the epsilon grid."""
    summary = pool_summary(six_state_pool)
    for eps, t in summary.t_amix.items():
        if eps < 0.5 and t > 0:
            assert (1.0 - 2.0 * eps) / t <= summary.gamma_aps + 1e-12
    assert 1.0 / (2.0 * summary.t_amix[0.25]) <= summary.gamma_aps + 1e-12


def test_random_pools_gap_dominates_mixing() -> None:
    """Test gamma_aps >= 1/(2 t_amix) on 30 seeded three-chain pools."""
    rng = stream(7, "pools")
    failures = []
    for index in range(30):
        n_states = int(rng.integers(3, 9))
        chains = [
            make_chain(random_chain(n_states, rng, reversible=k == 0).rows)
            for k in range(3)
        ]
        summary = pool_summary(make_pool(chains, rng.dirichlet(np.ones(3))))
        t = summary.t_amix[0.25]
        if t > 0 and 1.0 / (2.0 * t) > summary.gamma_aps + 1e-12:
            failures.append(index)
    assert not failures


def test_symmetrization_offset_stationary_start() -> None:
    """Test B_n = 0.2 at n = 100 when nu = pi and lambda = 0.5."""
    pool = _pool_of(0.25)
    a_n, b_n = symmetrization_offset(pool, 100, 1.0)
    assert b_n == pytest.approx(0.2)
    assert a_n == pytest.approx(b_n)
    _, b_4n = symmetrization_offset(pool, 400, 1.0)
    assert b_4n == pytest.approx(b_n / 2.0)


def test_symmetrization_offset_is_monotone(six_state_pool: ChainPool) -> None:
    """Test that A_n and B_n shrink as n grows."""
    summary = pool_summary(six_state_pool)
    values = [
        symmetrization_offset(six_state_pool, n, 2.0, summary) for n in (10, 50, 200)
    ]
    assert all(a[0] >= b[0] and a[1] >= b[1] for a, b in zip(values, values[1:]))
    with pytest.raises(ConfigError):
        symmetrization_offset(six_state_pool, 0, 1.0, summary)


def test_symmetrization_offset_degenerate_gap(single_pool: ChainPool) -> None:
    """Test that lambda = 1 raises DegenerateGap."""
    summary = pool_summary(single_pool)
    analysis = summary.per_chain[0]
    stuck = replace(analysis.spectral, gamma_star=0.0, lam=1.0)
    degenerate = replace(summary, per_chain=(replace(analysis, spectral=stuck),))
    with pytest.raises(DegenerateGapError):
        symmetrization_offset(single_pool, 10, 1.0, degenerate)


def test_partition_sizes_sum_to_n() -> None:
    """Test that block sizes sum to n and ties go to the earlier chain."""
    assert partition_sizes([0.5, 0.5], 10) == [5, 5]
    assert partition_sizes([0.5, 0.5], 11) == [6, 5]
    assert sum(partition_sizes([0.5, 0.3, 0.2], 17)) == 17


def test_marton_block_structure() -> None:
    """Test rows (1, 1, eps, eps^2, ...) above the diagonal."""
    block = marton_block(4, 0.25)
    expected = [
        [1.0, 1.0, 0.25, 0.0625],
        [0.0, 1.0, 1.0, 0.25],
        [0.0, 0.0, 1.0, 1.0],
        [0.0, 0.0, 0.0, 1.0],
    ]
    np.testing.assert_allclose(block, expected)


def test_marton_matrix_norm_examples(single_pool: ChainPool) -> None:
    """Test the hand-computed mixing-matrix norms."""
    assert marton_matrix_norm(single_pool, 1, 3.0, epsilon=0.0) == pytest.approx(3.0)
    n = 9
    norm = marton_matrix_norm(single_pool, n, 1.0, epsilon=0.0)
    assert norm <= 2.0 * math.sqrt(n)
    assert norm == pytest.approx(math.sqrt(4.0 * (n - 1) + 1.0))

    pool = _pool_of(0.25, 0.25)
    row_sums = [1.0 + 1.0 + 0.25 + 0.0625, 1.0 + 1.0 + 0.25, 2.0, 1.0]
    expected = math.sqrt(2.0 * sum(s**2 for s in row_sums))
    assert marton_matrix_norm(pool, 8, 1.0, epsilon=0.25) == pytest.approx(expected)


@pytest.mark.parametrize("n", [1, 5, 20, 64])
def test_marton_norm_within_bound(desk_pool: ChainPool, n: int) -> None:
    """Test ||Gamma C(c)|| <= c sqrt(n tau_min) with eps = d_P(1) per block."""
    summary = pool_summary(desk_pool)
    for c in (0.5, 1.0):
        norm = marton_matrix_norm(desk_pool, n, c, summary=summary)
        assert norm <= marton_bound(summary, n, c)


def test_marton_matrix_norm_rejects_bad_input(single_pool: ChainPool) -> None:
    """Test the argument checks of the mixing-matrix norm."""
    with pytest.raises(ConfigError):
        marton_matrix_norm(single_pool, 4, 0.0, epsilon=0.1)
    with pytest.raises(ConfigError):
        marton_matrix_norm(single_pool, 4, 1.0, epsilon=1.0)
