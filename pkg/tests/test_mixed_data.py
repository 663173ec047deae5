"""Tests for mixed dataset simulation."""

from pathlib import Path

import numpy as np
import pytest

from mixmkl.mixed.simulate import (
    MixedDataset,
    emit_labels,
    generate_features,
    read_dataset_csv,
    simulate_counts,
    simulate_dataset,
    write_dataset_csv,
)
from mixmkl.pool.model import ChainPool, make_chain, make_pool
from mixmkl.shared.errors import ConfigError, MissingEmissionTableError

from .conftest import two_state


def _flip_pool(flip: float) -> ChainPool:
    chain = make_chain(two_state(0.3).rows, emission_flip=[flip, flip])
    return make_pool([chain], [1.0], [0.5, 0.5])


def test_single_chain_path(single_pool: ChainPool) -> None:
    """Test that one chain yields one path with one-hot features."""
    ds = generate_features(single_pool, 5, seed=3)
    assert ds.n == 5
    assert list(ds.partitions()) == [0]
    np.testing.assert_array_equal(ds.features, np.eye(2)[ds.state_ids])
    assert ds.labels is None


def test_proportional_mode_splits_evenly(desk_pool: ChainPool) -> None:
    """Test |T_1| = |T_2| = 5 for n = 10 in proportional mode."""
    ds = generate_features(desk_pool, 10, seed=0, mode="proportional")
    parts = ds.partitions()
    assert [len(parts[0]), len(parts[1])] == [5, 5]


def test_probabilistic_mode_proportions(desk_pool: ChainPool) -> None:
    """Test that chain shares concentrate around mu in probabilistic mode."""
    ds = generate_features(desk_pool, 10_000, seed=0)
    share = len(ds.partitions()[0]) / ds.n
    assert 0.48 <= share <= 0.52


def test_partitions_cover_indices(six_state_pool: ChainPool) -> None:
    """Test that the T_P sets are disjoint and cover every index."""
    ds = generate_features(six_state_pool, 300, seed=1)
    indices = np.concatenate(list(ds.partitions().values()))
    assert sorted(indices.tolist()) == list(range(300))


def test_generation_is_deterministic(six_state_pool: ChainPool) -> None:
    """Test that equal inputs give bit-identical datasets."""
    a = simulate_dataset(six_state_pool, 200, seed=42)
    b = simulate_dataset(six_state_pool, 200, seed=42)
    c = simulate_dataset(six_state_pool, 200, seed=43)
    np.testing.assert_array_equal(a.features, b.features)
    np.testing.assert_array_equal(a.labels, b.labels)
    assert not np.array_equal(a.state_ids, c.state_ids)


def test_noiseless_labels_follow_state() -> None:
    """Test that flip = 0 makes the label a function of the state."""
    pool = _flip_pool(0.0)
    ds = simulate_dataset(pool, 500, seed=5)
    signs = pool.chains[0].emission_sign[ds.state_ids]
    np.testing.assert_array_equal(ds.require_labels(), signs)


def test_fair_coin_labels() -> None:
    """Test that flip = 0.5 gives roughly balanced labels."""
    ds = simulate_dataset(_flip_pool(0.5), 20_000, seed=6)
    assert abs(float(np.mean(ds.require_labels()))) < 0.05


def test_flip_rate_matches_table() -> None:
    """Test an empirical flip rate of 0.1 +- 0.005 over 10^5 samples."""
    pool = _flip_pool(0.1)
    ds = simulate_dataset(pool, 100_000, seed=7)
    signs = pool.chains[0].emission_sign[ds.state_ids]
    flipped = float(np.mean(ds.require_labels() != signs))
    assert flipped == pytest.approx(0.1, abs=0.005)


def test_transitions_and_marginals_converge(single_pool: ChainPool) -> None:
    """Test empirical transitions against P and state frequencies against pi."""
    ds = generate_features(single_pool, 100_000, seed=8)
    states = ds.state_ids
    leaving_zero = states[1:][states[:-1] == 0]
    assert float(np.mean(leaving_zero == 1)) == pytest.approx(0.25, abs=0.01)
    freq = np.bincount(states, minlength=2) / ds.n
    assert 0.5 * np.abs(freq - 0.5).sum() <= 0.02


def test_missing_emission_table() -> None:
    """Test that a chain without emissions cannot label samples."""
    pool = make_pool([make_chain(two_state(0.3).rows)], [1.0])
    ds = generate_features(pool, 10)
    with pytest.raises(MissingEmissionTableError, match="chain 0"):
        emit_labels(ds, pool)


def test_generate_rejects_bad_arguments(desk_pool: ChainPool) -> None:
    """Test the argument checks of the simulator."""
    with pytest.raises(ConfigError):
        generate_features(desk_pool, 0)
    with pytest.raises(ConfigError):
        generate_features(desk_pool, 10, mode="sideways")  # type: ignore[arg-type]
    with pytest.raises(ConfigError):
        generate_features(desk_pool, 10).require_labels()


def test_dataset_csv_round_trip(six_state_pool: ChainPool, tmp_path: Path) -> None:
    """Test that the dataset CSV reads back losslessly."""
    ds = simulate_dataset(six_state_pool, 50, seed=9)
    path = tmp_path / "data.csv"
    write_dataset_csv(ds, path)
    back = read_dataset_csv(path)
    np.testing.assert_array_equal(back.features, ds.features)
    np.testing.assert_array_equal(back.chain_ids, ds.chain_ids)
    np.testing.assert_array_equal(back.labels, ds.labels)
    header = path.read_text().splitlines()[0]
    assert header.startswith("index,chain_id,state_id,label,f_1")


def test_unlabelled_csv_round_trip(desk_pool: ChainPool, tmp_path: Path) -> None:
    """Test that an unlabelled dataset keeps its missing labels."""
    path = tmp_path / "raw.csv"
    write_dataset_csv(generate_features(desk_pool, 20), path)
    assert read_dataset_csv(path).labels is None


def test_read_dataset_csv_errors(tmp_path: Path) -> None:
    """Test that malformed dataset files raise ConfigError."""
    path = tmp_path / "bad.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(ConfigError):
        read_dataset_csv(path)
    with pytest.raises(ConfigError):
        read_dataset_csv(tmp_path / "missing.csv")


def test_simulate_counts_totals(six_state_pool: ChainPool) -> None:
    """Test that every trial visits exactly n states."""
    batch = simulate_counts(six_state_pool, 40, 250, seed=2, with_signs=True)
    assert batch.counts.shape == (250, 6)
    np.testing.assert_array_equal(batch.counts.sum(axis=1), 40)
    signed = batch.require_signed()
    assert np.all(np.abs(signed) <= batch.counts)
    assert np.all((signed - batch.counts) % 2 == 0)


def test_simulate_counts_without_signs(desk_pool: ChainPool) -> None:
    """Test that unsigned batches refuse to hand out signed counts."""
    batch = simulate_counts(desk_pool, 10, 5, mode="proportional")
    with pytest.raises(ConfigError):
        batch.require_signed()
    with pytest.raises(ConfigError):
        simulate_counts(desk_pool, 10, 0)


def test_simulate_counts_stationary_marginal(iid_pool: ChainPool) -> None:
    """Test that an i.i.d. chain spends half its time in each state."""
    batch = simulate_counts(iid_pool, 100, 2000, seed=4)
    share = batch.counts[:, 0].sum() / batch.counts.sum()
    assert share == pytest.approx(0.5, abs=0.01)


def test_dataset_with_labels_is_new_object() -> None:
    """Test that attaching labels leaves the original dataset untouched."""
    ds = MixedDataset(
        features=np.zeros((2, 1)),
        chain_ids=np.zeros(2, dtype=np.int64),
        state_ids=np.zeros(2, dtype=np.int64),
    )
    labelled = ds.with_labels(np.array([1, -1]))
    assert ds.labels is None
    assert labelled.require_labels().tolist() == [1, -1]
