"""Test configuration and fixtures for pytest."""

import subprocess
import sys
from collections.abc import Callable
from pathlib import Path

import pytest

from mixmkl.chain.core import TransitionMatrix, validate_chain
from mixmkl.kernels import KernelFamily, family_from_dict
from mixmkl.pool.model import ChainPool, load_pool
from mixmkl.shared.data import get_sample_kernel_family

REPO_ROOT = Path(__file__).parent.parent


def two_state(p: float) -> TransitionMatrix:
    """Symmetric two-state chain flipping with probability p."""
    return validate_chain([[1.0 - p, p], [p, 1.0 - p]])


def three_cycle() -> TransitionMatrix:
    """Deterministic cycle 0 -> 1 -> 2 -> 0."""
    return validate_chain([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]])


@pytest.fixture
def desk_pool() -> ChainPool:
    """Two-state chains with p = 0.25 and p = 0.4, equal weights."""
    return load_pool(sample="desk")


@pytest.fixture
def single_pool() -> ChainPool:
    """The p = 0.25 chain on its own."""
    return load_pool(sample="two-state")


@pytest.fixture
def iid_pool() -> ChainPool:
    """A chain whose rows equal its stationary distribution."""
    return load_pool(sample="iid")


@pytest.fixture
def six_state_pool() -> ChainPool:
    """Three six-state chains with weights 0.5, 0.3, 0.2."""
    return load_pool(sample="six-state")


@pytest.fixture
def sample_family() -> KernelFamily:
    """Four Gaussian kernels under an L1 constraint."""
    return family_from_dict(get_sample_kernel_family())


@pytest.fixture
def run_cli() -> Callable[..., subprocess.CompletedProcess[str]]:
    """Run ``python -m mixmkl`` with the given arguments."""

    def run(*args: str, timeout: int = 60) -> subprocess.CompletedProcess[str]:
        return subprocess.run(
            [sys.executable, "-m", "mixmkl", *args],
            capture_output=True,
            text=True,
            timeout=timeout,
            cwd=REPO_ROOT,
        )

    return run
