"""Import-order tests, each in a fresh interpreter."""

import subprocess
import sys

import pytest

from .conftest import REPO_ROOT

MODULES = [
    "mixmkl",
    "mixmkl.main",
    "mixmkl.chain.core",
    "mixmkl.chain.command",
    "mixmkl.pool.model",
    "mixmkl.pool.summary",
    "mixmkl.pool.command",
    "mixmkl.mixed.simulate",
    "mixmkl.mixed.command",
    "mixmkl.kernels.engine",
    "mixmkl.bounds.formulas",
    "mixmkl.bounds.complexity",
    "mixmkl.bounds.command",
    "mixmkl.learn.mkl",
    "mixmkl.learn.command",
    "mixmkl.verify.harness",
    "mixmkl.verify.command",
]


@pytest.mark.parametrize("module", MODULES)
def test_module_imports_first(module: str) -> None:
    """Test that the module imports cleanly as the first thing a process loads."""
    result = subprocess.run(
        [sys.executable, "-c", f"import {module}"],
        cwd=REPO_ROOT,
        capture_output=True,
        text=True,
        timeout=60,
    )
    assert result.returncode == 0, result.stderr
