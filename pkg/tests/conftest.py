import sys

import numpy as np
import pytest

from rydchain.dynamics import HamiltonianSpec, InteractionRange


def pytest_terminal_summary(terminalreporter):
    """Echo the per-criterion acceptance lines after the test summary."""
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "_results", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for line in results:
            terminalreporter.write_line(line)


def chain_couplings(n: int, v0: float) -> np.ndarray:
    """Exact ideal-chain couplings v0 / |k-m|^6."""
    V = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i != j:
                V[i, j] = v0 / abs(i - j) ** 6
    return V


def chain_hamiltonian(n: int, v0: float, rng=InteractionRange.FULL) -> HamiltonianSpec:
    return HamiltonianSpec(chain_couplings(n, v0), interaction_range=rng)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_state(rng, dim: int) -> np.ndarray:
    amp = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return amp / np.linalg.norm(amp)
