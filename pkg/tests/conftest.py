"""Shared fixtures and helpers for the test suite."""

import numpy as np
import pytest

from gmedyn import DensityMatrix, DephasingParams


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture(scope="session")
def std_params():
    """The workhorse parameter point: a=1, tau=5, mu = sqrt(399)."""
    return DephasingParams(1.0, 5.0)


def random_density(n_qubits: int, rng, rank: int | None = None) -> DensityMatrix:
    """Wishart-style random mixed state: G G^dagger normalized to trace 1."""
    d = 2 ** n_qubits
    r = rank or d
    g = rng.standard_normal((d, r)) + 1j * rng.standard_normal((d, r))
    m = g @ g.conj().T
    m /= np.trace(m).real
    return DensityMatrix(n_qubits, (m + m.conj().T) / 2)


def random_pure_vector(dim: int, rng) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_unitary(dim: int, rng) -> np.ndarray:
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))
