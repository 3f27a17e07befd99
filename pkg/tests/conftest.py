import numpy as np
import pytest


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260814)


def random_pure_state(rng: np.random.Generator, dim: int = 8) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.sqrt(np.vdot(v, v).real)


def random_density_matrix(rng: np.random.Generator, rank: int, dim: int = 8) -> np.ndarray:
    weights = rng.dirichlet(np.ones(rank))
    rho = np.zeros((dim, dim), dtype=complex)
    for wk in weights:
        psi = random_pure_state(rng, dim)
        rho += wk * np.outer(psi, psi.conj())
    return rho


def haar_unitary(rng: np.random.Generator, dim: int = 2) -> np.ndarray:
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))
