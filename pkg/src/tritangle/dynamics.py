"""Hamiltonian, spectrum, and propagation for the three-qubit ring.

The model is an XXZ Heisenberg ring of three qubits with a z-axis
Dzyaloshinskii-Moriya term and a uniform magnetic field:

    H = sum_i [ J (sx_i sx_{i+1} + sy_i sy_{i+1} + Delta sz_i sz_{i+1})
                + D (sx_i sy_{i+1} - sy_i sx_{i+1}) + B sz_i ]

with periodic closure (site 4 = site 1). Its eigenvectors do not depend on
the parameters, only the eigenvalues do, so both the unitary and the
intrinsic-decoherence propagators are built from one fixed basis change.

Intrinsic decoherence follows Milburn's model: in the energy eigenbasis each
element (n, n') of rho is multiplied by

    f_nn'(t) = exp[ gamma (e^{-i(E_n - E_n')/gamma} - 1) t ],

which suppresses coherences between nondegenerate levels while leaving
populations untouched. gamma -> infinity recovers the Schroedinger equation.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import linalg

_DIAG_CHECK_TOL = 1e-10


class DynamicsError(RuntimeError):
    """The fixed basis change failed to diagonalize the Hamiltonian."""


@dataclass(frozen=True)
class HamiltonianParams:
    """Ring couplings: exchange J, anisotropy Delta, DM strength D, field B."""

    J: float = 1.0
    Delta: float = 1.0
    D: float = 0.0
    B: float = 0.0

    def __post_init__(self) -> None:
        for name in ("J", "Delta", "D", "B"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"HamiltonianParams.{name} must be finite")


@dataclass(frozen=True)
class MilburnParams:
    """Intrinsic decoherence rate gamma (inverse time, hbar = 1)."""

    gamma: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.gamma) and self.gamma > 0):
            raise ValueError(f"MilburnParams.gamma must be positive, got {self.gamma}")


def _two_site(op1: np.ndarray, i: int, op2: np.ndarray, j: int) -> np.ndarray:
    ops = [linalg.ID2, linalg.ID2, linalg.ID2]
    ops[i] = op1
    ops[j] = op2
    return linalg.kron(linalg.kron(ops[0], ops[1]), ops[2])


def _one_site(op: np.ndarray, i: int) -> np.ndarray:
    return _two_site(op, i, linalg.ID2, (i + 1) % 3)


def build_hamiltonian(p: HamiltonianParams) -> np.ndarray:
    """Assemble the 8x8 ring Hamiltonian for the given couplings."""
    sx, sy, sz = linalg.SIGMA_X, linalg.SIGMA_Y, linalg.SIGMA_Z
    h = np.zeros((8, 8), dtype=complex)
    for i, j in ((0, 1), (1, 2), (2, 0)):
        h += p.J * (_two_site(sx, i, sx, j) + _two_site(sy, i, sy, j)
                    + p.Delta * _two_site(sz, i, sz, j))
        h += p.D * (_two_site(sx, i, sy, j) - _two_site(sy, i, sx, j))
    for q in range(3):
        h += p.B * _one_site(sz, q)
    return h


def spectrum_closed_form(p: HamiltonianParams) -> np.ndarray:
    """The eight energies E1..E8 in their conventional labeled order.

    That order is not ascending; it pairs with the columns of
    basis_change_u, so that index (0, 7) always means the (E1, E8)
    coherence of the GHZ-type sector.
    """
    s3 = math.sqrt(3.0)
    return np.array([
        -3.0 * (p.B - p.J * p.Delta),
        -p.B - 2.0 * s3 * p.D - p.J * (p.Delta + 2.0),
        +p.B - 2.0 * s3 * p.D - p.J * (p.Delta + 2.0),
        -p.B + 2.0 * s3 * p.D - p.J * (p.Delta + 2.0),
        +p.B + 2.0 * s3 * p.D - p.J * (p.Delta + 2.0),
        -p.B - p.J * (p.Delta - 4.0),
        +p.B - p.J * (p.Delta - 4.0),
        3.0 * (p.B + p.J * p.Delta),
    ])


def _build_u() -> np.ndarray:
    # Eigenvector m lives in row m of this table, expressed over the basis
    # {000, 001, 010, 100, 011, 101, 110, 111}; the permutation below maps
    # that ordering to standard binary indices (A = most significant bit).
    s3 = math.sqrt(3.0)
    wp = (-s3 + 3j) / 6.0  # exp(+2*pi*i/3)/sqrt(3)
    wm = (-s3 - 3j) / 6.0  # exp(-2*pi*i/3)/sqrt(3)
    r3 = 1.0 / s3
    rows = np.array([
        [0, 0, 0, 0, 0, 0, 0, 1],
        [0, 0, wp, 0, wm, 0, r3, 0],
        [0, 0, wm, 0, wp, 0, r3, 0],
        [0, 0, r3, 0, r3, 0, r3, 0],
        [0, wp, 0, wm, 0, r3, 0, 0],
        [0, wm, 0, wp, 0, r3, 0, 0],
        [0, r3, 0, r3, 0, r3, 0, 0],
        [1, 0, 0, 0, 0, 0, 0, 0],
    ], dtype=complex)
    perm = (0, 1, 2, 4, 3, 5, 6, 7)
    u = np.zeros((8, 8), dtype=complex)
    for m in range(8):
        u[perm[m], :] = rows[m, :]
    return u


_U = _build_u()
_U_DAG = _U.conj().T
_checked_params: set[HamiltonianParams] = set()


def basis_change_u() -> np.ndarray:
    """The fixed unitary whose columns are the energy eigenvectors."""
    return _U.copy()


def _verified_spectrum(p: HamiltonianParams) -> np.ndarray:
    """Closed-form energies, self-checked against the fixed basis change.

    The first time a parameter set is seen, conjugate the assembled
    Hamiltonian by U and require the result to be diagonal with the
    closed-form values on the diagonal. This guards the whole propagation
    layer against a silent transcription error in either table.
    """
    energies = spectrum_closed_form(p)
    if p not in _checked_params:
        diag = _U_DAG @ build_hamiltonian(p) @ _U
        off = float(np.abs(diag - np.diag(np.diag(diag))).max())
        mismatch = float(np.abs(np.diag(diag).real - energies).max())
        if off >= _DIAG_CHECK_TOL or mismatch >= _DIAG_CHECK_TOL:
            raise DynamicsError(
                f"basis change does not diagonalize H for {p}: "
                f"off-diagonal {off:.3e}, diagonal mismatch {mismatch:.3e}"
            )
        _checked_params.add(p)
    return energies


def schrodinger_evolve(rho0: np.ndarray, p: HamiltonianParams, t: float) -> np.ndarray:
    """Unitary propagation rho(t) = exp(-iHt) rho0 exp(+iHt)."""
    energies = _verified_spectrum(p)
    phases = np.exp(-1j * energies * t)
    inner = (_U_DAG @ rho0 @ _U) * np.outer(phases, phases.conj())
    return _U @ inner @ _U_DAG


def milburn_factor(en: float, em: float, gamma: float, t: float) -> complex:
    """Exact intrinsic-decoherence factor for the (en, em) coherence."""
    return cmath.exp(gamma * (cmath.exp(-1j * (en - em) / gamma) - 1.0) * t)


def milburn_factor_approx(en: float, em: float, gamma: float, t: float) -> complex:
    """Large-gamma form exp(-i dE t - dE^2 t / (2 gamma))."""
    de = en - em
    return cmath.exp(-1j * de * t - de * de * t / (2.0 * gamma))


def milburn_evolve(
    rho0: np.ndarray, p: HamiltonianParams, m: MilburnParams, t: float
) -> np.ndarray:
    """Intrinsic-decoherence propagation in the fixed energy basis."""
    energies = _verified_spectrum(p)
    factors = np.array(
        [[milburn_factor(en, em, m.gamma, t) for em in energies] for en in energies]
    )
    return _U @ ((_U_DAG @ rho0 @ _U) * factors) @ _U_DAG
