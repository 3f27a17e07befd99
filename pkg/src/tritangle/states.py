"""Constructors and validation for the three-qubit states under study.

Pure states are length-8 complex vectors, density matrices are 8x8 complex
arrays. Qubit A is the most significant bit: |abc> sits at index 4a+2b+c.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

from . import linalg

TRACE_TOL = 1e-12
PSD_FLOOR = -1e-10


class StateValidationError(ValueError):
    """A density-matrix invariant failed.

    Carries ``violations``: a list of (invariant, measured) pairs so callers
    can see which check failed and by how much.
    """

    def __init__(self, violations: list[tuple[str, float]]):
        self.violations = violations
        detail = "; ".join(f"{name} (measured {value:.3e})" for name, value in violations)
        super().__init__(f"invalid density matrix: {detail}")


# ---- pure-state constructors ----

def _basis_ket(index: int) -> np.ndarray:
    v = np.zeros(8, dtype=complex)
    v[index] = 1.0
    return v


def gghz(a: float) -> np.ndarray:
    """a|000> + sqrt(1-a^2)|111>."""
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"gghz coefficient a must lie in [0, 1], got {a}")
    v = np.zeros(8, dtype=complex)
    v[0] = a
    v[7] = math.sqrt(1.0 - a * a)
    return v


def ghz() -> np.ndarray:
    return gghz(1.0 / math.sqrt(2.0))


def gw(a: float, b: float) -> np.ndarray:
    """a|001> + b|010> + sqrt(1-a^2-b^2)|100>."""
    rest = 1.0 - a * a - b * b
    if rest < -TRACE_TOL:
        raise ValueError(f"gw coefficients violate a^2 + b^2 <= 1 by {-rest:.3e}")
    v = np.zeros(8, dtype=complex)
    v[1] = a
    v[2] = b
    v[4] = math.sqrt(max(rest, 0.0))
    return v


def w() -> np.ndarray:
    r = 1.0 / math.sqrt(3.0)
    return gw(r, r)


def wbar() -> np.ndarray:
    """(|110> + |101> + |011>)/sqrt(3), the spin-flipped W state."""
    v = np.zeros(8, dtype=complex)
    v[6] = v[5] = v[3] = 1.0 / math.sqrt(3.0)
    return v


def wwbar(theta: float, phi: float = 0.0) -> np.ndarray:
    """cos(theta)|W> + sin(theta) e^{i phi}|Wbar>, normalized.

    The two components are orthogonal, so the combination is already unit
    norm; normalization is kept for exactness.
    """
    v = math.cos(theta) * w() + math.sin(theta) * cmath.exp(1j * phi) * wbar()
    return v / math.sqrt(float(np.vdot(v, v).real))


# ---- mixed-state constructors ----

def pure_dm(psi: np.ndarray) -> np.ndarray:
    """|psi><psi| for a unit-norm vector."""
    psi = np.asarray(psi, dtype=complex)
    norm_defect = abs(float(np.vdot(psi, psi).real) - 1.0)
    if norm_defect >= TRACE_TOL:
        raise StateValidationError([("unit norm", norm_defect)])
    return np.outer(psi, psi.conj())


def mix_ghz_extremes(w1: float, w2: float) -> np.ndarray:
    """(1-w1-w2)|GHZ><GHZ| + w1|000><000| + w2|111><111|."""
    if w1 < 0.0 or w2 < 0.0 or w1 + w2 > 1.0 + TRACE_TOL:
        raise ValueError(f"weights must satisfy w1, w2 >= 0 and w1 + w2 <= 1, got {w1}, {w2}")
    return (
        (1.0 - w1 - w2) * pure_dm(ghz())
        + w1 * pure_dm(_basis_ket(0))
        + w2 * pure_dm(_basis_ket(7))
    )


def mix_w_vacuum(weight: float) -> np.ndarray:
    """(1-w)|W><W| + w|000><000|."""
    if not 0.0 <= weight <= 1.0:
        raise ValueError(f"weight must lie in [0, 1], got {weight}")
    return (1.0 - weight) * pure_dm(w()) + weight * pure_dm(_basis_ket(0))


# ---- validation ----

def validate(rho: np.ndarray) -> np.ndarray:
    """Check the density-matrix invariants and return the input unchanged.

    Hermiticity and unit trace to 1e-12, smallest eigenvalue >= -1e-10.
    Violations raise StateValidationError; nothing is ever clipped here.
    """
    rho = np.asarray(rho, dtype=complex)
    violations: list[tuple[str, float]] = []
    if rho.shape != (8, 8):
        raise StateValidationError([("shape 8x8", float(rho.size))])
    herm_defect = float(np.abs(rho - rho.conj().T).max())
    if herm_defect >= linalg.HERMITICITY_TOL:
        violations.append(("hermiticity", herm_defect))
    trace_defect = abs(complex(np.trace(rho)) - 1.0)
    if trace_defect >= TRACE_TOL:
        violations.append(("unit trace", trace_defect))
    if not violations:
        lo = float(linalg.herm_eig(rho).eigenvalues[0])
        if lo < PSD_FLOOR:
            violations.append(("positive semidefiniteness", lo))
    if violations:
        raise StateValidationError(violations)
    return rho
