"""Dense complex linear algebra for two-, four- and eight-dimensional problems.

The module is deliberately self-contained: the Hermitian eigensolver is a
cyclic complex Jacobi iteration rather than a LAPACK call, which keeps the
numeric core auditable at these tiny dimensions. Everything operates on
plain numpy arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-12
JACOBI_OFF_TARGET = 1e-13
JACOBI_MAX_SWEEPS = 100

# ---- constants ----

ID2 = np.eye(2, dtype=complex)
ID4 = np.eye(4, dtype=complex)
ID8 = np.eye(8, dtype=complex)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


class LinalgError(ValueError):
    """Input outside an operation's contract (shape, symmetry, selector)."""


class ConvergenceError(RuntimeError):
    """The Jacobi sweep budget was exhausted before reaching the target."""


# ---- products ----

def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, assembled blockwise.

    Independent of ``numpy.kron`` so tests can use that (and an index-loop
    formula) as oracles.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    ra, ca = a.shape
    rb, cb = b.shape
    return np.einsum("ij,kl->ikjl", a, b).reshape(ra * rb, ca * cb)


def kron3(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    return kron(kron(a, b), c)


# ---- partial traces ----

_PTRACE_SPECS = {
    "A": ("abcdbc->ad", 2),
    "B": ("abcaec->be", 2),
    "C": ("abcabf->cf", 2),
    "AB": ("abcdec->abde", 4),
    "AC": ("abcdbf->acdf", 4),
    "BC": ("abcaef->bcef", 4),
}


def partial_trace(rho: np.ndarray, keep: str) -> np.ndarray:
    """Trace an 8x8 three-qubit operator down to the kept subsystem.

    ``keep`` selects which qubits survive: one of A, B, C, AB, AC, BC.
    Qubit A is the most significant bit of the computational index.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (8, 8):
        raise LinalgError(f"partial_trace expects an 8x8 matrix, got {rho.shape}")
    try:
        subscripts, dim = _PTRACE_SPECS[keep]
    except KeyError:
        raise LinalgError(f"unknown subsystem selector {keep!r}") from None
    reduced = np.einsum(subscripts, rho.reshape(2, 2, 2, 2, 2, 2))
    return reduced.reshape(dim, dim)


# ---- Hermitian eigendecomposition ----

@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues in ascending order; eigenvectors as matching columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return math.sqrt(float(np.sum(np.abs(off) ** 2)))


def herm_eig(h: np.ndarray, tol: float = 1e-10) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Sweeps zero one off-diagonal pair at a time with a unitary plane
    rotation until the off-diagonal Frobenius norm drops below
    ``JACOBI_OFF_TARGET``. The reconstruction residual is verified against
    ``tol`` before returning.

    Raises ``LinalgError`` for non-Hermitian input and ``ConvergenceError``
    if the sweep budget runs out or the residual check fails.
    """
    h = np.asarray(h, dtype=complex)
    n = h.shape[0]
    if h.ndim != 2 or h.shape != (n, n):
        raise LinalgError(f"herm_eig expects a square matrix, got {h.shape}")
    herm_defect = float(np.abs(h - h.conj().T).max())
    if herm_defect >= HERMITICITY_TOL:
        raise LinalgError(f"matrix is not Hermitian: max|H - H^dag| = {herm_defect:.3e}")

    a = 0.5 * (h + h.conj().T)
    v = np.eye(n, dtype=complex)
    converged = False
    for _ in range(JACOBI_MAX_SWEEPS):
        if _off_norm(a) < JACOBI_OFF_TARGET:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                # Zero the (p,q) pair with J = [[c, -conj(s)], [s, c]]
                # where s carries the phase of a[p,q].
                theta = 0.5 * math.atan2(2.0 * mag, (a[p, p] - a[q, q]).real)
                c = math.cos(theta)
                s = math.sin(theta) * (apq / mag).conjugate()
                sbar = s.conjugate()
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp + sbar * rq
                a[q, :] = -s * rp + c * rq
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp + s * cq
                a[:, q] = -sbar * cp + c * cq
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp + s * vq
                v[:, q] = -sbar * vp + c * vq
    if not converged and _off_norm(a) >= JACOBI_OFF_TARGET:
        raise ConvergenceError(
            f"Jacobi failed to converge in {JACOBI_MAX_SWEEPS} sweeps "
            f"(off-diagonal norm {_off_norm(a):.3e})"
        )

    lam = np.diag(a).real.copy()
    order = np.argsort(lam, kind="stable")
    lam = lam[order]
    v = v[:, order]
    resid = float(np.abs(h @ v - v * lam).max())
    if resid >= tol:
        raise ConvergenceError(f"reconstruction residual {resid:.3e} exceeds tol {tol:.1e}")
    return EigenDecomposition(eigenvalues=lam, eigenvectors=v)


def min_eig_sym3(m: np.ndarray) -> float:
    """Smallest eigenvalue of a real symmetric 3x3 matrix, in closed form.

    Uses the trigonometric solution of the characteristic cubic; the
    smallest root is q + 2 p cos(phi + 2 pi / 3).
    """
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3):
        raise LinalgError(f"min_eig_sym3 expects a 3x3 matrix, got {m.shape}")
    if float(np.abs(m - m.T).max()) >= HERMITICITY_TOL:
        raise LinalgError("matrix is not symmetric")

    p1 = m[0, 1] ** 2 + m[0, 2] ** 2 + m[1, 2] ** 2
    if p1 == 0.0:
        return float(np.min(np.diag(m)))
    q = float(np.trace(m)) / 3.0
    p2 = (m[0, 0] - q) ** 2 + (m[1, 1] - q) ** 2 + (m[2, 2] - q) ** 2 + 2.0 * p1
    p = math.sqrt(p2 / 6.0)
    b = (m - q * np.eye(3)) / p
    det_b = (
        b[0, 0] * (b[1, 1] * b[2, 2] - b[1, 2] * b[2, 1])
        - b[0, 1] * (b[1, 0] * b[2, 2] - b[1, 2] * b[2, 0])
        + b[0, 2] * (b[1, 0] * b[2, 1] - b[1, 1] * b[2, 0])
    )
    r = float(det_b) / 2.0
    r = min(1.0, max(-1.0, r))
    phi = math.acos(r) / 3.0
    return q + 2.0 * p * math.cos(phi + 2.0 * math.pi / 3.0)
