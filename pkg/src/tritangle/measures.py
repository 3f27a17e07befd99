"""Entanglement quantifiers for the three-qubit system.

Covers pairwise concurrence (Wootters and the X-state shortcut), one-to-other
squared concurrence for pure and rank-2 mixed states (the I-tangle), genuine
multipartite concurrence for X-states and pure states, residual entanglement,
concurrence fill, a spectral-decomposition estimate for higher-rank states,
and linear entropy. `full_report` bundles all of them, picking the evaluation
path from the measured rank of the input.

Rank-2 I-tangle convention. The analytic recipe builds a real symmetric 3x3
matrix M from the two eigenvectors of rho and the universal inverter, then
uses its smallest eigenvalue m in C^2 = tr(rho rho~) + 2 m S_L. Two
inequivalent constructions of M circulate, differing in the (3,3) element by
a basis-dependent term:

* 'combination': M assembled entry by entry from traces of eigenvector
  outer products against the inverter (the element-combination form).
* 'quadratic': M_kl = tr(s_k inv(s_l))/4 with s_1 = g12 + g21,
  s_2 = i(g12 - g21), s_3 = g11 - g22.

They agree off the (3,3) element but not on it, and neither reproduces every
published special case of the other; callers that validate against a given
closed form must select the matching convention. When the two eigenvalues of
rho are degenerate the eigenbasis is a gauge choice and only the quadratic
form is stable under it, so the degenerate case always uses 'quadratic'.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .linalg import partial_trace

RANK_TOL = 1e-9
EIG_KEEP_TOL = 1e-12
PURITY_TOL = 1e-12
X_SHAPE_TOL = 1e-10
NEGATIVE_CLIP = 1e-12
REPORT_CLIP = 1e-9

CSV_COLUMNS = (
    "t/param", "c_ab", "c_ac", "c_bc",
    "c2_a_bc", "c2_b_ac", "c2_c_ab",
    "tau", "gtc", "fill", "s_lin", "path",
)

_CONVENTIONS = ("combination", "quadratic")


class MeasureDomainError(ValueError):
    """Input lies outside the domain of validity of the requested measure."""


class RankError(MeasureDomainError):
    """The state's rank exceeds what the analytic route can handle."""

    def __init__(self, third_eigenvalue: float):
        self.third_eigenvalue = third_eigenvalue
        super().__init__(
            f"state rank exceeds 2: third-largest eigenvalue {third_eigenvalue:.3e}"
        )


# ---- small numeric helpers ----

def _clip0(value: float, tol: float = NEGATIVE_CLIP) -> float:
    if value < -tol:
        raise MeasureDomainError(f"negative beyond round-off tolerance: {value:.3e}")
    return max(value, 0.0)


def _det2(m: np.ndarray) -> float:
    return (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]).real


def _pure_vector(state: np.ndarray) -> np.ndarray:
    """Accept a ket or a pure density matrix; return the normalized ket."""
    arr = np.asarray(state, dtype=complex)
    if arr.ndim == 1:
        if arr.shape != (8,):
            raise MeasureDomainError(f"expected a length-8 ket, got shape {arr.shape}")
        norm2 = float(np.vdot(arr, arr).real)
        if abs(norm2 - 1.0) > REPORT_CLIP:
            raise MeasureDomainError(f"ket norm^2 = {norm2} is not 1")
        return arr / math.sqrt(norm2)
    if arr.shape == (8, 8):
        purity = float(np.trace(arr @ arr).real)
        if purity < 1.0 - REPORT_CLIP:
            raise MeasureDomainError(f"state is not pure: purity {purity}")
        col = int(np.argmax(np.einsum("ij,ij->j", arr, arr.conj()).real))
        v = arr[:, col]
        return v / math.sqrt(float(np.vdot(v, v).real))
    raise MeasureDomainError(f"expected a ket or an 8x8 matrix, got shape {arr.shape}")


# ---- pairwise concurrence ----

_YY = linalg.kron(linalg.SIGMA_Y, linalg.SIGMA_Y)


def wootters_concurrence(rho2: np.ndarray) -> float:
    """Concurrence of an arbitrary two-qubit state.

    Evaluated through singular values of sqrt(rho) (sy x sy) sqrt(rho)*,
    which equal the square roots of the usual spin-flip eigenvalues but
    avoid the precision loss of diagonalizing the non-Hermitian product.
    """
    rho2 = np.asarray(rho2, dtype=complex)
    if rho2.shape != (4, 4):
        raise MeasureDomainError(f"expected a 4x4 state, got shape {rho2.shape}")
    dec = linalg.herm_eig(rho2)
    roots = np.sqrt(np.clip(dec.eigenvalues, 0.0, None))
    sqrt_rho = (dec.eigenvectors * roots) @ dec.eigenvectors.conj().T
    sing = np.linalg.svd(sqrt_rho @ _YY @ sqrt_rho.conj(), compute_uv=False)
    return max(0.0, float(sing[0] - sing[1] - sing[2] - sing[3]))


def _is_x_shaped(m: np.ndarray, tol: float = X_SHAPE_TOL) -> bool:
    n = m.shape[0]
    mask = np.ones(m.shape, dtype=bool)
    idx = np.arange(n)
    mask[idx, idx] = False
    mask[idx, n - 1 - idx] = False
    return float(np.abs(m[mask]).max()) < tol


def x_part_concurrence(rho2: np.ndarray) -> float:
    """The X-state concurrence formula read off the diagonal and anti-diagonal.

    Entries outside the X skeleton are ignored, so on a genuine X-state this
    is exact while on anything else it is only the X-part of the state.
    """
    r = np.asarray(rho2)
    outer = abs(r[0, 3]) - math.sqrt(_clip0(float((r[1, 1] * r[2, 2]).real)))
    inner = abs(r[1, 2]) - math.sqrt(_clip0(float((r[0, 0] * r[3, 3]).real)))
    return 2.0 * max(0.0, outer, inner)


def xstate_concurrence(rho2: np.ndarray) -> float:
    """Concurrence of an X-shaped two-qubit state; rejects non-X input."""
    r = np.asarray(rho2, dtype=complex)
    if r.shape != (4, 4):
        raise MeasureDomainError(f"expected a 4x4 state, got shape {r.shape}")
    if not _is_x_shaped(r):
        raise MeasureDomainError("state is not X-shaped; use wootters_concurrence")
    return x_part_concurrence(r)


# ---- one-to-other concurrence, pure and rank-2 ----

def pure_one_to_other(psi: np.ndarray, focus: str = "A") -> float:
    """2 sqrt(det rho_focus): concurrence between one qubit and the rest."""
    v = _pure_vector(psi)
    rho_f = partial_trace(np.outer(v, v.conj()), focus)
    return 2.0 * math.sqrt(_clip0(_det2(rho_f)))


def _focus_perm(focus: str) -> np.ndarray:
    out = np.empty(8, dtype=np.intp)
    for i in range(8):
        a, b, c = (i >> 2) & 1, (i >> 1) & 1, i & 1
        if focus == "A":
            out[i] = 4 * a + 2 * b + c
        elif focus == "B":
            out[i] = 4 * b + 2 * a + c
        elif focus == "C":
            out[i] = 4 * c + 2 * b + a
        else:
            raise MeasureDomainError(f"focus must be A, B or C, got {focus!r}")
    return out


_FOCUS_PERMS = {f: _focus_perm(f) for f in ("A", "B", "C")}


def _refocus(rho: np.ndarray, focus: str) -> np.ndarray:
    """Permute the basis so the focus qubit becomes the first factor."""
    if focus not in _FOCUS_PERMS:
        raise MeasureDomainError(f"focus must be A, B or C, got {focus!r}")
    p = _FOCUS_PERMS[focus]
    out = np.empty_like(rho)
    out[np.ix_(p, p)] = rho
    return out


def _refocus_vector(v: np.ndarray, focus: str) -> np.ndarray:
    out = np.empty_like(v)
    out[_FOCUS_PERMS[focus]] = v
    return out


def _universal_inverter(x: np.ndarray) -> np.ndarray:
    """tr(X) 1 - X_A x 1 - 1 x X_BC + X on the (focus | rest) split."""
    return (
        complex(np.trace(x)) * linalg.ID8
        - linalg.kron(partial_trace(x, "A"), linalg.ID4)
        - linalg.kron(linalg.ID2, partial_trace(x, "BC"))
        + x
    )


def itangle_trace_part(rho: np.ndarray, focus: str = "A") -> float:
    """tr(rho inv(rho)) = 1 - tr rho_f^2 - tr rho_rest^2 + tr rho^2."""
    rho_f = _refocus(np.asarray(rho, dtype=complex), focus)
    return float(np.trace(rho_f @ _universal_inverter(rho_f)).real)


def _canonical_phase(v: np.ndarray) -> np.ndarray:
    i = int(np.argmax(np.abs(v)))
    return v * (abs(v[i]) / v[i])


def _m_matrix(
    v1: np.ndarray, v2: np.ndarray, lams: tuple[float, float],
    convention: str, weighted: bool,
) -> np.ndarray:
    w1 = math.sqrt(lams[0]) if weighted else 1.0
    w2 = math.sqrt(lams[1]) if weighted else 1.0
    g = {
        (1, 1): w1 * w1 * np.outer(v1, v1.conj()),
        (1, 2): w1 * w2 * np.outer(v1, v2.conj()),
        (2, 1): w2 * w1 * np.outer(v2, v1.conj()),
        (2, 2): w2 * w2 * np.outer(v2, v2.conj()),
    }
    m = np.zeros((3, 3), dtype=complex)
    if convention == "quadratic":
        sigma = (
            g[(1, 2)] + g[(2, 1)],
            1j * (g[(1, 2)] - g[(2, 1)]),
            g[(1, 1)] - g[(2, 2)],
        )
        inverted = [_universal_inverter(s.conj().T) for s in sigma]
        for a in range(3):
            for b in range(3):
                m[a, b] = np.trace(sigma[a] @ inverted[b]) / 4.0
    else:
        inverted = {kl: _universal_inverter(g[kl].conj().T) for kl in g}

        def t(i: int, j: int, k: int, l: int) -> complex:
            return complex(np.trace(g[(i, j)] @ inverted[(k, l)]))

        m[0, 0] = (t(1, 2, 2, 1) + 2.0 * t(1, 1, 2, 2) + t(2, 1, 1, 2)) / 4.0
        m[0, 1] = 1j * (t(1, 2, 2, 1) - t(2, 1, 1, 2)) / 4.0
        m[0, 2] = (t(1, 1, 2, 1) - t(2, 1, 2, 2) + t(1, 1, 1, 2) - t(1, 2, 2, 2)) / 4.0
        m[1, 1] = -(t(1, 2, 2, 1) - 2.0 * t(1, 1, 2, 2) + t(2, 1, 1, 2)) / 4.0
        m[1, 2] = 1j * (t(1, 1, 2, 1) - t(1, 1, 1, 2) + t(2, 1, 2, 2) - t(1, 2, 2, 2)) / 4.0
        m[2, 2] = (t(1, 1, 1, 1) - t(1, 1, 2, 2) + t(2, 2, 2, 2)) / 4.0
        m[1, 0], m[2, 0], m[2, 1] = m[0, 1], m[0, 2], m[1, 2]
    imag = float(np.abs(m.imag).max())
    if imag > REPORT_CLIP:
        raise MeasureDomainError(f"M-matrix not real: max imaginary part {imag:.3e}")
    real = m.real
    return 0.5 * (real + real.T)


def _rank2_pair(dec: linalg.EigenDecomposition) -> tuple[float, float, np.ndarray, np.ndarray, float]:
    """Split an 8x8 decomposition into the two retained eigenpairs.

    Returns (lam1, lam2, v1, v2, third) with lam1 >= lam2 and third the
    largest discarded eigenvalue; raises RankError when third crosses the
    rank threshold.
    """
    ev = dec.eigenvalues
    third = float(ev[5])
    if third >= RANK_TOL:
        raise RankError(third)
    return float(ev[7]), float(ev[6]), dec.eigenvectors[:, 7], dec.eigenvectors[:, 6], third


def _rank2_core(
    rho_f: np.ndarray, lam1: float, lam2: float,
    v1_f: np.ndarray, v2_f: np.ndarray,
    convention: str, weighted: bool,
) -> tuple[float, float | None]:
    """(C^2, m_min) in the refocused frame; m_min is None on rank-1 input."""
    if lam2 < EIG_KEEP_TOL:
        return 4.0 * _clip0(_det2(partial_trace(rho_f, "A"))), None
    if lam1 - lam2 < RANK_TOL:
        # Degenerate pair: the eigenvectors are a gauge choice, and only the
        # quadratic M is invariant under rotating them into each other.
        convention = "quadratic"
    v1 = _canonical_phase(v1_f)
    v2 = _canonical_phase(v2_f)
    m = _m_matrix(v1, v2, (lam1, lam2), convention, weighted)
    m_min = linalg.min_eig_sym3(m)
    trace_part = float(np.trace(rho_f @ _universal_inverter(rho_f)).real)
    return trace_part + 2.0 * m_min * linear_entropy(rho_f), m_min


def _check_convention(m_convention: str) -> None:
    if m_convention not in _CONVENTIONS:
        raise ValueError(f"m_convention must be one of {_CONVENTIONS}, got {m_convention!r}")


def rank2_itangle(
    rho: np.ndarray, focus: str = "A", *,
    m_convention: str = "combination", weighted: bool = False,
) -> float:
    """Squared one-to-other concurrence of a rank <= 2 mixed state."""
    _check_convention(m_convention)
    rho = np.asarray(rho, dtype=complex)
    dec = linalg.herm_eig(rho)
    lam1, lam2, v1, v2, _ = _rank2_pair(dec)
    c2, _ = _rank2_core(
        _refocus(rho, focus), lam1, lam2,
        _refocus_vector(v1, focus), _refocus_vector(v2, focus),
        m_convention, weighted,
    )
    return _clip0(c2, REPORT_CLIP)


def rank2_m_min(
    rho: np.ndarray, focus: str = "A", *,
    m_convention: str = "combination", weighted: bool = False,
) -> float:
    """Smallest eigenvalue of the M-matrix entering the rank-2 I-tangle."""
    _check_convention(m_convention)
    rho = np.asarray(rho, dtype=complex)
    dec = linalg.herm_eig(rho)
    lam1, lam2, v1, v2, _ = _rank2_pair(dec)
    _, m_min = _rank2_core(
        _refocus(rho, focus), lam1, lam2,
        _refocus_vector(v1, focus), _refocus_vector(v2, focus),
        m_convention, weighted,
    )
    if m_min is None:
        raise MeasureDomainError("M-matrix is undefined for a rank-1 state")
    return m_min


def rank2_m_matrix(
    rho: np.ndarray, focus: str = "A", *,
    m_convention: str = "combination", weighted: bool = False,
) -> np.ndarray:
    """The symmetric 3x3 M-matrix itself, for callers that need its entries.

    Eigenvectors are taken in descending-eigenvalue order with the canonical
    phase fix; a degenerate retained pair falls back to the quadratic form,
    the only one invariant under rotations inside the degenerate subspace.
    """
    _check_convention(m_convention)
    rho = np.asarray(rho, dtype=complex)
    dec = linalg.herm_eig(rho)
    lam1, lam2, v1, v2, _ = _rank2_pair(dec)
    if lam2 < EIG_KEEP_TOL:
        raise MeasureDomainError("M-matrix is undefined for a rank-1 state")
    if lam1 - lam2 < RANK_TOL:
        m_convention = "quadratic"
    v1_f = _canonical_phase(_refocus_vector(v1, focus))
    v2_f = _canonical_phase(_refocus_vector(v2, focus))
    return _m_matrix(v1_f, v2_f, (lam1, lam2), m_convention, weighted)


# ---- genuine multipartite concurrence ----

def gtc_xstate(rho: np.ndarray) -> float:
    """Genuine multipartite concurrence of an X-shaped three-qubit state."""
    r = np.asarray(rho, dtype=complex)
    if r.shape != (8, 8):
        raise MeasureDomainError(f"expected an 8x8 state, got shape {r.shape}")
    if not _is_x_shaped(r):
        raise MeasureDomainError("state is not X-shaped")
    diag = r.diagonal().real
    best = 0.0
    for i in range(4):
        nu = sum(
            math.sqrt(_clip0(float(diag[j] * diag[7 - j])))
            for j in range(4) if j != i
        )
        best = max(best, abs(r[i, 7 - i]) - nu)
    return 2.0 * best


def gtc_pure(psi: np.ndarray) -> float:
    """Genuine tripartite concurrence: the smallest one-to-other concurrence."""
    v = _pure_vector(psi)
    return min(pure_one_to_other(v, f) for f in ("A", "B", "C"))


# ---- residual entanglement and concurrence fill ----

def _pure_pair_c2(v: np.ndarray) -> dict[str, float]:
    rho = np.outer(v, v.conj())
    return {
        pair: wootters_concurrence(partial_trace(rho, pair)) ** 2
        for pair in ("AB", "AC", "BC")
    }


def _pure_focus_c2(v: np.ndarray) -> dict[str, float]:
    rho = np.outer(v, v.conj())
    return {
        f: 4.0 * _clip0(_det2(partial_trace(rho, f)))
        for f in ("A", "B", "C")
    }


def _pure_tau(v: np.ndarray) -> float:
    focus_c2 = _pure_focus_c2(v)
    pair_c2 = _pure_pair_c2(v)
    taus = (
        focus_c2["A"] - pair_c2["AB"] - pair_c2["AC"],
        focus_c2["B"] - pair_c2["AB"] - pair_c2["BC"],
        focus_c2["C"] - pair_c2["AC"] - pair_c2["BC"],
    )
    spread = max(taus) - min(taus)
    if spread > REPORT_CLIP:
        raise MeasureDomainError(
            f"residual entanglement depends on focus (spread {spread:.3e}); "
            "input is probably not pure"
        )
    return _clip0(taus[0], REPORT_CLIP)


def residual_entanglement_pure(psi: np.ndarray) -> float:
    """Three-tangle C^2_A|BC - C^2_AB - C^2_AC, checked focus-invariant."""
    return _pure_tau(_pure_vector(psi))


def _fill_from_c2(focus_c2: dict[str, float]) -> float:
    q = 0.5 * (focus_c2["A"] + focus_c2["B"] + focus_c2["C"])
    radicand = (16.0 / 3.0) * q
    for f in ("A", "B", "C"):
        radicand *= q - focus_c2[f]
    return _clip0(radicand) ** 0.25


def concurrence_fill(psi: np.ndarray) -> float:
    """Normalized sqrt-area of the squared-concurrence triangle (Heron form)."""
    return _fill_from_c2(_pure_focus_c2(_pure_vector(psi)))


# ---- spectral estimate and entropy ----

def spectral_itangle(rho: np.ndarray, focus: str = "A") -> float:
    """Eigen-ensemble average of the pure squared one-to-other concurrence.

    An estimate for rank > 2 states: it averages over the spectral
    decomposition rather than the optimal one, so it upper-bounds nothing
    by proof, it just mirrors how such states are usually assessed.
    """
    rho = np.asarray(rho, dtype=complex)
    dec = linalg.herm_eig(rho)
    total = 0.0
    for i in range(8):
        lam = float(dec.eigenvalues[i])
        if lam <= EIG_KEEP_TOL:
            continue
        v = dec.eigenvectors[:, i]
        rho_f = partial_trace(np.outer(v, v.conj()), focus)
        total += lam * 4.0 * _clip0(_det2(rho_f))
    return total


def linear_entropy(rho: np.ndarray) -> float:
    """1 - tr(rho^2)."""
    rho = np.asarray(rho, dtype=complex)
    return float(1.0 - np.trace(rho @ rho).real)


# ---- the bundled report ----

@dataclass(frozen=True)
class MeasureReport:
    """Every measure applicable to one state, plus which path produced it.

    tau and fill are pure-state quantities and stay None on mixed input;
    gtc is None when the state is neither pure nor X-shaped. path is one of
    'pure', 'rank2', 'spectral'; flags carry non-fatal analysis notes.
    """

    c_ab: float
    c_ac: float
    c_bc: float
    c2_a_bc: float
    c2_b_ac: float
    c2_c_ab: float
    tau: float | None
    gtc: float | None
    fill: float | None
    linear_entropy: float
    path: str
    flags: tuple[str, ...] = ()

    @staticmethod
    def csv_header() -> str:
        return ",".join(CSV_COLUMNS)

    def csv_row(self, leading: str) -> str:
        def fmt(value: float | None) -> str:
            return "" if value is None else f"{value:.16e}"

        path = self.path
        if self.flags:
            path = "+".join((path,) + self.flags)
        return ",".join((
            leading,
            fmt(self.c_ab), fmt(self.c_ac), fmt(self.c_bc),
            fmt(self.c2_a_bc), fmt(self.c2_b_ac), fmt(self.c2_c_ab),
            fmt(self.tau), fmt(self.gtc), fmt(self.fill),
            fmt(self.linear_entropy), path,
        ))


def _clean(name: str, value: float | None, hi: float = 1.0) -> float | None:
    if value is None:
        return None
    if value < -REPORT_CLIP or value > hi + REPORT_CLIP:
        raise MeasureDomainError(f"{name} = {value} outside [0, {hi}]")
    return min(max(value, 0.0), hi)


def full_report(rho: np.ndarray, *, m_convention: str = "combination") -> MeasureReport:
    """Measure everything measurable about one state.

    The evaluation path follows the measured rank: pure states get the
    closed pure-state formulas, rank-2 states the M-matrix route (under the
    given convention), and anything higher the spectral estimate. Pairwise
    concurrences and linear entropy are rank-independent.
    """
    _check_convention(m_convention)
    rho = np.asarray(rho, dtype=complex)
    pair_c = {
        pair: wootters_concurrence(partial_trace(rho, pair))
        for pair in ("AB", "AC", "BC")
    }
    s_lin = max(0.0, linear_entropy(rho))

    if s_lin < PURITY_TOL:
        v = _pure_vector(rho)
        focus_c2 = _pure_focus_c2(v)
        tau = _pure_tau(v)
        gtc: float | None = math.sqrt(_clip0(min(focus_c2.values())))
        fill: float | None = _fill_from_c2(focus_c2)
        path, flags = "pure", ()
    else:
        dec = linalg.herm_eig(rho)
        tau = None
        fill = None
        gtc = gtc_xstate(rho) if _is_x_shaped(rho) else None
        third = float(dec.eigenvalues[5])
        if third < RANK_TOL:
            lam1, lam2, v1, v2, _ = _rank2_pair(dec)
            focus_c2 = {}
            for f in ("A", "B", "C"):
                c2, _ = _rank2_core(
                    _refocus(rho, f), lam1, lam2,
                    _refocus_vector(v1, f), _refocus_vector(v2, f),
                    m_convention, weighted=False,
                )
                focus_c2[f] = c2
            path = "rank2"
            flags = ("rank-boundary",) if third > RANK_TOL / 10.0 else ()
        else:
            kept = [float(x) for x in dec.eigenvalues if x > EIG_KEEP_TOL]
            focus_c2 = {}
            for f in ("A", "B", "C"):
                total = 0.0
                for i in range(8):
                    lam = float(dec.eigenvalues[i])
                    if lam <= EIG_KEEP_TOL:
                        continue
                    vec = dec.eigenvectors[:, i]
                    rho_f = partial_trace(np.outer(vec, vec.conj()), f)
                    total += lam * 4.0 * _clip0(_det2(rho_f))
                focus_c2[f] = total
            path = "spectral"
            gaps = [b - a for a, b in zip(kept, kept[1:])]
            flags = ("degenerate-spectrum",) if gaps and min(gaps) < RANK_TOL else ()

    return MeasureReport(
        c_ab=_clean("c_ab", pair_c["AB"]),
        c_ac=_clean("c_ac", pair_c["AC"]),
        c_bc=_clean("c_bc", pair_c["BC"]),
        c2_a_bc=_clean("c2_a_bc", focus_c2["A"]),
        c2_b_ac=_clean("c2_b_ac", focus_c2["B"]),
        c2_c_ab=_clean("c2_c_ab", focus_c2["C"]),
        tau=_clean("tau", tau),
        gtc=_clean("gtc", gtc),
        fill=_clean("fill", fill),
        linear_entropy=_clean("linear_entropy", s_lin, hi=7.0 / 8.0),
        path=path,
        flags=flags,
    )
