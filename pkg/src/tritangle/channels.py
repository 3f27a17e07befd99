"""Single-qubit Kraus channels and their placement on the three-qubit ring.

Each channel is an immutable snapshot of its Kraus operators for fixed
parameters. Time dependence (for example a dephasing factor that decays in
t) belongs to the caller, which maps t to a parameter before constructing
the channel.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import linalg

COMPLETENESS_TOL = 1e-12


class Placement(Enum):
    """Which qubits the environment couples to.

    SECOND_QUBIT never appears in the physics of interest; it exists so
    permutation-symmetry checks can be written against the same interface.
    """

    FIRST_QUBIT = "q1"
    SECOND_QUBIT = "q2"
    THIRD_QUBIT = "q3"
    ALL_QUBITS = "all"


@dataclass(frozen=True)
class KrausChannel:
    """A CPTP map given by 2x2 Kraus operators summing to identity."""

    operators: tuple[np.ndarray, ...]
    label: str
    params: dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        total = np.zeros((2, 2), dtype=complex)
        for op in self.operators:
            if op.shape != (2, 2):
                raise ValueError(f"{self.label}: Kraus operators must be 2x2")
            total += op.conj().T @ op
        defect = float(np.abs(total - linalg.ID2).max())
        if defect >= COMPLETENESS_TOL:
            raise ValueError(
                f"{self.label}: completeness defect {defect:.3e} exceeds {COMPLETENESS_TOL}"
            )


def _check_unit(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")


def pdc(d: float) -> KrausChannel:
    """Phase damping: kills coherence with strength d, keeps populations."""
    _check_unit("d", d)
    a0 = np.diag([1.0, math.sqrt(1.0 - d)]).astype(complex)
    a1 = np.diag([0.0, math.sqrt(d)]).astype(complex)
    return KrausChannel((a0, a1), "pdc", {"d": d})


def adc(d: float) -> KrausChannel:
    """Amplitude damping: upper level decays with probability d."""
    _check_unit("d", d)
    a0 = np.diag([1.0, math.sqrt(1.0 - d)]).astype(complex)
    a1 = np.array([[0.0, math.sqrt(d)], [0.0, 0.0]], dtype=complex)
    return KrausChannel((a0, a1), "adc", {"d": d})


def gadc(d: float, p: float) -> KrausChannel:
    """Generalized amplitude damping toward a bath with ground weight p.

    p = 1 recovers adc (decay only), p = 0 is the pure amplification
    process. The two operators that vanish at those endpoints are kept as
    exact zeros so the channel always has four operators.
    """
    _check_unit("d", d)
    _check_unit("p", p)
    sp, sq = math.sqrt(p), math.sqrt(1.0 - p)
    ops = (
        sp * np.diag([1.0, math.sqrt(1.0 - d)]).astype(complex),
        sp * np.array([[0.0, math.sqrt(d)], [0.0, 0.0]], dtype=complex),
        sq * np.diag([math.sqrt(1.0 - d), 1.0]).astype(complex),
        sq * np.array([[0.0, 0.0], [math.sqrt(d), 0.0]], dtype=complex),
    )
    return KrausChannel(ops, "gadc", {"d": d, "p": p})


def dephasing_lambda(b: float, tau: float, t: float) -> float:
    """Coherence factor of random-telegraph dephasing with memory.

    nu = t/(2 tau); mu = sqrt((4 b tau)^2 - 1). Above the memory threshold
    (4 b tau > 1) the factor rings: e^{-nu}(cos(mu nu) + sin(mu nu)/mu).
    Below it mu is imaginary and the same expression is evaluated in its
    real cosh/sinh form; at the threshold it degenerates to e^{-nu}(1+nu).
    """
    if tau <= 0.0:
        raise ValueError(f"tau must be positive, got {tau}")
    nu = t / (2.0 * tau)
    x = (4.0 * b * tau) ** 2 - 1.0
    if x > 0.0:
        mu = math.sqrt(x)
        return math.exp(-nu) * (math.cos(mu * nu) + math.sin(mu * nu) / mu)
    if x < 0.0:
        mu = math.sqrt(-x)
        return math.exp(-nu) * (math.cosh(mu * nu) + math.sinh(mu * nu) / mu)
    return math.exp(-nu) * (1.0 + nu)


def nonmarkov_dephasing(lam: float) -> KrausChannel:
    """Dephasing channel at a frozen coherence factor lam in [-1, 1]."""
    if not -1.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [-1, 1], got {lam}")
    a0 = math.sqrt((1.0 + lam) / 2.0) * linalg.ID2
    a1 = math.sqrt((1.0 - lam) / 2.0) * linalg.SIGMA_Z
    return KrausChannel((a0, a1), "ntd", {"lambda": lam})


_CHANNEL_FACTORIES = {"pdc": pdc, "adc": adc, "gadc": gadc, "ntd": nonmarkov_dephasing}


def by_name(name: str, *params: float) -> KrausChannel:
    """Construct a channel from its CLI name and positional parameters."""
    try:
        factory = _CHANNEL_FACTORIES[name]
    except KeyError:
        raise ValueError(
            f"unknown channel {name!r}; expected one of {sorted(_CHANNEL_FACTORIES)}"
        ) from None
    return factory(*params)


def _embed(op: np.ndarray, pos: int) -> np.ndarray:
    ops = [linalg.ID2, linalg.ID2, linalg.ID2]
    ops[pos] = op
    return linalg.kron(linalg.kron(ops[0], ops[1]), ops[2])


def _apply_at(rho: np.ndarray, ch: KrausChannel, pos: int) -> np.ndarray:
    out = np.zeros_like(rho)
    for op in ch.operators:
        k = _embed(op, pos)
        out += k @ rho @ k.conj().T
    return out


def apply(rho: np.ndarray, ch: KrausChannel, pl: Placement) -> np.ndarray:
    """Act with the channel on the chosen qubit(s).

    ALL_QUBITS composes the three single-qubit applications; for
    product-form Kraus sets this equals the full triple-index sum.
    """
    if pl is Placement.ALL_QUBITS:
        for pos in range(3):
            rho = _apply_at(rho, ch, pos)
        return rho
    pos = {"q1": 0, "q2": 1, "q3": 2}[pl.value]
    return _apply_at(rho, ch, pos)
