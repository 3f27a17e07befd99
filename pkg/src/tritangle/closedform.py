"""Analytic expressions for every scenario with a known closed form.

These are the independent arbiters for the numeric pipeline: each function
transcribes the final analytic result for one initial-state/noise family,
and the experiments module checks the pipeline against them over parameter
grids. Expressions are kept verbatim, including two whose status the
cross-validation itself settles:

* adc_w_vacuum_closed returns the printed pairwise value under the key
  c_pair; numerically it agrees with the squared pair concurrence, not the
  concurrence, so consumers should treat it as C^2.
* pdc1_w_closed's c2_b_ac and gadc_wwbar_closed's c2_spectral do not agree
  with the numeric pipeline beyond their endpoints; they are exposed for
  reporting, and the validation layer documents the disagreement instead of
  gating on it.
"""
from __future__ import annotations

import math
from enum import Enum

import numpy as np

from . import measures
from .channels import dephasing_lambda

_BALANCED = 1.0 / math.sqrt(2.0)


class ScenarioId(Enum):
    """Initial-state / noise families with analytic results.

    Parameter domains (all within [0,1] unless noted):
      MILBURN_GGHZ        a, b_field (real), gamma > 0, t >= 0
      MILBURN_GHZ_MIXTURE w1, w2 with w1 + w2 <= 1; b_field, gamma, t as above
      PDC1_W              d
      ADC_W_VACUUM_MIX    d, w
      ADC1_GGHZ           a, d
      ADC3_GGHZ           a, d
      PDC_GHZ_VACUUM_MIX  d, w (c2 only trustworthy for w << 1)
      NONMARKOV_GGHZ      a; b real, tau > 0, t >= 0
      NONMARKOV_GHZ_MIX   w; b, tau, t as above
      GADC_WWBAR          theta in {0, pi/4, pi/2}; d, p
    """

    MILBURN_GGHZ = "MilburnGGHZ"
    MILBURN_GHZ_MIXTURE = "MilburnGhzMixture"
    PDC1_W = "Pdc1W"
    ADC_W_VACUUM_MIX = "AdcWVacuumMix"
    ADC1_GGHZ = "Adc1GGHZ"
    ADC3_GGHZ = "Adc3GGHZ"
    PDC_GHZ_VACUUM_MIX = "PdcGhzVacuumMix"
    NONMARKOV_GGHZ = "NonMarkovGGHZ"
    NONMARKOV_GHZ_MIXTURE = "NonMarkovGhzMixture"
    GADC_WWBAR = "GadcWWbar"


def _check_range(**kwargs: float) -> None:
    for name, value in kwargs.items():
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {value}")


def milburn_closed(
    a: float, b_field: float, gamma: float, t: float,
    w1: float = 0.0, w2: float = 0.0,
) -> dict[str, float]:
    """Intrinsic-decoherence results for the GHZ-sector states.

    With w1 = w2 = 0 the initial state is the generalized GHZ ket with
    amplitude a; otherwise it is the balanced-GHZ/extremes mixture and the
    amplitude must stay at 1/sqrt(2).
    """
    _check_range(a=a, w1=w1, w2=w2)
    if gamma <= 0.0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    if t < 0.0:
        raise ValueError(f"t must be nonnegative, got {t}")
    if w1 + w2 > 1.0:
        raise ValueError(f"w1 + w2 must not exceed 1, got {w1 + w2}")
    half = math.exp(-2.0 * gamma * t * math.sin(3.0 * b_field / gamma) ** 2)
    if w1 == 0.0 and w2 == 0.0:
        spread = 2.0 * a * math.sqrt(1.0 - a * a)
        return {"c2_a_bc": spread * spread * half * half, "gtc": spread * half}
    if abs(a - _BALANCED) > 1e-12:
        raise ValueError("the mixture case is defined for the balanced amplitude only")
    visibility = 1.0 - w1 - w2
    return {"c2_a_bc": visibility * visibility * half * half, "gtc": visibility * half}


def pdc1_w_closed(d: float) -> dict[str, float]:
    """W state with phase damping on the first qubit."""
    _check_range(d=d)
    root = math.sqrt((32.0 * d - 41.0) * (32.0 * d - 33.0))
    return {
        "m_min": (root - 1.0) / (8.0 * (8.0 * d - 9.0)),
        "c2_a_bc": d * (root - 1.0) / (9.0 * (8.0 * d - 9.0)) - 4.0 * (d - 2.0) / 9.0,
        "c2_b_ac": (
            d * (math.sqrt(1296.0 * d * d - 2792.0 * d + 1497.0) + 4.0 * d - 5.0)
            / (18.0 * (8.0 * d - 9.0))
            - (2.0 / 9.0) * (2.0 * d + math.sqrt(1.0 - d) - 5.0)
        ),
        "c2_ab": 4.0 * (1.0 - d) / 9.0,
        "c2_bc": 4.0 / 9.0,
    }


def adc_w_vacuum_closed(d: float, w: float) -> dict[str, float]:
    """W/vacuum mixture with amplitude damping on every qubit."""
    _check_range(d=d, w=w)
    shrink = (1.0 - d) ** 2 * (1.0 - w) ** 2
    return {
        "c2_a_bc": (8.0 / 9.0) * shrink,
        "c_pair": (4.0 / 9.0) * shrink,
        "s_lin": (
            2.0 * d * (1.0 - d)
            + (4.0 * d * d - 6.0 * d + 2.0) * w
            - 2.0 * (1.0 - d) ** 2 * w * w
        ),
    }


def gghz_adc_closed(a: float, d: float, variant: str = "I") -> dict[str, float]:
    """Generalized GHZ with amplitude damping on the first or third qubit."""
    _check_range(a=a, d=d)
    spread2 = a * a * (1.0 - a * a)
    gtc = 2.0 * a * math.sqrt((1.0 - a * a) * (1.0 - d))
    if variant == "I":
        return {"c2_a_bc": 4.0 * spread2 * (1.0 - d), "gtc": gtc}
    if variant == "III":
        return {"c2_a_bc": 2.0 * spread2 * (2.0 - d), "gtc": gtc}
    raise ValueError(f"variant must be 'I' or 'III', got {variant!r}")


def ghz_vacuum_pdc_closed(d: float, w: float) -> dict[str, float]:
    """GHZ/vacuum mixture with phase damping on every qubit.

    c2_smallw is a small-w expansion; its error against the numeric
    pipeline grows like w^4 and it should not be read outside w << 1.
    """
    _check_range(d=d, w=w)
    cube = (1.0 - d) ** 3
    return {
        "gmc": (1.0 - d) ** 1.5 * (1.0 - w),
        "s_lin": 0.5 * (1.0 - cube) + cube * w - 0.5 * (1.0 + cube) * w * w,
        "c2_smallw": cube * (1.0 - w) ** 2,
    }


def _gghz_dephased(a: float, lam3: float) -> np.ndarray:
    """Generalized GHZ after telegraph dephasing of all qubits.

    The channel only rescales the extreme coherence by lam^3, so the state
    can be written down directly.
    """
    rho = np.zeros((8, 8), dtype=complex)
    rho[0, 0] = a * a
    rho[7, 7] = 1.0 - a * a
    rho[0, 7] = rho[7, 0] = a * math.sqrt(1.0 - a * a) * lam3
    return rho


def nonmarkov_closed(
    a: float, w: float, b: float, tau: float, t: float, variant: str = "PureGGHZ",
) -> dict[str, float]:
    """Telegraph-dephasing results for the GHZ-sector states.

    The pure-state c2 depends on the M-matrix minimum of the dephased state,
    which has no published closed form away from a = 1/sqrt(2); there the
    value is taken from the measurement machinery, keeping this function an
    oracle for everything that IS closed (the Lambda dependence and the
    balanced special case m = -1/2).
    """
    _check_range(a=a, w=w)
    if t < 0.0:
        raise ValueError(f"t must be nonnegative, got {t}")
    lam = dephasing_lambda(b, tau, t)
    lam3 = lam ** 3
    lam6 = lam3 * lam3
    if variant == "PureGGHZ":
        spread2 = a * a * (1.0 - a * a)
        gtc = 2.0 * math.sqrt(spread2) * abs(lam3)
        if spread2 < 1e-15:
            return {"c2_a_bc": 0.0, "gtc": 0.0}
        if abs(a - _BALANCED) < 1e-12 or 1.0 - lam6 < 1e-12:
            # balanced amplitude, or no dephasing yet: the m-dependent term
            # vanishes (or is exactly -1/2), so skip the machinery
            m_min = -0.5
        else:
            try:
                m_min = measures.rank2_m_min(_gghz_dephased(a, lam3), "A")
            except measures.MeasureDomainError:
                # numerically rank-1 (extreme amplitude or negligible
                # dephasing); the m term is then smaller than roundoff
                m_min = -0.5
        c2 = 2.0 * spread2 * (1.0 + lam6 + 2.0 * m_min * (1.0 - lam6))
        return {"c2_a_bc": c2, "gtc": gtc}
    if variant == "GhzMixture":
        shrink = (1.0 - w) ** 2 * lam6
        denom = 8.0 * (shrink + w * w)
        if denom < 1e-30:
            m_min = -0.25
        else:
            m_min = (
                w * w
                - math.sqrt(40.0 * shrink * w * w + 16.0 * shrink * shrink + 9.0 * w ** 4)
            ) / denom
        c2 = (
            0.5 * (1.0 - w) * (1.0 + w + (1.0 - w) * lam6)
            + (1.0 - w) * (1.0 + w - (1.0 - w) * lam6) * m_min
        )
        return {"c2_a_bc": c2, "gtc": (1.0 - w) * abs(lam3)}
    raise ValueError(f"variant must be 'PureGGHZ' or 'GhzMixture', got {variant!r}")


# ---- generalized amplitude damping on the W/Wbar superposition ----

_THETAS = {"0": 0.0, "pi/4": math.pi / 4.0, "pi/2": math.pi / 2.0}


def _theta_key(theta: float) -> str:
    for key, value in _THETAS.items():
        if abs(theta - value) < 1e-12:
            return key
    raise ValueError(
        f"theta must be one of 0, pi/4, pi/2 (got {theta}); "
        "other angles have no analytic result"
    )


def _f_w(d: float, p: float) -> float:
    return d * (p - 1.0) * (
        d ** 3 * (p - 1.0) * (1.0 - 3.0 * p) ** 2
        + 2.0 * d * d * p * (3.0 * p - 1.0)
        + d * (3.0 - 5.0 * p)
        - 2.0
    )


def _f_wbar(d: float, p: float) -> float:
    return d * p * (
        d ** 3 * p * (2.0 - 3.0 * p) ** 2
        - 2.0 * d * d * (3.0 * p * p - 5.0 * p + 2.0)
        + d * (2.0 - 5.0 * p)
        + 2.0
    )


def _f_wwbar(d: float, p: float) -> float:
    hump = 6.0 * p * p - 6.0 * p + 1.0
    return (
        d ** 4 * hump * hump
        + 2.0 * d ** 3 * hump
        - 6.0 * d * d * (1.0 - 2.0 * p) ** 2
        + 2.0 * d
        + 1.0
    )


def _spectral_poly_w(d: float, p: float) -> float:
    return (
        90.0 * d ** 6 * (p - 1.0) ** 4 * p * p
        + 150.0 * d ** 5 * (p - 1.0) ** 3 * p
        - 10.0 * d ** 4 * (p - 1.0) ** 2 * (15.0 * p * p - 15.0 * p - 4.0)
        - d ** 3 * (p - 1.0) ** 2 * (1053.0 * p + 80.0)
        + d * d * (-1742.0 * p * p + 1297.0 * p + 445.0)
        + 81.0 * d * (5.0 * p - 13.0)
        + 648.0
    ) / 729.0


def _spectral_poly_wbar(d: float, p: float) -> float:
    return (
        45.0 * d ** 6 * (p - 1.0) ** 2 * p ** 4
        + 30.0 * d ** 5 * (p - 1.0) * p ** 3
        + 5.0 * d ** 4 * p * p * (-6.0 * p * p + 6.0 * p + 1.0)
        + 2.0 * d ** 3 * p * p * (252.0 * p - 257.0)
        + d * d * p * (696.0 - 787.0 * p)
        + 96.0 * d * (p - 3.0)
        + 288.0
    ) / 324.0


def gadc_wwbar_closed(theta: float, d: float, p: float) -> dict[str, float | None]:
    """W/Wbar superposition with generalized amplitude damping on every qubit.

    c_pair is the reduced AB concurrence; c2_spectral is the published
    spectral-decomposition polynomial, available for theta in {0, pi/2} and
    None at pi/4.
    """
    _check_range(d=d, p=p)
    key = _theta_key(theta)
    if key == "0":
        c_pair = max(0.0, (2.0 / 3.0) * (1.0 - d - math.sqrt(max(_f_w(d, p), 0.0))))
        c2: float | None = _spectral_poly_w(d, p)
    elif key == "pi/2":
        c_pair = max(0.0, (2.0 / 3.0) * (1.0 - d - math.sqrt(max(_f_wbar(d, p), 0.0))))
        c2 = _spectral_poly_wbar(d, p)
    else:
        c_pair = max(
            0.0, (1.0 / 3.0) * (2.0 - 2.0 * d - math.sqrt(max(_f_wwbar(d, p), 0.0)))
        )
        c2 = None
    return {"c_pair": c_pair, "c2_spectral": c2}


def d_esd(theta: float, p: float, tol: float = 1e-6) -> float:
    """Damping strength where the GADC pair concurrence dies, by bisection.

    Returns 1.0 if the concurrence never reaches zero on (0, 1].
    """
    _check_range(p=p)
    _theta_key(theta)

    def alive(d: float) -> bool:
        return gadc_wwbar_closed(theta, d, p)["c_pair"] > 0.0

    if not alive(0.0):
        return 0.0
    if alive(1.0):
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if alive(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
