"""Acceptance gate for the whole pipeline.

Every check prints one `ACCEPTANCE <id> ...: PASS/FAIL` line (visible with
`pytest -s`) before asserting, so a failing run still reports the status of
each criterion. One check is red on purpose: the analytic expression for the
B-focus I-tangle of the phase-damped W state disagrees with the numeric
route away from the endpoints, and the suite reports that honestly instead
of hiding it (see the c01 Pdc1W entry and the scenario notes).
"""
import csv
import math
import time
from pathlib import Path

import numpy as np
import pytest

from conftest import haar_unitary, random_density_matrix, random_pure_state
from tritangle import measures
from tritangle.channels import (
    Placement,
    adc,
    apply,
    dephasing_lambda,
    gadc,
    nonmarkov_dephasing,
    pdc,
)
from tritangle.closedform import ScenarioId, d_esd, gadc_wwbar_closed, milburn_closed, pdc1_w_closed
from tritangle.dynamics import HamiltonianParams, MilburnParams, milburn_evolve, schrodinger_evolve
from tritangle.experiments import cross_validate_all, detect_period, first_local_maximum, run_figure
from tritangle.linalg import kron3, partial_trace
from tritangle.states import gghz, gw, mix_ghz_extremes, pure_dm, w, wbar

BAL = 1.0 / math.sqrt(2.0)


def _verdict(tag: str, ok: bool, detail: str = "") -> bool:
    status = "PASS" if ok else "FAIL"
    suffix = f"  ({detail})" if detail else ""
    print(f"ACCEPTANCE {tag}: {status}{suffix}", flush=True)
    return ok


def _columns(path: Path) -> dict[str, np.ndarray]:
    with path.open(encoding="utf-8", newline="") as handle:
        rows = list(csv.reader(handle))
    header, data = rows[0], rows[1:]
    out = {}
    for i, name in enumerate(header):
        if name == "path":
            continue
        try:
            out[name] = np.array([float(r[i]) for r in data])
        except ValueError:
            continue
    return out


# ---- c01: numeric pipeline vs closed forms, all scenarios ----

@pytest.fixture(scope="module")
def oracle_suite():
    start = time.perf_counter()
    reports = {r.scenario: r for r in cross_validate_all()}
    return reports, time.perf_counter() - start


@pytest.mark.parametrize("scenario", list(ScenarioId), ids=lambda s: s.value)
def test_c01_closed_form_equivalence(oracle_suite, scenario):
    report = oracle_suite[0][scenario]
    gated = [c for c in report.checks if c.bound is not None]
    worst = max(c.max_dev for c in gated)
    ok = report.passed and report.points >= 400
    detail = f"{report.points} pts, worst gated dev {worst:.2e}"
    if not ok and report.notes:
        detail += f"; {report.notes[0]}"
    assert _verdict(f"c01 closed-form equivalence[{scenario.value}]", ok, detail)


def test_c01_suite_runtime(oracle_suite):
    elapsed = oracle_suite[1]
    assert _verdict("c01 oracle suite runtime < 60 s", elapsed < 60.0, f"{elapsed:.2f} s")


# ---- c02: intrinsic-decoherence envelope and its unitary limit ----

def test_c02_envelope_decay():
    h = HamiltonianParams(J=1.0, Delta=1.0, D=0.0, B=0.1)
    m = MilburnParams(0.5)
    rho0 = pure_dm(gghz(BAL))
    worst = 0.0
    for t in (0.0, 1.0, 5.0, 20.0):
        rho = milburn_evolve(rho0, h, m, t)
        c2 = measures.rank2_itangle(rho, "A", m_convention="quadratic")
        envelope = math.exp(-4.0 * m.gamma * t * math.sin(3.0 * h.B / m.gamma) ** 2)
        worst = max(worst, abs(c2 - envelope))
    assert _verdict("c02 decoherence envelope", worst < 1e-12, f"max dev {worst:.2e}")


def test_c02_large_gamma_is_effectively_unitary():
    h = HamiltonianParams(J=1.0, Delta=1.0, D=0.0, B=0.1)
    m = MilburnParams(1e8)
    rho0 = pure_dm(gghz(BAL))
    worst = 0.0
    for t in (0.5, 2.0, 10.0):
        rho = milburn_evolve(rho0, h, m, t)
        c2 = measures.rank2_itangle(rho, "A", m_convention="quadratic")
        worst = max(worst, abs(c2 - 1.0))
    assert _verdict("c02 large-gamma constancy", worst <= 1e-5, f"max |c2-1| {worst:.2e}")


# ---- c03: analytic block form of the corner-sector M matrix ----

def test_c03_m_matrix_pin():
    rng = np.random.default_rng(20260814)
    worst_m = 0.0
    worst_min = 0.0
    flip = np.diag([1.0, 1.0, -1.0])
    for _ in range(100):
        a = rng.uniform(0.1, 0.95)
        b_field = rng.uniform(0.05, 0.4)
        gamma = rng.uniform(0.5, 3.0)
        t = rng.uniform(0.05, 3.0)
        h = HamiltonianParams(J=1.0, Delta=1.0, D=0.0, B=b_field)
        rho = milburn_evolve(pure_dm(gghz(a)), h, MilburnParams(gamma), t)
        # local phase on the third qubit makes the extreme coherence real,
        # matching the frame the analytic entries are written in
        chi = np.angle(rho[0, 7])
        gauge = np.kron(np.eye(4), np.diag([1.0, np.exp(1j * chi)]))
        rho_g = gauge @ rho @ gauge.conj().T
        spread = a * math.sqrt(1.0 - a * a)
        f18 = abs(rho_g[0, 7]) / spread
        u = (1.0 - 2.0 * a * a) ** 2
        v = 4.0 * a * a * (1.0 - a * a) * f18 * f18
        m11 = (u - v) / (2.0 * (u + v))
        m13 = 2.0 * spread * (1.0 - 2.0 * a * a) * f18 / (u + v)
        expected = np.array([
            [m11, 0.0, m13],
            [0.0, 0.5, 0.0],
            [m13, 0.0, -m11],
        ])
        got = measures.rank2_m_matrix(rho_g, "A", m_convention="quadratic")
        # the machinery's eigenvector phase convention can flip the sign of
        # the off-diagonal pair; both signs describe the same operator
        dev = min(
            float(np.max(np.abs(got - expected))),
            float(np.max(np.abs(got - flip @ expected @ flip))),
        )
        worst_m = max(worst_m, dev)
        m_min = measures.rank2_m_min(rho, "A", m_convention="quadratic")
        worst_min = max(worst_min, abs(m_min + 0.5))
    ok = worst_m < 1e-12 and worst_min < 1e-12
    assert _verdict("c03 M-matrix block form x100", ok,
                    f"entry dev {worst_m:.2e}, m_min dev {worst_min:.2e}")


# ---- c04: first peaks of the evolved-W figure data ----

def test_c04_first_peaks(tmp_path):
    run_figure("fig1", tmp_path, steps=6000)
    targets = {
        "left": (0.2197, 2.0 * math.sqrt(2.0) / 3.0, 8.0 / 9.0),
        "right": (0.2618, 2.0 * math.sqrt(14.0) / 9.0, 28.0 * 35.0 ** 0.25 / 81.0),
    }
    ok = True
    details = []
    for panel, (t_ref, gtc_ref, fill_ref) in targets.items():
        cols = _columns(tmp_path / f"fig1_{panel}.csv")
        t_got, gtc_got = first_local_maximum(cols["t/param"], cols["gtc"])
        _, fill_got = first_local_maximum(cols["t/param"], cols["fill"])
        dev = max(abs(t_got - t_ref), abs(gtc_got - gtc_ref), abs(fill_got - fill_ref))
        ok = ok and dev < 1e-3
        details.append(f"{panel} dev {dev:.1e}")
    assert _verdict("c04 first-peak values and times", ok, ", ".join(details))


# ---- c05: measured recurrence periods ----

def _evolved_gw_curve(d_coupling: float, field: str):
    p = HamiltonianParams(J=1.0, Delta=1.0, D=d_coupling, B=0.0)
    rho0 = pure_dm(gw(BAL, BAL))

    def fn(t: float) -> float:
        rho = schrodinger_evolve(rho0, p, t)
        if field == "c_ab":
            return measures.wootters_concurrence(partial_trace(rho, "AB"))
        return measures.full_report(rho).c2_a_bc

    return fn


def test_c05_measured_periods():
    cases = (
        (0.0, "c_ab", math.pi / 3.0),
        (1.0 / math.sqrt(3.0), "c_ab", math.pi / 2.0),
        (math.sqrt(3.0), "c2_a_bc", math.pi / 6.0),
    )
    worst = 0.0
    for d_coupling, field, target in cases:
        got = detect_period(_evolved_gw_curve(d_coupling, field), 4.0, 2048)
        worst = max(worst, abs(got - target))
    assert _verdict("c05 measured recurrence periods", worst < 1e-3,
                    f"max dev {worst:.1e}")


# ---- c06: minima of the phase-damped W closed forms ----

def test_c06_phase_damping_minima():
    ds = np.linspace(0.0, 1.0, 4001)
    targets = (("c2_a_bc", 0.1420, 0.9280), ("c2_b_ac", 0.5146, 0.8656))
    worst = 0.0
    for field, value_ref, d_ref in targets:
        vals = np.array([pdc1_w_closed(float(d))[field] for d in ds])
        d_got, neg = first_local_maximum(ds, -vals)
        worst = max(worst, abs(-neg - value_ref), abs(d_got - d_ref))
    assert _verdict("c06 damped-W minima", worst < 1e-3, f"max dev {worst:.1e}")


# ---- c07: weakest points of the sudden-death threshold ----

def test_c07_sudden_death_thresholds():
    ps = np.linspace(0.0, 1.0, 2001)
    cases = (
        (0.0, 0.3787, 0.2265),
        (math.pi / 2.0, 0.3787, 0.7734),
        (math.pi / 4.0, 0.3542, 0.5),
    )
    worst = 0.0
    for theta, value_ref, p_ref in cases:
        vals = np.array([d_esd(theta, float(p), tol=1e-12) for p in ps])
        p_got, neg = first_local_maximum(ps, -vals)
        worst = max(worst, abs(-neg - value_ref), abs(p_got - p_ref))
    assert _verdict("c07 sudden-death thresholds", worst < 1e-3, f"max dev {worst:.1e}")


# ---- c08: telegraph-dephasing asymptotics and dark period ----

def _dephased_gghz_c2(a: float, t: float) -> float:
    lam = dephasing_lambda(1.0, 5.0, t)
    rho = apply(pure_dm(gghz(a)), nonmarkov_dephasing(lam), Placement.ALL_QUBITS)
    return measures.rank2_itangle(rho, "A")


def test_c08_steady_values():
    targets = ((BAL, 0.0), (0.5, 0.1875), (0.3, 0.0819))
    worst = max(abs(_dephased_gghz_c2(a, 200.0) - ref) for a, ref in targets)
    assert _verdict("c08 dephasing asymptotics", worst < 1e-3, f"max dev {worst:.1e}")


def test_c08_dark_period_with_revival():
    # the dephasing factor crosses zero; bracket the first crossing and
    # confirm the entanglement dies there and revives afterwards
    ts = np.linspace(0.1, 50.0, 2001)
    lam = [dephasing_lambda(1.0, 5.0, float(t)) for t in ts]
    idx = next(i for i in range(len(ts) - 1) if lam[i] * lam[i + 1] < 0.0)
    lo, hi = float(ts[idx]), float(ts[idx + 1])
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if dephasing_lambda(1.0, 5.0, lo) * dephasing_lambda(1.0, 5.0, mid) <= 0.0:
            hi = mid
        else:
            lo = mid
    t_dark = 0.5 * (lo + hi)
    dead = _dephased_gghz_c2(BAL, t_dark)
    revival = max(
        _dephased_gghz_c2(BAL, float(t))
        for t in np.linspace(t_dark + 0.05, t_dark + 3.0, 40)
    )
    ok = dead < 1e-9 and revival > 1e-3
    assert _verdict("c08 dark period and revival", ok,
                    f"t={t_dark:.3f}, c2={dead:.1e}, revival {revival:.3f}")


# ---- c09: steady state of the vacuum-diluted mixture ----

def test_c09_mixture_steady_state():
    def steady(weight: float) -> float:
        lam = dephasing_lambda(1.0, 5.0, 200.0)
        rho = apply(mix_ghz_extremes(weight, 0.0), nonmarkov_dephasing(lam),
                    Placement.ALL_QUBITS)
        return measures.rank2_itangle(rho, "A")

    values = [steady(weight) for weight in (0.1, 0.3, 0.5)]
    expected = [(1.0 - weight ** 2) / 4.0 for weight in (0.1, 0.3, 0.5)]
    worst = max(abs(g - e) for g, e in zip(values, expected))
    decreasing = values[0] > values[1] > values[2] > 0.0
    pure_steady = _dephased_gghz_c2(BAL, 200.0)
    ok = worst < 1e-3 and decreasing and pure_steady < 1e-6
    assert _verdict("c09 mixture steady state", ok,
                    f"values {[f'{v:.4f}' for v in values]}, pure {pure_steady:.1e}")


# ---- c10: property suites ----

def test_c10_monogamy_on_random_pure_states():
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(500):
        tau = measures.residual_entanglement_pure(random_pure_state(rng))
        worst = min(worst, tau) if tau < worst else worst
    assert _verdict("c10 monogamy x500", worst >= -1e-9, f"min tau {worst:.2e}")


_REPORT_FIELDS = ("c_ab", "c_ac", "c_bc", "c2_a_bc", "c2_b_ac", "c2_c_ab",
                  "tau", "gtc", "fill", "linear_entropy")


def test_c10_local_unitary_invariance():
    rng = np.random.default_rng(12)
    worst = 0.0
    for i in range(200):
        basis_change = kron3(haar_unitary(rng), haar_unitary(rng), haar_unitary(rng))
        if i % 2 == 0:
            rho = pure_dm(random_pure_state(rng))
            rotated = basis_change @ rho @ basis_change.conj().T
            before = measures.full_report(rho)
            after = measures.full_report(rotated)
            for name in _REPORT_FIELDS:
                worst = max(worst, abs(getattr(before, name) - getattr(after, name)))
        else:
            rho = random_density_matrix(rng, rank=2)
            rotated = basis_change @ rho @ basis_change.conj().T
            for focus in "ABC":
                worst = max(worst, abs(
                    measures.rank2_itangle(rho, focus)
                    - measures.rank2_itangle(rotated, focus)))
            for pair in ("AB", "AC", "BC"):
                worst = max(worst, abs(
                    measures.wootters_concurrence(partial_trace(rho, pair))
                    - measures.wootters_concurrence(partial_trace(rotated, pair))))
    assert _verdict("c10 local-unitary invariance x200", worst < 1e-9,
                    f"max dev {worst:.2e}")


def test_c10_channel_contracts():
    rng = np.random.default_rng(13)
    places = list(Placement)
    worst_complete = 0.0
    worst_trace = 0.0
    for i in range(1000):
        kind = i % 4
        if kind == 0:
            channel = pdc(rng.uniform(0.0, 1.0))
        elif kind == 1:
            channel = adc(rng.uniform(0.0, 1.0))
        elif kind == 2:
            channel = gadc(rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0))
        else:
            channel = nonmarkov_dephasing(rng.uniform(-1.0, 1.0))
        total = sum(k.conj().T @ k for k in channel.operators)
        worst_complete = max(worst_complete, float(np.max(np.abs(total - np.eye(2)))))
        rho = random_density_matrix(rng, rank=int(rng.integers(1, 9)))
        mapped = apply(rho, channel, places[int(rng.integers(0, len(places)))])
        worst_trace = max(worst_trace, abs(np.trace(mapped).real - 1.0))
    ok = worst_complete < 1e-12 and worst_trace < 1e-12
    assert _verdict("c10 channel contracts x1000", ok,
                    f"completeness {worst_complete:.2e}, trace {worst_trace:.2e}")


def test_c10_evolved_gw_three_tangle_stays_zero():
    worst = 0.0
    for d_coupling, period in ((0.0, math.pi / 3.0), (math.sqrt(3.0), math.pi / 6.0)):
        p = HamiltonianParams(J=1.0, Delta=1.0, D=d_coupling, B=0.0)
        rho0 = pure_dm(gw(BAL, BAL))
        for t in np.linspace(0.0, period, 81):
            tau = measures.full_report(schrodinger_evolve(rho0, p, float(t))).tau
            worst = max(worst, abs(tau))
    assert _verdict("c10 evolved-W three-tangle x162", worst < 1e-9,
                    f"max |tau| {worst:.2e}")


# ---- c11: spectral I-tangle identities ----

def test_c11_spectral_endpoints():
    # untouched W state through the thermal damping channel
    worst_clean = max(
        abs(measures.spectral_itangle(
            apply(pure_dm(w()), gadc(0.0, p), Placement.ALL_QUBITS), "A") - 8.0 / 9.0)
        for p in (0.0, 0.3, 1.0)
    )
    # the two pure components swap roles at opposite bath polarizations
    worst_pipe = 0.0
    worst_poly = 0.0
    for d in np.linspace(0.0, 1.0, 41):
        s_w = measures.spectral_itangle(
            apply(pure_dm(w()), gadc(float(d), 1.0), Placement.ALL_QUBITS), "A")
        s_wbar = measures.spectral_itangle(
            apply(pure_dm(wbar()), gadc(float(d), 0.0), Placement.ALL_QUBITS), "A")
        worst_pipe = max(worst_pipe, abs(s_w - s_wbar))
        poly_w = gadc_wwbar_closed(0.0, float(d), 1.0)["c2_spectral"]
        poly_wbar = gadc_wwbar_closed(math.pi / 2.0, float(d), 0.0)["c2_spectral"]
        worst_poly = max(worst_poly, abs(poly_w - poly_wbar))
    ok = worst_clean < 1e-12 and worst_pipe < 1e-12 and worst_poly < 1e-12
    assert _verdict("c11 spectral I-tangle endpoints", ok,
                    f"clean {worst_clean:.2e}, pipeline {worst_pipe:.2e}, "
                    f"polynomials {worst_poly:.2e}")
