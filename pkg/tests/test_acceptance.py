"""Acceptance criteria 1-9.

Each criterion prints one ``[PASS]``/``[FAIL]`` line; a summary of all nine
is also written at the end of the pytest run.  Run standalone with
``python3 tests/test_acceptance.py``.
"""

import math
import time

import numpy as np
import pytest

from decoq.channels import apply, choi_min_eigenvalue, completeness_defect
from decoq.entanglement import concurrence, negativity, partial_transpose_b
from decoq.loopfns import b0, c0_ir, dilog, virtual_coefficient
from decoq.radiation import (UnresolvedRegion, ap_correspondence_check, delta_rho_pattern,
                             full_map, soft_channel)
from decoq.states import (Coupling, CouplingKind, KinematicPoint, bell_state, lo_r_matrix,
                          normalize)

M = 172.5
S, P, V, A = CouplingKind.SCALAR, CouplingKind.PSEUDOSCALAR, CouplingKind.VECTOR, CouplingKind.AXIAL
PSI = bell_state("psi+").m
RESULTS = {}


def record(n, ok, detail, elapsed, limit=None):
    if limit is not None and elapsed > limit:
        ok, detail = False, f"{detail}; runtime {elapsed:.2f}s exceeds {limit}s"
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail} ({elapsed:.2f}s)"
    RESULTS[n] = line
    print(line)
    return ok, line


def conc(kind, alpha, beta):
    kin = KinematicPoint.from_beta(M, beta)
    ch, _ = full_map(Coupling(kind, alpha), kin)
    return concurrence(normalize(apply(ch, PSI))).value


def test_criterion_1_bell_concurrence():
    t = time.perf_counter()
    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(100):
        m_f = rng.uniform(0.1, 500)
        m_phi = 2 * m_f * rng.uniform(1.001, 20)
        kin = KinematicPoint(m_f, m_phi)
        r = lo_r_matrix(kin, rng.uniform(0.01, 3), int(rng.integers(1, 6)))
        worst = max(worst, abs(concurrence(normalize(r)).value - 1))
    ok, line = record(1, worst <= 1e-12, f"max |C - 1| = {worst:.1e} over 100 draws",
                      time.perf_counter() - t, 1)
    assert ok, line


def test_criterion_2_scalar_no_decoherence():
    t = time.perf_counter()
    worst = max(abs(conc(S, 0.1, b) - 1) for b in np.linspace(0.05, 0.99, 40))
    ok, line = record(2, worst <= 1e-10, f"scalar sweep max |C - 1| = {worst:.1e}",
                      time.perf_counter() - t, 10)
    assert ok, line


def test_criterion_3_band_reproduction():
    t = time.perf_counter()
    drop95 = 1 - conc(V, 0.1, 0.95)
    betas = np.linspace(0.5, 0.99, 40)
    curves = {a: np.array([1 - conc(V, a, b) for b in betas]) for a in (1 / 10, 1 / 50, 1 / 137)}
    band = 0.003 <= drop95 <= 0.03
    d = np.diff(curves[0.1])
    monotone = all(bool(np.all(np.diff(c) > 0)) for c in curves.values())
    ordering = bool(np.all(curves[0.1] > curves[1 / 50]) and np.all(curves[1 / 50] > curves[1 / 137]))
    peak = betas[int(np.argmax(curves[0.1]))]
    detail = (f"1 - C(0.95) = {drop95:.4f} band {'ok' if band else 'MISSED'}; "
              f"ordering {'ok' if ordering else 'BROKEN'}; "
              f"monotone {'ok' if monotone else f'BROKEN (peak at beta = {peak:.3f}, min step {d.min():.1e})'}")
    ok, line = record(3, band and ordering and monotone, detail, time.perf_counter() - t, 60)
    assert ok, line


def test_criterion_4_kln():
    t = time.perf_counter()
    worst, p_zero = 0.0, True
    for b in np.linspace(0.1, 0.99, 10):
        kin = KinematicPoint.from_beta(M, b)
        region = UnresolvedRegion.default(kin)
        for kind in (S, P, V, A):
            c = Coupling(kind, 0.1)
            pv = virtual_coefficient(c, kin).value
            _, ps, _ = soft_channel(c, kin, region)
            if kind is P:
                p_zero &= pv.pole == 0 and ps.pole == 0
            else:
                worst = max(worst, abs(pv.pole + ps.pole))
    ok, line = record(4, worst <= 1e-8 and p_zero,
                      f"max residual S/V/A = {worst:.1e}; P poles identically zero: {p_zero}",
                      time.perf_counter() - t, 30)
    assert ok, line


def test_criterion_5_channel_validity():
    t = time.perf_counter()
    defect, mineig = 0.0, 0.0
    for kind in CouplingKind:
        for b in np.linspace(0.2, 0.99, 10):
            ch, _ = full_map(Coupling(kind, 0.1), KinematicPoint.from_beta(M, b))
            defect = max(defect, completeness_defect(ch))
            mineig = min(mineig, choi_min_eigenvalue(ch))
    ok, line = record(5, defect <= 1e-10 and mineig >= -1e-10,
                      f"max defect = {defect:.1e}, min Choi eigenvalue = {mineig:.1e}",
                      time.perf_counter() - t)
    assert ok, line


AP_CONFIGS = [(0.8, {}), (0.9, {"theta_max": math.pi / 4}), (0.95, {"zmin": 0.2}),
              (0.97, {"theta_max": 1.0, "zmin": 0.05}), (0.99, {"omega0_frac": 0.02})]


def test_criterion_6_ap_correspondence():
    t = time.perf_counter()
    worst = 0.0
    for kind in (P, V, A):
        for b, reg in AP_CONFIGS:
            kin = KinematicPoint.from_beta(M, b)
            r = ap_correspondence_check(Coupling(kind, 0.1), kin, UnresolvedRegion.default(kin, **reg))
            worst = max(worst, r.deviation, r.locality_deviation)
    ok, line = record(6, worst <= 1e-10, f"max deviation = {worst:.1e} over 15 configurations",
                      time.perf_counter() - t)
    assert ok, line


def test_criterion_7_delta_rho():
    t = time.perf_counter()
    bad = []
    for b in (0.5, 0.7, 0.8, 0.9, 0.95):
        kin = KinematicPoint.from_beta(M, b)
        p = delta_rho_pattern(Coupling(P, 0.1), kin)
        if not (abs(p.d11) <= 1e-10 * abs(p.d23) and abs(p.d22) <= 1e-10 * abs(p.d23) and p.d23 != 0):
            bad.append(("P", b))
        v = delta_rho_pattern(Coupling(V, 0.1), kin)
        if not (math.isclose(abs(v.d11), abs(v.d22), rel_tol=1e-10)
                and math.isclose(abs(v.d22), abs(v.d23), rel_tol=1e-10)):
            bad.append(("V", b))
        a = delta_rho_pattern(Coupling(A, 0.1), kin)
        if not (math.isclose(abs(a.d11), abs(a.d22), rel_tol=1e-10)
                and not math.isclose(abs(a.d22), abs(a.d23), rel_tol=1e-10)):
            bad.append(("A", b))
    ok, line = record(7, not bad, "P, V, A relations hold at 5 beta points" if not bad
                      else f"violations {bad}", time.perf_counter() - t)
    assert ok, line


def test_criterion_8_loop_oracles():
    from test_loopfns import b0_oracle, c0_oracle
    t = time.perf_counter()
    worst = 0.0

    def rel(a, b):
        return abs(a - b) / max(abs(b), 1e-300)

    for p2, m1, m2 in ((M**2, 0, M**2), (5 * M**2, M**2, M**2), (2 * M**2, M**2, M**2),
                       (0.5 * M**2, 0, M**2)):
        got = b0(p2, m1, m2, 200.0)
        worst = max(worst, rel(got.finite, b0_oracle(p2, m1, m2, 200.0)), abs(got.pole - 1))
    for beta in (0.3, 0.5, 0.9):
        kin = KinematicPoint.from_beta(M, beta)
        got, ref = c0_ir(M**2, kin.s, kin.m_phi), c0_oracle(M**2, kin.s, kin.m_phi)
        worst = max(worst, rel(got.pole, ref.pole), rel(got.finite, ref.finite))
    ident = max(abs(dilog(x) + dilog(1 - x) - (math.pi**2 / 6 - math.log(x) * math.log(1 - x)))
                for x in np.linspace(0.01, 0.99, 50))
    ident = max(ident, abs(dilog(-1) + math.pi**2 / 12))
    ok, line = record(8, worst <= 1e-6 and ident <= 1e-11,
                      f"max relative oracle deviation = {worst:.1e}; dilog identity = {ident:.1e}",
                      time.perf_counter() - t, 120)
    assert ok, line


def test_criterion_9_entanglement_oracle():
    from conftest import random_density_matrix
    t = time.perf_counter()
    worst = 0.0
    for p in np.linspace(0, 1, 100):
        w = p * PSI + (1 - p) * np.eye(4) / 4
        worst = max(worst, abs(concurrence(w).value - max(0.0, (3 * p - 1) / 2)))
    rng = np.random.default_rng(9)
    mismatch = 0
    for _ in range(200):
        rho = random_density_matrix(rng, int(rng.integers(1, 5)))
        c = concurrence(rho).value > 1e-9
        if c != (np.linalg.eigvalsh(partial_transpose_b(rho)).min() < -1e-9) or c != (negativity(rho) > 1e-9):
            mismatch += 1
    ok, line = record(9, worst <= 1e-10 and mismatch == 0,
                      f"Werner max deviation = {worst:.1e}; positivity mismatches = {mismatch}/200",
                      time.perf_counter() - t)
    assert ok, line


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
