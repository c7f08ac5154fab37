"""Acceptance criteria, one test each, at the stated tolerances.

Every test prints a single ``PASS``/``FAIL`` line (outside pytest's capture)
before asserting, so ``pytest -v`` output doubles as the acceptance report.
"""
import csv
import io
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from cotsum.cotangent import EULER_GAMMA, c0_cf_telescoped, c0_direct, psi_via_reciprocity, reciprocity_residual
from cotsum.distribution import find_density_witness, is_unimodal, random_reals, s_tail_probe, verify_witness
from cotsum.estermann import d1_rational, d1_truncated, divisor_table
from cotsum.moments import H2_EXACT, empirical_moment, hk_brute, hk_dft
from cotsum.rationals import ReducedFraction, cf_of_real, growth_violations
from cotsum.verify import random_fractions


@pytest.fixture
def report(capsys):
    def emit(n, ok, text):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {text}")
        assert ok, text

    return emit


def test_criterion_01_reciprocity(report):
    t0 = time.perf_counter()
    worst = max(reciprocity_residual(x) for x in random_fractions(1000, 10**4, seed=2024))
    dt = time.perf_counter() - t0
    report(1, worst <= 1e-8 and dt <= 30, f"max residual {worst:.3e} <= 1e-8, {dt:.2f}s <= 30s")


def test_criterion_02_dual_route(report):
    t0 = time.perf_counter()
    worst = 0.0
    for x in random_fractions(500, 5000, seed=2025):
        d = c0_direct(x).value
        for alt in (False, True):
            worst = max(worst, abs(d - c0_cf_telescoped(x, alternate=alt).value) / (1 + abs(d)))
    dt = time.perf_counter() - t0
    report(2, worst <= 1e-8 and dt <= 60, f"max |direct - cf|/(1+|c0|) {worst:.3e} <= 1e-8 (both expansions), {dt:.2f}s")


def test_criterion_03_h2(report):
    t0 = time.perf_counter()
    gap = abs(hk_dft(2, 10**5).value - H2_EXACT)
    routes = max(abs(hk_dft(k, N).value - hk_brute(k, N).value) for k, N in ((2, 50), (3, 40), (4, 20)))
    dt = time.perf_counter() - t0
    ok = gap <= 1e-3 and routes <= 1e-10 and dt <= 60
    report(3, ok, f"|H2(1e5) - 5/36| {gap:.3e} <= 1e-3; max |dft - brute| {routes:.3e} <= 1e-10; {dt:.2f}s")


def test_criterion_04_second_moment(report):
    t0 = time.perf_counter()
    big = empirical_moment(10007, 2)
    small = empirical_moment(1009, 2)
    dt = time.perf_counter() - t0
    ok = big.rel_dev <= 0.05 and big.rel_dev <= 3 * small.rel_dev and dt <= 300
    report(4, ok, f"rel_dev(10007) {big.rel_dev:.4f} <= 0.05 and <= 3 * rel_dev(1009) = {3 * small.rel_dev:.4f}; {dt:.2f}s")


def test_criterion_05_odd_moments(report):
    worst = 0.0
    for q in (101, 1009):
        for k in (1, 3):
            worst = max(worst, abs(empirical_moment(q, k).empirical) / q**k)
    report(5, worst <= 1e-10, f"max |moment| / q^k {worst:.3e} <= 1e-10")


def test_criterion_06_bridge(report):
    X = 10**6
    table = divisor_table(X)
    worst, count = 0.0, 0
    for q in range(1, 51):
        for a in range(q):
            if math.gcd(a, q) == 1:
                x = ReducedFraction(a, q)
                worst = max(worst, abs(d1_truncated(x, X, table).value - d1_rational(x).value))
                count += 1
    report(6, worst <= 1e-2, f"max |D_X - bridge| over {count} fractions {worst:.3e} <= 1e-2")


def test_criterion_07_psi_asymptotics(report):
    ratios = []
    for q in (10, 10**2, 10**3, 10**4, 10**5):
        psi = psi_via_reciprocity(ReducedFraction(1, q)).value
        ratios.append(abs(psi + (math.log(2 * math.pi / q) - EULER_GAMMA) * q / math.pi) / math.log(q))
    report(7, max(ratios) <= 10, "residual / log q = " + ", ".join(f"{r:.3f}" for r in ratios) + " (all <= 10)")


def _read(path):
    meta, body = {}, []
    for line in path.read_text(encoding="utf-8").splitlines():
        if line.startswith("# "):
            k, v = line[2:].split("=", 1)
            meta[k] = v
        else:
            body.append(line)
    return meta, list(csv.reader(io.StringIO("\n".join(body))))[1:]


def test_criterion_08_figure(report, tmp_path):
    out = tmp_path / "fig1.csv"
    t0 = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "cotsum", "distribution", "--samples", "100000", "--trunc", "100000",
         "--out", str(out)],
        capture_output=True, text=True, timeout=900,
    )
    dt = time.perf_counter() - t0
    assert proc.returncode == 0, proc.stderr
    meta, hist = _read(out)
    _, cdf = _read(tmp_path / "fig1_cdf.csv")
    x = np.array([float(r[0]) for r in cdf])
    F = np.array([float(r[1]) for r in cdf])
    monotone = bool(np.all(np.diff(x) > 0) and np.all(np.diff(F) >= 0))
    F0 = float(F[x <= 0][-1]) if np.any(x <= 0) else 0.0
    counts = np.array([int(r[1]) for r in hist])
    lo, hi = float(meta["lo"]), float(meta["hi"])
    edges = np.linspace(lo, hi, len(counts) + 1)
    mode = int(np.argmax(counts))
    mode_has_zero = edges[mode] <= 0.0 <= edges[mode + 1]
    unimodal = is_unimodal(counts)
    ok = dt <= 600 and monotone and abs(F0 - 0.5) <= 0.01 and unimodal and mode_has_zero
    report(8, ok, f"{dt:.1f}s <= 600s; monotone CDF {monotone}; |F(0) - 0.5| = {abs(F0 - 0.5):.4f} <= 0.01; "
                  f"unimodal {unimodal}; mode bin [{edges[mode]:.2f}, {edges[mode + 1]:.2f}] contains 0 {mode_has_zero}")


def test_criterion_09_growth(report):
    bad = sum(len(growth_violations(cf_of_real(x, 30, None))) for x in random_reals(31, 10**4))
    report(9, bad == 0, f"{bad} violations of v_n >= 2^((n-3)/2) over 10^4 reals at depth 30")


def test_criterion_10_witnesses(report):
    lines, ok = [], True
    for z in (-1.0, -0.3, 0.3, 1.0):
        w = find_density_witness(z, 0.05)
        check = verify_witness(w)
        good = w.in_window and z < check <= z + 0.05
        ok &= good
        lines.append(f"z={z}: x={w.x_found} D={w.value:.6f} bridge={check:.6f}")
    report(10, ok, "; ".join(lines))


def test_criterion_11_tail_probe(report):
    fr = [f for _, f in s_tail_probe(10**4, [2, 4, 6, 8], seed=0)]
    decreasing = all(a > b for a, b in zip(fr, fr[1:]))
    ok = decreasing and fr[3] <= 10 * fr[1] ** 2
    report(11, ok, "fractions " + ", ".join(f"{f:.4f}" for f in fr) + f"; f(8) {fr[3]:.4f} <= 10 f(4)^2 = {10 * fr[1] ** 2:.4f}")
