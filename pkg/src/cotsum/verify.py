"""Invariant suite: every quantity checked against an independent route.

``run_suite("fast")`` caps denominators at 2000 and sample counts at 10^3 so
it finishes in seconds; ``"full"`` uses the acceptance-scale parameters.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .cotangent import (
    EULER_GAMMA,
    c0_cf_telescoped,
    c0_direct,
    c0_sweep,
    psi_via_reciprocity,
    reciprocity_residual,
    three_term_defect,
)
from .distribution import (
    cdf_query,
    find_density_witness,
    histogram,
    is_unimodal,
    make_rng,
    random_reals,
    s_tail_probe,
    sample_distribution,
    verify_witness,
)
from .errors import BudgetExhausted
from .estermann import d1_cf, d1_rational, d1_truncated, divisor_table
from .moments import H2_EXACT, empirical_moment, hk_brute, hk_dft
from .rationals import ReducedFraction, cf_of_real, growth_violations

__all__ = ["Check", "LEVELS", "random_fractions", "run_suite"]


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    measured: float
    threshold: float
    seconds: float
    detail: str = ""

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} {self.name}: {self.measured:.3e} (limit {self.threshold:.3e}, {self.seconds:.2f}s) {self.detail}".rstrip()


LEVELS = {
    "fast": dict(
        q_cap=2000, n_recip=200, n_dual=100, h2_trunc=20000, moment_q=1009, moment_tol=0.10,
        odd_q=(101, 1009), bridge_q=20, bridge_trunc=10**5, psi_q=(10, 100, 1000), samples=1000,
        dist_trunc=10**4, dist_bins=20, cdf_tol=0.05, tail_K=(2, 4, 6), witness_z=(-1.0, 0.3),
    ),
    "full": dict(
        q_cap=10**4, n_recip=1000, n_dual=500, h2_trunc=10**5, moment_q=10007, moment_tol=0.05,
        odd_q=(101, 1009), bridge_q=50, bridge_trunc=10**6, psi_q=(10, 100, 1000, 10**4, 10**5),
        samples=10**5, dist_trunc=10**5, dist_bins=100, cdf_tol=0.01, tail_K=(2, 4, 6, 8),
        witness_z=(-1.0, -0.3, 0.3, 1.0),
    ),
}


def random_fractions(count: int, q_max: int, seed: int, q_min: int = 2) -> list[ReducedFraction]:
    """Seeded reduced fractions ``a/q`` with ``0 < a < q``, ``q_min <= q <= q_max``."""
    rng = make_rng(seed)
    out = []
    while len(out) < count:
        q = int(rng.integers(q_min, q_max + 1))
        a = int(rng.integers(1, q))
        if math.gcd(a, q) == 1:
            out.append(ReducedFraction(a, q))
    return out


def _timed(name, threshold, fn, compare=lambda m, t: m <= t):
    t0 = time.perf_counter()
    measured, detail = fn()
    return Check(name, bool(compare(measured, threshold)), float(measured), float(threshold),
                 time.perf_counter() - t0, detail)


def _reciprocity(p, seed):
    xs = random_fractions(p["n_recip"], p["q_cap"], seed)
    return max(reciprocity_residual(x) for x in xs), f"{len(xs)} fractions, q <= {p['q_cap']}"


def _dual_c0(p, seed):
    xs = random_fractions(p["n_dual"], min(p["q_cap"], 5000), seed + 1)
    worst = 0.0
    for x in xs:
        d = c0_direct(x).value
        for alt in (False, True):
            worst = max(worst, abs(d - c0_cf_telescoped(x, alternate=alt).value) / (1 + abs(d)))
    return worst, "direct vs continued fraction, both expansions"


def _oddness(p, seed):
    worst = 0.0
    for q in (p["q_cap"] - 1, p["q_cap"], 997):
        v = c0_sweep(q)
        ok = ~np.isnan(v)
        r = v[ok]
        worst = max(worst, float(np.max(np.abs(r + r[::-1]))) if len(r) > 1 else 0.0)
    return worst, "c0(1 - x) + c0(x)"


def _three_term(p, seed):
    worst = 0.0
    for x in random_fractions(100, min(p["q_cap"], 500), seed + 2):
        a, q = x.num, x.den
        lhs = (psi_via_reciprocity(x).value - psi_via_reciprocity(ReducedFraction(a + q, q)).value
               - psi_via_reciprocity(ReducedFraction.reduce(a, a + q)).value * q / (a + q))
        worst = max(worst, abs(lhs - three_term_defect(x)))
    return worst, "defect against closed form"


def _hk_routes(p, seed):
    worst = 0.0
    for k, N in ((2, 50), (3, 40), (4, 20)):
        table = divisor_table(N)
        worst = max(worst, abs(hk_dft(k, N, table).value - hk_brute(k, N).value))
    return worst, "dft vs enumeration at (2,50), (3,40), (4,20)"


def _h2(p, seed):
    N = p["h2_trunc"]
    return abs(hk_dft(2, N).value - H2_EXACT), f"N = {N}"


def _moment(p, seed):
    r = empirical_moment(p["moment_q"], 2)
    return r.rel_dev, f"q = {r.q}"


def _odd_moments(p, seed):
    worst = 0.0
    for q in p["odd_q"]:
        for k in (1, 3):
            worst = max(worst, abs(empirical_moment(q, k).empirical) / float(q) ** k)
    return worst, "|moment| / q^k"


def _bridge(p, seed):
    X = p["bridge_trunc"]
    table = divisor_table(X)
    worst = 0.0
    for q in range(1, p["bridge_q"] + 1):
        for a in range(q):
            if math.gcd(a, q) == 1:
                x = ReducedFraction(a, q)
                worst = max(worst, abs(d1_truncated(x, X, table).value - d1_rational(x).value))
    return worst, f"q <= {p['bridge_q']}, X = {X}"


def _cf_vs_bridge(p, seed):
    worst = 0.0
    for x in random_fractions(100, p["q_cap"], seed + 3):
        worst = max(worst, abs(d1_cf(x).value - d1_rational(x).value))
    return worst, "rational points"


def _psi_asymptotic(p, seed):
    ratios = []
    for q in p["psi_q"]:
        psi = psi_via_reciprocity(ReducedFraction(1, q)).value
        ratios.append(abs(psi + (math.log(2 * math.pi / q) - EULER_GAMMA) * q / math.pi) / math.log(q))
    return max(ratios), "max residual / log q"


def _growth(p, seed):
    bad = 0
    for x in random_reals(seed + 4, p["samples"] * 10 if p["samples"] < 10**4 else 10**4):
        bad += len(growth_violations(cf_of_real(x, 30, None)))
    return bad, "violations of v_n >= 2^((n-3)/2)"


def _distribution(p, seed):
    dist = sample_distribution(p["samples"], p["dist_trunc"], seed)
    xs = np.linspace(-3, 3, 601)
    F = cdf_query(dist, xs)
    monotone = bool(np.all(np.diff(F) >= 0))
    h = histogram(dist, p["dist_bins"])
    mode_has_zero = h.bin_contains(h.mode, 0.0)
    gap = abs(float(cdf_query(dist, 0.0)) - 0.5)
    if not (monotone and mode_has_zero and is_unimodal(h.counts)):
        gap = math.inf
    return gap, f"|F(0) - 1/2|; monotone={monotone} mode_has_zero={mode_has_zero}"


def _tail(p, seed):
    rows = s_tail_probe(p["samples"] * 10 if p["samples"] < 10**4 else 10**4, p["tail_K"], seed=seed)
    fr = [f for _, f in rows]
    ok = all(a > b for a, b in zip(fr, fr[1:]))
    return (0.0 if ok else 1.0), "fractions " + ", ".join(f"{f:.4f}" for f in fr)


def _witnesses(p, seed):
    worst, fails = 0.0, 0
    for z in p["witness_z"]:
        try:
            w = find_density_witness(z, 0.05)
        except BudgetExhausted:
            fails += 1
            continue
        v = verify_witness(w)
        if not (z < v <= z + 0.05):
            fails += 1
        worst = max(worst, abs(v - w.value))
    return (worst if not fails else math.inf), f"{fails} failures; value gap to bridge"


_CHECKS = [
    ("reciprocity_residual", 1e-8, _reciprocity),
    ("c0_dual_route", 1e-8, _dual_c0),
    ("c0_oddness", 0.0, _oddness),
    ("psi_three_term", 1e-9, _three_term),
    ("hk_dft_vs_brute", 1e-10, _hk_routes),
    ("h2_constant", 1e-3, _h2),
    ("second_moment", None, _moment),
    ("odd_moments", 1e-10, _odd_moments),
    ("estermann_bridge", 1e-2, _bridge),
    ("estermann_cf_vs_bridge", 1e-9, _cf_vs_bridge),
    ("psi_asymptotic", 10.0, _psi_asymptotic),
    ("convergent_growth", 0, _growth),
    ("distribution_shape", None, _distribution),
    ("s_tail_decreasing", 0.0, _tail),
    ("density_witness", 1e-9, _witnesses),
]


def run_suite(level: str = "fast", seed: int = 0, only=None):
    """Run every check; yields :class:`Check` results as they finish."""
    if level not in LEVELS:
        raise ValueError(f"unknown level {level!r}")
    p = LEVELS[level]
    for name, threshold, fn in _CHECKS:
        if only is not None and name not in only:
            continue
        if name == "second_moment":
            threshold = p["moment_tol"]
        elif name == "distribution_shape":
            threshold = p["cdf_tol"]
        yield _timed(name, threshold, lambda: fn(p, seed))
