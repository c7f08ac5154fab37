"""Empirical law of 2/pi^2 D(1, u) for uniform u, tails of S(x), density witnesses."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cotangent import EULER_GAMMA
from .errors import BudgetExhausted, DomainError
from .estermann import d1_cf, d1_rational, d1_truncated_many, divisor_table, s_majorant
from .rationals import ContinuedFraction, ReducedFraction

__all__ = [
    "FIGURE_SAMPLES",
    "FIGURE_TRUNCATION",
    "EmpiricalDistribution",
    "Histogram",
    "DensityWitness",
    "make_rng",
    "sample_distribution",
    "cdf_query",
    "histogram",
    "is_unimodal",
    "random_reals",
    "s_tail_probe",
    "find_density_witness",
    "verify_witness",
]

FIGURE_SAMPLES = 100_000
FIGURE_TRUNCATION = 100_000
_SCALE = 2.0 / math.pi**2


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based Philox stream; identical across platforms for a given seed."""
    return np.random.Generator(np.random.Philox(seed))


@dataclass(frozen=True, eq=False)
class EmpiricalDistribution:
    samples: np.ndarray  # sorted values of 2/pi^2 D_X(1, u)
    sample_count: int
    truncation: int
    seed: int

    def cdf(self, x) -> float | np.ndarray:
        return cdf_query(self, x)


@dataclass(frozen=True)
class Histogram:
    centers: np.ndarray
    counts: np.ndarray
    lo: float
    hi: float
    underflow: int
    overflow: int
    edges: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum()) + self.underflow + self.overflow

    @property
    def mode(self) -> int:
        return int(np.argmax(self.counts))

    def bin_contains(self, i: int, x: float) -> bool:
        """Whether the closed bin ``[edges[i], edges[i+1]]`` contains ``x``."""
        return bool(self.edges[i] <= x <= self.edges[i + 1])

    def rows(self):
        return list(zip(self.centers.tolist(), self.counts.tolist()))


def sample_distribution(count: int, X: int, seed: int, chunk: int = 8192) -> EmpiricalDistribution:
    """Sample ``2/pi^2 D_X(1, u)`` at ``count`` uniform points and sort."""
    if count < 1:
        raise DomainError("count must be >= 1")
    table = divisor_table(X)
    u = make_rng(seed).random(count)
    values = np.empty(count)
    for start in range(0, count, chunk):
        values[start : start + chunk] = d1_truncated_many(u[start : start + chunk], X, table)
    values *= _SCALE
    values.sort()
    values.setflags(write=False)
    return EmpiricalDistribution(values, count, X, seed)


def cdf_query(dist: EmpiricalDistribution, x):
    """Fraction of samples ``<= x`` (right-continuous step function)."""
    idx = np.searchsorted(dist.samples, x, side="right")
    return idx / dist.sample_count


def histogram(dist: EmpiricalDistribution, bins: int = 100, range: tuple = (-2.0, 2.0)) -> Histogram:
    lo, hi = float(range[0]), float(range[1])
    if bins < 1 or not lo < hi:
        raise DomainError("need bins >= 1 and lo < hi")
    s = dist.samples
    counts, edges = np.histogram(s, bins=bins, range=(lo, hi))
    under = int(np.count_nonzero(s < lo))
    over = int(np.count_nonzero(s > hi))
    centers = 0.5 * (edges[:-1] + edges[1:])
    edges.setflags(write=False)
    return Histogram(centers, counts.astype(np.int64), lo, hi, under, over, edges)


def is_unimodal(counts, noise_sigmas: float = 3.0) -> bool:
    """True when the counts rise to a single peak and then fall.

    A step against the expected direction is tolerated while it stays within
    ``noise_sigmas`` Poisson standard deviations of the larger neighbour.
    """
    c = np.asarray(counts, dtype=float)
    peak = int(np.argmax(c))

    def ok(a, b):  # expect b >= a
        return b >= a or (a - b) <= noise_sigmas * math.sqrt(max(a, 1.0))

    rising = all(ok(c[i], c[i + 1]) for i in range(peak))
    falling = all(ok(c[i + 1], c[i]) for i in range(peak, len(c) - 1))
    return rising and falling


def random_reals(seed: int, count: int, bits: int = 128) -> list[Fraction]:
    """``count`` uniform dyadic rationals ``n / 2^bits`` in ``[0, 1)`` from a Philox stream."""
    return list(_random_reals(make_rng(seed), count, bits))


def _random_reals(rng: np.random.Generator, count: int, bits: int = 128):
    words = rng.integers(0, 2**64, size=(count, bits // 64), dtype=np.uint64)
    for row in words:
        n = 0
        for wd in row:
            n = (n << 64) | int(wd)
        yield Fraction(n, 1 << bits)


def s_tail_probe(count: int, K_list, depth: int = 30, seed: int = 0, bits: int = 128):
    """Exceedance fractions ``#{S(x) > K} / count`` over uniform random ``x``.

    Each ``x`` is a random dyadic with ``bits`` bits, expanded at the matching
    working precision.
    """
    rng = make_rng(seed)
    digits = int(bits * math.log10(2)) - 2
    S = np.array([s_majorant(x, depth, digits) for x in _random_reals(rng, count, bits)])
    return [(K, float(np.count_nonzero(S > K)) / count) for K in K_list]


@dataclass(frozen=True)
class DensityWitness:
    target_z: float
    epsilon: float
    x_found: ReducedFraction
    value: float
    iterations: int
    cf: ContinuedFraction | None = None
    kappa: int = 0
    x1: int = 0
    x2: int = 0
    core_value: float = 0.0
    tail_bound: float = 0.0
    alpha: float = 0.0
    beta: float = 0.0
    notes: dict = field(default_factory=dict)

    @property
    def in_window(self) -> bool:
        return self.target_z < self.value <= self.target_z + self.epsilon


def _tail_bound(v_prev: int, v_last: int, terms: int = 80) -> float:
    """Bound on the terms after ``x2`` when every later quotient is 1.

    Each term is about ``(pi/2) |log(2 pi y) - gamma| / v_{l-1}`` with
    ``y = v_{l-1}/v_l`` in ``[1/2, 1)``; ``|log(2 pi y)| + gamma`` bounds the
    bracket from above.
    """
    total, a, b = 0.0, v_prev, v_last
    for _ in range(terms):
        a, b = b, a + b
        total += (math.pi / 2) * (abs(math.log(2 * math.pi * a / b)) + EULER_GAMMA) / a
        if a > 1e300:
            break
    return total


class _Search:
    def __init__(self, kappa: int, budget: int):
        self.kappa = kappa
        self.budget = budget
        self.calls = 0
        self.cache = {}

    def cf(self, x1: int, x2: int, tail: int = 0) -> ContinuedFraction:
        return ContinuedFraction.from_quotients([0] + [1] * self.kappa + [x1, x2] + [1] * tail)

    def core(self, x1: int, x2: int) -> float:
        key = (x1, x2)
        if key not in self.cache:
            if self.calls >= self.budget:
                raise BudgetExhausted("evaluation budget exhausted")
            self.calls += 1
            self.cache[key] = d1_cf(self.cf(x1, x2)).value
        return self.cache[key]


def _fit(search: _Search, p: int = 4):
    # value ~ c + alpha log x1 - beta log(x2) / x1 from three probes
    pts = [(p, 1), (2 * p, 1), (2 * p, 2 * p)]
    A = np.array([[1.0, math.log(x1), -math.log(x2) / x1] for x1, x2 in pts])
    y = np.array([search.core(x1, x2) for x1, x2 in pts])
    c, alpha, beta = np.linalg.solve(A, y)
    return float(c), float(alpha), float(beta)


def _try_kappa(z, eps, search, max_x2):
    """Steer the core value of ``<0; 1^kappa, x1, x2>`` into the window.

    Returns ``(x1, x2, core, tail_bound, alpha, beta)`` or None when ``x2``
    would have to exceed ``max_x2``.  The fitted model only seeds the ``x2``
    search; ``x1`` is located by bisection on actual values.
    """
    c, alpha, beta = _fit(search)
    target = z + eps / 2
    decreasing = beta > 0  # value falls as x2 grows, rises with x1

    def before(x1, x2):
        g = search.core(x1, x2)
        return g > target if decreasing else g <= target

    # smallest x1 whose x2 = 1 value is still on the far side of the target:
    # x2 then only has to cover one step of x1
    lo, hi = 1, 2
    while not before(hi, 1):
        lo, hi = hi, hi * 2
        if hi > 10**7:
            return None
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if before(mid, 1):
            hi = mid
        else:
            lo = mid
    x1 = hi
    while True:
        expo = x1 * (alpha * math.log(x1) + c - target) / beta
        guess = max(2, int(math.exp(min(max(expo, 0.0), math.log(max_x2)))))

        def past(x2):
            return not before(x1, x2)

        # bracket the crossing of the target around the predicted x2
        lo, hi = 1, guess
        while not past(hi):
            lo, hi = hi, hi * 2
            if hi > max_x2:
                return None
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if past(mid):
                hi = mid
            else:
                lo = mid
        for x2 in (lo, hi):
            v = search.cf(x1, x2).convergent_den
            tb = _tail_bound(v[-2], v[-1])
            g = search.core(x1, x2)
            if tb <= eps / 10 and z + tb < g <= z + eps - tb:
                return x1, x2, g, tb, alpha, beta
        # tail too heavy or x2 step too coarse: a larger x1 raises v
        x1 += max(1, x1 // 4)
        if not before(x1, 1):
            return None


def find_density_witness(
    z: float, eps: float, budget: int = 400, max_kappa: int = 12, tail: int = 8, max_x2: int = 10**6
) -> DensityWitness:
    """Construct ``x = <0; 1^kappa, x1, x2, 1, ..., 1>`` with ``z < D(1, x) <= z + eps``.

    The core value of ``<0; 1^kappa, x1, x2>`` is steered into the window
    shrunk on both sides by a bound on what the all-ones tail can add; ``x1``
    grows until that bound is at most ``eps/10``.  Even ``kappa`` moves the
    value up with ``x1`` and down with ``x2``, odd ``kappa`` the reverse;
    ``kappa`` starts at 1 or 2 by direction and steps by 2 only when a
    prefix fails.  Raises :class:`BudgetExhausted` with the best candidate
    when ``budget`` evaluations run out.
    """
    if eps <= 0:
        raise DomainError("eps must be positive")
    if z < 0 <= z + eps:
        x = ReducedFraction(1, 2)
        return DensityWitness(z, eps, x, 0.0, 0, notes={"shortcut": "D(1, 1/2) = 0"})
    calls = 0
    best = None
    # even kappa gives alpha > 0: x1 pushes the value up, x2 pulls it down;
    # odd kappa mirrors this.  Start with the parity that moves towards z.
    base = d1_cf(ContinuedFraction.from_quotients([0, 1, 1])).value
    kappa = 2 if z + eps / 2 > base else 1
    while kappa <= max_kappa and calls < budget:
        search = _Search(kappa, budget - calls)
        try:
            found = _try_kappa(z, eps, search, max_x2)
        except BudgetExhausted:
            found = None
        calls += search.calls
        if found is not None:
            x1, x2, core, tb, alpha, beta = found
            cf = search.cf(x1, x2, tail)
            value = d1_cf(cf).value
            frac = cf.value()
            witness = DensityWitness(
                z, eps, ReducedFraction(frac.numerator, frac.denominator), value, calls,
                cf, kappa, x1, x2, core, tb, alpha, beta,
            )
            if witness.in_window:
                return witness
            best = witness
        kappa += 2
    raise BudgetExhausted(f"no witness for ({z}, {z + eps}] within {budget} evaluations", best)


def verify_witness(w: DensityWitness) -> float:
    """Re-evaluate a witness through the cotangent-sum bridge (independent of the psi sum)."""
    return d1_rational(w.x_found).value
