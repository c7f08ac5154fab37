"""Moment constants H_k and empirical moments of c0 over reduced residues.

    H_k = (i pi^2)^{-k} sum_{n_1 + ... + n_k = 0, n_j != 0} prod d(|n_j|) / n_j

The constrained sum is the constant Fourier coefficient of ``f^k`` with
``f(t) = sum_{0<|n|<=N} d(|n|) e(n t) / n``; sampling ``f`` at ``M > kN``
points recovers it exactly.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .cotangent import c0_cf_telescoped, c0_direct, c0_sweep
from .errors import DomainError, ResourceError
from .estermann import DivisorTable, divisor_table
from .rationals import ReducedFraction

__all__ = [
    "H2_EXACT",
    "HkMethod",
    "HkEstimate",
    "MomentReport",
    "GrowthRow",
    "totient",
    "hk_brute",
    "hk_dft",
    "hk_reference",
    "hk_growth_probe",
    "c0_values",
    "empirical_moment",
]

# sum d(n)^2/n^2 = zeta(2)^4/zeta(4) gives H_2 = 2/pi^4 * 5 pi^4/72
H2_EXACT = 5.0 / 36.0
BRUTE_BUDGET = 5 * 10**6
DFT_MAX_POINTS = 2**26


class HkMethod(str, Enum):
    DFT_CONSTANT_TERM = "dft_constant_term"
    BRUTE_FORCE = "brute_force"
    ZETA_CLOSED_FORM = "zeta_closed_form"


@dataclass(frozen=True)
class HkEstimate:
    k: int
    truncation: int
    value: float
    method: HkMethod
    tail_estimate: float


@dataclass(frozen=True)
class MomentReport:
    q: int
    k: int
    phi_q: int
    empirical: float
    predicted: float
    rel_dev: float

    def as_row(self) -> dict:
        return {
            "q": self.q,
            "k": self.k,
            "phi_q": self.phi_q,
            "empirical": self.empirical,
            "predicted": self.predicted,
            "rel_dev": self.rel_dev,
        }


@dataclass(frozen=True)
class GrowthRow:
    k: int
    hk: float
    hk_over_factorial: float
    root: float            # |H_k|^(1/k)
    factorial_root: float  # |H_k / k!|^(1/k)


def totient(q: int) -> int:
    """Euler's phi by trial division."""
    if q < 1:
        raise DomainError("totient needs q >= 1")
    result, n, p = q, q, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1 if p == 2 else 2
    if n > 1:
        result -= result // n
    return result


def _unit_factor(k: int) -> complex:
    # (i pi^2)^{-k}
    return (1j ** (-k % 4)) / math.pi ** (2 * k)


def hk_brute(k: int, N: int, budget: int = BRUTE_BUDGET) -> HkEstimate:
    """Enumerate ``(n_1, ..., n_{k-1})`` and close with ``n_k = -sum``; oracle use only."""
    if k < 0 or N < 1:
        raise DomainError("need k >= 0 and N >= 1")
    if k == 0:
        return HkEstimate(0, N, 1.0, HkMethod.BRUTE_FORCE, 0.0)
    if (2 * N) ** (k - 1) > budget:
        raise ResourceError(f"(2N)^(k-1) = {(2 * N) ** (k - 1)} exceeds budget {budget}")
    d = [0] * (N + 1)
    for j in range(1, N + 1):
        for m in range(j, N + 1, j):
            d[m] += 1
    weight = {n: d[abs(n)] / n for n in range(-N, N + 1) if n}
    terms = []
    for head in itertools.product(weight, repeat=k - 1):
        last = -sum(head)
        if last == 0 or abs(last) > N:
            continue
        t = weight[last]
        for n in head:
            t *= weight[n]
        terms.append(t)
    total = math.fsum(terms)
    value = (_unit_factor(k) * total).real
    return HkEstimate(k, N, value, HkMethod.BRUTE_FORCE, 0.0)


def _dft_raw(k: int, N: int, table: DivisorTable) -> complex:
    M = 1 << max(1, (k * N).bit_length())  # smallest power of two > kN
    if M > DFT_MAX_POINTS:
        raise ResourceError(f"{M} sample points exceed the cap {DFT_MAX_POINTS}")
    w = table.weights[: N + 1]
    coeff = np.zeros(M, dtype=np.complex128)
    coeff[1 : N + 1] = w[1:]
    coeff[M - N :] = -w[1:][::-1]
    f = np.fft.ifft(coeff) * M  # f(j/M) = sum_n c_n e(n j / M)
    mean = np.mean(f**k)
    return _unit_factor(k) * mean


def hk_dft(k: int, N: int, table: DivisorTable | None = None) -> HkEstimate:
    """H_k truncated to ``|n_j| <= N`` via the constant Fourier coefficient.

    Odd ``k`` returns exactly 0 (the sum cancels under ``n -> -n``) with the
    size of the computed residue in ``tail_estimate``.  For ``k = 2`` the tail
    is the exact gap to 5/36; for larger even ``k`` it is ``|H(N) - H(N/2)|``.
    """
    if k < 0 or N < 1:
        raise DomainError("need k >= 0 and N >= 1")
    if k == 0:
        return HkEstimate(0, N, 1.0, HkMethod.DFT_CONSTANT_TERM, 0.0)
    if table is None:
        table = divisor_table(N)
    if N > table.limit:
        raise DomainError(f"N = {N} exceeds table limit {table.limit}")
    raw = _dft_raw(k, N, table)
    if k % 2:
        return HkEstimate(k, N, 0.0, HkMethod.DFT_CONSTANT_TERM, float(abs(raw)))
    value = raw.real
    if abs(raw.imag) > 1e-10 * max(abs(value), 1e-300):
        raise ArithmeticError(f"H_{k} has imaginary residue {raw.imag:.3e}")
    if k == 2:
        tail = H2_EXACT - value
    else:
        tail = abs(value - _dft_raw(k, max(N // 2, 1), table).real)
    return HkEstimate(k, N, float(value), HkMethod.DFT_CONSTANT_TERM, float(tail))


def hk_reference(k: int, N: int = 20000) -> HkEstimate:
    """Best available H_k: closed form for k = 2, zero for odd k, DFT otherwise."""
    if k == 2:
        return HkEstimate(2, 0, H2_EXACT, HkMethod.ZETA_CLOSED_FORM, 0.0)
    if k % 2:
        return HkEstimate(k, 0, 0.0, HkMethod.ZETA_CLOSED_FORM, 0.0)
    return hk_dft(k, N)


def hk_growth_probe(k_max: int, N: int) -> list[GrowthRow]:
    """``|H_k|^{1/k}`` and ``|H_k/k!|^{1/k}`` for even ``k <= k_max``."""
    if k_max > 12:
        raise DomainError("k_max is limited to 12")
    table = divisor_table(N)
    rows = []
    for k in range(2, k_max + 1, 2):
        h = abs(hk_dft(k, N, table).value)
        hf = h / math.factorial(k)
        rows.append(GrowthRow(k, h, hf, h ** (1 / k), hf ** (1 / k)))
    return rows


def c0_values(q: int, method: str = "direct", precision: str = "double") -> np.ndarray:
    """c0(a/q) over the reduced residues ``1 <= a <= q`` in increasing ``a``.

    ``precision="extended"`` evaluates each direct sum in long double (no
    compiled sweep; meant for spot checks of large ``q``).
    """
    if method == "direct" and precision == "extended":
        out = []
        for a in range(1, q + 1):
            if math.gcd(a, q) == 1:
                out.append(c0_direct(ReducedFraction(a % q, q), "extended").value)
        return np.array(out)
    if precision != "double":
        raise DomainError(f"unknown precision {precision!r}")
    if method == "direct":
        vals = c0_sweep(q)
        if q == 1:
            return vals
        return vals[1:][~np.isnan(vals[1:])]
    if method == "cf":
        out = []
        for a in range(1, q + 1):
            if math.gcd(a, q) == 1:
                out.append(c0_cf_telescoped(ReducedFraction(a % q, q)).value)
        return np.array(out)
    raise DomainError(f"unknown evaluator {method!r}")


def empirical_moment(
    q: int, k: int, method: str = "direct", hk: float | None = None, precision: str = "double"
) -> MomentReport:
    """``(1/phi(q)) sum_{(a,q)=1} c0(a/q)^k`` against ``H_k q^k``.

    ``rel_dev`` is ``|empirical - predicted| / |predicted|``; when the
    prediction is zero (odd ``k``) it is ``|empirical| / q^k`` instead.
    """
    if q < 2:
        raise DomainError("empirical moments need q >= 2")
    vals = c0_values(q, method, precision)
    phi = totient(q)
    if len(vals) != phi:
        raise AssertionError(f"sweep returned {len(vals)} residues, phi(q) = {phi}")
    empirical = math.fsum(vals.astype(np.float64) ** k) / phi
    if hk is None:
        hk = hk_reference(k).value
    predicted = hk * float(q) ** k
    if predicted != 0:
        rel = abs(empirical - predicted) / abs(predicted)
    else:
        rel = abs(empirical) / float(q) ** k
    return MomentReport(q, k, phi, empirical, predicted, rel)
