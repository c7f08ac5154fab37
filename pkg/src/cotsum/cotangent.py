"""The cotangent sum c0(a/q), the Vasyunin sum and the reciprocity function psi.

``c0(a/q) = -sum_{m=1}^{q-1} (m/q) cot(pi m a / q)`` for reduced ``a/q``.
psi is defined operationally by the reciprocity formula

    c0(a/q) + (q/a) c0(q/a) - 1/(pi q) = psi(a/q),

so every value of psi here is a combination of cotangent sums.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _backend, _fallback
from .errors import DomainError
from .rationals import ReducedFraction, cf_alternate, cf_expand, mod_inverse

__all__ = [
    "EULER_GAMMA",
    "Method",
    "CotangentValue",
    "PsiValue",
    "c0_direct",
    "c0_value",
    "c0_sweep",
    "vasyunin",
    "psi_via_reciprocity",
    "psi_leading_term",
    "c0_cf_telescoped",
    "cf_psi_sum",
    "reciprocity_residual",
    "three_term_defect",
]

EULER_GAMMA = 0.5772156649015329
_EPS = sys.float_info.epsilon
_EPS_LD = float(np.finfo(np.longdouble).eps)


class Method(str, Enum):
    DIRECT = "direct"
    CF_TELESCOPED = "cf_telescoped"


@dataclass(frozen=True)
class CotangentValue:
    x: ReducedFraction
    value: float
    method: Method
    err_estimate: float

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class PsiValue:
    x: ReducedFraction
    value: float

    def __float__(self):
        return self.value


def _as_fraction(x) -> ReducedFraction:
    if isinstance(x, ReducedFraction):
        return x
    if isinstance(x, tuple):
        return ReducedFraction(*x)
    return ReducedFraction.from_value(x)


def c0_direct(x, precision: str = "double") -> CotangentValue:
    """Evaluate the cotangent sum term by term.

    Residues ``m a mod q`` are formed in exact integers, the terms for ``m``
    and ``q - m`` are paired, and the sum is compensated.  The error estimate
    is ``eps * sum |terms|`` (per-term rounding of the cotangent dominates).
    """
    x = _as_fraction(x)
    a, q = x.num % x.den, x.den
    if precision == "double":
        val, mag = _backend.kernels.c0_sum(a, q)
        return CotangentValue(x, float(val), Method.DIRECT, 2 * _EPS * float(mag))
    if precision == "extended":
        val, mag = _fallback.c0_sum_extended(a, q)
        return CotangentValue(x, float(val), Method.DIRECT, 2 * _EPS_LD * float(mag) + _EPS * abs(float(val)))
    raise DomainError(f"unknown precision {precision!r}")


def c0_value(a: int, q: int) -> float:
    """Plain float ``c0(a/q)`` for a reduced pair, ``a`` taken mod ``q``."""
    if q <= 2:
        return 0.0
    return _backend.kernels.c0_sum(a % q, q)[0]


def c0_sweep(q: int) -> np.ndarray:
    """``c0(a/q)`` for all ``a`` in ``[0, q)``; NaN at residues not coprime to ``q``."""
    if q < 1:
        raise DomainError("q must be >= 1")
    return _backend.kernels.c0_sweep(q, _backend.threads())


def vasyunin(a: int, q: int) -> float:
    """V(a, q) = -c0(abar/q)."""
    abar = mod_inverse(a, q)
    return -c0_value(abar, q)


def _psi(a: int, q: int) -> float:
    return c0_value(a, q) + (q / a) * c0_value(q % a, a) - 1.0 / (math.pi * q)


def psi_via_reciprocity(x) -> PsiValue:
    """psi(a/q) for a positive rational, read off the reciprocity formula.

    The middle term uses periodicity: ``c0(q/a) = c0((q mod a)/a)``.
    """
    x = _as_fraction(x)
    if x.num < 1:
        raise DomainError(f"psi needs a positive argument, got {x}")
    return PsiValue(x, _psi(x.num, x.den))


def psi_leading_term(x: float) -> float:
    """Leading small-x behaviour ``-(log(2 pi x) - gamma) / (pi x)``."""
    return -(math.log(2 * math.pi * x) - EULER_GAMMA) / (math.pi * x)


def three_term_defect(x) -> float:
    """``psi(x) - psi(x+1) - psi(x/(x+1))/(x+1)`` predicted in closed form.

    With the ``1/(pi q)`` normalisation of the reciprocity formula the
    three-term relation is off by exactly ``q / (pi (a+q)^2)``.
    """
    x = _as_fraction(x)
    a, q = x.num, x.den
    return q / (math.pi * (a + q) ** 2)


def cf_psi_sum(denominators) -> float:
    """``sum_{l>=1} (-1)^l / v_l * (1/(pi v_l) + psi(v_{l-1}/v_l))``.

    ``denominators`` is ``(v_0, v_1, ..., v_r)``; every ``psi`` is evaluated
    through the reciprocity formula.
    """
    terms = []
    v = denominators
    for ell in range(1, len(v)):
        psi = _psi(v[ell - 1], v[ell])
        sign = -1.0 if ell % 2 else 1.0
        terms.append(sign / v[ell] * (1.0 / (math.pi * v[ell]) + psi))
    return math.fsum(terms)


def c0_cf_telescoped(x, alternate: bool = False) -> CotangentValue:
    """c0(a/q) from the continued fraction of ``abar/q``.

    ``c0(a/q) = 2q/pi^2 * D(1, abar/q)`` and ``D(1, .)`` is the alternating
    psi-sum over the convergent denominators.  This costs O(q) like the direct
    sum; it exists as an independent check.
    """
    x = _as_fraction(x)
    a, q = x.num % x.den, x.den
    if q == 1:
        return CotangentValue(x, 0.0, Method.CF_TELESCOPED, 0.0)
    b = mod_inverse(a, q) % q
    cf = cf_expand(ReducedFraction(b, q))
    if alternate:
        cf = cf_alternate(cf)
    s = cf_psi_sum(cf.convergent_den)
    value = -q * s
    # each psi carries two cotangent sums of size ~ v log v; bound generously
    err = 8 * _EPS * q * sum(math.log(v + 1) + 1 for v in cf.convergent_den)
    return CotangentValue(x, value, Method.CF_TELESCOPED, err)


def _euclid_chain(a: int, q: int) -> list[int]:
    ys = [q, a]
    while ys[-1] != 0:
        ys.append(ys[-2] % ys[-1])
    return ys


def reciprocity_residual(x) -> float:
    """Mismatch between the two sides of the reciprocity formula.

    The left side uses two direct cotangent sums.  The reference psi comes
    from the telescoped Euclid chain ``y_1 = q, y_2 = a, y_{m+2} = y_m mod
    y_{m+1}``::

        psi(a/q) = c0(a/q) - 1/(pi q)
                   + q sum_{m>=2} (-1)^m (1/(pi y_m^2) + psi(y_{m+1}/y_m)/y_m)

    with ``c0(a/q)`` taken from the continued-fraction evaluator and each deeper
    psi from its own pair of cotangent sums.
    """
    x = _as_fraction(x)
    a, q = x.num, x.den
    if not 0 < a < q:
        raise DomainError(f"reciprocity_residual needs 0 < a < q, got {x}")
    lhs = c0_direct(x).value + (q / a) * c0_value(q % a, a) - 1.0 / (math.pi * q)
    ys = _euclid_chain(a, q)  # ys[0] = y_1, ..., ending in 1, 0
    r = len(ys) - 2
    tail = []
    for m in range(2, r + 1):
        y_m, y_next = ys[m - 1], ys[m]
        sign = 1.0 if m % 2 == 0 else -1.0
        tail.append(sign * (1.0 / (math.pi * y_m * y_m) + _psi(y_next, y_m) / y_m))
    psi_ref = c0_cf_telescoped(x).value - 1.0 / (math.pi * q) + q * math.fsum(tail)
    return abs(lhs - psi_ref)
