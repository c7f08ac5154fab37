"""Exact rationals and continued fractions.

All integers here are Python ints, so convergent denominators never overflow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from numbers import Rational

from .errors import DomainError, PrecisionExhausted

__all__ = [
    "ReducedFraction",
    "ContinuedFraction",
    "mod_inverse",
    "cf_expand",
    "cf_alternate",
    "cf_of_real",
    "growth_violations",
    "DEFAULT_DIGITS",
]

DEFAULT_DIGITS = 19


@dataclass(frozen=True)
class ReducedFraction:
    """A rational ``num/den`` in lowest terms with ``den >= 1``.

    The constructor is strict: it rejects fractions that are not already
    reduced.  Use :meth:`reduce` to normalise arbitrary input.
    """

    num: int
    den: int = 1

    def __post_init__(self):
        if self.den < 1:
            raise DomainError(f"denominator must be >= 1, got {self.den}")
        if math.gcd(self.num, self.den) != 1:
            raise DomainError(f"{self.num}/{self.den} is not reduced")

    @classmethod
    def reduce(cls, num: int, den: int = 1) -> "ReducedFraction":
        if den == 0:
            raise DomainError("zero denominator")
        if den < 0:
            num, den = -num, -den
        g = math.gcd(num, den)
        return cls(num // g, den // g)

    @classmethod
    def from_value(cls, x) -> "ReducedFraction":
        if isinstance(x, ReducedFraction):
            return x
        f = Fraction(x)
        return cls(f.numerator, f.denominator)

    @classmethod
    def parse(cls, text: str) -> "ReducedFraction":
        """Parse ``"a/q"`` or ``"a"``; non-reduced input is an error."""
        parts = text.strip().split("/")
        try:
            if len(parts) == 1:
                return cls(int(parts[0]), 1)
            if len(parts) == 2:
                return cls(int(parts[0]), int(parts[1]))
        except ValueError as exc:
            if isinstance(exc, DomainError):
                raise
            raise DomainError(f"cannot parse fraction {text!r}") from None
        raise DomainError(f"cannot parse fraction {text!r}")

    def reduced(self) -> "ReducedFraction":
        return self

    def mod1(self) -> "ReducedFraction":
        """The representative of ``self`` in ``[0, 1)``."""
        return ReducedFraction(self.num % self.den, self.den)

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __float__(self):
        return self.num / self.den

    def __str__(self):
        return f"{self.num}/{self.den}"


@dataclass(frozen=True)
class ContinuedFraction:
    """Partial quotients ``a_0; a_1, ..., a_r`` and their convergents ``u_l / v_l``.

    ``exact`` is True when the quotients are the complete expansion of a
    rational number, False for a truncated expansion of a real.
    """

    quotients: tuple
    convergent_num: tuple
    convergent_den: tuple
    exact: bool = True

    @classmethod
    def from_quotients(cls, quotients, exact=True) -> "ContinuedFraction":
        quotients = tuple(int(a) for a in quotients)
        if not quotients:
            raise DomainError("a continued fraction needs at least a_0")
        if any(a < 1 for a in quotients[1:]):
            raise DomainError("partial quotients a_1, a_2, ... must be >= 1")
        u_prev, u = 0, 1
        v_prev, v = 1, 0
        us, vs = [], []
        for a in quotients:
            u_prev, u = u, a * u + u_prev
            v_prev, v = v, a * v + v_prev
            us.append(u)
            vs.append(v)
        return cls(quotients, tuple(us), tuple(vs), exact)

    @property
    def depth(self) -> int:
        """Index ``r`` of the last partial quotient."""
        return len(self.quotients) - 1

    def value(self) -> Fraction:
        return Fraction(self.convergent_num[-1], self.convergent_den[-1])

    def convergent(self, ell: int) -> Fraction:
        return Fraction(self.convergent_num[ell], self.convergent_den[ell])

    def __str__(self):
        head, *tail = self.quotients
        body = ",".join(str(a) for a in tail)
        return f"[{head};{body}]" + ("" if self.exact else "...")


def mod_inverse(a: int, q: int) -> int:
    """Inverse of ``a`` modulo ``q`` as a representative in ``[1, q]``.

    >>> mod_inverse(3, 7)
    5
    """
    if q < 1:
        raise DomainError(f"modulus must be >= 1, got {q}")
    if math.gcd(a, q) != 1:
        raise DomainError(f"gcd({a}, {q}) != 1")
    if q == 1:
        return 1
    return pow(a, -1, q)


def cf_expand(x: ReducedFraction) -> ContinuedFraction:
    """Canonical terminating expansion of a rational (last quotient >= 2 when r >= 1)."""
    num, den = x.num, x.den
    quotients = []
    while True:
        a, rem = divmod(num, den)
        quotients.append(a)
        if rem == 0:
            break
        num, den = den, rem
    return ContinuedFraction.from_quotients(quotients, exact=True)


def cf_alternate(cf: ContinuedFraction) -> ContinuedFraction:
    """The other expansion of the same rational.

    ``[..., a_r]`` with ``a_r >= 2`` becomes ``[..., a_r - 1, 1]`` and a form
    ending in 1 collapses back to the canonical one.
    """
    if not cf.exact:
        raise DomainError("only terminating expansions have an alternate form")
    q = list(cf.quotients)
    if len(q) >= 2 and q[-1] == 1:
        q.pop()
        q[-1] += 1
    else:
        q[-1] -= 1
        q.append(1)
    return ContinuedFraction.from_quotients(q, exact=True)


def _to_exact(x):
    """Exact rational value of ``x`` plus a flag saying whether it was a binary float."""
    if isinstance(x, ReducedFraction):
        return x.as_fraction(), False
    if isinstance(x, float):
        if not math.isfinite(x):
            raise DomainError(f"cannot expand non-finite value {x}")
        return Fraction(x), True
    if isinstance(x, (int, Rational)):
        return Fraction(x), False
    if isinstance(x, Decimal):
        return Fraction(x), False
    if isinstance(x, str):
        return Fraction(Decimal(x.strip())), False
    try:
        return Fraction(float(x)), True
    except (TypeError, ValueError):
        raise DomainError(f"cannot interpret {x!r} as a real number") from None


def cf_of_real(x, depth: int, digits: int | None = DEFAULT_DIGITS, strict: bool = False) -> ContinuedFraction:
    """Expand a real number to ``depth`` partial quotients beyond ``a_0``.

    ``x`` is treated as known to ``digits`` significant decimals (and never
    better than one ulp for a binary float).  A quotient is emitted only when
    both ends of the uncertainty interval agree on it, so the result never
    contains unresolved quotients.  When precision runs out first the
    expansion is returned short (``exact=False``) or, with ``strict=True``,
    :class:`PrecisionExhausted` is raised.  ``digits=None`` means the value is
    exact; its expansion then terminates like :func:`cf_expand`.
    """
    if depth < 0:
        raise DomainError("depth must be >= 0")
    value, is_float = _to_exact(x)
    if digits is None:
        delta = Fraction(0)
    else:
        delta = Fraction(max(1, abs(value))) / Fraction(10) ** digits
        if is_float:
            delta = max(delta, Fraction(math.ulp(float(value))))
    lo, hi = value - delta, value + delta
    quotients = []
    terminated = False
    while len(quotients) <= depth:
        a_lo, a_hi = math.floor(lo), math.floor(hi)
        if a_lo != a_hi:
            break
        if quotients and a_lo < 1:
            break
        quotients.append(a_lo)
        lo -= a_lo
        hi -= a_lo
        if lo == 0 and hi == 0:
            terminated = True
            break
        if lo <= 0:
            # remainder interval touches 0: the next quotient is unbounded
            break
        lo, hi = 1 / hi, 1 / lo
    if not quotients:
        raise PrecisionExhausted(f"precision too low to resolve floor({float(value)})", -1)
    if terminated:
        q = list(quotients)
        if len(q) >= 2 and q[-1] == 1:
            q.pop()
            q[-1] += 1
        return ContinuedFraction.from_quotients(q, exact=True)
    achieved = len(quotients) - 1
    if achieved < depth and strict:
        raise PrecisionExhausted(
            f"resolved only {achieved} of {depth} partial quotients at {digits} digits", achieved
        )
    return ContinuedFraction.from_quotients(quotients, exact=False)


def growth_violations(cf: ContinuedFraction) -> list[int]:
    """Indices ``n >= 1`` with ``v_n < 2^((n-3)/2)``; always empty in exact arithmetic.

    Compared as ``v_n^2`` against ``2^(n-3)`` so no rounding enters.
    """
    bad = []
    for n, v in enumerate(cf.convergent_den):
        if n < 1:
            continue
        # v_n >= 2^((n-3)/2)  <=>  v_n^2 >= 2^(n-3)  (both sides positive)
        if n >= 3 and v * v < (1 << (n - 3)):
            bad.append(n)
        elif n < 3 and v * v * (1 << (3 - n)) < 1:
            bad.append(n)
    return bad
