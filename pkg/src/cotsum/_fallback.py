"""Pure numpy implementations of the compiled kernels.

Signatures and return conventions match ``_kernels.pyx`` exactly; results
agree to rounding, not bit-for-bit.
"""
import math

import numpy as np

BLOCK = 64
_SPLIT = 134217729.0  # 2**27 + 1, Veltkamp splitter


def _two_prod_err(a, b):
    """Rounding error of ``a*b`` (Dekker), vectorised."""
    p = a * b
    ah = a * _SPLIT
    ah = ah - (ah - a)
    al = a - ah
    bh = b * _SPLIT
    bh = bh - (bh - b)
    bl = b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _frac_prod(n, x):
    p, e = _two_prod_err(np.asarray(n, dtype=np.float64), np.asarray(x, dtype=np.float64))
    f = (p - np.floor(p)) + e
    return f - np.floor(f)


def divisor_sieve(X):
    d = np.zeros(X + 1, dtype=np.int32)
    for k in range(1, X + 1):
        d[k::k] += 1
    return d


def _cot_of_residues(r, q, dtype=np.float64):
    half = q // 2
    rr = np.where(r <= half, r, q - r)
    sgn = np.where(r <= half, 1, -1).astype(dtype)
    pi = dtype(4) * np.arctan(dtype(1))
    with np.errstate(divide="ignore"):
        cot = sgn / np.tan(pi * rr.astype(dtype) / dtype(q))
    if q % 2 == 0:
        cot[rr == half] = 0
    return cot


def _c0_terms(a, q, dtype=np.float64):
    m = np.arange(1, (q - 1) // 2 + 1, dtype=np.int64)
    r = (m * a) % q
    return (q - 2 * m).astype(dtype) * _cot_of_residues(r, q, dtype)


def c0_sum(a, q):
    if q <= 2:
        return 0.0, 0.0
    t = _c0_terms(a, q)
    return math.fsum(t) / q, float(np.abs(t).sum()) / q


def c0_sum_extended(a, q):
    """Long-double evaluation (about 19 digits on x86)."""
    if q <= 2:
        return np.longdouble(0), np.longdouble(0)
    t = _c0_terms(a, q, np.longdouble)
    return t.sum() / q, np.abs(t).sum() / q


def c0_sweep(q, num_threads=1):
    out = np.full(q, np.nan)
    if q == 1:
        out[0] = 0.0
        return out
    for a in range(1, q // 2 + 1):
        if math.gcd(a, q) == 1:
            v = c0_sum(a, q)[0] if q > 2 else 0.0
            out[a] = v
            out[q - a] = -v
    return out


def _sin_table(q):
    tab = np.sin(2.0 * np.pi * np.arange(q) / q)
    n = np.arange(1, (q - 1) // 2 + 1)
    tab[q - n] = -tab[n]
    if q % 2 == 0:
        tab[q // 2] = 0.0
    return tab


def d1_rational(a, q, w):
    if q <= 2:
        return 0.0, 0.0
    X = len(w) - 1
    n = np.arange(1, X + 1, dtype=np.int64)
    # bucket the weights by residue class of n*a mod q, then one sine per class
    buckets = np.bincount((n * a) % q, weights=w[1:], minlength=q)
    t = buckets * _sin_table(q)
    absb = np.bincount((n * a) % q, weights=np.abs(w[1:]), minlength=q)
    return math.fsum(t), float((absb * np.abs(_sin_table(q))).sum())


def d1_real(x, w):
    X = len(w) - 1
    n = np.arange(1, X + 1, dtype=np.float64)
    t = w[1:] * np.sin(2.0 * np.pi * _frac_prod(n, x))
    return math.fsum(t), float(np.abs(t).sum())


def d1_many(xs, w, num_threads=1):
    xs = np.asarray(xs, dtype=np.float64)
    X = len(w) - 1
    f = xs - np.floor(xs)
    step = np.exp(2j * np.pi * f)
    total = np.zeros_like(f)
    comp = np.zeros_like(f)
    n0 = 1
    while n0 <= X:
        end = min(n0 + BLOCK, X + 1)
        z = np.exp(2j * np.pi * _frac_prod(float(n0), f))
        blk = np.zeros_like(f)
        for n in range(n0, end):
            blk += w[n] * z.imag
            z *= step
        # Neumaier across blocks
        u = total + blk
        big = np.abs(total) >= np.abs(blk)
        comp += np.where(big, (total - u) + blk, (blk - u) + total)
        total = u
        n0 = end
    return total + comp


def frac_series(x, X):
    n = np.arange(1, X + 1, dtype=np.float64)
    t = (0.5 - _frac_prod(n, x)) / n
    return math.pi * math.fsum(t), math.pi * float(np.abs(t).sum())
