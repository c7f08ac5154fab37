# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops.  Every function here has a twin in ``_fallback.py``."""
import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange
from libc.math cimport sin, cos, tan, fabs, floor, fma, M_PI, NAN

cnp.import_array()

DEF BLOCK = 64


cdef inline void _add(double *s, double *c, double t) noexcept nogil:
    # Neumaier step
    cdef double u = s[0] + t
    if fabs(s[0]) >= fabs(t):
        c[0] += (s[0] - u) + t
    else:
        c[0] += (t - u) + s[0]
    s[0] = u


cdef inline long long _gcd(long long a, long long b) noexcept nogil:
    cdef long long t
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef inline double _frac_prod(double n, double x) noexcept nogil:
    # n*x mod 1 with the rounding error of the product recovered exactly
    cdef double p = n * x
    cdef double e = fma(n, x, -p)
    cdef double f = (p - floor(p)) + e
    return f - floor(f)


def divisor_sieve(long long X):
    cdef cnp.ndarray[cnp.int32_t, ndim=1] out = np.zeros(X + 1, dtype=np.int32)
    cdef int[::1] d = out
    cdef long long k, m
    with nogil:
        for k in range(1, X + 1):
            m = k
            while m <= X:
                d[m] += 1
                m += k
    return out


cdef double[::1] _cot_table(long long q):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] tab = np.zeros(q, dtype=np.float64)
    cdef double[::1] t = tab
    cdef long long r
    cdef double c
    for r in range(1, (q - 1) // 2 + 1):
        c = 1.0 / tan(M_PI * (<double>r / <double>q))
        t[r] = c
        t[q - r] = -c
    return t


cdef void _c0_pairs(long long a, long long q, double[::1] cot, double *val, double *mag) noexcept nogil:
    # c0(a/q) = (1/q) sum_{m <= (q-1)/2} (q - 2m) cot(pi (m a mod q) / q)
    cdef double s = 0.0, c = 0.0, g = 0.0, t
    cdef long long m, r = 0
    for m in range(1, (q - 1) // 2 + 1):
        r += a
        if r >= q:
            r -= q
        t = <double>(q - 2 * m) * cot[r]
        _add(&s, &c, t)
        g += fabs(t)
    val[0] = (s + c) / q
    mag[0] = g / q


def c0_sum(long long a, long long q):
    """Return ``(c0(a/q), sum of |terms|)`` for ``0 <= a < q``, ``gcd(a, q) = 1``."""
    if q <= 2:
        return 0.0, 0.0
    cdef double[::1] cot = _cot_table(q)
    cdef double val, mag
    _c0_pairs(a, q, cot, &val, &mag)
    return val, mag


def c0_sweep(long long q, int num_threads=1):
    """c0(a/q) for every a in [0, q); NaN where gcd(a, q) > 1."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.full(q, np.nan)
    cdef double[::1] res = out
    cdef double[::1] cot
    cdef long long a
    cdef double val, mag
    if q == 1:
        out[0] = 0.0
        return out
    cot = _cot_table(q)
    for a in prange(1, q // 2 + 1, nogil=True, schedule="static", num_threads=num_threads):
        if _gcd(a, q) == 1:
            _c0_pairs(a, q, cot, &val, &mag)
            res[a] = val
            res[q - a] = -val
    return out


def d1_rational(long long a, long long q, const double[::1] w):
    """Sum_{1 <= n < len(w)} w[n] sin(2 pi n a / q) with exact residue reduction."""
    cdef long long n, X = w.shape[0] - 1, r = 0
    cdef cnp.ndarray[cnp.float64_t, ndim=1] tab_arr = np.sin(2.0 * np.pi * np.arange(q) / q)
    cdef double[::1] tab = tab_arr
    cdef double s = 0.0, c = 0.0, g = 0.0, t
    if q <= 2:
        return 0.0, 0.0
    # sin table with exact zeros/antisymmetry at r = q/2 and r = q - r'
    for n in range(1, (q - 1) // 2 + 1):
        tab[q - n] = -tab[n]
    if q % 2 == 0:
        tab[q // 2] = 0.0
    with nogil:
        for n in range(1, X + 1):
            r += a
            if r >= q:
                r -= q
            t = w[n] * tab[r]
            _add(&s, &c, t)
            g += fabs(t)
    return s + c, g


def d1_real(double x, const double[::1] w):
    """Sum_{1 <= n < len(w)} w[n] sin(2 pi n x), reducing n x mod 1 per term."""
    cdef long long n, X = w.shape[0] - 1
    cdef double s = 0.0, c = 0.0, g = 0.0, t
    with nogil:
        for n in range(1, X + 1):
            t = w[n] * sin(2.0 * M_PI * _frac_prod(<double>n, x))
            _add(&s, &c, t)
            g += fabs(t)
    return s + c, g


DEF LANES = 4


cdef void _d1_rotating(const double *x, double *out, const double[::1] w) noexcept nogil:
    # LANES points advance together: the rotations are independent chains, so
    # interleaving them hides the multiply latency.  Each point is re-anchored
    # exactly every BLOCK terms and its blocks are Neumaier-summed.
    cdef long long X = w.shape[0] - 1, n0, n, end
    cdef double cs[LANES]
    cdef double sn[LANES]
    cdef double re[LANES]
    cdef double im[LANES]
    cdef double blk[LANES]
    cdef double s[LANES]
    cdef double c[LANES]
    cdef double f[LANES]
    cdef double tmp, wn, theta
    cdef int j
    for j in range(LANES):
        f[j] = x[j] - floor(x[j])
        cs[j] = cos(2.0 * M_PI * f[j])
        sn[j] = sin(2.0 * M_PI * f[j])
        s[j] = 0.0
        c[j] = 0.0
    n0 = 1
    while n0 <= X:
        for j in range(LANES):
            theta = 2.0 * M_PI * _frac_prod(<double>n0, f[j])
            re[j] = cos(theta)
            im[j] = sin(theta)
            blk[j] = 0.0
        end = n0 + BLOCK
        if end > X + 1:
            end = X + 1
        for n in range(n0, end):
            wn = w[n]
            for j in range(LANES):
                blk[j] += wn * im[j]
                tmp = re[j] * cs[j] - im[j] * sn[j]
                im[j] = im[j] * cs[j] + re[j] * sn[j]
                re[j] = tmp
        for j in range(LANES):
            _add(&s[j], &c[j], blk[j])
        n0 = end
    for j in range(LANES):
        out[j] = s[j] + c[j]


def d1_many(const double[::1] xs, const double[::1] w, int num_threads=1):
    """Truncated series at many points; each point is independent."""
    cdef Py_ssize_t m = xs.shape[0], groups = (m + LANES - 1) // LANES, g
    cdef cnp.ndarray[cnp.float64_t, ndim=1] pad = np.zeros(groups * LANES)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(groups * LANES)
    pad[:m] = xs
    cdef double[::1] src = pad
    cdef double[::1] res = out
    for g in prange(groups, nogil=True, schedule="static", num_threads=num_threads):
        _d1_rotating(&src[g * LANES], &res[g * LANES], w)
    return out[:m].copy()


def frac_series(double x, long long X):
    """pi * sum_{n <= X} (1/2 - {n x}) / n."""
    cdef long long n
    cdef double s = 0.0, c = 0.0, g = 0.0, t
    with nogil:
        for n in range(1, X + 1):
            t = (0.5 - _frac_prod(<double>n, x)) / <double>n
            _add(&s, &c, t)
            g += fabs(t)
    return M_PI * (s + c), M_PI * g
