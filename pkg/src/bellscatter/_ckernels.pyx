# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled optimization kernels; same interface as ``_kernels_py``."""
import numpy as np

from libc.math cimport cos, sin, fabs
from libc.stdlib cimport malloc, free

BACKEND = "cython"

cdef extern from "complex.h" nogil:
    double cabs(double complex)
    double creal(double complex)
    double cimag(double complex)
    double complex conj(double complex)
    double complex cexp(double complex)

ctypedef double (*objective_t)(const double *, void *) noexcept nogil

cdef struct ChshCtx:
    double complex a[4]

cdef struct PoutCtx:
    double complex t1[4]
    double complex t2t[4]
    double d0
    double d1
    double numer


cdef inline void _su2(double alpha, double beta, double gamma, double complex *u) noexcept nogil:
    cdef double c = cos(0.5 * beta)
    cdef double s = sin(0.5 * beta)
    cdef double complex ep = cexp(-0.5j * (alpha + gamma))
    cdef double complex em = cexp(-0.5j * (alpha - gamma))
    u[0] = ep * c
    u[1] = -em * s
    u[2] = conj(em) * s
    u[3] = conj(ep) * c


cdef inline void _mul(const double complex *a, const double complex *b, double complex *out) noexcept nogil:
    cdef double complex r0 = a[0] * b[0] + a[1] * b[2]
    cdef double complex r1 = a[0] * b[1] + a[1] * b[3]
    cdef double complex r2 = a[2] * b[0] + a[3] * b[2]
    cdef double complex r3 = a[2] * b[1] + a[3] * b[3]
    out[0] = r0
    out[1] = r1
    out[2] = r2
    out[3] = r3


cdef double _correlation(const double complex *a, double ta, double ca,
                         double tb, double cb) noexcept nogil:
    cdef double complex oa[4]
    cdef double complex ob[4]
    cdef double complex m[4]
    cdef double complex y[4]
    cdef double sa = sin(ta), sb = sin(tb)
    cdef double e = 0.0
    cdef int i
    oa[0] = cos(ta)
    oa[1] = sa * cexp(-1j * ca)
    oa[2] = sa * cexp(1j * ca)
    oa[3] = -cos(ta)
    ob[0] = cos(tb)
    ob[1] = sb * cexp(-1j * cb)
    ob[2] = sb * cexp(1j * cb)
    ob[3] = -cos(tb)
    _mul(oa, a, m)
    y[0] = m[0] * ob[0] + m[1] * ob[1]
    y[1] = m[0] * ob[2] + m[1] * ob[3]
    y[2] = m[2] * ob[0] + m[3] * ob[1]
    y[3] = m[2] * ob[2] + m[3] * ob[3]
    for i in range(4):
        e += creal(conj(a[i]) * y[i])
    return e


cdef double _chsh(const double complex *a, const double *x) noexcept nogil:
    return (_correlation(a, x[0], x[1], x[4], x[5])
            - _correlation(a, x[0], x[1], x[6], x[7])
            + _correlation(a, x[2], x[3], x[4], x[5])
            + _correlation(a, x[2], x[3], x[6], x[7]))


cdef double _neg_chsh(const double *x, void *ctx) noexcept nogil:
    return -_chsh((<ChshCtx *> ctx).a, x)


cdef double _pout(PoutCtx *p, const double *x) noexcept nogil:
    cdef double complex u[4]
    cdef double complex v[4]
    cdef double complex a[4]
    cdef double complex m[4]
    cdef double z = 0.0
    cdef int i
    _su2(x[0], x[1], x[2], u)
    _su2(x[3], x[4], x[5], v)
    a[0] = u[0] * p.d0
    a[1] = u[1] * p.d1
    a[2] = u[2] * p.d0
    a[3] = u[3] * p.d1
    _mul(a, v, a)
    _mul(p.t1, a, m)
    _mul(m, p.t2t, m)
    for i in range(4):
        z += creal(m[i]) * creal(m[i]) + cimag(m[i]) * cimag(m[i])
    if z == 0.0:
        return 0.0
    return p.numer / z


cdef double _neg_pout(const double *x, void *ctx) noexcept nogil:
    return -_pout(<PoutCtx *> ctx, x)


cdef int _nelder_mead(objective_t f, void *ctx, int n, double *x, double *fx,
                      double step, double ftol, double xtol, long maxfev,
                      long *nfev_out) noexcept nogil:
    """Minimize f starting at x (overwritten with the best point). Returns 1 if converged."""
    cdef double *sim = <double *> malloc((n + 1) * n * sizeof(double))
    cdef double *fs = <double *> malloc((n + 1) * sizeof(double))
    cdef double *c = <double *> malloc(n * sizeof(double))
    cdef double *xr = <double *> malloc(n * sizeof(double))
    cdef double *xe = <double *> malloc(n * sizeof(double))
    cdef double *tmp = <double *> malloc(n * sizeof(double))
    cdef int i, j, k
    cdef long nfev
    cdef int converged = 0
    cdef double fr, fe, fc, ft, fspread, xspread, w
    cdef double *wst
    cdef double *b
    for i in range(n + 1):
        for k in range(n):
            sim[i * n + k] = x[k]
        if i > 0:
            sim[i * n + i - 1] += step
        fs[i] = f(&sim[i * n], ctx)
    nfev = n + 1
    while True:
        for i in range(1, n + 1):
            j = i
            while j > 0 and fs[j] < fs[j - 1]:
                ft = fs[j]
                fs[j] = fs[j - 1]
                fs[j - 1] = ft
                for k in range(n):
                    w = sim[j * n + k]
                    sim[j * n + k] = sim[(j - 1) * n + k]
                    sim[(j - 1) * n + k] = w
                j -= 1
        fspread = 0.0
        xspread = 0.0
        for i in range(1, n + 1):
            if fabs(fs[i] - fs[0]) > fspread:
                fspread = fabs(fs[i] - fs[0])
            for k in range(n):
                if fabs(sim[i * n + k] - sim[k]) > xspread:
                    xspread = fabs(sim[i * n + k] - sim[k])
        if fspread <= ftol and xspread <= xtol:
            converged = 1
            break
        if nfev >= maxfev:
            break
        wst = &sim[n * n]
        for k in range(n):
            c[k] = 0.0
            for i in range(n):
                c[k] += sim[i * n + k]
            c[k] /= n
        for k in range(n):
            xr[k] = c[k] + (c[k] - wst[k])
        fr = f(xr, ctx)
        nfev += 1
        if fr < fs[0]:
            for k in range(n):
                xe[k] = c[k] + 2.0 * (c[k] - wst[k])
            fe = f(xe, ctx)
            nfev += 1
            if fe < fr:
                for k in range(n):
                    wst[k] = xe[k]
                fs[n] = fe
            else:
                for k in range(n):
                    wst[k] = xr[k]
                fs[n] = fr
            continue
        if fr < fs[n - 1]:
            for k in range(n):
                wst[k] = xr[k]
            fs[n] = fr
            continue
        if fr < fs[n]:
            for k in range(n):
                tmp[k] = c[k] + 0.5 * (xr[k] - c[k])
            fc = f(tmp, ctx)
            nfev += 1
            if fc <= fr:
                for k in range(n):
                    wst[k] = tmp[k]
                fs[n] = fc
                continue
        else:
            for k in range(n):
                tmp[k] = c[k] + 0.5 * (wst[k] - c[k])
            fc = f(tmp, ctx)
            nfev += 1
            if fc < fs[n]:
                for k in range(n):
                    wst[k] = tmp[k]
                fs[n] = fc
                continue
        b = &sim[0]
        for i in range(1, n + 1):
            for k in range(n):
                sim[i * n + k] = b[k] + 0.5 * (sim[i * n + k] - b[k])
            fs[i] = f(&sim[i * n], ctx)
        nfev += n
    for k in range(n):
        x[k] = sim[k]
    fx[0] = fs[0]
    nfev_out[0] = nfev
    free(sim)
    free(fs)
    free(c)
    free(xr)
    free(xe)
    free(tmp)
    return converged


cdef _multistart(objective_t f, void *ctx, starts, double step, double ftol,
                 double xtol, long maxfev, int polish):
    cdef double[:, ::1] st = np.ascontiguousarray(starts, dtype=np.float64)
    cdef Py_ssize_t nstart = st.shape[0]
    cdef int dim = <int> st.shape[1]
    xs_arr = np.array(st, dtype=np.float64, copy=True)
    fs_arr = np.empty(nstart, dtype=np.float64)
    nfev_arr = np.zeros(nstart, dtype=np.int64)
    conv_arr = np.zeros(nstart, dtype=np.uint8)
    cdef double[:, ::1] xs = xs_arr
    cdef double[::1] fs = fs_arr
    cdef long long[::1] nfevs = nfev_arr
    cdef unsigned char[::1] conv = conv_arr
    cdef double *x2 = <double *> malloc(dim * sizeof(double))
    cdef Py_ssize_t r
    cdef int k, p, ok
    cdef long nfev, more
    cdef double fx, f2, s, improved
    with nogil:
        for r in range(nstart):
            ok = _nelder_mead(f, ctx, dim, &xs[r, 0], &fx, step, ftol, xtol, maxfev, &nfev)
            s = step
            for p in range(polish):
                s *= 0.1
                for k in range(dim):
                    x2[k] = xs[r, k]
                ok = _nelder_mead(f, ctx, dim, x2, &f2, s, ftol, xtol, maxfev, &more)
                nfev += more
                improved = fx - f2
                if f2 <= fx:
                    for k in range(dim):
                        xs[r, k] = x2[k]
                    fx = f2
                if improved <= ftol:
                    break
            fs[r] = fx
            nfevs[r] = nfev
            conv[r] = ok
    free(x2)
    return xs_arr, fs_arr, nfev_arr, conv_arr.astype(bool)


def su2(double alpha, double beta, double gamma):
    """Entries (row-major) of ``Rz(alpha) Ry(beta) Rz(gamma)`` in SU(2)."""
    cdef double complex u[4]
    _su2(alpha, beta, gamma, u)
    return (u[0], u[1], u[2], u[3])


cdef void _load4(src, double complex *dst):
    flat = np.ravel(np.asarray(src, dtype=np.complex128))
    cdef int i
    for i in range(4):
        dst[i] = flat[i]


def chsh_value(a, x):
    """CHSH combination E(a,b) - E(a,b') + E(a',b) + E(a',b')."""
    cdef ChshCtx ctx
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    _load4(a, ctx.a)
    return _chsh(ctx.a, &xv[0])


cdef void _pout_ctx(PoutCtx *ctx, t1, d, t2t):
    _load4(t1, ctx.t1)
    _load4(t2t, ctx.t2t)
    ctx.d0 = float(d[0])
    ctx.d1 = float(d[1])
    ctx.numer = (2.0 * cabs(ctx.t1[0] * ctx.t1[3] - ctx.t1[1] * ctx.t1[2])
                 * cabs(ctx.t2t[0] * ctx.t2t[3] - ctx.t2t[1] * ctx.t2t[2]) * ctx.d0 * ctx.d1)


def pout_value(t1, d, t2t, x):
    """Concurrence of ``t1 @ U(x[:3]) diag(d) V(x[3:]) @ t2t`` after normalization."""
    cdef PoutCtx ctx
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    _pout_ctx(&ctx, t1, d, t2t)
    return _pout(&ctx, &xv[0])


def maximize_chsh(a, starts, double step=0.5, double ftol=1e-12, double xtol=1e-8,
                  long maxfev=20000, int polish=3):
    """Local maximization of the CHSH value from every row of `starts`."""
    cdef ChshCtx ctx
    _load4(a, ctx.a)
    xs, fs, nfev, conv = _multistart(_neg_chsh, &ctx, starts, step, ftol, xtol, maxfev, polish)
    return xs, -fs, nfev, conv


def maximize_pout(t1, d, t2t, starts, double step=0.5, double ftol=1e-12, double xtol=1e-8,
                  long maxfev=20000, int polish=3):
    """Local maximization of the transmitted concurrence over two SU(2) rotations."""
    cdef PoutCtx ctx
    _pout_ctx(&ctx, t1, d, t2t)
    xs, fs, nfev, conv = _multistart(_neg_pout, &ctx, starts, step, ftol, xtol, maxfev, polish)
    return xs, -fs, nfev, conv
