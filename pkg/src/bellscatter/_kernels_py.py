"""Pure-Python implementation of the optimization kernels.

Mirrors ``_ckernels.pyx`` function for function; used when the compiled
extension is unavailable and as a reference in the test-suite.
"""
import cmath
import math

import numpy as np

BACKEND = "python"


def su2(alpha, beta, gamma):
    """Entries (row-major) of ``Rz(alpha) Ry(beta) Rz(gamma)`` in SU(2)."""
    c = math.cos(0.5 * beta)
    s = math.sin(0.5 * beta)
    ep = cmath.exp(-0.5j * (alpha + gamma))
    em = cmath.exp(-0.5j * (alpha - gamma))
    return (ep * c, -em * s, em.conjugate() * s, ep.conjugate() * c)


def _mul(a, b):
    return (a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3])


def _correlation(a, ta, ca, tb, cb):
    # <psi| A (x) B |psi> with psi_{jk} = a[2j + k]
    sa, sb = math.sin(ta), math.sin(tb)
    oa = (math.cos(ta), sa * cmath.exp(-1j * ca), sa * cmath.exp(1j * ca), -math.cos(ta))
    ob = (math.cos(tb), sb * cmath.exp(-1j * cb), sb * cmath.exp(1j * cb), -math.cos(tb))
    m = _mul(oa, a)
    # (m @ ob^T)_{jk} = sum_l m_{jl} ob_{kl}
    y = (m[0] * ob[0] + m[1] * ob[1], m[0] * ob[2] + m[1] * ob[3],
         m[2] * ob[0] + m[3] * ob[1], m[2] * ob[2] + m[3] * ob[3])
    return sum((a[i].conjugate() * y[i]).real for i in range(4))


def chsh_value(a, x):
    """CHSH combination E(a,b) - E(a,b') + E(a',b) + E(a',b').

    ``x`` holds (theta, chi) for a, a', b, b' in that order.
    """
    return _chsh(tuple(complex(v) for v in np.ravel(a)), [float(v) for v in x])


def _chsh(a, x):
    return (_correlation(a, x[0], x[1], x[4], x[5])
            - _correlation(a, x[0], x[1], x[6], x[7])
            + _correlation(a, x[2], x[3], x[4], x[5])
            + _correlation(a, x[2], x[3], x[6], x[7]))


def _pout(t1, d0, d1, t2t, numer, x):
    u = su2(x[0], x[1], x[2])
    v = su2(x[3], x[4], x[5])
    a = (u[0] * d0, u[1] * d1, u[2] * d0, u[3] * d1)
    m = _mul(_mul(t1, _mul(a, v)), t2t)
    z = sum(w.real * w.real + w.imag * w.imag for w in m)
    if z == 0.0:
        return 0.0
    return numer / z


def pout_value(t1, d, t2t, x):
    """Concurrence of ``t1 @ U(x[:3]) diag(d) V(x[3:]) @ t2t`` after normalization."""
    t1 = tuple(complex(v) for v in np.ravel(t1))
    t2t = tuple(complex(v) for v in np.ravel(t2t))
    d0, d1 = float(d[0]), float(d[1])
    numer = 2.0 * abs(t1[0] * t1[3] - t1[1] * t1[2]) * abs(t2t[0] * t2t[3] - t2t[1] * t2t[2]) * d0 * d1
    return _pout(t1, d0, d1, t2t, numer, [float(v) for v in x])


def nelder_mead(f, x0, step, ftol, xtol, maxfev):
    """Minimize `f` from `x0`; returns (x, fx, nfev, converged)."""
    n = len(x0)
    sim = [list(x0)]
    for i in range(n):
        p = list(x0)
        p[i] += step
        sim.append(p)
    fs = [f(p) for p in sim]
    nfev = n + 1
    converged = False
    while True:
        # stable insertion sort keeps tie order deterministic
        for i in range(1, n + 1):
            j = i
            while j > 0 and fs[j] < fs[j - 1]:
                fs[j], fs[j - 1] = fs[j - 1], fs[j]
                sim[j], sim[j - 1] = sim[j - 1], sim[j]
                j -= 1
        fspread = max(abs(fs[i] - fs[0]) for i in range(1, n + 1))
        xspread = max(abs(sim[i][k] - sim[0][k]) for i in range(1, n + 1) for k in range(n))
        if fspread <= ftol and xspread <= xtol:
            converged = True
            break
        if nfev >= maxfev:
            break
        c = [sum(sim[i][k] for i in range(n)) / n for k in range(n)]
        w = sim[n]
        xr = [c[k] + (c[k] - w[k]) for k in range(n)]
        fr = f(xr)
        nfev += 1
        if fr < fs[0]:
            xe = [c[k] + 2.0 * (c[k] - w[k]) for k in range(n)]
            fe = f(xe)
            nfev += 1
            if fe < fr:
                sim[n], fs[n] = xe, fe
            else:
                sim[n], fs[n] = xr, fr
            continue
        if fr < fs[n - 1]:
            sim[n], fs[n] = xr, fr
            continue
        if fr < fs[n]:
            xc = [c[k] + 0.5 * (xr[k] - c[k]) for k in range(n)]
            fc = f(xc)
            nfev += 1
            if fc <= fr:
                sim[n], fs[n] = xc, fc
                continue
        else:
            xc = [c[k] + 0.5 * (w[k] - c[k]) for k in range(n)]
            fc = f(xc)
            nfev += 1
            if fc < fs[n]:
                sim[n], fs[n] = xc, fc
                continue
        b = sim[0]
        for i in range(1, n + 1):
            sim[i] = [b[k] + 0.5 * (sim[i][k] - b[k]) for k in range(n)]
            fs[i] = f(sim[i])
        nfev += n
    return sim[0], fs[0], nfev, converged


def _multistart(f, starts, step, ftol, xtol, maxfev, polish):
    starts = np.asarray(starts, dtype=float)
    n, dim = starts.shape
    xs = np.empty((n, dim))
    fs = np.empty(n)
    nfevs = np.zeros(n, dtype=np.int64)
    conv = np.zeros(n, dtype=bool)
    for r in range(n):
        x, fx, nfev, ok = nelder_mead(f, list(starts[r]), step, ftol, xtol, maxfev)
        s = step
        for _ in range(polish):
            s *= 0.1
            x2, f2, k, ok = nelder_mead(f, x, s, ftol, xtol, maxfev)
            nfev += k
            improved = fx - f2
            if f2 <= fx:
                x, fx = x2, f2
            if improved <= ftol:
                break
        xs[r] = x
        fs[r] = fx
        nfevs[r] = nfev
        conv[r] = ok
    return xs, fs, nfevs, conv


def maximize_chsh(a, starts, step=0.5, ftol=1e-12, xtol=1e-8, maxfev=20000, polish=3):
    """Local maximization of the CHSH value from every row of `starts`.

    Returns ``(xs, values, nfev, converged)`` with one entry per start.
    """
    a = tuple(complex(v) for v in np.ravel(a))
    xs, fs, nfev, conv = _multistart(lambda x: -_chsh(a, x), starts, step, ftol, xtol,
                                     maxfev, polish)
    return xs, -fs, nfev, conv


def maximize_pout(t1, d, t2t, starts, step=0.5, ftol=1e-12, xtol=1e-8, maxfev=20000, polish=3):
    """Local maximization of the transmitted concurrence over two SU(2) rotations."""
    t1 = tuple(complex(v) for v in np.ravel(t1))
    t2t = tuple(complex(v) for v in np.ravel(t2t))
    d0, d1 = float(d[0]), float(d[1])
    numer = 2.0 * abs(t1[0] * t1[3] - t1[1] * t1[2]) * abs(t2t[0] * t2t[3] - t2t[1] * t2t[2]) * d0 * d1
    xs, fs, nfev, conv = _multistart(lambda x: -_pout(t1, d0, d1, t2t, numer, x), starts, step,
                                     ftol, xtol, maxfev, polish)
    return xs, -fs, nfev, conv
