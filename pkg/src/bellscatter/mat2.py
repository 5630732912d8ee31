"""Closed-form linear algebra for complex 2x2 matrices.

Matrices are ``numpy`` arrays of shape ``(2, 2)`` and dtype ``complex128``,
indexed by polarization (H=0, V=1). Scalars are Python ``complex``.
Eigen- and singular-value decompositions use explicit 2x2 formulas, so
there is no iteration and no convergence failure on degenerate input.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import DomainError, NotHermitian

TOL_HERM = 1e-10
TOL_UNITARY = 1e-10

# relative splitting below which a spectrum is treated as degenerate
_DEGENERATE_REL = 64 * np.finfo(float).eps


class HermEig2(NamedTuple):
    """Eigen-decomposition ``H = U^dagger diag(values) U``.

    ``values`` are in descending order; the rows of ``vectors`` (``U``) are
    the complex-conjugated eigenvectors.
    """

    values: tuple[float, float]
    vectors: np.ndarray


class Svd2(NamedTuple):
    """Singular-value decomposition ``M = left @ diag(values) @ right``."""

    left: np.ndarray
    values: tuple[float, float]
    right: np.ndarray


def _checked(a) -> tuple[np.ndarray, list[complex]]:
    m = np.asarray(a, dtype=np.complex128)
    if m.shape != (2, 2):
        raise DomainError(f"expected a 2x2 matrix, got shape {m.shape}")
    e = m.ravel().tolist()
    # a NaN or infinite entry makes the sum non-finite
    if not math.isfinite(abs(e[0]) + abs(e[1]) + abs(e[2]) + abs(e[3])):
        raise DomainError("matrix has non-finite entries")
    return m, e


def as_mat2(a) -> np.ndarray:
    return _checked(a)[0]


def _entries(a) -> list[complex]:
    return _checked(a)[1]


def _array(e) -> np.ndarray:
    return np.array(e, dtype=np.complex128).reshape(2, 2)


def _mul(a, b):
    return [a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]]


def _adj(a):
    return [a[0].conjugate(), a[2].conjugate(), a[1].conjugate(), a[3].conjugate()]


def identity() -> np.ndarray:
    return np.eye(2, dtype=np.complex128)


def mul(a, b) -> np.ndarray:
    return _array(_mul(_entries(a), _entries(b)))


def adjoint(a) -> np.ndarray:
    return _array(_adj(_entries(a)))


def transpose(a) -> np.ndarray:
    e = _entries(a)
    return _array([e[0], e[2], e[1], e[3]])


def gram(a) -> np.ndarray:
    """``a @ a^dagger``."""
    e = _entries(a)
    return _array(_mul(e, _adj(e)))


def det(a) -> complex:
    e = _entries(a)
    return e[0] * e[3] - e[1] * e[2]


def trace(a) -> complex:
    e = _entries(a)
    return e[0] + e[3]


def frobenius(a) -> float:
    return math.sqrt(sum(abs(z) ** 2 for z in _entries(a)))


def spectral_norm(a) -> float:
    """Largest singular value."""
    e = _entries(a)
    # largest eigenvalue of a a^dagger without the cancellation in f^2 - 4|det|^2
    p = abs(e[0]) ** 2 + abs(e[1]) ** 2
    q = abs(e[2]) ** 2 + abs(e[3]) ** 2
    b = e[0] * e[2].conjugate() + e[1] * e[3].conjugate()
    return math.sqrt(0.5 * (p + q) + math.hypot(0.5 * (p - q), abs(b)))


def is_unitary(a, tol: float = TOL_UNITARY) -> bool:
    e = _entries(a)
    g = _mul(e, _adj(e))
    g[0] -= 1.0
    g[3] -= 1.0
    return math.sqrt(sum(abs(z) ** 2 for z in g)) <= tol


def _complement(x0: complex, x1: complex) -> tuple[complex, complex]:
    # unit vector orthogonal to (x0, x1) such that [[x0, y0], [x1, y1]] has det 1
    return -x1.conjugate(), x0.conjugate()


def herm_eig(a, tol: float = TOL_HERM) -> HermEig2:
    """Eigenvalues (descending) and eigenvector matrix of a Hermitian 2x2 matrix.

    A degenerate spectrum returns the identity as eigenvector matrix.

    Raises
    ------
    NotHermitian
        If ``||a - a^dagger||_F`` exceeds `tol`.
    """
    return _herm_eig(_entries(a), tol)


def _herm_eig(e, tol):
    skew = math.sqrt(e[0].imag ** 2 + e[3].imag ** 2 + 2.0 * abs(e[1] - e[2].conjugate()) ** 2)
    if skew > tol:
        raise NotHermitian("matrix is not Hermitian")
    p = e[0].real
    q = e[3].real
    b = 0.5 * (e[1] + e[2].conjugate())
    mean = 0.5 * (p + q)
    half = 0.5 * (p - q)
    r = math.hypot(half, abs(b))
    hi = mean + r
    lo = mean - r
    # recompute the eigenvalue nearer zero from the determinant
    d = p * q - abs(b) ** 2
    if abs(hi) >= abs(lo) and hi != 0.0:
        lo = d / hi
    elif lo != 0.0:
        hi = d / lo
    if r <= _DEGENERATE_REL * (abs(mean) + r):
        return HermEig2((hi, lo), identity())
    # eigenvector for the larger eigenvalue, choosing the branch without cancellation;
    # rescaled first so that subnormal entries keep full precision
    k = max(abs(half), abs(b))
    half, b = half / k, b / k
    r = math.hypot(half, abs(b))
    if half >= 0.0:
        x0, x1 = complex(half + r), b.conjugate()
    else:
        x0, x1 = b, complex(r - half)
    n = math.hypot(abs(x0), abs(x1))
    x0, x1 = x0 / n, x1 / n
    y0, y1 = _complement(x0, x1)
    u = _array([x0.conjugate(), x1.conjugate(), y0.conjugate(), y1.conjugate()])
    return HermEig2((hi, lo), u)


def svd2(a) -> Svd2:
    """Singular-value decomposition of a complex 2x2 matrix.

    The left factor lies in SU(2) and its first column has its
    largest-magnitude entry real and positive; the remaining phase freedom
    is absorbed into the right factor.
    """
    e = _entries(a)
    eig = _herm_eig(_mul(e, _adj(e)), math.inf)
    x0 = complex(eig.vectors[0, 0]).conjugate()
    x1 = complex(eig.vectors[0, 1]).conjugate()
    big = x0 if abs(x0) >= abs(x1) else x1
    if big != 0:
        ph = abs(big) / big
        x0, x1 = x0 * ph, x1 * ph
    y0, y1 = _complement(x0, x1)
    lv = [x0, y0, x1, y1]
    n = _mul(_adj(lv), e)
    left = _array(lv)
    s1 = math.hypot(abs(n[0]), abs(n[1]))
    if s1 == 0.0:
        return Svd2(left, (0.0, 0.0), identity())
    r0 = n[0] / s1
    r1 = n[1] / s1
    # the second row of n is orthogonal to (r0, r1) up to rounding
    w0, w1 = _complement(r0, r1)
    proj = n[2] * w0.conjugate() + n[3] * w1.conjugate()
    s2 = abs(proj)
    ph = proj / s2 if s2 > 0.0 else 1.0
    s2 = min(s2, s1)  # equal up to rounding when m is a scaled unitary
    right = _array([r0, r1, ph * w0, ph * w1])
    return Svd2(left, (s1, s2), right)
