"""Analytic entanglement transfer through two media, and its numerical check.

Everything here depends on the media only through the symmetry parameters
``tau_i = T_i+ / T_i-``. For a fully entangled input the transmitted
concurrence lies between `bounds` ``p_min`` and ``p_max``; a partially
entangled input can be distilled to full entanglement inside the strip
given by `distillable`. `optimize_incident` finds the best input by brute
force and is the independent check on both statements.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from . import kernels
from . import mat2
from .biphoton import (TwoPhotonState, apply_local, canonical_state, polar_params,
                       s_from_p)
from .errors import ConsistencyError, DomainError
from .media import (TransferResult, TransmissionEigs, as_transmission, tau,
                    transmission_eigs, transmit)

TAU_CAP = 1e12
TOL_CLAMP = 1e-10
TOL_YIELD = 1e-12
TOL_YIELD_IDENTITY = 1e-10


class TransferBounds(NamedTuple):
    p_min: float
    p_max: float
    s_max: float


class DistillationVerdict(NamedTuple):
    """Slack of the two distillation inequalities (natural-log units)."""

    feasible: bool
    margin_diff: float
    margin_sum: float


class OptimizeReport(NamedTuple):
    best_p_out: float
    best_input: TwoPhotonState
    iterations: int
    converged: bool
    restarts: int


class BoundaryLine(NamedTuple):
    """Sampled edge of the distillation strip in the (ln tau1, ln tau2) plane.

    ``binding`` names the inequality that is tight on it: ``"diff"`` for
    ``|ln(tau1/tau2)| <= 2 arcosh(1/p_in)``, ``"sum"`` for
    ``ln(tau1 tau2) >= 2 arcosh(1/p_in)``.
    """

    name: str
    binding: str
    ln_tau1: np.ndarray
    ln_tau2: np.ndarray


def _clamp01(x: float, what: str) -> float:
    if x < -TOL_CLAMP or x > 1.0 + TOL_CLAMP:
        raise ConsistencyError(f"{what}={x!r} outside [0, 1]")
    return min(max(x, 0.0), 1.0)


def _check_tau(*taus):
    for t in taus:
        if not t >= 1.0:
            raise DomainError(f"symmetry parameter {t!r} must be >= 1")


def capped_tau(e: TransmissionEigs) -> float:
    """`tau` with a perfect polarizer (T- = 0) mapped to ``TAU_CAP``.

    Analytic formulas lose accuracy near the cap; use the direct matrix
    path for polarizing media.
    """
    if e.t_minus <= 0.0 or e.t_plus > TAU_CAP * e.t_minus:
        return TAU_CAP
    return tau(e)


def p_out_general(p_in: float, lam_plus: float, lam_minus: float, u: float, v: float,
                  Phi: float, tau1: float, tau2: float) -> float:
    """Transmitted concurrence for a state with polar parameters (lam, u, v, Phi).

    The factors ``(tau_i - 1)`` are multiplied through, so ``tau_i = 1`` is
    regular.
    """
    if not 0.0 <= p_in <= 1.0:
        raise DomainError(f"p_in={p_in!r} outside [0, 1]")
    if abs(lam_plus + lam_minus - 1.0) > 1e-10 or min(lam_plus, lam_minus) < 0.0:
        raise DomainError("Schmidt weights must be non-negative and sum to one")
    if not (-0.5 <= u <= 0.5 and -0.5 <= v <= 0.5):
        raise DomainError("u and v must lie in [-1/2, 1/2]")
    _check_tau(tau1, tau2)
    a1, b1 = tau1 - 1.0, 0.5 * (tau1 + 1.0)
    a2, b2 = tau2 - 1.0, 0.5 * (tau2 + 1.0)
    q_plus = (u * a1 + b1) * (v * a2 + b2)
    q_minus = (u * a1 - b1) * (v * a2 - b2)
    cross = (2.0 * math.sqrt(lam_plus * lam_minus) * a1 * a2
             * math.sqrt(max(0.25 - u * u, 0.0)) * math.sqrt(max(0.25 - v * v, 0.0))
             * math.cos(Phi))
    denom = lam_plus * q_plus + lam_minus * q_minus - cross
    return _clamp01(p_in * math.sqrt(tau1 * tau2) / denom, "p_out")


def p_out_full_entangled(tau1: float, tau2: float, a: float) -> float:
    """Transmitted concurrence of a fully entangled input; ``|a| <= 1/4``."""
    _check_tau(tau1, tau2)
    if abs(a) > 0.25:
        raise DomainError(f"a={a!r} outside [-1/4, 1/4]")
    denom = (tau1 + 1.0) * (tau2 + 1.0) + 4.0 * a * (tau1 - 1.0) * (tau2 - 1.0)
    return _clamp01(4.0 * math.sqrt(tau1 * tau2) / denom, "p_out")


def s_max_of_ratio(ratio: float) -> float:
    """Largest CHSH value after transfer of a fully entangled pair, vs ``tau1/tau2``."""
    if not ratio > 0:
        raise DomainError("ratio must be positive")
    return 2.0 * math.sqrt(1.0 + 4.0 * ratio / (1.0 + ratio) ** 2)


def bounds(tau1: float, tau2: float) -> TransferBounds:
    """Range of transmitted concurrence for a fully entangled input."""
    _check_tau(tau1, tau2)
    prod = tau1 * tau2
    root = 2.0 * math.sqrt(prod)
    # p_max written as 2 sqrt(r) / (1 + r) times tau2/tau2 shares the numerator of p_min
    p_min = root / (1.0 + prod)
    p_max = min(root / (tau1 + tau2), 1.0)
    return TransferBounds(p_min, p_max, s_from_p(p_max))


def s_max_quadratic(ratio: float) -> float:
    """Second-order expansion of `s_max_of_ratio` about ``ratio = 1``."""
    return 2.0 * math.sqrt(2.0) * (1.0 - (ratio - 1.0) ** 2 / 16.0)


def _strip_width(p_in: float) -> float:
    if not 0.0 < p_in <= 1.0:
        raise DomainError(f"p_in={p_in!r} outside (0, 1]")
    return 2.0 * math.acosh(1.0 / p_in)


def distillable(p_in: float, tau1: float, tau2: float) -> DistillationVerdict:
    """Whether ``p_out = 1`` is reachable from concurrence `p_in`."""
    width = _strip_width(p_in)
    _check_tau(tau1, tau2)
    l1, l2 = math.log(tau1), math.log(tau2)
    margin_diff = width - abs(l1 - l2)
    margin_sum = l1 + l2 - width
    return DistillationVerdict(margin_diff >= 0.0 and margin_sum >= 0.0, margin_diff, margin_sum)


def region_boundary(p_in: float, ln_tau_max: float, steps: int) -> list[BoundaryLine]:
    """Edges of the distillation strip, sampled uniformly in ``ln tau1``.

    Returns the lower and upper parallel edges and the transverse edge, in
    that order, clipped to ``0 <= ln tau_i <= ln_tau_max``. An edge lying
    entirely outside the box has no points.
    """
    if not 0.0 < p_in < 1.0:
        raise DomainError(f"p_in={p_in!r} outside (0, 1)")
    if steps < 2:
        raise DomainError("steps must be >= 2")
    if not ln_tau_max > 0:
        raise DomainError("ln_tau_max must be positive")
    w = _strip_width(p_in)

    def edge(name, binding, lo, hi, f):
        if hi < lo:
            return BoundaryLine(name, binding, np.empty(0), np.empty(0))
        x = np.linspace(lo, hi, steps)
        return BoundaryLine(name, binding, x, f(x))

    return [
        edge("lower", "diff", w, ln_tau_max, lambda x: x - w),
        edge("upper", "diff", 0.0, ln_tau_max - w, lambda x: x + w),
        edge("transverse", "sum", 0.0, min(w, ln_tau_max), lambda x: w - x),
    ]


def incident_frame(t1, t2) -> tuple[np.ndarray, np.ndarray]:
    """Unitaries ``U, V`` with ``t1^dagger t1 = U^dagger D1 U`` and
    ``t2^T t2^* = V D2 V^dagger`` (D descending).

    In the frame ``U a V`` the coincidence rate is ``sum_jk D1_j D2_k |b_jk|^2``,
    which is the form the analytic transfer formula assumes.
    """
    t1 = as_transmission(t1).t
    t2 = as_transmission(t2).t
    u = mat2.herm_eig(mat2.mul(mat2.adjoint(t1), t1), tol=math.inf).vectors
    k2 = mat2.mul(mat2.transpose(t2), np.conj(t2))
    v = mat2.adjoint(mat2.herm_eig(k2, tol=math.inf).vectors)
    return u, v


def p_out_analytic(s_in: TwoPhotonState, t1, t2) -> float:
    """Transmitted concurrence from the polar parameters and the two tau's."""
    t1, t2 = as_transmission(t1), as_transmission(t2)
    u, v = incident_frame(t1, t2)
    pp = polar_params(s_in, u, v)
    p_in = min(2.0 * abs(mat2.det(s_in.a)), 1.0)
    return p_out_general(p_in, pp.lambda_plus, pp.lambda_minus, pp.u, pp.v, pp.Phi,
                         capped_tau(transmission_eigs(t1)), capped_tau(transmission_eigs(t2)))


def _euler_unitary(alpha, beta, gamma) -> np.ndarray:
    return np.array(kernels.su2(alpha, beta, gamma), dtype=np.complex128).reshape(2, 2)


def optimize_incident(t1, t2, p_in: float, restarts: int = 32, seed: int = 0) -> OptimizeReport:
    """Largest transmitted concurrence over local rotations of a `p_in` input.

    Seeded multi-start Nelder-Mead over two SU(2) rotations (three Euler
    angles each) applied to `canonical_state`. Restarts are reduced by
    value, ties broken by the lexicographically smallest angle vector.
    """
    if not 0.0 < p_in <= 1.0:
        raise DomainError(f"p_in={p_in!r} outside (0, 1]")
    t1, t2 = as_transmission(t1), as_transmission(t2)
    base = canonical_state(p_in)
    d = (base.a[0, 0].real, base.a[1, 1].real)
    rng = np.random.default_rng(seed)
    starts = rng.uniform(0.0, 2.0 * math.pi, size=(restarts, 6))
    xs, values, nfev, conv = kernels.maximize_pout(t1.t, d, mat2.transpose(t2.t), starts)
    top = values.max()
    ties = [i for i in range(restarts) if values[i] == top]
    best = min(ties, key=lambda i: tuple(xs[i]))
    x = xs[best]
    state = apply_local(base, _euler_unitary(*x[:3]), _euler_unitary(*x[3:]))
    result = transmit(state, t1, t2)
    return OptimizeReport(result.p_out, state, int(nfev.sum()), bool(conv[best]), restarts)


def yield_check(p_in: float, result: TransferResult) -> tuple[float, bool]:
    """Check that filtering creates no entanglement.

    Returns ``Z * p_out`` and whether it both stays below `p_in` and equals
    ``p_in sqrt(T1+ T1- T2+ T2-)``.
    """
    zp = result.z * result.p_out
    expected = p_in * result.det_weight
    ok = zp <= p_in + TOL_YIELD and abs(zp - expected) <= TOL_YIELD_IDENTITY
    return zp, ok


def s_out(result: TransferResult) -> float:
    return s_from_p(result.p_out)
