"""Pure two-photon polarization states and their entanglement.

A state is stored as its 2x2 coefficient matrix ``a`` in the basis
``a[s, s']`` <-> ``|s s'>`` with s, s' in {H, V}. The degree of entanglement
is the concurrence ``P = 2 |det a|``; the maximal CHSH value of a pure state
is ``S = 2 sqrt(1 + P^2)``, which `chsh_max` checks by direct optimization.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernels
from . import mat2
from .errors import DomainError, NotUnitary, ZeroState

TOL_NORM = 1e-10
# splitting of the Schmidt weights below which the spectrum is degenerate
TOL_DEGENERATE = 1e-12


@dataclass(frozen=True)
class TwoPhotonState:
    """Normalized pure state with coefficient matrix `a` (``Tr a a^dagger = 1``)."""

    a: np.ndarray

    def __post_init__(self):
        a = mat2.as_mat2(self.a)
        norm = mat2.frobenius(a) ** 2
        if abs(norm - 1.0) > TOL_NORM:
            raise DomainError(f"state is not normalized (Tr a a^dagger = {norm!r})")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "a", a)

    @property
    def vector(self) -> np.ndarray:
        """Amplitudes in the order HH, HV, VH, VV."""
        return self.a.ravel().copy()


class PolarParams(NamedTuple):
    """Parameters of ``U a V = e^{i phi} L diag(sqrt(lambda)) R`` with L, R in SU(2).

    ``u`` and ``v`` fix the moduli ``|u_pm| = sqrt(1/2 +- u)`` of the entries
    of L (and likewise of R); ``Phi = arg(u_+ u_-^* v_+ v_-)``.
    """

    phi: float
    lambda_plus: float
    lambda_minus: float
    u: float
    v: float
    Phi: float


class MeasurementSetting(NamedTuple):
    """Projective polarization measurement along a Bloch-sphere direction."""

    theta: float
    chi: float

    def observable(self) -> np.ndarray:
        s = math.sin(self.theta)
        c = math.cos(self.theta)
        return np.array([[c, s * cmath.exp(-1j * self.chi)],
                         [s * cmath.exp(1j * self.chi), -c]], dtype=np.complex128)


def make_state(a) -> TwoPhotonState:
    """Build a state from an unnormalized coefficient matrix."""
    a = mat2.as_mat2(a)
    norm = mat2.frobenius(a) ** 2
    if norm == 0.0:
        raise ZeroState("coefficient matrix is zero")
    return TwoPhotonState(a / math.sqrt(norm))


def bell_pair() -> TwoPhotonState:
    """The singlet ``(|HV> - |VH>)/sqrt(2)``."""
    return make_state([[0, 1], [-1, 0]])


def concurrence(s: TwoPhotonState) -> float:
    return 2.0 * abs(mat2.det(s.a))


def s_from_p(p: float) -> float:
    """Maximal CHSH value ``2 sqrt(1 + p^2)`` of a pure state with concurrence `p`."""
    if not -1e-12 <= p <= 1.0 + 1e-12:
        raise DomainError(f"concurrence {p!r} outside [0, 1]")
    p = min(max(p, 0.0), 1.0)
    return 2.0 * math.sqrt(1.0 + p * p)


def _check_unitary(*ms):
    for m in ms:
        if not mat2.is_unitary(mat2.as_mat2(m)):
            raise NotUnitary("local transformation is not unitary")


def apply_local(s: TwoPhotonState, u, v) -> TwoPhotonState:
    """Rotate the two polarizations independently: ``a -> u a v``."""
    _check_unitary(u, v)
    return TwoPhotonState(mat2.mul(mat2.mul(u, s.a), v))


def canonical_state(p_in: float) -> TwoPhotonState:
    """Diagonal state ``diag(sqrt(lambda_+), sqrt(lambda_-))`` with concurrence `p_in`."""
    if not 0.0 <= p_in <= 1.0:
        raise DomainError(f"p_in={p_in!r} outside [0, 1]")
    root = math.sqrt((1.0 - p_in) * (1.0 + p_in))
    lam_plus = 0.5 + 0.5 * root
    lam_minus = 0.25 * p_in * p_in / lam_plus
    return TwoPhotonState(np.diag([math.sqrt(lam_plus), math.sqrt(lam_minus)]).astype(np.complex128))


def _su2_part(m) -> tuple[complex, complex, float]:
    """Split a unitary ``m = e^{i alpha} [[p, q], [-q*, p*]]``; returns (p, q, alpha)."""
    alpha = 0.5 * cmath.phase(mat2.det(m))
    g = cmath.exp(-1j * alpha)
    return complex(m[0, 0]) * g, complex(m[0, 1]) * g, alpha


def _wrap(angle: float) -> float:
    """Map an angle to (-pi, pi]."""
    w = math.remainder(angle, 2.0 * math.pi)
    return math.pi if w == -math.pi else w


def polar_params(s: TwoPhotonState, u, v) -> PolarParams:
    """Polar parametrization of ``u @ s.a @ v``.

    With a degenerate spectrum (``lambda_+ == lambda_-``) the decomposition
    is reported with ``u = v = 0`` and ``Phi`` chosen to give the same
    transmitted concurrence; only gauge-invariant combinations are meaningful.
    """
    _check_unitary(u, v)
    b = mat2.mul(mat2.mul(u, s.a), v)
    left, (s1, s2), right = mat2.svd2(b)
    lam_plus, lam_minus = s1 * s1, s2 * s2
    total = lam_plus + lam_minus
    lam_plus, lam_minus = lam_plus / total, lam_minus / total
    up, um, alpha = _su2_part(left)
    vp, vm, beta = _su2_part(right)
    phi = _wrap(alpha + beta)
    if lam_plus - lam_minus <= TOL_DEGENERATE:
        # b is sqrt(1/2) times a unitary; only |b00|^2 enters the transmitted weight
        cos_big_phi = min(1.0, max(-1.0, 1.0 - 4.0 * abs(complex(b[0, 0])) ** 2))
        return PolarParams(phi, 0.5, 0.5, 0.0, 0.0, math.acos(cos_big_phi))
    uu = min(0.5, max(-0.5, abs(up) ** 2 - 0.5))
    vv = min(0.5, max(-0.5, abs(vp) ** 2 - 0.5))
    prod = up * um.conjugate() * vp * vm
    big_phi = _wrap(cmath.phase(prod)) if prod != 0 else 0.0
    return PolarParams(phi, lam_plus, lam_minus, uu, vv, big_phi)


def polar_matrix(params: PolarParams) -> np.ndarray:
    """One representative of ``e^{i phi} L diag(sqrt(lambda)) R`` for `params`.

    Equal to the decomposed matrix up to ``diag(e^{ia}, e^{-ia})`` on the
    left and ``diag(e^{ib}, e^{-ib})`` on the right.
    """
    up = math.sqrt(0.5 + params.u)
    um = math.sqrt(0.5 - params.u)
    vp = math.sqrt(0.5 + params.v)
    vm = math.sqrt(0.5 - params.v) * cmath.exp(1j * params.Phi)
    left = np.array([[up, um], [-um, up]], dtype=np.complex128)
    right = np.array([[vp, vm], [-vm.conjugate(), vp]], dtype=np.complex128)
    mid = np.diag([math.sqrt(params.lambda_plus), math.sqrt(params.lambda_minus)])
    return cmath.exp(1j * params.phi) * (left @ mid @ right)


def correlation(s: TwoPhotonState, first: MeasurementSetting, second: MeasurementSetting) -> float:
    """Expectation of the product of the two +-1 outcomes."""
    y = first.observable() @ s.a @ second.observable().T
    return float(np.real(np.vdot(s.a, y)))


def chsh_max(s: TwoPhotonState, restarts: int = 16, seed: int = 0):
    """Maximal CHSH value over projective measurements, found numerically.

    Runs a seeded multi-start Nelder-Mead search over the four Bloch-sphere
    directions (a, a', b, b').

    Returns
    -------
    value : float
        Largest ``E(a,b) - E(a,b') + E(a',b) + E(a',b')`` found.
    settings : tuple of MeasurementSetting
        The directions a, a', b, b' attaining it.
    """
    rng = np.random.default_rng(seed)
    starts = rng.uniform(0.0, 2.0 * math.pi, size=(restarts, 8))
    xs, values, _, _ = kernels.maximize_chsh(s.a, starts)
    best = int(np.argmax(values))
    x = xs[best]
    settings = tuple(MeasurementSetting(float(x[2 * k]), float(x[2 * k + 1])) for k in range(4))
    return float(values[best]), settings
