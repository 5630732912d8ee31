"""Linear media acting on the polarization of each photon.

Each medium is described by the 2x2 matrix of transmission amplitudes
``t[s, s']`` from incident polarization s' to transmitted polarization s.
The pair state transforms as ``a -> t1 a t2^T`` followed by renormalization.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import mat2
from .biphoton import TwoPhotonState, concurrence, s_from_p
from .errors import DomainError, FullyBlocked, GainMedium, SingularChannel

SPEED_OF_LIGHT = 2.99792458e8  # m/s
TOL_PASSIVE = 1e-10
TOL_BLOCK = 1e-14


@dataclass(frozen=True)
class TransmissionMatrix:
    """Transmission amplitudes of a passive medium (spectral norm <= 1)."""

    t: np.ndarray

    def __post_init__(self):
        t = mat2.as_mat2(self.t)
        norm = mat2.spectral_norm(t)
        if norm == 0.0:
            raise DomainError("transmission matrix is identically zero")
        top = norm * norm
        if top > 1.0 + TOL_PASSIVE:
            raise GainMedium(f"transmission eigenvalue {top!r} exceeds 1")
        t = t.copy()
        t.setflags(write=False)
        object.__setattr__(self, "t", t)


class TransmissionEigs(NamedTuple):
    """Eigenvalues ``t_plus >= t_minus`` of ``t t^dagger = basis^dagger diag basis``."""

    t_plus: float
    t_minus: float
    basis: np.ndarray


@dataclass(frozen=True)
class PlasmonFilmSpec:
    """Metal film perforated by a rectangular array of subwavelength holes.

    Attributes
    ----------
    lattice_a, lattice_b : float
        Lattice constants in meters along the H and V polarization axes.
    order_n : int
        Resonance order (plasmon-field oscillations per lattice constant).
    gamma : float
        Resonance linewidth in rad/s.
    t_peak : float
        Transmission probability on resonance, in (0, 1].
    epsilon : float
        Real part of the metal's dielectric constant.
    """

    lattice_a: float
    lattice_b: float
    order_n: int
    gamma: float
    t_peak: float
    epsilon: float

    def __post_init__(self):
        if self.lattice_a <= 0 or self.lattice_b <= 0:
            raise DomainError("lattice constants must be positive")
        if int(self.order_n) != self.order_n or self.order_n < 1:
            raise DomainError("resonance order must be a positive integer")
        if self.gamma <= 0:
            raise DomainError("linewidth must be positive")
        if not 0 < self.t_peak <= 1:
            raise DomainError("peak transmission must lie in (0, 1]")
        if self.epsilon <= 0:
            raise DomainError("dielectric constant must be positive")


@dataclass(frozen=True)
class TransferResult:
    """Outcome of sending a pair through two media.

    ``det_weight`` is ``|det t1| |det t2| = sqrt(T1+ T1- T2+ T2-)``.
    """

    state_out: TwoPhotonState
    z: float
    p_out: float
    s_out: float
    det_weight: float


def as_transmission(t) -> TransmissionMatrix:
    return t if isinstance(t, TransmissionMatrix) else TransmissionMatrix(t)


def transmit(s_in: TwoPhotonState, t1, t2, tol_block: float = TOL_BLOCK) -> TransferResult:
    """Propagate `s_in` through medium `t1` (first photon) and `t2` (second photon).

    Raises
    ------
    FullyBlocked
        If the coincidence probability ``Z`` is at most `tol_block`.
    """
    t1 = as_transmission(t1).t
    t2 = as_transmission(t2).t
    m = mat2.mul(mat2.mul(t1, s_in.a), mat2.transpose(t2))
    z = mat2.frobenius(m) ** 2
    if z <= tol_block:
        raise FullyBlocked(f"coincidence probability Z={z!r} vanishes")
    out = TwoPhotonState(m / math.sqrt(z))
    p_out = min(concurrence(out), 1.0)
    weight = abs(mat2.det(t1)) * abs(mat2.det(t2))
    return TransferResult(out, z, p_out, s_from_p(p_out), weight)


def _clamp_unit(x: float, what: str) -> float:
    if x > 1.0 + TOL_PASSIVE:
        raise GainMedium(f"{what} {x!r} exceeds 1")
    if x < -TOL_PASSIVE:
        raise DomainError(f"{what} {x!r} is negative")
    return min(max(x, 0.0), 1.0)


def transmission_eigs(t) -> TransmissionEigs:
    """Polarization transmission probabilities of a medium, from ``t t^dagger``."""
    t = t.t if isinstance(t, TransmissionMatrix) else t
    eig = mat2.herm_eig(mat2.gram(t), tol=math.inf)
    hi, lo = eig.values
    return TransmissionEigs(_clamp_unit(hi, "transmission eigenvalue"),
                            _clamp_unit(lo, "transmission eigenvalue"), eig.vectors)


def tau(e: TransmissionEigs) -> float:
    """Symmetry parameter ``T+ / T-`` (>= 1)."""
    if e.t_minus <= 0.0:
        raise SingularChannel("T- = 0: the medium is a perfect polarizer")
    return e.t_plus / e.t_minus


def lorentzian_t(omega0: float, omega_res: float, gamma: float, t_peak: float) -> float:
    """Transmission probability ``t_peak G^2 / ((w0 - w_res)^2 + G^2)``."""
    if gamma <= 0 or not 0 < t_peak <= 1:
        raise DomainError("need gamma > 0 and 0 < t_peak <= 1")
    detune = (omega0 - omega_res) / gamma
    return t_peak / (detune * detune + 1.0)


def plasmon_resonance(lattice: float, n: int, epsilon: float) -> float:
    """Surface-plasmon resonance ``sqrt(1 + 1/eps) 2 pi n c / L`` in rad/s."""
    if lattice <= 0 or n < 1 or epsilon <= 0:
        raise DomainError("need lattice > 0, n >= 1, epsilon > 0")
    return math.sqrt(1.0 + 1.0 / epsilon) * 2.0 * math.pi * n * SPEED_OF_LIGHT / lattice


def propagation_length(gamma: float, epsilon: float) -> float:
    """Plasmon propagation length ``(c / gamma) sqrt((eps + 1) / eps)`` in meters."""
    if gamma <= 0 or epsilon <= 0:
        raise DomainError("need gamma > 0 and epsilon > 0")
    return SPEED_OF_LIGHT / gamma * math.sqrt((epsilon + 1.0) / epsilon)


def film_transmission(spec: PlasmonFilmSpec, omega0: float) -> TransmissionMatrix:
    """Diagonal amplitude matrix of one film, lattice axes along H and V."""
    amps = []
    for lattice in (spec.lattice_a, spec.lattice_b):
        w = plasmon_resonance(lattice, spec.order_n, spec.epsilon)
        amps.append(math.sqrt(lorentzian_t(omega0, w, spec.gamma, spec.t_peak)))
    return TransmissionMatrix(np.array([[amps[0], 0.0], [0.0, amps[1]]], dtype=np.complex128))


def film_pair(spec1: PlasmonFilmSpec, spec2: PlasmonFilmSpec,
              omega0: float) -> tuple[TransmissionMatrix, TransmissionMatrix]:
    """Transmission matrices of two perforated films at frequency `omega0`."""
    return film_transmission(spec1, omega0), film_transmission(spec2, omega0)


def symmetry_ratio(l0: float, l1: float, n: int, gamma: float, epsilon: float) -> float:
    """``tau1 / tau2`` for one rectangular (l0 x l1) and one square (l0) film.

    The incident frequency sits on the l0 resonance.
    """
    if l0 <= 0 or l1 <= 0:
        raise DomainError("lattice constants must be positive")
    ell = propagation_length(gamma, epsilon)
    if n < 1:
        raise DomainError("resonance order must be positive")
    k = 2.0 * math.pi * (n * ell / l0 - n * ell / l1)
    return 1.0 + k * k
