"""Polarization entanglement of photon pairs sent through two linear media.

The transmitted degree of entanglement depends on the media only through
the symmetry parameters ``tau_i = T_i+ / T_i-`` of their polarization
transmission probabilities. This package evaluates the closed-form transfer
and distillation results and checks them against brute-force optimization
over local rotations and CHSH measurement settings.
"""
from .biphoton import (MeasurementSetting, PolarParams, TwoPhotonState, apply_local,
                       bell_pair, canonical_state, chsh_max, concurrence, make_state,
                       polar_params, s_from_p)
from .errors import (BellScatterError, ConsistencyError, DomainError, FullyBlocked,
                     GainMedium, NotHermitian, NotUnitary, SingularChannel, ZeroState)
from .kernels import BACKEND
from .media import (PlasmonFilmSpec, TransferResult, TransmissionEigs, TransmissionMatrix,
                    film_pair, lorentzian_t, plasmon_resonance, propagation_length,
                    symmetry_ratio, tau, transmission_eigs, transmit)
from .transfer import (DistillationVerdict, OptimizeReport, TransferBounds, bounds,
                       distillable, optimize_incident, p_out_full_entangled, p_out_general,
                       region_boundary, s_max_quadratic, yield_check)

__version__ = "0.1.0"
