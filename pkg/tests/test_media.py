import math

import numpy as np
import pytest

from bellscatter import biphoton as bp
from bellscatter import media as md
from bellscatter.errors import (DomainError, FullyBlocked, GainMedium, SingularChannel)

from oracles import propagate, random_passive, random_state_matrix, random_unitary, tau_of

C = md.SPEED_OF_LIGHT


def test_transmission_matrix_validation():
    with pytest.raises(GainMedium):
        md.TransmissionMatrix(np.diag([1.01, 0.5]))
    with pytest.raises(DomainError):
        md.TransmissionMatrix(np.zeros((2, 2)))
    md.TransmissionMatrix(np.diag([1.0 + 1e-11, 0.5]))  # rounding slack


def test_transmit_identity(rng):
    s = bp.make_state(random_state_matrix(rng))
    r = md.transmit(s, np.eye(2), np.eye(2))
    np.testing.assert_allclose(r.state_out.a, s.a, atol=1e-15)
    assert r.z == pytest.approx(1.0, abs=1e-15)


def test_transmit_polarizer_destroys_entanglement():
    r = md.transmit(bp.bell_pair(), np.diag([1.0, 0.0]), np.eye(2))
    assert r.p_out == 0.0
    assert r.z == pytest.approx(0.5, abs=1e-15)
    assert r.s_out == 2.0


def test_transmit_fully_blocked():
    # arm 1 passes only H, arm 2 only V, input |HH>
    with pytest.raises(FullyBlocked):
        md.transmit(bp.make_state([[1, 0], [0, 0]]), np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))


def test_transmit_matches_direct_propagation(rng):
    for _ in range(200):
        a = random_state_matrix(rng)
        t1, _ = random_passive(rng)
        t2, _ = random_passive(rng)
        out, z, p = propagate(a, t1, t2)
        r = md.transmit(bp.TwoPhotonState(a), t1, t2)
        np.testing.assert_allclose(r.state_out.a, out, atol=1e-12)
        assert abs(r.z - z) < 1e-12
        assert abs(r.p_out - p) < 1e-12
        assert 0 < r.z <= 1 + 1e-12
        assert r.p_out == bp.concurrence(r.state_out) or r.p_out == 1.0


def test_unitary_media_keep_z_one(rng):
    for _ in range(50):
        s = bp.make_state(random_state_matrix(rng))
        r = md.transmit(s, random_unitary(rng), random_unitary(rng))
        assert abs(r.z - 1) < 1e-12
        assert abs(r.p_out - bp.concurrence(s)) < 1e-12


def test_lossy_media_reduce_z(rng):
    s = bp.make_state(random_state_matrix(rng))
    t1, _ = random_passive(rng, hi=0.9)
    assert md.transmit(s, t1, random_unitary(rng)).z < 1


def test_transmission_eigs_examples():
    e = md.transmission_eigs(np.diag([0.7, 0.7]))
    assert e.t_plus == e.t_minus == pytest.approx(0.49, abs=1e-15)
    np.testing.assert_array_equal(e.basis, np.eye(2))
    e = md.transmission_eigs(np.diag([0.9, 0.3]))
    assert (e.t_plus, e.t_minus) == pytest.approx((0.81, 0.09), abs=1e-15)


def test_transmission_eigs_invariance(rng):
    for _ in range(100):
        u, w = random_unitary(rng), random_unitary(rng)
        e = md.transmission_eigs(u @ np.diag([0.9, 0.3]) @ w)
        assert abs(e.t_plus - 0.81) < 1e-12 and abs(e.t_minus - 0.09) < 1e-12


def test_transmission_eigs_basis_diagonalizes(rng):
    t, tt = random_passive(rng)
    e = md.transmission_eigs(t)
    np.testing.assert_allclose(e.basis.conj().T @ np.diag([e.t_plus, e.t_minus]) @ e.basis,
                               t @ t.conj().T, atol=1e-12)
    np.testing.assert_allclose([e.t_plus, e.t_minus], tt, atol=1e-12)


def test_tau_examples():
    assert md.tau(md.TransmissionEigs(0.5, 0.5, np.eye(2))) == 1.0
    assert md.tau(md.TransmissionEigs(0.81, 0.09, np.eye(2))) == pytest.approx(9.0, rel=1e-15)
    with pytest.raises(SingularChannel):
        md.tau(md.transmission_eigs(np.diag([1.0, 0.0])))


def test_lorentzian_examples():
    g = 3e14
    assert md.lorentzian_t(2e15, 2e15, g, 0.4) == 0.4
    assert md.lorentzian_t(2e15 + g, 2e15, g, 0.4) == pytest.approx(0.2, rel=1e-15)
    assert md.lorentzian_t(2e15 - 3 * g, 2e15, g, 0.4) == pytest.approx(0.04, rel=1e-14)
    for args in [(1, 1, 0, 0.5), (1, 1, 1, 0.0), (1, 1, 1, 1.5)]:
        with pytest.raises(DomainError):
            md.lorentzian_t(*args)


def test_plasmon_resonance():
    w = md.plasmon_resonance(7e-7, 1, 10.0)
    assert w == pytest.approx(math.sqrt(1.1) * 2 * math.pi * C / 7e-7, rel=1e-15)
    assert w == pytest.approx(2.8223e15, rel=1e-4)
    assert md.plasmon_resonance(7e-7, 2, 10.0) == pytest.approx(2 * w, rel=1e-15)
    assert md.plasmon_resonance(7e-7, 1, 1e300) == pytest.approx(2 * math.pi * C / 7e-7, rel=1e-15)
    with pytest.raises(DomainError):
        md.plasmon_resonance(7e-7, 0, 10.0)


def test_propagation_length():
    assert md.propagation_length(C / 1e-6, 1.0) == pytest.approx(math.sqrt(2) * 1e-6, rel=1e-15)
    assert md.propagation_length(1e14, 1e300) == pytest.approx(C / 1e14, rel=1e-15)
    assert md.propagation_length(2e14, 5.0) == pytest.approx(0.5 * md.propagation_length(1e14, 5.0))
    with pytest.raises(DomainError):
        md.propagation_length(-1.0, 5.0)


def spec(a, b, n=1, gamma=2e14, t_peak=0.6, eps=12.0):
    return md.PlasmonFilmSpec(a, b, n, gamma, t_peak, eps)


def test_film_spec_validation():
    for kwargs in [dict(a=-1e-7, b=1e-7), dict(a=1e-7, b=1e-7, n=0), dict(a=1e-7, b=1e-7, gamma=0),
                   dict(a=1e-7, b=1e-7, t_peak=0), dict(a=1e-7, b=1e-7, eps=-2)]:
        with pytest.raises(DomainError):
            spec(**kwargs)


def test_film_pair_square_on_resonance():
    s = spec(7e-7, 7e-7)
    w0 = md.plasmon_resonance(7e-7, 1, 12.0)
    t1, t2 = md.film_pair(s, s, w0)
    np.testing.assert_allclose(t1.t, math.sqrt(0.6) * np.eye(2), rtol=1e-15)
    assert md.tau(md.transmission_eigs(t1)) == pytest.approx(1.0, abs=1e-15)


def test_film_pair_off_resonance():
    s = spec(7e-7, 6.5e-7, t_peak=1.0)
    t, _ = md.film_pair(s, s, 2.0e15)
    d = np.diag(t.t).real
    assert np.all((d > 0) & (d < 1))
    assert np.all(t.t == np.diag(np.diag(t.t)))


def test_symmetry_ratio_examples():
    assert md.symmetry_ratio(7e-7, 7e-7, 1, 2e14, 12.0) == 1.0
    # choose l1 so that n l/L0 - n l/L1 = 1/(2 pi)
    ell = md.propagation_length(2e14, 12.0)
    l1 = 1.0 / (1.0 / 7e-7 - 1.0 / (2 * math.pi * ell))
    assert md.symmetry_ratio(7e-7, l1, 1, 2e14, 12.0) == pytest.approx(2.0, rel=1e-12)


def test_symmetry_ratio_matches_film_model(rng):
    for _ in range(100):
        l0 = rng.uniform(4e-7, 9e-7)
        l1 = l0 * rng.uniform(0.9, 1.1)
        n, g, eps = int(rng.integers(1, 3)), rng.uniform(5e13, 5e14), rng.uniform(2, 40)
        tp = rng.uniform(0.05, 1.0)
        w0 = md.plasmon_resonance(l0, n, eps)
        t1, t2 = md.film_pair(spec(l0, l1, n, g, tp, eps), spec(l0, l0, n, g, tp, eps), w0)
        ratio = md.tau(md.transmission_eigs(t1)) / md.tau(md.transmission_eigs(t2))
        assert ratio == pytest.approx(md.symmetry_ratio(l0, l1, n, g, eps), rel=1e-12)
        # numpy reference for the same media
        assert ratio == pytest.approx(tau_of(t1.t) / tau_of(t2.t), rel=1e-12)


def test_film_phases_do_not_change_observables(rng):
    s1, s2 = spec(7e-7, 6.8e-7), spec(7e-7, 7e-7)
    t1, t2 = md.film_pair(s1, s2, md.plasmon_resonance(7e-7, 1, 12.0))
    state = bp.make_state(random_state_matrix(rng))
    base = md.transmit(state, t1, t2)
    for _ in range(20):
        ph1 = np.diag(np.exp(1j * rng.uniform(0, 2 * math.pi, 2)))
        ph2 = np.diag(np.exp(1j * rng.uniform(0, 2 * math.pi, 2)))
        r = md.transmit(state, t1.t @ ph1, t2.t @ ph2)
        e = md.transmission_eigs(t1.t @ ph1)
        assert abs(e.t_plus - md.transmission_eigs(t1).t_plus) < 1e-15
        assert abs(r.z - md.transmit(bp.apply_local(state, ph1, ph2.T), t1, t2).z) < 1e-12
        # a phase on the output side only is a local unitary and leaves P fixed
        r_out = md.transmit(state, ph1 @ t1.t, ph2 @ t2.t)
        assert abs(r_out.p_out - base.p_out) < 1e-12 and abs(r_out.z - base.z) < 1e-12
        assert 0 <= r.p_out <= 1
