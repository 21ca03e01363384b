import numpy as np
import pytest
from numpy.testing import assert_allclose

import mpmath

from bubblering.elliptic import (
    EllipticPair,
    ModulusError,
    complete_elliptic,
    ellipke,
    ellipke_complement,
    ellip_log_split,
    kc_minus_ec_over_q,
)


def mp_KE(k):
    # high working precision: near k = 1 the integrals are ill conditioned
    # in m = k^2 and the oracle itself needs guard digits
    with mpmath.workdps(40):
        m = mpmath.mpf(k) ** 2
        return float(mpmath.ellipk(m)), float(mpmath.ellipe(m))


def mp_KE_from_q(q):
    with mpmath.workdps(40):
        m = 1 - mpmath.mpf(q)
        return float(mpmath.ellipk(m)), float(mpmath.ellipe(m))


def test_special_values():
    pair = complete_elliptic(0.0)
    assert_allclose(pair.K, np.pi / 2, rtol=1e-15)
    assert_allclose(pair.E, np.pi / 2, rtol=1e-15)


def test_against_mpmath_grid():
    ks = np.concatenate([
        np.linspace(0.0, 0.99, 34),
        1.0 - np.logspace(-2, -8, 13),
    ])
    for k in ks:
        K, E = mp_KE(k)
        pair = complete_elliptic(k)
        assert_allclose(pair.K, K, rtol=5e-14)
        assert_allclose(pair.E, E, rtol=5e-14)


def test_vectorized_matches_scalar():
    k = np.linspace(0.0, 0.97, 40)
    K, E = ellipke(k)
    for i, ki in enumerate(k):
        pair = complete_elliptic(ki)
        assert_allclose(K[i], pair.K, rtol=1e-13)
        assert_allclose(E[i], pair.E, rtol=1e-13)


def test_legendre_relation_random():
    # K(k) E(k') + E(k) K(k') - K(k) K(k') = pi/2, for 1000 random moduli
    rng = np.random.default_rng(7)
    k = rng.uniform(1e-6, 1.0 - 1e-6, 1000)
    kp = np.sqrt((1.0 - k) * (1.0 + k))
    K, E = ellipke(k)
    Kp, Ep = ellipke(kp)
    lhs = K * Ep + E * Kp - K * Kp
    assert_allclose(lhs, np.pi / 2, rtol=1e-12)


def test_modulus_validation():
    with pytest.raises(ModulusError):
        complete_elliptic(1.0)
    with pytest.raises(ModulusError):
        complete_elliptic(-0.1)
    with pytest.raises(ModulusError):
        ellipke(np.array([0.5, 1.2]))
    with pytest.raises(ModulusError):
        ellipke_complement(np.array([0.0]))


def test_complement_form_accuracy():
    # q parameterization must stay accurate where 1 - k underflows detail
    for q in [1e-14, 1e-10, 1e-6, 1e-3, 0.5, 1.0]:
        K, E = ellipke_complement(np.array([q]))
        Km, Em = mp_KE_from_q(q)
        assert_allclose(K[0], Km, rtol=1e-13)
        assert_allclose(E[0], Em, rtol=1e-13)


def test_log_split_reassembles():
    # K = (1/pi) Kc ln(1/q) + RK and the E analogue, against mpmath with
    # the modulus defined exactly through q
    for q in np.logspace(-15, -0.05, 40):
        Kc, Ec, RK, RE = ellip_log_split(np.array([q]))
        L = np.log(1.0 / q)
        K = Kc[0] / np.pi * L + RK[0]
        E = (Kc[0] - Ec[0]) / np.pi * L + RE[0]
        Km, Em = mp_KE_from_q(q)
        assert_allclose(K, Km, rtol=2e-13)
        assert_allclose(E, Em, rtol=2e-13)


def test_split_pieces_are_smooth_at_zero():
    Kc, Ec, RK, RE = ellip_log_split(np.array([0.0]))
    assert_allclose(Kc[0], np.pi / 2, rtol=1e-15)
    assert_allclose(Ec[0], np.pi / 2, rtol=1e-15)
    assert_allclose(RK[0], 2.0 * np.log(2.0), rtol=1e-14)
    assert_allclose(RE[0], 1.0, rtol=1e-14)


def test_kc_minus_ec_over_q_limit():
    vals = kc_minus_ec_over_q(np.array([0.0, 1e-12, 1e-4]))
    assert_allclose(vals[0], np.pi / 4, rtol=1e-15)
    assert_allclose(vals[1], np.pi / 4, rtol=1e-10)
    # consistency across the series / direct switch
    lo = kc_minus_ec_over_q(np.array([0.3499]))
    hi = kc_minus_ec_over_q(np.array([0.3501]))
    assert abs(lo[0] - hi[0]) < 1e-3 * abs(lo[0])


def test_pair_is_frozen_record():
    pair = EllipticPair(k=0.5, K=1.0, E=1.0)
    with pytest.raises(Exception):
        pair.K = 2.0
