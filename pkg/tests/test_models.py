"""Unit checks of response factors, D factors and the determinant routes."""

import math

import numpy as np
import pytest

from casosc import verify
from casosc.models import (OscillatorModel, StabilityError, coupling_matrix,
                           d_factors, describe, log_interaction_terms,
                           q_determinant_direct, response_factor,
                           scattering_form_factor, te3, tm3, uniform_bath,
                           validate_stability)


def test_response_factor_values():
    assert response_factor(1.0, 0.0) == 1.0
    assert response_factor(1.0, 2.0) == 5.0
    assert response_factor(0.25, 0.5) == 0.5
    # behaves as its value in arithmetic, and spells it out as a field
    r = response_factor(1.0, 2.0)
    assert isinstance(r, float)
    assert r.value == 5.0
    assert r + 1.0 == 6.0


def test_response_factor_rejects_bad_input():
    with pytest.raises(ValueError):
        response_factor(0.0, 1.0)
    with pytest.raises(ValueError):
        response_factor(-1.0, 1.0)
    with pytest.raises(ValueError):
        response_factor(1.0, math.nan)


def test_model_validation():
    with pytest.raises(ValueError):
        tm3(0.0, 1.0, 1.0, 0.3)
    with pytest.raises(ValueError):
        te3(1.0, math.inf, 1.0, 0.3)
    with pytest.raises(ValueError):
        OscillatorModel("bogus", 1.0, 1.0, ((1.0, 0.3),))
    with pytest.raises(ValueError):
        uniform_bath("tm3")  # three-body kinds are not bath kinds here
    m = tm3(1.0, 2.0, 3.0, 0.0)  # zero coupling is a valid (decoupled) model
    assert m.mediators == ((3.0, 0.0),)


def test_describe_round_trip():
    m = uniform_bath("te_bath", n=3)
    d = describe(m)
    assert d["kind"] == "te_bath"
    assert d["a1"] == 1.0 and d["a2"] == 1.0
    assert len(d["mediators"]) == 3
    assert d["mediators"][0] == [m.mediators[0][0], m.mediators[0][1]]


def test_uniform_bath_grid():
    m = uniform_bath("tm_bath", n=4, k_max=2.0, coupling=0.25)
    dk = 0.5
    for i, (a, c) in enumerate(m.mediators, start=1):
        assert a == pytest.approx((i * dk) ** 2, rel=1e-15)
        assert c == pytest.approx(0.25 * math.sqrt(dk), rel=1e-15)


def test_d_factors_tm3_zero_frequency():
    q = d_factors(verify.standard_tm3(), 0.0)
    assert q.d1 == pytest.approx(0.09, rel=1e-12)
    assert q.d2 == pytest.approx(0.09, rel=1e-12)
    assert q.self_factors[0] == pytest.approx(0.91, rel=1e-12)
    x = (0.09 / 0.91) ** 2
    assert q.interaction_factor == pytest.approx(1.0 - x, rel=1e-12)
    assert q.interaction_factor == pytest.approx(0.990219, abs=1e-6)


def test_d_factors_te3():
    q = d_factors(verify.standard_te3(), 1.0)
    assert q.d1 == pytest.approx(-0.0225, rel=1e-12)
    assert q.d2 == pytest.approx(-0.0225, rel=1e-12)
    # the zero mode decouples exactly, not merely to rounding
    q0 = d_factors(verify.standard_te3(), 0.0)
    assert q0.d1 == 0.0
    assert q0.d2 == 0.0
    assert q0.interaction_factor == 1.0


def test_d_factor_invariants_random():
    rng = np.random.default_rng(11)
    for model in verify.random_stable_models(rng, 40):
        for zeta in (0.0, 0.17, 1.0, 9.0):
            q = d_factors(model, zeta)
            if model.momentum_coupled:
                assert q.d1 <= 0.0 and q.d2 <= 0.0
            else:
                assert 0.0 <= q.d1 < 1.0 and 0.0 <= q.d2 < 1.0
            assert 0.0 < q.interaction_factor <= 1.0
            assert q.self_factors == (1.0 - q.d1, 1.0 - q.d2)


def test_singular_self_factor_raises():
    # s(0) = c^2/a3 = 3.2 makes D_j > 1
    with pytest.raises(StabilityError):
        d_factors(tm3(1.0, 1.0, 0.05, 0.4), 0.0)


def test_log_interaction_terms_instability():
    # D = 0.64 keeps the self factors positive but x = (D/(1-D))^2 > 1
    with pytest.raises(StabilityError):
        log_interaction_terms(tm3(1.0, 1.0, 1.0, 0.8), [0.0])


def test_log_interaction_terms_values():
    model = verify.standard_tm3()
    zs = np.array([0.0, 0.5, 2.0])
    terms = log_interaction_terms(model, zs)
    for t, z in zip(terms, zs):
        assert t == pytest.approx(math.log(d_factors(model, z).interaction_factor),
                                  rel=1e-14)
    assert np.all(terms < 0.0)


def test_q_determinant_tm3_example():
    assert q_determinant_direct(verify.standard_tm3(), 0.0) == pytest.approx(0.82, rel=1e-12)


def test_q_determinant_uncoupled_is_product():
    for m in (tm3(1.5, 2.0, 3.0, 0.0), te3(1.5, 2.0, 3.0, 0.0)):
        for zeta in (0.0, 0.7, 3.0):
            want = math.prod(a + zeta * zeta for a in (1.5, 2.0, 3.0))
            assert q_determinant_direct(m, zeta) == pytest.approx(want, rel=1e-13)


def test_q_determinant_matches_numpy():
    rng = np.random.default_rng(7)
    for model in verify.random_stable_models(rng, 20):
        zeta = float(rng.uniform(0.0, 3.0))
        v = coupling_matrix(model, "full") + zeta**2 * np.eye(2 + len(model.mediators))
        assert q_determinant_direct(model, zeta) == pytest.approx(
            float(np.linalg.det(v)), rel=1e-10)


def test_scattering_form_factor_examples():
    assert scattering_form_factor(0.0, 0.0) == 1.0
    assert scattering_form_factor(0.09, 0.09) == pytest.approx(0.990219, abs=1e-6)
    assert scattering_form_factor(-0.0225, -0.0225) == pytest.approx(0.999516, abs=1e-6)
    with pytest.raises(StabilityError):
        scattering_form_factor(1.0, 0.5)


def test_scattering_form_matches_interaction_factor():
    rng = np.random.default_rng(3)
    for model in verify.random_stable_models(rng, 20):
        zeta = float(rng.uniform(0.0, 4.0))
        q = d_factors(model, zeta)
        assert scattering_form_factor(q.d1, q.d2) == pytest.approx(
            q.interaction_factor, rel=1e-14)


def test_validate_stability():
    with pytest.raises(StabilityError):
        validate_stability(tm3(1.0, 1.0, 1.0, 0.8))
    m = te3(1.0, 1.0, 1.0, 0.0)
    assert validate_stability(m) is m
    validate_stability(uniform_bath("te_bath"))
