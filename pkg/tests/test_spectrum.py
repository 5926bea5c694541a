"""Mode spectra: polynomial route vs. dense eigensolvers, and the mode sums."""

import math

import numpy as np
import pytest

from casosc import spectrum, verify
from casosc.models import (StabilityError, coupling_matrix, te3, te_bath, tm3,
                           uniform_bath)
from casosc.spectrum import (coupled_squared_frequencies, exact_free_energy,
                             mode_spectrum, oracle_coupling_free_energy,
                             oracle_entropy, oracle_interaction_free_energy,
                             oracle_internal_energy)


def test_tm_modes_match_eigvalsh():
    rng = np.random.default_rng(5)
    for model in verify.random_stable_models(rng, 20):
        if model.momentum_coupled:
            continue
        w2 = coupled_squared_frequencies(model)
        ref = np.linalg.eigvalsh(coupling_matrix(model, "full"))
        assert np.allclose(w2, ref, rtol=1e-10, atol=1e-12)


def test_te_polynomial_route_matches_mp_eigensolver():
    # duplicate mediator frequency plus a decoupled entry: the degenerate
    # cases the root solver has to reduce away before factoring
    model = te_bath(1.0, 2.0, ((0.5, 0.2), (0.5, 0.3), (1.5, 0.0), (2.5, 0.1)))
    w2 = coupled_squared_frequencies(model)
    ref = sorted(float(v) for v in spectrum._mp_squared_modes(model, "full"))
    assert np.allclose(w2, ref, rtol=1e-12, atol=0.0)


def test_uncoupled_spectrum_is_bare():
    for m in (te3(1.0, 1.0, 1.0, 0.0), tm3(0.5, 2.0, 1.25, 0.0)):
        sp = mode_spectrum(m)
        assert sp.coupled == sp.reference
    w2 = coupled_squared_frequencies(te3(0.5, 2.0, 1.25, 0.0))
    assert w2.tolist() == [0.5, 1.25, 2.0]


def test_mode_spectrum_shape_and_order():
    sp = mode_spectrum(uniform_bath("te_bath", n=5))
    assert len(sp.coupled) == 7 and len(sp.reference) == 7
    assert all(b > a for a, b in zip(sp.coupled, sp.coupled[1:]))
    assert all(w > 0.0 for w in sp.coupled)


def test_unstable_model_raises():
    # lowest squared eigenfrequency 1 - 2c^2 = -0.28
    with pytest.raises(StabilityError):
        mode_spectrum(tm3(1.0, 1.0, 1.0, 0.8))


def test_exact_free_energy_values():
    assert exact_free_energy([1.0, 1.0], 1.0) == pytest.approx(
        0.08264970922583622, rel=1e-14)
    assert exact_free_energy([1.0, 2.0], 0.0) == 1.5  # zero point only
    with pytest.raises(ValueError):
        exact_free_energy([1.0, -1.0], 1.0)
    with pytest.raises(ValueError):
        exact_free_energy([1.0], -0.5)


def test_exact_free_energy_matches_sinh_form():
    # F = T ln(2 sinh(w/2T)) per mode, the usual closed form
    rng = np.random.default_rng(13)
    for _ in range(25):
        w = float(rng.uniform(0.1, 4.0))
        t = float(rng.uniform(0.05, 50.0))
        want = t * math.log(2.0 * math.sinh(w / (2.0 * t)))
        assert exact_free_energy([w], t) == pytest.approx(want, rel=1e-12)


def test_oracle_combination_matches_float_route():
    # same four-spectrum combination, dense float eigensolver instead of mp
    model = verify.standard_te3(0.4)
    t = 1.0

    def f(part):
        w2 = np.linalg.eigvalsh(coupling_matrix(model, part))
        return exact_free_energy(np.sqrt(w2), t)

    want = f("full") + f("bath") - f("pair1") - f("pair2")
    assert oracle_interaction_free_energy(model, t) == pytest.approx(want, rel=1e-10)


def test_oracle_anchor_value():
    f0 = oracle_coupling_free_energy(verify.standard_tm3(), 0.0)
    assert f0 == pytest.approx(-0.023901000458011518, abs=5e-15)


def test_oracle_thermodynamic_identity():
    model = uniform_bath("te_bath", n=3)
    t = 0.7
    s = oracle_entropy(model, t)
    u = oracle_internal_energy(model, t)
    f = oracle_interaction_free_energy(model, t)
    assert s == pytest.approx((u - f) / t, rel=1e-10)
    with pytest.raises(ValueError):
        oracle_entropy(model, 0.0)
