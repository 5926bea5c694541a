"""Exact eigenmode route to the interaction thermodynamics.

The coupled system is still harmonic, so its free energy is an exact sum
of single-mode terms T ln(2 sinh(w/2T)) over the normal-mode frequencies.
This module computes those spectra and the mode-sum free energies that
the Matsubara summation in :mod:`casosc.thermo` is tested against.

The interaction part of the free energy corresponds to a four-spectrum
combination,

    F_int = F(full) + F(bath) - F(osc1+bath) - F(osc2+bath),

which removes each oscillator's own dressing by the mediators exactly as
the (1-D_j) self factors are removed from the interaction factor.  At
high temperature this combination cancels many digits (the momentum
coupled kinds leave a residue of order (beta w)^3), so the oracle sums
run in high-precision arithmetic and only the final value is rounded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache, reduce

import mpmath as mp
import numpy as np
from numpy.polynomial import polynomial as npoly

from .models import OscillatorModel, StabilityError, coupling_matrix

IMAG_TOL = 1e-10       # accepted |imag|/|real| leakage in polynomial roots
ORACLE_DPS = 50        # working precision (decimal digits) of the mp sums


@dataclass(frozen=True)
class ModeSpectrum:
    """Coupled and uncoupled eigenfrequencies of one model, ascending."""

    kind: str
    coupled: tuple[float, ...]
    reference: tuple[float, ...]


def characteristic_coefficients(model: OscillatorModel) -> np.ndarray:
    """Monic polynomial in u = omega^2 whose roots are the coupled modes.

    The response determinant, with all mediator denominators cleared,
    reads  Q(x) = A1 A2 prod_i A_i - (A1 + A2) S(x)  for coordinate
    coupling and  Q(x) = A1 A2 prod_i A_i + x (A2/a1 + A1/a2) S(x)  for
    momentum coupling, where x = zeta^2, A = a + x and
    S(x) = sum_i c_i^2 prod_{l != i} A_l.  Substituting x -> -u and
    normalising the sign gives the monic u-polynomial (ascending
    coefficients).
    """
    def lin(a):  # (a + x) as ascending coefficients
        return np.array([a, 1.0])

    med_a = [a for a, _ in model.mediators]
    med_c2 = [c * c for _, c in model.mediators]
    prod_med = reduce(npoly.polymul, [lin(a) for a in med_a])
    q = npoly.polymul(npoly.polymul(lin(model.a1), lin(model.a2)), prod_med)
    s = np.zeros(max(len(med_a), 1))
    for i, c2 in enumerate(med_c2):
        others = [lin(a) for j, a in enumerate(med_a) if j != i] or [np.array([1.0])]
        s = npoly.polyadd(s, c2 * reduce(npoly.polymul, others))
    if model.momentum_coupled:
        w = np.array([model.a2 / model.a1 + model.a1 / model.a2,
                      1.0 / model.a1 + 1.0 / model.a2])
        q = npoly.polyadd(q, npoly.polymul(np.array([0.0, 1.0]), npoly.polymul(w, s)))
    else:
        w = np.array([model.a1 + model.a2, 2.0])
        q = npoly.polyadd(q, -npoly.polymul(w, s))
    degree = len(q) - 1
    signs = (-1.0) ** (degree - np.arange(degree + 1))
    return q * signs


def coupled_squared_frequencies(model: OscillatorModel) -> np.ndarray:
    """Squared eigenfrequencies of the fully coupled system, ascending.

    Coordinate-coupled kinds diagonalize the symmetric coupling matrix.
    Momentum-coupled kinds find the zeros of the cleared-denominator
    response determinant through its companion matrix, then polish each
    root with two Newton steps.  Mediators with c_i = 0 decouple exactly
    and coincident mediator frequencies are merged (c_eff^2 = sum c_i^2,
    the orthogonal combinations stay put), keeping the polynomial free of
    multiple roots the companion matrix cannot resolve.
    """
    if not model.momentum_coupled:
        return np.linalg.eigvalsh(coupling_matrix(model, "full"))
    merged: dict[float, float] = {}
    passthrough = []
    for a, c in model.mediators:
        if c == 0.0:
            passthrough.append(a)
        elif a in merged:
            merged[a] += c * c
            passthrough.append(a)
        else:
            merged[a] = c * c
    if not merged:
        return np.sort(np.array([model.a1, model.a2] + passthrough))
    reduced = model
    if passthrough:
        reduced = OscillatorModel(
            model.kind, model.a1, model.a2,
            tuple((a, math.sqrt(c2)) for a, c2 in merged.items()))
    coeffs = characteristic_coefficients(reduced)
    roots = npoly.polyroots(coeffs)
    scale = np.maximum(1.0, np.abs(roots.real))
    if np.any(np.abs(roots.imag) > IMAG_TOL * scale):
        worst = roots[np.argmax(np.abs(roots.imag) / scale)]
        raise RuntimeError(f"complex root {worst} in the mode polynomial")
    w2 = np.sort(roots.real)
    deriv = npoly.polyder(coeffs)
    for _ in range(2):
        slope = npoly.polyval(w2, deriv)
        safe = np.abs(slope) > 1e-12
        w2 = w2 - np.where(safe, npoly.polyval(w2, coeffs) / np.where(safe, slope, 1.0), 0.0)
    if passthrough:
        w2 = np.concatenate([w2, passthrough])
    return np.sort(w2)


def mode_spectrum(model: OscillatorModel) -> ModeSpectrum:
    """Coupled and reference (uncoupled) eigenfrequencies of the model."""
    w2 = coupled_squared_frequencies(model)
    if w2[0] <= 0.0:
        raise StabilityError(
            f"unstable model: lowest squared eigenfrequency is {w2[0]:.9g}")
    bare = [model.a1, model.a2] + [a for a, _ in model.mediators]
    return ModeSpectrum(
        kind=model.kind,
        coupled=tuple(math.sqrt(v) for v in w2),
        reference=tuple(math.sqrt(a) for a in sorted(bare)),
    )


def exact_free_energy(spectrum, T: float) -> float:
    """Mode-sum free energy of independent modes at the given frequencies.

    T > 0: sum_k [w_k/2 + T ln(1 - exp(-w_k/T))], evaluated through expm1
    so both the deep quantum and the classical regime keep full relative
    precision.  T = 0: the zero-point sum alone.
    """
    ws = [float(w) for w in spectrum]
    if any(not math.isfinite(w) or w <= 0.0 for w in ws):
        raise ValueError("spectrum entries must be finite and > 0")
    T = float(T)
    if not math.isfinite(T) or T < 0.0:
        raise ValueError(f"T must be >= 0, got {T}")
    if T == 0.0:
        return 0.5 * math.fsum(ws)
    return math.fsum(0.5 * w + T * math.log(-math.expm1(-w / T)) for w in ws)


# -- high-precision internals ------------------------------------------------

def _mp_squared_modes(model: OscillatorModel, part: str):
    if part == "bath":
        return [mp.mpf(a) for a, _ in model.mediators]
    if part == "full":
        osc = [mp.mpf(model.a1), mp.mpf(model.a2)]
    elif part == "pair1":
        osc = [mp.mpf(model.a1)]
    else:
        osc = [mp.mpf(model.a2)]
    med_a = [mp.mpf(a) for a, _ in model.mediators]
    med_c = [mp.mpf(c) for _, c in model.mediators]
    k, m = len(osc), len(med_a)
    v = mp.zeros(k + m)
    for j, aj in enumerate(osc):
        v[j, j] = aj
        for i, ci in enumerate(med_c):
            v[j, k + i] = v[k + i, j] = ci
    mu = sum(1 / aj for aj in osc) if model.momentum_coupled else mp.mpf(0)
    for i in range(m):
        for l in range(m):
            v[k + i, k + l] = (med_a[i] if i == l else mp.mpf(0)) + mu * med_c[i] * med_c[l]
    return mp.eigsy(v, eigvals_only=True)


@lru_cache(maxsize=512)
def _mp_modes(model: OscillatorModel, part: str):
    # cached: the spectra are reused across every oracle temperature
    w2 = _mp_squared_modes(model, part)
    out = []
    for v in w2:
        if v <= 0:
            raise StabilityError(
                f"unstable model: squared eigenfrequency {float(v):.9g} in subsystem {part}")
        out.append(mp.sqrt(v))
    return tuple(out)


def _mp_free_energy(omegas, T):
    if T == 0:
        return sum(omegas) / 2
    return sum(w / 2 + T * mp.log(-mp.expm1(-w / T)) for w in omegas)


def _mp_internal_energy(omegas, T):
    if T == 0:
        return sum(omegas) / 2
    return sum((w / 2) * mp.coth(w / (2 * T)) for w in omegas)


def _check_oracle_temperature(T: float) -> float:
    T = float(T)
    if not math.isfinite(T) or T < 0.0:
        raise ValueError(f"T must be >= 0, got {T}")
    return T


def _mp_combination(model: OscillatorModel, T: float, mode_sum) -> float:
    with mp.workdps(ORACLE_DPS):
        t = mp.mpf(T)
        total = (mode_sum(_mp_modes(model, "full"), t)
                 + mode_sum(_mp_modes(model, "bath"), t)
                 - mode_sum(_mp_modes(model, "pair1"), t)
                 - mode_sum(_mp_modes(model, "pair2"), t))
        return float(total)


def oracle_interaction_free_energy(model: OscillatorModel, T: float) -> float:
    """Exact mode-sum value of the mediated interaction free energy.

    F(full) + F(bath) - F(osc1+bath) - F(osc2+bath): the subsystem sums
    subtract each oscillator's self dressing, leaving precisely the part
    the Matsubara sum of ln(interaction_factor) converges to.
    """
    T = _check_oracle_temperature(T)
    return _mp_combination(model, T, _mp_free_energy)


def oracle_internal_energy(model: OscillatorModel, T: float) -> float:
    """Exact mode-sum interaction internal energy, (w/2) coth(w/2T) per mode."""
    T = _check_oracle_temperature(T)
    return _mp_combination(model, T, _mp_internal_energy)


def oracle_entropy(model: OscillatorModel, T: float) -> float:
    """Exact interaction entropy (U - F)/T from the mode sums."""
    T = _check_oracle_temperature(T)
    if T == 0.0:
        raise ValueError("entropy oracle needs T > 0")
    with mp.workdps(ORACLE_DPS):
        t = mp.mpf(T)
        u = (_mp_internal_energy(_mp_modes(model, "full"), t)
             + _mp_internal_energy(_mp_modes(model, "bath"), t)
             - _mp_internal_energy(_mp_modes(model, "pair1"), t)
             - _mp_internal_energy(_mp_modes(model, "pair2"), t))
        f = (_mp_free_energy(_mp_modes(model, "full"), t)
             + _mp_free_energy(_mp_modes(model, "bath"), t)
             - _mp_free_energy(_mp_modes(model, "pair1"), t)
             - _mp_free_energy(_mp_modes(model, "pair2"), t))
        return float((u - f) / t)


def oracle_coupling_free_energy(model: OscillatorModel, T: float) -> float:
    """Free-energy shift of switching on all couplings: coupled minus bare.

    Unlike the interaction oracle this retains the (1-D_j) self-energy
    parts; at T = 0 it is half the zero-point shift of the full spectrum.
    """
    T = _check_oracle_temperature(T)
    with mp.workdps(ORACLE_DPS):
        t = mp.mpf(T)
        coupled = _mp_free_energy(_mp_modes(model, "full"), t)
        bare = [mp.sqrt(mp.mpf(model.a1)), mp.sqrt(mp.mpf(model.a2))]
        bare += [mp.sqrt(mp.mpf(a)) for a, _ in model.mediators]
        return float(coupled - _mp_free_energy(bare, t))
