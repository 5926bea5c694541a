"""Retarded dipole-dipole kernels and the two-dipole Casimir free energy.

Two polarizable dipoles a distance r apart (units hbar = k_B = c = 1)
interact through the retarded field kernels

    psi_DK(zeta, r)    = -(e^-tau / r^3) (1 + tau + tau^2/3),   tau = zeta r,
    psi_Delta(zeta, r) = -(2 e^-tau / 3 r^3) tau^2,

which combine along the eigenaxes of the direction dyad 3 rhat rhat - 1
(eigenvalues 2 and -1) into one longitudinal and two transverse
channels.  Each channel contributes a scalar scattering factor
ln(1 - alpha1 alpha2 psi^2) per Matsubara frequency, with the static
polarizability model alpha(zeta) = g / (a + zeta^2).

The psi_Delta channel vanishes at zeta = 0, so it has no classical
(n = 0) contribution; the psi_DK channel survives there.  This mirrors
the zero-mode split between the momentum-coupled and coordinate-coupled
oscillator models.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .models import OscillatorModel, StabilityError, _finite, d_factors, response_factor
from .thermo import DEFAULT_N_MAX, DEFAULT_REL_TOL, MatsubaraGrid, matsubara_paired_sum


@dataclass(frozen=True)
class DipolePair:
    """Two dipoles with alpha_j(zeta) = g_j / (a_j + zeta^2), separation r."""

    g1: float
    g2: float
    a1: float
    a2: float
    r: float

    def __post_init__(self):
        for name in ("g1", "g2", "a1", "a2", "r"):
            value = _finite(name, getattr(self, name))
            if value <= 0.0:
                raise ValueError(f"{name} must be > 0, got {value}")
            object.__setattr__(self, name, value)

    def polarizabilities(self, zeta):
        z2 = np.square(zeta)
        return self.g1 / (self.a1 + z2), self.g2 / (self.a2 + z2)


@dataclass(frozen=True)
class KernelValues:
    """Field kernels at one (r, zeta), with their axis combinations."""

    psi_dk: float
    psi_delta: float
    psi_par: float   # longitudinal channel, 2 psi_dk + psi_delta
    psi_perp: float  # transverse channel (doubly degenerate), -psi_dk + psi_delta


def kernels(r: float, zeta):
    """Retarded kernels at separation r and imaginary frequency zeta >= 0.

    zeta may be a scalar or an array; the KernelValues fields follow.
    At zeta = 0: psi_delta = 0 and psi_dk = -1/r^3 exactly.  The contact
    (delta-function) term is dropped, valid for r > 0.
    """
    r = _finite("r", r)
    if r <= 0.0:
        raise ValueError(f"r must be > 0, got {r}")
    zeta = np.asarray(zeta, dtype=float)
    if np.any(zeta < 0.0) or not np.all(np.isfinite(zeta)):
        raise ValueError("zeta must be finite and >= 0")
    tau = zeta * r
    damp = np.exp(-tau) / r**3
    psi_dk = -damp * (1.0 + tau + tau * tau / 3.0)
    psi_delta = -damp * (2.0 / 3.0) * tau * tau
    if zeta.ndim == 0:
        psi_dk, psi_delta = float(psi_dk), float(psi_delta)
    return KernelValues(psi_dk, psi_delta,
                        2.0 * psi_dk + psi_delta, -psi_dk + psi_delta)


def _channel_terms(pair: DipolePair, zetas):
    """ln(1 - a1 a2 psi_par^2) + 2 ln(1 - a1 a2 psi_perp^2), per zeta."""
    alpha1, alpha2 = pair.polarizabilities(zetas)
    kv = kernels(pair.r, zetas)
    product = alpha1 * alpha2
    x_par = product * np.square(kv.psi_par)
    x_perp = product * np.square(kv.psi_perp)
    worst = math.sqrt(max(np.max(x_par, initial=0.0), np.max(x_perp, initial=0.0)))
    if worst >= 1.0:
        raise StabilityError(
            f"dipole pair not in the convergent regime: |alpha psi| reaches {worst:.6g}")
    return np.log1p(-x_par) + 2.0 * np.log1p(-x_perp)


def pair_free_energy(pair: DipolePair, T: float, *,
                     rel_tol: float = DEFAULT_REL_TOL,
                     n_max_cap: int = DEFAULT_N_MAX) -> float:
    """Casimir free energy F(T) <= 0 of the pair from the Matsubara sum."""
    T = float(T)
    if not (math.isfinite(T) and T > 0.0):
        raise ValueError(f"T must be finite and > 0, got {T}")
    grid = MatsubaraGrid(1.0 / T, rel_tol, n_max_cap)
    # beyond this the summand is deep in its e^{-2 zeta r} tail and past
    # both polarizability resonances
    zeta_floor = max(10.0 / pair.r, 10.0 * math.sqrt(max(pair.a1, pair.a2)))
    total, _ = matsubara_paired_sum(
        lambda z: _channel_terms(pair, z), grid, zeta_floor)
    return 0.5 * total * T


def correspondence_check(model: OscillatorModel, zetas=None) -> dict:
    """Check alpha_K psi_K == D_j/(1 - D_j) for the dressed mapping.

    The mediated-oscillator interaction maps onto the dipole form with
    dressed polarizability alpha_K = 1/(A_j (1 - D_j)) and kernel
    psi_K = A_j D_j.  Returns the maximum absolute deviation between the
    two evaluation routes over the zeta grid (default {0} plus a
    geometric grid spanning [1e-3, 1e3]).
    """
    if zetas is None:
        zetas = np.concatenate(([0.0], np.geomspace(1e-3, 1e3, 121)))
    worst = 0.0
    worst_zeta = 0.0
    for zeta in np.asarray(zetas, dtype=float):
        quantities = d_factors(model, float(zeta))
        for d_j, a_j in ((quantities.d1, model.a1), (quantities.d2, model.a2)):
            big_a = response_factor(a_j, float(zeta))
            alpha_k = 1.0 / (big_a * (1.0 - d_j))
            psi_k = big_a * d_j
            deviation = abs(alpha_k * psi_k - d_j / (1.0 - d_j))
            if deviation > worst:
                worst, worst_zeta = deviation, float(zeta)
    return {"max_deviation": worst, "zeta_at_max": worst_zeta,
            "points": len(np.asarray(zetas))}


def dyadic_decomposition_check(r: float, zeta: float) -> dict:
    """Compare the closed-form field dyad with its kernel decomposition.

    The dyad [(3 rhat rhat - 1)(1 + tau + tau^2/3) - (2/3) tau^2] e^-tau / r^3
    must reproduce, entry by entry in the (longitudinal, transverse)
    eigenbasis, the kernel combination -psi_dk * (3 rhat rhat - 1)
    + psi_delta * 1.  Deviations are reported relative to the entry
    magnitude.
    """
    r = _finite("r", r)
    zeta = _finite("zeta", zeta)
    if r <= 0.0:
        raise ValueError(f"r must be > 0, got {r}")
    tau = abs(zeta) * r
    damp = math.exp(-tau) / r**3
    dk_part = 1.0 + tau + tau * tau / 3.0
    delta_part = (2.0 / 3.0) * tau * tau
    dyad_long = (2.0 * dk_part - delta_part) * damp
    dyad_trans = (-dk_part - delta_part) * damp
    kv = kernels(r, abs(zeta))
    kernel_long = -2.0 * kv.psi_dk + kv.psi_delta
    kernel_trans = kv.psi_dk + kv.psi_delta
    devs = {}
    for name, lhs, rhs in (("longitudinal", dyad_long, kernel_long),
                           ("transverse", dyad_trans, kernel_trans)):
        devs[name] = abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)
    devs["max_deviation"] = max(devs["longitudinal"], devs["transverse"])
    return devs
