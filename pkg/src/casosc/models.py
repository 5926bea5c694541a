"""Harmonic oscillator models coupled through mediating modes.

Two oscillators, labelled 1 and 2, never couple directly; they interact
only through one or more mediator oscillators.  Two coupling types are
supported:

* ``tm3`` / ``tm_bath``: coordinate-coordinate coupling (TM-like), each
  mediator i contributes bilinear terms c_i x_j x_i for j = 1, 2.
* ``te3`` / ``te_bath``: momentum coupling (TE-like), the oscillator
  momenta couple to the mediator coordinates.  In the momentum
  representation the quadratic form keeps the same off-diagonal c_i
  entries but the mediator block is shifted to a_i d_il + c_i c_l mu
  with mu = 1/a1 + 1/a2.

Everything is evaluated at imaginary frequency zeta, where each mode
carries a response factor A = a + zeta^2.  Units hbar = k_B = 1 with unit
masses, so the a values are squared eigenfrequencies and every quantity
is dimensionless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

KINDS = ("tm3", "te3", "tm_bath", "te_bath")
TE_KINDS = ("te3", "te_bath")
THREE_BODY_KINDS = ("tm3", "te3")


class StabilityError(ValueError):
    """The model (or a requested evaluation) sits outside the stable regime."""


def _finite(name: str, value) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class OscillatorModel:
    """Two oscillators plus the mediators that carry their interaction.

    Parameters
    ----------
    kind : str
        One of ``tm3``, ``te3``, ``tm_bath``, ``te_bath``.  The ``*3``
        kinds take exactly one mediator, the ``*_bath`` kinds any number.
    a1, a2 : float
        Squared eigenfrequencies of the interacting oscillators.
    mediators : tuple of (a_i, c_i)
        Mediator squared eigenfrequency and its coupling strength to both
        oscillators (the coupling is the same toward 1 and 2).
    """

    kind: str
    a1: float
    a2: float
    mediators: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}, expected one of {KINDS}")
        object.__setattr__(self, "a1", _finite("a1", self.a1))
        object.__setattr__(self, "a2", _finite("a2", self.a2))
        if self.a1 <= 0.0 or self.a2 <= 0.0:
            raise ValueError("a1 and a2 must be > 0")
        med = tuple((_finite(f"mediators[{i}].a", a), _finite(f"mediators[{i}].c", c))
                    for i, (a, c) in enumerate(self.mediators))
        object.__setattr__(self, "mediators", med)
        if not med:
            raise ValueError("mediator list must be non-empty")
        if self.kind in THREE_BODY_KINDS and len(med) != 1:
            raise ValueError(f"{self.kind} takes exactly one mediator, got {len(med)}")
        for i, (a, _) in enumerate(med):
            if a <= 0.0:
                raise ValueError(f"mediators[{i}].a must be > 0, got {a}")

    @property
    def momentum_coupled(self) -> bool:
        return self.kind in TE_KINDS


def tm3(a1: float, a2: float, a3: float, c: float) -> OscillatorModel:
    """Coordinate-coupled pair with a single mediator."""
    return OscillatorModel("tm3", a1, a2, ((a3, c),))


def te3(a1: float, a2: float, a3: float, c: float) -> OscillatorModel:
    """Momentum-coupled pair with a single mediator."""
    return OscillatorModel("te3", a1, a2, ((a3, c),))


def tm_bath(a1: float, a2: float, mediators) -> OscillatorModel:
    return OscillatorModel("tm_bath", a1, a2, tuple(mediators))


def te_bath(a1: float, a2: float, mediators) -> OscillatorModel:
    return OscillatorModel("te_bath", a1, a2, tuple(mediators))


def uniform_bath(kind: str, a1: float = 1.0, a2: float = 1.0, n: int = 4,
                 k_max: float = 2.0, coupling: float = 0.25) -> OscillatorModel:
    """Deterministic mediator ladder approximating a continuum of modes.

    The mediators sit at a_i = k_i^2 on the uniform grid k_i = i*k_max/n,
    i = 1..n, with c_i^2 = coupling^2 * dk, so refining n at fixed k_max
    keeps the total coupling weight finite.
    """
    if kind not in ("tm_bath", "te_bath"):
        raise ValueError(f"uniform_bath builds bath kinds only, got {kind!r}")
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    k_max = _finite("k_max", k_max)
    if k_max <= 0.0:
        raise ValueError("k_max must be > 0")
    coupling = _finite("coupling", coupling)
    dk = k_max / int(n)
    mediators = tuple(((i * dk) ** 2, coupling * math.sqrt(dk)) for i in range(1, int(n) + 1))
    return OscillatorModel(kind, a1, a2, mediators)


def describe(model: OscillatorModel) -> dict:
    """Plain-data echo of the model, used in emitted output."""
    return {
        "kind": model.kind,
        "a1": model.a1,
        "a2": model.a2,
        "mediators": [[a, c] for a, c in model.mediators],
    }


class ResponseFactor(float):
    """A = a + zeta^2, the single-mode response denominator.

    A float in every arithmetic respect; .value spells out the scalar for
    callers that want the named field.
    """

    @property
    def value(self) -> float:
        return float(self)


def response_factor(a: float, zeta: float) -> ResponseFactor:
    """Evaluate A = a + zeta^2 at imaginary frequency zeta."""
    a = _finite("a", a)
    zeta = _finite("zeta", zeta)
    if a <= 0.0:
        raise ValueError(f"a must be > 0, got {a}")
    return ResponseFactor(a + zeta * zeta)


def _d_pair(model: OscillatorModel, z2):
    """D_1(zeta), D_2(zeta) for scalar or array z2 = zeta^2.

    Coordinate coupling:  D_j = (1/A_j) sum_i c_i^2 / A_i.
    Momentum coupling:    D_j = -(zeta^2 / (a_j A_j)) sum_i c_i^2 / A_i,
    which vanishes identically at zeta = 0 (the classical zero mode does
    not couple).
    """
    s = 0.0
    for a_i, c_i in model.mediators:
        s = s + (c_i * c_i) / (a_i + z2)
    a1, a2 = model.a1, model.a2
    if model.momentum_coupled:
        d1 = -(z2 / (a1 * (a1 + z2))) * s
        d2 = -(z2 / (a2 * (a2 + z2))) * s
    else:
        d1 = s / (a1 + z2)
        d2 = s / (a2 + z2)
    return d1, d2


@dataclass(frozen=True)
class InteractionQuantities:
    """D factors and the induced interaction factor at one frequency."""

    d1: float
    d2: float
    interaction_factor: float
    self_factors: tuple[float, float]


def d_factors(model: OscillatorModel, zeta: float) -> InteractionQuantities:
    """Evaluate D_1, D_2 and the interaction factor at one frequency.

    The interaction factor is 1 - D1 D2 / ((1-D1)(1-D2)); the (1-D_j)
    self factors carry each oscillator's own dressing by the mediators
    (radiation reaction) and are excluded from the interaction.
    """
    zeta = _finite("zeta", zeta)
    d1, d2 = _d_pair(model, zeta * zeta)
    s1, s2 = 1.0 - d1, 1.0 - d2
    if s1 <= 0.0 or s2 <= 0.0:
        raise StabilityError(
            f"singular self factor at zeta={zeta:.6g}: 1-D1={s1:.6g}, 1-D2={s2:.6g}")
    return InteractionQuantities(d1, d2, 1.0 - (d1 * d2) / (s1 * s2), (s1, s2))


def log_interaction_terms(model: OscillatorModel, zetas) -> np.ndarray:
    """ln(interaction_factor) at each zeta, as log1p(-x).

    x = D1 D2 / ((1-D1)(1-D2)) is >= 0 for both coupling types (the D_j
    share a sign), so every term is <= 0 and log1p keeps full precision
    deep in the x -> 0 tail.  This is the Matsubara summand.
    """
    z2 = np.asarray(zetas, dtype=float) ** 2
    d1, d2 = _d_pair(model, z2)
    s1 = 1.0 - d1
    s2 = 1.0 - d2
    if np.any(s1 <= 0.0) or np.any(s2 <= 0.0):
        raise StabilityError("self factor 1-D_j <= 0 on the frequency grid; model is unstable")
    x = (d1 * d2) / (s1 * s2)
    if np.any(x >= 1.0):
        raise StabilityError("interaction factor <= 0 on the frequency grid; model is unstable")
    return np.log1p(-x)


def coupling_matrix(model: OscillatorModel, part: str = "full") -> np.ndarray:
    """Symmetric matrix whose eigenvalues are squared eigenfrequencies.

    part selects the subsystem: "full" keeps both oscillators and all
    mediators, "pair1" / "pair2" keep one oscillator with all mediators,
    "bath" keeps the mediators alone.  For momentum-coupled kinds the
    mediator block gains c_i c_l * mu, where mu sums 1/a_j over the
    oscillators retained in the subsystem.
    """
    a_med = [a for a, _ in model.mediators]
    c_med = [c for _, c in model.mediators]
    m = len(a_med)
    if part == "bath":
        return np.diag(a_med).astype(float)
    if part == "full":
        osc = [model.a1, model.a2]
    elif part == "pair1":
        osc = [model.a1]
    elif part == "pair2":
        osc = [model.a2]
    else:
        raise ValueError(f"unknown subsystem {part!r}")
    k = len(osc)
    v = np.zeros((k + m, k + m))
    for j, aj in enumerate(osc):
        v[j, j] = aj
        for i, ci in enumerate(c_med):
            v[j, k + i] = v[k + i, j] = ci
    v[k:, k:] = np.diag(a_med)
    if model.momentum_coupled:
        mu = sum(1.0 / aj for aj in osc)
        v[k:, k:] += mu * np.outer(c_med, c_med)
    return v


def _cofactor_det(rows: list[list[float]]) -> float:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = 0.0
    sign = 1.0
    for j in range(n):
        pivot = rows[0][j]
        if pivot != 0.0:
            minor = [row[:j] + row[j + 1:] for row in rows[1:]]
            total += sign * pivot * _cofactor_det(minor)
        sign = -sign
    return total


def q_determinant_direct(model: OscillatorModel, zeta: float) -> float:
    """Full (2+M)x(2+M) response determinant, expanded by cofactors.

    Deliberately brute force and sharing no code with d_factors: this is
    the reference value the factored interaction form is tested against.
    """
    zeta = _finite("zeta", zeta)
    v = coupling_matrix(model, "full") + zeta * zeta * np.eye(2 + len(model.mediators))
    return _cofactor_det(v.tolist())


def scattering_form_factor(d1: float, d2: float) -> float:
    """1 - t1 t2 with t_j = d_j / (1 - d_j), the two-scatterer round trip.

    Algebraically identical to the interaction factor built from the same
    D values; kept as a separate route for identity tests.
    """
    d1 = _finite("d1", d1)
    d2 = _finite("d2", d2)
    if d1 == 1.0 or d2 == 1.0:
        raise StabilityError("d_j = 1 makes the scattering amplitude singular")
    return 1.0 - (d1 / (1.0 - d1)) * (d2 / (1.0 - d2))


def validate_stability(model: OscillatorModel) -> OscillatorModel:
    """Return the model unchanged iff every squared eigenfrequency is > 0."""
    from .spectrum import coupled_squared_frequencies  # deferred: spectrum builds on models

    w2 = coupled_squared_frequencies(model)
    if w2[0] <= 0.0:
        raise StabilityError(
            f"unstable model: lowest squared eigenfrequency is {w2[0]:.9g}")
    return model
