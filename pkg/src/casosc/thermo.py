"""Matsubara-summation thermodynamics of the mediated interaction.

The interaction free energy satisfies

    beta F = (1/2) sum_n ln(interaction_factor(zeta_n)),   zeta_n = 2 pi n / beta,

with the n = 0 term counted once and the +-n terms paired.  Every term
is <= 0 (see :func:`casosc.models.log_interaction_terms`) so the partial
sums are monotone, and the far tail decays at least as fast as zeta^-4,
which gives an integral-comparison bound used for adaptive truncation.

U = d(beta F)/d(beta) and S = -dF/dT are evaluated by central finite
differences with Richardson extrapolation.  The difference stencils
reuse the term count chosen adaptively at the center point, so the
differentiated quantity is a smooth function of beta or T and carries no
truncation-order jitter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .models import OscillatorModel, describe, log_interaction_terms, validate_stability

TWO_PI = 2.0 * math.pi
DEFAULT_REL_TOL = 1e-10
DEFAULT_N_MAX = 10_000_000
_CHUNK = 256          # Matsubara terms evaluated per vectorized batch
_REL_STEP = 1e-4      # relative step of the derivative stencils


class ConvergenceError(RuntimeError):
    """The Matsubara sum hit its term ceiling before meeting the tolerance."""

    def __init__(self, message: str, tail_bound: float):
        super().__init__(message)
        self.tail_bound = tail_bound


@dataclass(frozen=True)
class MatsubaraGrid:
    """Imaginary-frequency grid zeta_n = 2 pi n / beta with truncation policy."""

    beta: float
    rel_tol: float = DEFAULT_REL_TOL
    n_max_cap: int = DEFAULT_N_MAX

    def __post_init__(self):
        if not (math.isfinite(self.beta) and self.beta > 0.0):
            raise ValueError(f"beta must be finite and > 0, got {self.beta}")
        if not (0.0 < self.rel_tol <= 1e-3):
            raise ValueError(f"rel_tol must lie in (0, 1e-3], got {self.rel_tol}")
        if int(self.n_max_cap) != self.n_max_cap or self.n_max_cap < 1:
            raise ValueError(f"n_max_cap must be a positive integer, got {self.n_max_cap}")

    def frequency(self, n):
        return TWO_PI * np.asarray(n, dtype=float) / self.beta


def matsubara_paired_sum(term_fn, grid: MatsubaraGrid, zeta_floor: float,
                         n_terms: int | None = None) -> tuple[float, int]:
    """t(0) + 2 sum_{n>=1} t(zeta_n), adaptively truncated.

    term_fn maps an array of zeta values to an array of same-sign terms.
    Truncation stops once the paired tail bound 2|t_N| N/3 (the integral
    comparison for an n^-4 tail) drops below rel_tol times the partial
    sum; the bound only holds in the asymptotic regime, hence the
    zeta_floor gate.  With n_terms given, exactly that many paired terms
    are summed and no test is applied (used by derivative stencils).
    Returns (sum, terms used).
    """
    parts = [float(term_fn(np.zeros(1))[0])]
    n = 0
    if n_terms is not None:
        while n < n_terms:
            hi = min(n + _CHUNK, n_terms)
            ns = np.arange(n + 1, hi + 1)
            parts.append(2.0 * float(np.sum(term_fn(grid.frequency(ns)))))
            n = hi
        return math.fsum(parts), n
    while True:
        hi = min(n + _CHUNK, grid.n_max_cap)
        ns = np.arange(n + 1, hi + 1)
        terms = term_fn(grid.frequency(ns))
        parts.append(2.0 * float(np.sum(terms)))
        n = hi
        total = math.fsum(parts)
        t_last = float(terms[-1])
        tail = 2.0 * abs(t_last) * n / 3.0
        if total == 0.0 and t_last == 0.0:
            break  # identically zero series (uncoupled model)
        if float(grid.frequency(n)) >= zeta_floor and tail <= grid.rel_tol * abs(total):
            break
        if n >= grid.n_max_cap:
            raise ConvergenceError(
                f"Matsubara sum not converged after {n} paired terms "
                f"(tail bound {tail:.3g}, partial sum {total:.6g})", tail)
    return math.fsum(parts), n


def _zeta_floor(model: OscillatorModel) -> float:
    """Frequency beyond which the summand is safely in its power-law tail."""
    amax = max(model.a1, model.a2, max(a for a, _ in model.mediators))
    if model.momentum_coupled:
        mu = 1.0 / model.a1 + 1.0 / model.a2
        shift = mu * sum(c * c for _, c in model.mediators)
        amax = max(amax, max(a for a, _ in model.mediators) + shift)
    return 10.0 * math.sqrt(amax)


def _beta_f(model: OscillatorModel, beta: float, rel_tol: float, n_max_cap: int,
            n_terms: int | None = None) -> tuple[float, int]:
    grid = MatsubaraGrid(beta, rel_tol, n_max_cap)
    total, n = matsubara_paired_sum(
        lambda z: log_interaction_terms(model, z), grid, _zeta_floor(model), n_terms)
    return 0.5 * total, n


def _check_temperature(T: float) -> float:
    T = float(T)
    if not (math.isfinite(T) and T > 0.0):
        raise ValueError(f"T must be finite and > 0, got {T}")
    return T


def _richardson(g, x: float, h: float) -> float:
    """Central difference of g at x, Richardson-extrapolated from steps h and h/2."""
    d_h = (g(x + h) - g(x - h)) / (2.0 * h)
    d_h2 = (g(x + 0.5 * h) - g(x - 0.5 * h)) / h
    return (4.0 * d_h2 - d_h) / 3.0


def interaction_free_energy(model: OscillatorModel, T: float, *,
                            rel_tol: float = DEFAULT_REL_TOL,
                            n_max_cap: int = DEFAULT_N_MAX) -> float:
    """Interaction free energy F(T) <= 0 from the Matsubara sum."""
    T = _check_temperature(T)
    validate_stability(model)
    bf, _ = _beta_f(model, 1.0 / T, rel_tol, n_max_cap)
    return bf * T


def internal_energy(model: OscillatorModel, T: float, *,
                    rel_tol: float = DEFAULT_REL_TOL,
                    n_max_cap: int = DEFAULT_N_MAX) -> float:
    """Interaction internal energy U = d(beta F)/d(beta)."""
    T = _check_temperature(T)
    validate_stability(model)
    beta = 1.0 / T
    _, n = _beta_f(model, beta, rel_tol, n_max_cap)

    def g(b):
        return _beta_f(model, b, rel_tol, n_max_cap, n_terms=n)[0]

    return _richardson(g, beta, _REL_STEP * beta)


def entropy(model: OscillatorModel, T: float, *,
            rel_tol: float = DEFAULT_REL_TOL,
            n_max_cap: int = DEFAULT_N_MAX) -> float:
    """Interaction entropy S = -dF/dT; agrees with (U - F)/T to 1e-6."""
    T = _check_temperature(T)
    validate_stability(model)
    _, n = _beta_f(model, 1.0 / T, rel_tol, n_max_cap)

    def f(t):
        return _beta_f(model, 1.0 / t, rel_tol, n_max_cap, n_terms=n)[0] * t

    return -_richardson(f, T, _REL_STEP * T)


@dataclass(frozen=True)
class ThermoPoint:
    T: float
    F: float
    U: float
    S: float


@dataclass(frozen=True)
class NegativeEntropyInterval:
    """Temperature interval with S < 0; open_* flags mark grid-edge ends."""

    t_low: float
    t_high: float
    open_low: bool = False
    open_high: bool = False

    def bounds(self) -> tuple[float, float]:
        return (self.t_low, self.t_high)


@dataclass(frozen=True)
class ThermoCurve:
    rows: tuple[ThermoPoint, ...]
    intervals: tuple[NegativeEntropyInterval, ...]
    model_descriptor: dict


def _point(model: OscillatorModel, T: float, rel_tol: float, n_max_cap: int) -> ThermoPoint:
    beta = 1.0 / T
    bf, n = _beta_f(model, beta, rel_tol, n_max_cap)
    f_val = bf * T

    def g(b):
        return _beta_f(model, b, rel_tol, n_max_cap, n_terms=n)[0]

    def f(t):
        return _beta_f(model, 1.0 / t, rel_tol, n_max_cap, n_terms=n)[0] * t

    u_val = _richardson(g, beta, _REL_STEP * beta)
    s_val = -_richardson(f, T, _REL_STEP * T)
    if abs(s_val - (u_val - f_val) / T) > 1e-6 * max(1.0, abs(s_val)):
        raise RuntimeError(
            f"thermodynamic consistency failure at T={T:.6g}: "
            f"S={s_val:.12g}, (U-F)/T={(u_val - f_val) / T:.12g}")
    return ThermoPoint(T, f_val, u_val, s_val)


def sweep(model: OscillatorModel, temperatures, *,
          rel_tol: float = DEFAULT_REL_TOL,
          n_max_cap: int = DEFAULT_N_MAX) -> ThermoCurve:
    """Evaluate (F, U, S) over an ascending temperature grid.

    Negative-entropy intervals are located on the grid and refined by
    bisection; an empty grid yields an empty curve.
    """
    ts = [_check_temperature(t) for t in temperatures]
    if any(b <= a for a, b in zip(ts, ts[1:])):
        raise ValueError("temperature grid must be strictly ascending")
    validate_stability(model)
    rows = []
    for T in ts:
        try:
            rows.append(_point(model, T, rel_tol, n_max_cap))
        except ConvergenceError as exc:
            raise ConvergenceError(f"at T={T:.6g}: {exc}", exc.tail_bound) from exc
    intervals = ()
    if len(rows) >= 2:
        intervals = negative_entropy_intervals(
            rows, lambda t: entropy(model, t, rel_tol=rel_tol, n_max_cap=n_max_cap))
    return ThermoCurve(tuple(rows), tuple(intervals), describe(model))


def negative_entropy_intervals(rows, entropy_fn, *,
                               rel_width: float = 1e-4) -> tuple[NegativeEntropyInterval, ...]:
    """Temperature intervals where S < 0, from the sign pattern of the rows.

    Each sign change between adjacent grid points is refined by bisection
    on entropy_fn until the bracket is narrower than rel_width times the
    temperature.  A region still negative at the first or last grid point
    is reported with that edge as boundary and flagged open there.
    S identically >= 0 yields an empty tuple.
    """
    rows = list(rows)
    if len(rows) < 2:
        raise ValueError("need at least 2 rows to locate intervals")

    def refine(t_lo, s_lo, t_hi):
        lo, hi = t_lo, t_hi
        neg_lo = s_lo < 0.0
        while hi - lo > rel_width * hi:
            mid = 0.5 * (lo + hi)
            if (entropy_fn(mid) < 0.0) == neg_lo:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    intervals = []
    negative = rows[0].S < 0.0
    start = rows[0].T if negative else None
    open_low = negative
    for prev, cur in zip(rows, rows[1:]):
        if (cur.S < 0.0) == negative:
            continue
        crossing = refine(prev.T, prev.S, cur.T)
        if negative:
            intervals.append(NegativeEntropyInterval(start, crossing, open_low, False))
        else:
            start, open_low = crossing, False
        negative = not negative
    if negative:
        intervals.append(NegativeEntropyInterval(start, rows[-1].T, open_low, True))
    return tuple(intervals)
