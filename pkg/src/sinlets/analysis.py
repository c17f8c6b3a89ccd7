"""
Applications of sinlet expansions to one-dimensional transients:
denoising, reconstruction from non-uniform samples, envelope detection,
differentiation and Doppler scaling of stored waveforms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .basis import SinletBasis
from .errors import DomainError, IllPosedError, ParameterError, UnsupportedKindError
from .phase import Family, eval_jet
from .transform import (CoefficientVector, Kind, SampledSignal, decompose,
                        reconstruct)


def denoise(signal: SampledSignal, basis: SinletBasis, count: int) -> SampledSignal:
    """Orthogonal projection of ``signal`` onto the first ``count`` sinlets."""
    coeffs = decompose(signal, basis, count)
    return reconstruct(coeffs, signal.times)


def suggest_order(coeffs: CoefficientVector, delta: float = 1e-3) -> int:
    """Smallest ``N`` whose leading coefficients hold ``(1 - delta)`` of the energy."""
    if not 0.0 <= delta < 1.0:
        raise ParameterError(f"delta must lie in [0, 1), got {delta}")
    energy = np.cumsum(coeffs.coeffs ** 2)
    if energy[-1] == 0.0:
        return 1
    return int(np.searchsorted(energy, (1.0 - delta) * energy[-1]) + 1)


def design_matrix(times, basis: SinletBasis, count: int) -> np.ndarray:
    """``F[i, k] = Sl_k(t_i)``, one row per sample."""
    return basis.table(count, times).T


def fit_nonuniform(samples: SampledSignal, basis: SinletBasis, count: int,
                   rcond: float = 1e-12) -> CoefficientVector:
    """Least-squares sinlet coefficients from arbitrarily spaced samples.

    Solved through a column-pivoted QR factorization of the design matrix
    (LAPACK ``gelsy``) instead of the normal equations, which would square
    the condition number.

    Raises
    ------
    IllPosedError
        If the design matrix has effective rank below ``count``.
    """
    if count < 1:
        raise ParameterError("number of sinlets must be positive")
    if count >= len(samples):
        raise ParameterError(
            f"need more samples than sinlets (got {len(samples)} samples for {count})")
    f = design_matrix(samples.times, basis, count)
    coeffs, _, rank, _ = linalg.lstsq(f, samples.values, cond=rcond,
                                      lapack_driver="gelsy")
    if rank < count:
        raise IllPosedError(
            f"design matrix has effective rank {rank} < {count}; samples do not "
            "cover the basis support", rank)
    return CoefficientVector(Kind.SIN, basis, coeffs)


def envelope(coeffs: CoefficientVector, grid) -> SampledSignal:
    """``|sum c_n Psi_n(t)|`` for sinlet or coslet coefficients alike."""
    grid = np.asarray(grid, dtype=float).ravel()
    basis = coeffs.basis
    jet = eval_jet(basis.phase, grid)
    n = np.arange(len(coeffs))[:, None]
    phasor = coeffs.coeffs @ np.exp(1j * np.pi * (n + 1) * jet.theta)
    return SampledSignal(grid, basis.amplitude(grid) * np.abs(phasor))


def differentiate(coeffs: CoefficientVector, grid, *,
                  closed_form: bool = False) -> SampledSignal:
    """Time derivative of the sinlet expansion.

    ``u' = sum a_n (theta''/(2 theta') Sl_n + pi (n+1) theta' Cl_n)``.
    With ``closed_form=True`` (erf family only) the Gaussian specialization
    ``(t0 - t)/(2 sigma^2) Sl_n + sqrt(pi/2)(n+1)/sigma exp(-(t-t0)^2/(2 sigma^2)) Cl_n``
    is used instead.
    """
    if coeffs.kind is not Kind.SIN:
        raise UnsupportedKindError(
            "differentiation needs sinlet coefficients; convert with cos_to_sin first")
    grid = np.asarray(grid, dtype=float).ravel()
    basis = coeffs.basis
    count = len(coeffs)
    n = np.arange(count)[:, None]
    sl = basis.table(count, grid, "sin")
    cl = basis.table(count, grid, "cos")
    if closed_form:
        if basis.family is not Family.ERF:
            raise UnsupportedKindError("the closed-form derivative exists only for the erf family")
        x = grid - basis.center
        s = basis.width
        drift = (-x / (2.0 * s * s))
        rate = math.sqrt(math.pi / 2.0) * (n + 1) / s * np.exp(-x * x / (2.0 * s * s))
    else:
        jet = eval_jet(basis.phase, grid)
        with np.errstate(divide="ignore", invalid="ignore"):
            drift = np.where(jet.d1 > 0.0, jet.d2 / (2.0 * jet.d1), 0.0)
        rate = np.pi * (n + 1) * jet.d1
    values = coeffs.coeffs @ (drift * sl + rate * cl)
    return SampledSignal(grid, values)


@dataclass(frozen=True)
class DopplerParams:
    """Propagation speed ``c``, radial velocity ``v`` (positive = receding) and range."""

    propagation_speed: float
    radial_velocity: float = 0.0
    distance: float = 0.0

    def __post_init__(self):
        c, v, d = (float(self.propagation_speed), float(self.radial_velocity),
                   float(self.distance))
        if not (math.isfinite(c) and c > 0.0):
            raise DomainError(f"propagation speed must be positive, got {c}")
        if not (math.isfinite(v) and abs(v) < c):
            raise DomainError(f"|radial velocity| must be below the propagation speed ({v} vs {c})")
        if not (math.isfinite(d) and d >= 0.0):
            raise DomainError(f"range must be non-negative, got {d}")

    @property
    def alpha(self) -> float:
        """Doppler time-scale factor ``(c - v)/(c + v)``."""
        c, v = self.propagation_speed, self.radial_velocity
        return (c - v) / (c + v)

    @property
    def delay(self) -> float:
        """Round-trip delay ``2 D / c``."""
        return 2.0 * self.distance / self.propagation_speed


def doppler_coefficients(coeffs: CoefficientVector, params: DopplerParams,
                         origin: float | None = None) -> CoefficientVector:
    """Echo coefficients: same values, basis moved by the delay and narrowed by ``alpha``.

    The echo is ``sqrt(alpha) w(o + alpha (t - tau - o))`` where ``o`` is the
    time origin of the compression. By default ``o`` is the waveform center,
    giving the echo basis center ``t0 + tau``; pass ``origin=0.0`` to
    compress about the transmit clock instead (center ``tau + t0/alpha``).
    """
    if coeffs.kind is not Kind.SIN:
        raise UnsupportedKindError("Doppler emulation needs sinlet coefficients")
    alpha, tau = params.alpha, params.delay
    basis = coeffs.basis
    o = basis.center if origin is None else float(origin)
    center = tau + o + (basis.center - o) / alpha
    echo = SinletBasis(basis.phase.replace(center=center, width=basis.width / alpha))
    return CoefficientVector(Kind.SIN, echo, coeffs.coeffs)


def doppler_echo(coeffs: CoefficientVector, params: DopplerParams, grid,
                 origin: float | None = None) -> SampledSignal:
    """Doppler-scaled, delayed echo of the waveform held in ``coeffs``."""
    return reconstruct(doppler_coefficients(coeffs, params, origin), grid)
