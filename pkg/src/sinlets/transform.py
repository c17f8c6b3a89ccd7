"""
Forward and inverse sinlet/coslet transforms of sampled signals.

Coefficients are projections computed by trapezoidal quadrature on the
sample grid, restricted to ``t0 +/- 10 sigma``. Coefficients carry their
basis with them (:class:`CoefficientVector`), so every downstream
operation knows which family, center and width produced them.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .basis import DEFAULT_WINDOW, SinletBasis
from .errors import (AliasingError, DegenerateInputError, DomainError,
                     OrderOverflowError, ParameterError)
from .phase import eval_jet

_TINY = np.finfo(float).tiny


class Kind(str, enum.Enum):
    SIN = "sin"
    COS = "cos"


@dataclass(frozen=True, eq=False)
class SampledSignal:
    """Samples ``values[i] = u(times[i])`` on a strictly increasing grid."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        times = np.array(self.times, dtype=float).ravel()
        values = np.array(self.values, dtype=float).ravel()
        if times.size != values.size:
            raise DomainError("times and values differ in length")
        if times.size < 2:
            raise DomainError("a signal needs at least two samples")
        if not (np.all(np.isfinite(times)) and np.all(np.isfinite(values))):
            raise DomainError("signal contains non-finite samples")
        if np.any(np.diff(times) <= 0.0):
            raise DomainError("sample times must be strictly increasing")
        times.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.times.size

    @property
    def uniform(self) -> bool:
        steps = np.diff(self.times)
        return bool(np.allclose(steps, steps[0], rtol=1e-9, atol=0.0))

    @property
    def spacing(self) -> float:
        """Median sample spacing."""
        return float(np.median(np.diff(self.times)))

    @property
    def energy(self) -> float:
        return float(np.trapezoid(self.values ** 2, self.times))

    def with_values(self, values) -> "SampledSignal":
        return SampledSignal(self.times, values)


@dataclass(frozen=True, eq=False)
class CoefficientVector:
    """Generalized Fourier coefficients together with the basis that made them."""

    kind: Kind
    basis: SinletBasis
    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        coeffs = np.array(self.coeffs, dtype=float).ravel()
        if coeffs.size < 1:
            raise DomainError("coefficient vector is empty")
        if not np.all(np.isfinite(coeffs)):
            raise DomainError("coefficients must be finite")
        coeffs.flags.writeable = False
        object.__setattr__(self, "coeffs", coeffs)

    def __len__(self):
        return self.coeffs.size

    @property
    def family(self):
        return self.basis.family

    @property
    def center(self) -> float:
        return self.basis.center

    @property
    def width(self) -> float:
        return self.basis.width

    @property
    def energy(self) -> float:
        return float(np.dot(self.coeffs, self.coeffs))

    def truncate(self, count: int) -> "CoefficientVector":
        return CoefficientVector(self.kind, self.basis, self.coeffs[:count])


def _moments(signal: SampledSignal):
    power = signal.values ** 2
    total = np.trapezoid(power, signal.times)
    if not total > 0.0:
        raise DegenerateInputError("signal has zero energy")
    return power, total


def estimate_center(signal: SampledSignal) -> float:
    """Energy centroid ``int t u^2 dt / int u^2 dt``."""
    power, total = _moments(signal)
    return float(np.trapezoid(signal.times * power, signal.times) / total)


def estimate_width(signal: SampledSignal, c: float = 1.5) -> float:
    """``c`` times the energy-weighted RMS spread about the centroid, ``c`` in [1, 2]."""
    if not 1.0 <= c <= 2.0:
        raise ParameterError(f"spread multiplier c must lie in [1, 2], got {c}")
    power, total = _moments(signal)
    t0 = np.trapezoid(signal.times * power, signal.times) / total
    spread = np.trapezoid((signal.times - t0) ** 2 * power, signal.times) / total
    return float(c * math.sqrt(spread))


def estimate_basis(signal: SampledSignal, family, c: float = 1.5) -> SinletBasis:
    return SinletBasis.create(family, estimate_center(signal),
                              estimate_width(signal, c))


def estimate_nmax(basis: SinletBasis, nu_max: float, t_max: float) -> int:
    """Highest order whose instantaneous frequency at ``t_max`` reaches ``nu_max``.

    ``n_max = ceil(2 nu_max / theta'(t_max)) - 1``; the basis then holds
    ``n_max + 1`` functions.
    """
    if not nu_max > 0.0:
        raise ParameterError(f"nu_max must be positive, got {nu_max}")
    d1 = float(eval_jet(basis.phase, t_max).d1)
    ratio = 2.0 * nu_max / d1 if d1 >= _TINY else math.inf
    if not ratio < 2.0 ** 53:
        raise OrderOverflowError(
            f"t_max={t_max} lies so far in the tail that the required order "
            "overflows; reduce t_max or increase the width")
    return int(math.ceil(ratio)) - 1


def max_safe_order(basis: SinletBasis, spacing: float) -> int:
    """Largest basis size whose fastest member keeps 4 samples per period at ``t0``."""
    peak = float(eval_jet(basis.phase, basis.center).d1)
    return int(math.floor(1.0 / (2.0 * spacing * peak) + 1e-9))


def _check_order(count: int) -> int:
    if isinstance(count, bool) or int(count) != count or count < 1:
        raise ParameterError(f"number of basis functions must be a positive integer, got {count}")
    return int(count)


def decompose(signal: SampledSignal, basis: SinletBasis, count: int,
              kind: Kind | str = Kind.SIN,
              halfwidth: float = DEFAULT_WINDOW) -> CoefficientVector:
    """Project ``signal`` onto the first ``count`` sinlets (or coslets).

    Raises
    ------
    AliasingError
        If the median spacing inside the basis window exceeds
        ``1 / (4 nu_{count-1}(t0))``.
    """
    count = _check_order(count)
    kind = Kind(kind)
    lo, hi = basis.window(halfwidth)
    inside = (signal.times >= lo) & (signal.times <= hi)
    if np.count_nonzero(inside) < 2:
        raise DomainError("signal support does not overlap the basis window")
    t = signal.times[inside]
    u = signal.values[inside]
    spacing = float(np.median(np.diff(t)))
    safe = max_safe_order(basis, spacing)
    if count > safe:
        raise AliasingError(
            f"sample spacing {spacing:.3g} resolves at most {safe} basis functions "
            f"(requested {count})", safe)
    table = basis.table(count, t, kind.value)
    coeffs = np.trapezoid(table * u, t, axis=1)
    return CoefficientVector(kind, basis, coeffs)


def reconstruct(coeffs: CoefficientVector, grid) -> SampledSignal:
    """Weighted sum of the coefficient kind's basis functions on ``grid``."""
    grid = np.asarray(grid, dtype=float).ravel()
    table = coeffs.basis.table(len(coeffs), grid, coeffs.kind.value)
    return SampledSignal(grid, coeffs.coeffs @ table)


def coupling_matrix(count: int) -> np.ndarray:
    """``D[k, m] = integral Sl_k Cl_m dt`` in closed form (family, center and width free).

    ``1 - cos(pi j)`` is 0 for even ``j`` and 2 for odd ``j``, so the entries
    vanish whenever ``k + m`` is even and equal
    ``2/(pi (k+m+2)) + 2/(pi (k-m))`` otherwise.
    """
    count = _check_order(count)
    k = np.arange(count)[:, None]
    m = np.arange(count)[None, :]
    odd = (k + m) % 2 == 1
    diff = np.where(odd, k - m, 1)
    return np.where(odd, 2.0 / (np.pi * (k + m + 2)) + 2.0 / (np.pi * diff), 0.0)


def sin_to_cos(a: CoefficientVector) -> CoefficientVector:
    """Coslet coefficients ``b = D^T a``; never inverts ``D`` (singular for odd sizes)."""
    if a.kind is not Kind.SIN:
        raise DomainError("sin_to_cos expects sinlet coefficients")
    d = coupling_matrix(len(a))
    return CoefficientVector(Kind.COS, a.basis, d.T @ a.coeffs)


def cos_to_sin(b: CoefficientVector) -> CoefficientVector:
    """Sinlet coefficients ``a = D b``."""
    if b.kind is not Kind.COS:
        raise DomainError("cos_to_sin expects coslet coefficients")
    d = coupling_matrix(len(b))
    return CoefficientVector(Kind.SIN, b.basis, d @ b.coeffs)
