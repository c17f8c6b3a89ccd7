"""
Sinlets, coslets and their complex joint representation.

For a Mother-Phase ``theta`` with center ``t0`` and width ``sigma``::

    Sl_n(t)  = sqrt(2 theta') sin(pi (n+1) theta)
    Cl_n(t)  = sqrt(2 theta') cos(pi (n+1) theta)
    Psi_n(t) = Cl_n + i Sl_n = sqrt(2 theta') exp(i pi (n+1) theta)

Each ``Sl_n`` solves a time-dependent harmonic oscillator equation whose
squared frequency is ``(pi (n+1) theta')**2 + S(theta)/2``.

Index arguments broadcast against time arguments, so ``basis.sinlet(n[:, None], t)``
returns a table with one row per order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DomainError
from .phase import Family, PhaseFamily, eval_jet, schwarzian

_TINY = np.finfo(float).tiny

# Half-width (in units of sigma) of the window used for basis inner products.
DEFAULT_WINDOW = 10.0


def _orders(n) -> np.ndarray:
    n = np.asarray(n)
    if not np.issubdtype(n.dtype, np.integer):
        if not np.all(n == np.round(n)):
            raise DomainError("basis order must be an integer")
        n = n.astype(int)
    if np.any(n < 0):
        raise DomainError("basis order must be non-negative")
    return n


@dataclass(frozen=True)
class SinletBasis:
    """Sinlet/coslet basis generated by one Mother-Phase."""

    phase: PhaseFamily

    @classmethod
    def create(cls, family: Family | str, center: float = 0.0,
               width: float = 1.0) -> "SinletBasis":
        return cls(PhaseFamily(family, center, width))

    @property
    def family(self) -> Family:
        return self.phase.kind

    @property
    def center(self) -> float:
        return self.phase.center

    @property
    def width(self) -> float:
        return self.phase.width

    def amplitude(self, t) -> np.ndarray:
        """Common instantaneous amplitude ``sqrt(2 theta')``; exactly 0 on underflow."""
        d1 = eval_jet(self.phase, t).d1
        return np.sqrt(2.0 * np.where(d1 < _TINY, 0.0, d1))

    def _polar(self, n, t):
        n = _orders(n)
        jet = eval_jet(self.phase, t)
        d1 = np.where(jet.d1 < _TINY, 0.0, jet.d1)
        return np.sqrt(2.0 * d1), np.pi * (n + 1) * jet.theta

    def sinlet(self, n, t) -> np.ndarray:
        amp, arg = self._polar(n, t)
        return amp * np.sin(arg)

    def coslet(self, n, t) -> np.ndarray:
        amp, arg = self._polar(n, t)
        return amp * np.cos(arg)

    def psi(self, n, t) -> np.ndarray:
        amp, arg = self._polar(n, t)
        return amp * np.exp(1j * arg)

    def table(self, count: int, t, kind: str = "sin") -> np.ndarray:
        """Orders ``0..count-1`` evaluated on ``t``; shape ``(count, len(t))``."""
        n = np.arange(int(count))[:, None]
        t = np.asarray(t, dtype=float).ravel()[None, :]
        if kind == "sin":
            return self.sinlet(n, t)
        if kind == "cos":
            return self.coslet(n, t)
        raise DomainError(f"unknown basis kind {kind!r}")

    def inst_frequency(self, n, t) -> np.ndarray:
        """Instantaneous frequency ``(n+1) theta' / 2`` in cycles per time unit."""
        n = _orders(n)
        return 0.5 * (n + 1) * eval_jet(self.phase, t).d1

    def omega_squared(self, n, t) -> np.ndarray:
        """Squared frequency of the oscillator equation solved by sinlet ``n``."""
        n = _orders(n)
        d1 = eval_jet(self.phase, t).d1
        rate = np.pi * (n + 1) * d1
        return rate * rate + 0.5 * schwarzian(self.phase, t)

    def scale(self, alpha: float) -> "SinletBasis":
        """Basis with width ``sigma/alpha`` and the same center.

        ``sqrt(alpha) * old.sinlet(n, t0 + alpha*(t - t0)) == new.sinlet(n, t)``.
        """
        alpha = float(alpha)
        if not (math.isfinite(alpha) and alpha > 0.0):
            raise DomainError(f"scale factor must be positive, got {alpha}")
        if alpha == 1.0:
            return self
        return SinletBasis(self.phase.replace(width=self.width / alpha))

    def shift(self, delta: float) -> "SinletBasis":
        return SinletBasis(self.phase.replace(center=self.center + float(delta)))

    def window(self, halfwidth: float = DEFAULT_WINDOW) -> tuple[float, float]:
        return (self.center - halfwidth * self.width,
                self.center + halfwidth * self.width)


def inner_products(left: SinletBasis, count: int, *, kinds=("sin", "sin"),
                   right: SinletBasis | None = None,
                   halfwidth: float = DEFAULT_WINDOW,
                   tol: float = 1e-9) -> np.ndarray:
    """Matrix of ``integral f_k(t) g_m(t) dt`` for ``k, m < count``.

    The integral runs over ``center +/- halfwidth*width`` of ``left`` using
    adaptive Gauss-Kronrod quadrature on the whole matrix at once.
    """
    right = left if right is None else right
    a, b = left.window(halfwidth)

    def integrand(t):
        f = left.table(count, [t], kinds[0])[:, 0]
        g = right.table(count, [t], kinds[1])[:, 0]
        return np.outer(f, g).ravel()

    values, _ = integrate.quad_vec(integrand, a, b, epsabs=tol, epsrel=0.0,
                                   limit=4000)
    return values.reshape(count, count)


def gram_matrix(basis: SinletBasis, count: int, kind: str = "sin", **kwargs) -> np.ndarray:
    return inner_products(basis, count, kinds=(kind, kind), **kwargs)
