"""
Mother-Phase families.

A Mother-Phase is a smooth, strictly increasing function rising from 0 to 1
whose Schwarzian derivative is non-positive everywhere. Two closed families
are provided:

* ``erf``      -- ``theta = (1 + erf((t - t0) / (sigma*sqrt(2)))) / 2``
* ``logistic`` -- ``theta = 1 / (1 + exp(-(t - t0) / sigma))``

The error function is taken from :mod:`scipy.special` (``ndtr``, Cephes
rational approximations, relative error near 1 ulp on the whole real line).
Tails are evaluated through the complementary function so that
``theta`` keeps full relative accuracy as it approaches 0 or 1.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import special

from .errors import DomainError, PrecisionLossError

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_TINY = np.finfo(float).tiny

# Distance from the center (in widths) at which both tails count as sampled.
TAIL_REACH = 8.0


class Family(str, enum.Enum):
    ERF = "erf"
    LOGISTIC = "logistic"


class PhaseJet(NamedTuple):
    """Value of the phase and its first three time derivatives."""

    theta: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    d3: np.ndarray


@dataclass(frozen=True)
class PhaseFamily:
    """A Mother-Phase ``theta(t - center; width)``.

    Parameters
    ----------
    kind : Family or str
        ``"erf"`` or ``"logistic"``.
    center : float
        Localization center ``t0``.
    width : float
        Characteristic width ``sigma`` (must be positive).
    """

    kind: Family
    center: float = 0.0
    width: float = 1.0

    def __post_init__(self):
        try:
            kind = Family(self.kind)
        except ValueError:
            raise DomainError(f"unknown phase family {self.kind!r}") from None
        object.__setattr__(self, "kind", kind)
        center, width = float(self.center), float(self.width)
        if not math.isfinite(center):
            raise DomainError(f"center must be finite, got {center}")
        if not (math.isfinite(width) and width > 0.0):
            raise DomainError(f"width must be positive and finite, got {width}")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "width", width)

    def replace(self, **changes) -> "PhaseFamily":
        fields = {"kind": self.kind, "center": self.center, "width": self.width}
        fields.update(changes)
        return PhaseFamily(**fields)

    def _reduced(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if not np.all(np.isfinite(t)):
            raise DomainError("phase evaluated at a non-finite time")
        return (t - self.center) / self.width

    def theta(self, t) -> np.ndarray:
        """Phase value, in (0, 1)."""
        x = self._reduced(t)
        if self.kind is Family.ERF:
            return special.ndtr(x)
        return special.expit(x)

    def complement(self, t) -> np.ndarray:
        """``1 - theta(t)`` without cancellation in the upper tail."""
        x = self._reduced(t)
        if self.kind is Family.ERF:
            return special.ndtr(-x)
        return special.expit(-x)

    def rate(self, t) -> np.ndarray:
        """First derivative ``theta'(t)``."""
        return eval_jet(self, t).d1

    def inverse(self, p) -> np.ndarray:
        """Time at which the phase reaches ``p`` in (0, 1)."""
        p = np.asarray(p, dtype=float)
        if np.any((p <= 0.0) | (p >= 1.0)):
            raise DomainError("phase quantile must lie strictly inside (0, 1)")
        if self.kind is Family.ERF:
            x = special.ndtri(p)
        else:
            x = special.logit(p)
        return self.center + self.width * x


def eval_jet(phase: PhaseFamily, t) -> PhaseJet:
    """Evaluate ``theta`` and its first three analytic derivatives at ``t``.

    Logistic derivatives use the closed recurrences
    ``d1 = p*q/s``, ``d2 = d1*(q - p)/s``, ``d3 = (d2*(q - p) - 2*d1**2)/s``
    with ``p = theta`` and ``q = 1 - theta`` both computed directly, which
    keeps them accurate where ``exp`` would overflow or cancel.
    """
    x = phase._reduced(t)
    s = phase.width
    if phase.kind is Family.ERF:
        theta = special.ndtr(x)
        d1 = np.exp(-0.5 * x * x) / (s * _SQRT_2PI)
        d2 = -x / s * d1
        d3 = (x * x - 1.0) / (s * s) * d1
    else:
        p = special.expit(x)
        q = special.expit(-x)
        theta = p
        d1 = p * q / s
        d2 = d1 * (q - p) / s
        d3 = (d2 * (q - p) - 2.0 * d1 * d1) / s
    return PhaseJet(theta, d1, d2, d3)


def schwarzian(phase: PhaseFamily, t) -> np.ndarray:
    """Schwarzian derivative ``d3/d1 - 1.5*(d2/d1)**2`` of the phase.

    Raises
    ------
    PrecisionLossError
        If ``theta'`` is not a normal positive double at any requested time
        (erf family beyond roughly 37 widths, logistic beyond roughly 700).
    """
    jet = eval_jet(phase, t)
    if np.any(jet.d1 < _TINY):
        raise PrecisionLossError(
            "phase derivative underflows at the requested time; the Schwarzian "
            "is not representable there (move closer to the center or widen the basis)"
        )
    r2 = jet.d2 / jet.d1
    return jet.d3 / jet.d1 - 1.5 * r2 * r2


@dataclass(frozen=True)
class ValidityReport:
    """Outcome of checking the Mother-Phase conditions on a finite grid.

    ``tails`` is ``None`` when the grid does not reach far enough into both
    tails for the limits to be judged.
    """

    derivative: bool
    tails: bool | None
    schwarzian: bool
    notes: tuple[str, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return self.derivative and self.tails is True and self.schwarzian


def validate(phase: PhaseFamily, grid, *, tail_tol: float = 1e-10,
             slack: float = 1e-9) -> ValidityReport:
    """Check the three Mother-Phase conditions on ``grid``.

    1. ``theta' > 0`` and bounded (finite) at every grid point. Boundedness
       can only be checked on the grid itself.
    2. ``theta`` increases across the grid and approaches 0 and 1 at the grid
       extremes. Judged only when both extremes lie at least 8 widths from
       the center; otherwise reported as indeterminate. At each extreme the
       remaining distance to the limit must not exceed
       ``max(tail_tol, 2*width*theta')``, i.e. it must already be shrinking
       at least as fast as the derivative.
    3. ``S(theta) <= slack`` wherever the derivative is representable.
    """
    grid = np.asarray(grid, dtype=float).ravel()
    if grid.size == 0:
        raise DomainError("validation grid is empty")
    if np.any(np.diff(grid) < 0):
        raise DomainError("validation grid must be sorted")
    jet = eval_jet(phase, grid)
    notes = []

    derivative = bool(np.all(jet.d1 > 0.0) and np.all(np.isfinite(jet.d1)))
    if not derivative:
        notes.append("theta' vanished or diverged on the grid")

    s = phase.width
    lo, hi = grid[0], grid[-1]
    if phase.center - lo < TAIL_REACH * s or hi - phase.center < TAIL_REACH * s:
        tails = None
        notes.append("grid does not reach both tails; condition 2 indeterminate")
    else:
        monotone = bool(np.all(np.diff(jet.theta) >= -tail_tol))
        left = float(jet.theta[0])
        right = float(phase.complement(hi))
        left_ok = left <= max(tail_tol, 2.0 * s * float(jet.d1[0]))
        right_ok = right <= max(tail_tol, 2.0 * s * float(jet.d1[-1]))
        tails = monotone and left_ok and right_ok
        if not tails:
            notes.append(f"tail remainders {left:.3g} / {right:.3g} too large")

    usable = jet.d1 >= _TINY
    if not np.any(usable):
        sd_ok = False
        notes.append("no grid point with representable theta'")
    else:
        sd = schwarzian(phase, grid[usable])
        sd_ok = bool(np.all(sd <= slack))
        if not sd_ok:
            notes.append(f"Schwarzian reaches {float(sd.max()):.3g} > 0")
    return ValidityReport(derivative, tails, sd_ok, tuple(notes))
