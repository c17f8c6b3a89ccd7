"""
Separable two-dimensional sinlet bases and image transform coding.

``Phi_{k1 k2}(x, y) = Sl_{k1}(x - x0; sx) * Sl_{k2}(y - y0; sy)``.

Pixels are placed on a physical grid by one of two mappings:

``"phase"`` (default)
    Pixel ``i`` of ``W`` sits where the Mother-Phase equals ``(i+1)/(W+1)``
    and carries weight ``1/((W+1) theta'(x_i))``. This is the trapezoid rule
    in the phase coordinate; on it the first ``W`` sinlets are exactly
    orthonormal, so a full set of coefficients reproduces the image.
``"uniform"``
    Pixels are equally spaced over ``x0 +/- 4 sigma`` with midpoint weights.
    Only orders passing the 4-samples-per-period guard are accepted.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import SinletBasis
from .errors import AliasingError, DomainError, ParameterError
from .phase import Family
from .transform import max_safe_order

MAPPINGS = ("phase", "uniform")
UNIFORM_HALFSPAN = 4.0


@dataclass(frozen=True)
class Basis2D:
    """Tensor product of two sinlet bases of the same family."""

    bx: SinletBasis
    by: SinletBasis

    def __post_init__(self):
        if self.bx.family is not self.by.family:
            raise DomainError("both axes must use the same Mother-Phase family")

    @classmethod
    def create(cls, family: Family | str, center=(0.0, 0.0), width=(1.0, 1.0)) -> "Basis2D":
        if np.isscalar(width):
            width = (width, width)
        if np.isscalar(center):
            center = (center, center)
        return cls(SinletBasis.create(family, center[0], width[0]),
                   SinletBasis.create(family, center[1], width[1]))

    @property
    def family(self) -> Family:
        return self.bx.family


def basis2d_eval(b: Basis2D, k1, k2, x, y) -> np.ndarray:
    return b.bx.sinlet(k1, x) * b.by.sinlet(k2, y)


@dataclass(frozen=True, eq=False)
class GrayImage:
    """``pixels[row, col]`` with rows along y (height) and columns along x (width).

    Values are nominally in [0, 1]; reconstructions keep raw reals, which are
    clamped only when written to disk.
    """

    pixels: np.ndarray

    def __post_init__(self):
        px = np.array(self.pixels, dtype=float)
        if px.ndim != 2 or px.shape[0] < 1 or px.shape[1] < 1:
            raise DomainError("image must be a non-empty 2D array")
        if not np.all(np.isfinite(px)):
            raise DomainError("image contains non-finite pixels")
        px.flags.writeable = False
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def clamped(self) -> "GrayImage":
        return GrayImage(np.clip(self.pixels, 0.0, 1.0))


@dataclass(frozen=True, eq=False)
class ImageCoefficients:
    """``coeffs[k1, k2]`` (k1 along x, k2 along y) plus how they were produced."""

    basis: Basis2D
    coeffs: np.ndarray
    mapping: str = "phase"
    source: tuple[int, int] | None = None  # (width, height) of the encoded image

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.ndim != 2 or c.size == 0:
            raise DomainError("image coefficients must be a non-empty 2D array")
        if not np.all(np.isfinite(c)):
            raise DomainError("image coefficients must be finite")
        if self.mapping not in MAPPINGS:
            raise ParameterError(f"unknown pixel mapping {self.mapping!r}")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def shape(self) -> tuple[int, int]:
        return self.coeffs.shape


def pixel_grid(basis: SinletBasis, size: int, mapping: str = "phase"):
    """Physical coordinates and quadrature weights of ``size`` pixels along one axis."""
    if size < 1:
        raise DomainError("axis must hold at least one pixel")
    if mapping == "phase":
        p = np.arange(1, size + 1) / (size + 1)
        x = basis.phase.inverse(p)
        w = 1.0 / ((size + 1) * basis.phase.rate(x))
    elif mapping == "uniform":
        if size == 1:
            x = np.array([basis.center])
            w = np.array([2.0 * UNIFORM_HALFSPAN * basis.width])
        else:
            u = 2.0 * UNIFORM_HALFSPAN * np.arange(size) / (size - 1) - UNIFORM_HALFSPAN
            x = basis.center + basis.width * u
            w = np.full(size, 2.0 * UNIFORM_HALFSPAN * basis.width / (size - 1))
    else:
        raise ParameterError(f"unknown pixel mapping {mapping!r}")
    return x, w


def max_axis_order(basis: SinletBasis, size: int, mapping: str = "phase") -> int:
    if mapping == "phase":
        return size
    if size == 1:
        return 1
    return max(1, max_safe_order(basis, 2.0 * UNIFORM_HALFSPAN * basis.width / (size - 1)))


def _axis_matrix(basis: SinletBasis, count: int, size: int, mapping: str):
    x, w = pixel_grid(basis, size, mapping)
    return basis.table(count, x), w


def image_decompose(img: GrayImage, b: Basis2D, k1: int, k2: int,
                    mapping: str = "phase") -> ImageCoefficients:
    """Separable projection: rows against the x basis, then columns against y."""
    for name, k, basis, size in (("K1", k1, b.bx, img.width), ("K2", k2, b.by, img.height)):
        if int(k) != k or k < 1:
            raise ParameterError(f"{name} must be a positive integer")
        safe = max_axis_order(basis, size, mapping)
        if k > safe:
            raise AliasingError(
                f"{name}={k} exceeds the {safe} orders resolvable on {size} pixels "
                f"with the {mapping!r} mapping", safe)
    fx, wx = _axis_matrix(b.bx, int(k1), img.width, mapping)
    fy, wy = _axis_matrix(b.by, int(k2), img.height, mapping)
    weighted = img.pixels * wy[:, None] * wx[None, :]
    coeffs = (fx @ weighted.T) @ fy.T
    return ImageCoefficients(b, coeffs, mapping, (img.width, img.height))


def image_reconstruct(coeffs: ImageCoefficients, width: int, height: int) -> GrayImage:
    """Pixel values ``sum c_{k1 k2} Phi_{k1 k2}`` on a ``width x height`` grid."""
    k1, k2 = coeffs.shape
    fx, _ = _axis_matrix(coeffs.basis.bx, k1, width, coeffs.mapping)
    fy, _ = _axis_matrix(coeffs.basis.by, k2, height, coeffs.mapping)
    return GrayImage(fy.T @ coeffs.coeffs.T @ fx)


def dcr(k1: int, k2: int, width: int, height: int) -> float:
    """Data compression ratio: stored coefficients over original pixels."""
    if min(k1, k2, width, height) <= 0:
        raise DomainError("DCR arguments must be positive")
    return (k1 * k2) / (width * height)


def dcr_bytes(k1: int, k2: int, width: int, height: int,
              coeff_bytes: int = 8, pixel_bytes: int = 1) -> float:
    """Storage ratio counting bytes rather than values."""
    return dcr(k1, k2, width, height) * coeff_bytes / pixel_bytes


def psnr(reference: GrayImage, test: GrayImage, peak: float = 1.0) -> float:
    """Peak signal-to-noise ratio in dB; ``inf`` for identical images."""
    if reference.pixels.shape != test.pixels.shape:
        raise DomainError("images differ in size")
    mse = float(np.mean((reference.pixels - test.pixels) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(peak * peak / mse)
