import math

import numpy as np
import pytest
from scipy.special import roots_legendre

from sinlets import (AliasingError, Basis2D, DomainError, GrayImage, ImageCoefficients,
                     ParameterError, basis2d_eval, dcr, dcr_bytes, image_decompose,
                     image_reconstruct, psnr)
from sinlets.experiments import smooth_image
from sinlets.image import max_axis_order, pixel_grid


def composite_legendre(lo, hi, panels=40, order=12):
    x, w = roots_legendre(order)
    edges = np.linspace(lo, hi, panels + 1)
    half = np.diff(edges) / 2
    mid = (edges[:-1] + edges[1:]) / 2
    return ((mid[:, None] + half[:, None] * x).ravel(), (half[:, None] * w).ravel())


def naive_coefficients(img, b, k1, k2, mapping):
    x, wx = pixel_grid(b.bx, img.width, mapping)
    y, wy = pixel_grid(b.by, img.height, mapping)
    out = np.zeros((k1, k2))
    for a in range(k1):
        for c in range(k2):
            total = 0.0
            for j in range(img.height):
                for i in range(img.width):
                    total += img.pixels[j, i] * basis2d_eval(b, a, c, x[i], y[j]) * wx[i] * wy[j]
            out[a, c] = total
    return out


class TestBasis2D:
    def test_center_value(self):
        b = Basis2D.create("logistic", (0.5, -1.0), (0.75, 1.5))
        assert basis2d_eval(b, 0, 0, 0.5, -1.0) == pytest.approx(
            b.bx.sinlet(0, 0.5) * b.by.sinlet(0, -1.0), rel=1e-15)

    def test_transpose_symmetry(self):
        b = Basis2D.create("erf", 0.0, 0.75)
        x, y = np.meshgrid(np.linspace(-3, 3, 13), np.linspace(-2, 2, 9))
        np.testing.assert_array_equal(basis2d_eval(b, 2, 5, x, y), basis2d_eval(b, 5, 2, y, x))

    def test_family_must_match(self):
        from sinlets import SinletBasis
        with pytest.raises(DomainError):
            Basis2D(SinletBasis.create("erf"), SinletBasis.create("logistic"))

    @pytest.mark.parametrize("family,center,width", [("logistic", (0.0, 0.0), (0.75, 0.75)),
                                                     ("erf", (0.3, -0.2), (0.6, 1.1))])
    def test_gram_by_tensor_quadrature(self, family, center, width):
        b = Basis2D.create(family, center, width)
        gx, wx = composite_legendre(center[0] - 10 * width[0], center[0] + 10 * width[0])
        gy, wy = composite_legendre(center[1] - 10 * width[1], center[1] + 10 * width[1])
        x, y = np.meshgrid(gx, gy, indexing="ij")
        w = np.outer(wx, wy)
        idx = [(k1, k2) for k1 in range(8) for k2 in range(8)]
        phi = np.array([basis2d_eval(b, k1, k2, x, y) * np.sqrt(w) for k1, k2 in idx])
        phi = phi.reshape(len(idx), -1)
        gram = phi @ phi.T
        assert np.abs(gram - np.eye(len(idx))).max() < 1e-5


class TestImageTypes:
    def test_gray_image_validation(self):
        with pytest.raises(DomainError):
            GrayImage(np.zeros(4))
        with pytest.raises(DomainError):
            GrayImage(np.array([[0.0, math.nan]]))

    def test_raw_values_kept(self):
        img = GrayImage([[1.5, -0.2]])
        assert img.pixels[0, 0] == 1.5
        np.testing.assert_array_equal(img.clamped().pixels, [[1.0, 0.0]])

    def test_coefficients_validation(self):
        b = Basis2D.create("erf")
        with pytest.raises(ParameterError):
            ImageCoefficients(b, np.ones((2, 2)), mapping="spiral")
        with pytest.raises(DomainError):
            ImageCoefficients(b, np.ones(3))


class TestPixelGrid:
    def test_phase_mapping_is_exactly_orthonormal(self):
        b = Basis2D.create("logistic", 0.0, 1.0).bx
        x, w = pixel_grid(b, 40, "phase")
        f = b.table(40, x) * np.sqrt(w)
        np.testing.assert_allclose(f @ f.T, np.eye(40), atol=1e-12)

    def test_uniform_mapping_span(self):
        b = Basis2D.create("erf", 0.0, 2.0).bx
        x, w = pixel_grid(b, 9, "uniform")
        np.testing.assert_allclose(x, np.linspace(-8, 8, 9))
        np.testing.assert_allclose(w, 2.0)

    def test_uniform_guard(self):
        b = Basis2D.create("logistic", 0.0, 1.0)
        img = GrayImage(np.ones((16, 16)))
        safe = max_axis_order(b.bx, 16, "uniform")
        assert safe == 3
        image_decompose(img, b, safe, safe, "uniform")
        with pytest.raises(AliasingError) as err:
            image_decompose(img, b, safe + 1, 2, "uniform")
        assert err.value.max_safe == safe

    def test_phase_guard(self):
        with pytest.raises(AliasingError):
            image_decompose(GrayImage(np.ones((8, 8))), Basis2D.create("erf"), 9, 8)

    def test_unknown_mapping(self):
        with pytest.raises(ParameterError):
            pixel_grid(Basis2D.create("erf").bx, 4, "polar")


class TestDecompose:
    @pytest.mark.parametrize("mapping,k", [("phase", 6), ("uniform", 3)])
    def test_separable_equals_naive(self, mapping, k):
        rng = np.random.default_rng(0)
        img = GrayImage(rng.uniform(size=(16, 16)))
        b = Basis2D.create("logistic", (0.2, -0.1), (1.0, 0.8))
        fast = image_decompose(img, b, k, k, mapping).coeffs
        np.testing.assert_allclose(fast, naive_coefficients(img, b, k, k, mapping),
                                   rtol=0, atol=1e-10)

    def test_zero_image(self):
        c = image_decompose(GrayImage(np.zeros((10, 12))), Basis2D.create("erf"), 5, 4)
        assert c.shape == (5, 4)
        assert not np.any(c.coeffs)

    def test_recovers_known_coefficients(self, family):
        b = Basis2D.create(family, 0.0, (1.0, 1.3))
        known = np.random.default_rng(3).standard_normal((8, 8))
        img = image_reconstruct(ImageCoefficients(b, known), 64, 48)
        got = image_decompose(img, b, 8, 8).coeffs
        assert np.abs(got - known).max() < 1e-4

    def test_rank_one_image(self, family):
        b = Basis2D.create(family, 0.0, 1.0)
        xs, _ = pixel_grid(b.bx, 40)
        ys, _ = pixel_grid(b.by, 30)
        u = np.exp(-xs ** 2 / 3) * (1 + 0.3 * xs)
        v = 1 / (1 + ys ** 2)
        img = GrayImage(np.outer(v, u))
        c = image_decompose(img, b, 12, 10).coeffs
        # one-dimensional projections per axis
        _, wx = pixel_grid(b.bx, 40)
        _, wy = pixel_grid(b.by, 30)
        cx = b.bx.table(12, xs) @ (u * wx)
        cy = b.by.table(10, ys) @ (v * wy)
        np.testing.assert_allclose(c, np.outer(cx, cy), atol=1e-6)
        s = np.linalg.svd(c, compute_uv=False)
        assert s[1] < 1e-10 * s[0]

    def test_provenance(self):
        c = image_decompose(GrayImage(np.ones((5, 7))), Basis2D.create("erf"), 3, 2)
        assert c.source == (7, 5) and c.mapping == "phase"


class TestReconstruct:
    def test_full_round_trip(self, family):
        img = GrayImage(smooth_image(64, 64))
        b = Basis2D.create(family, 0.0, 1.0)
        back = image_reconstruct(image_decompose(img, b, 64, 64), 64, 64)
        assert psnr(img, back) > 60

    def test_zero_coefficients(self):
        out = image_reconstruct(ImageCoefficients(Basis2D.create("erf"), np.zeros((3, 3))), 6, 5)
        assert out.pixels.shape == (5, 6)
        assert not np.any(out.pixels)

    def test_monotone_fidelity(self):
        img = GrayImage(smooth_image(48, 40))
        b = Basis2D.create("logistic", 0.0, 1.0)
        full = image_decompose(img, b, 48, 40).coeffs

        def quality(k1, k2):
            part = ImageCoefficients(b, full[:k1, :k2])
            return psnr(img, image_reconstruct(part, 48, 40))

        along_x = [quality(k, 40) for k in range(2, 49, 2)]
        along_y = [quality(48, k) for k in range(2, 41, 2)]
        assert all(a <= b + 1e-9 for a, b in zip(along_x, along_x[1:]))
        assert all(a <= b + 1e-9 for a, b in zip(along_y, along_y[1:]))

    def test_truncation_never_adds_energy(self):
        b = Basis2D.create("erf", 0.0, 1.0)
        c = np.random.default_rng(6).standard_normal((20, 20))
        _, wx = pixel_grid(b.bx, 20)
        _, wy = pixel_grid(b.by, 20)
        weights = np.outer(wy, wx)

        def energy(coeffs):
            px = image_reconstruct(ImageCoefficients(b, coeffs), 20, 20).pixels
            return float(np.sum(px ** 2 * weights))

        previous = energy(c)
        assert previous == pytest.approx(float(np.sum(c ** 2)), rel=1e-12)
        for k in range(19, 0, -1):
            c = c.copy()
            c[k:, :] = 0.0
            c[:, k:] = 0.0
            now = energy(c)
            assert now <= previous + 1e-12
            previous = now


class TestMetrics:
    def test_dcr_captions(self):
        assert round(dcr(200, 200, 281, 231), 4) == 0.6162
        assert round(dcr(210, 210, 332, 286), 4) == 0.4644
        assert dcr(200, 200, 281, 231) == 40000 / 64911

    def test_dcr_identity(self):
        assert dcr(31, 17, 31, 17) == 1.0

    def test_dcr_bytes(self):
        assert dcr_bytes(10, 10, 20, 20) == 2.0
        assert dcr_bytes(10, 10, 20, 20, coeff_bytes=4, pixel_bytes=2) == 0.5

    def test_dcr_rejects_non_positive(self):
        with pytest.raises(DomainError):
            dcr(0, 1, 1, 1)

    def test_psnr(self):
        a = GrayImage(np.zeros((4, 4)))
        assert psnr(a, a) == math.inf
        assert psnr(a, GrayImage(np.full((4, 4), 0.1))) == pytest.approx(20.0)
        with pytest.raises(DomainError):
            psnr(a, GrayImage(np.zeros((3, 4))))
