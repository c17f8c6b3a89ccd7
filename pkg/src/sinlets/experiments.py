"""
Reproducible demonstrations on synthetic signals and images.

Each experiment returns plot-ready tables and a summary of the quantities
the property tests gate on.
Noise comes from ``numpy.random.default_rng(seed)`` (PCG64), so runs are
reproducible given ``seed``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .analysis import (DopplerParams, denoise, differentiate, doppler_echo,
                       envelope, fit_nonuniform)
from .basis import SinletBasis
from .image import (Basis2D, GrayImage, basis2d_eval, dcr, dcr_bytes,
                    image_decompose, image_reconstruct, psnr)
from .transform import (CoefficientVector, Kind, SampledSignal, decompose,
                        estimate_basis, estimate_nmax, reconstruct)


@dataclass
class Experiment:
    name: str
    description: str
    tables: dict[str, dict[str, np.ndarray]] = field(default_factory=dict)
    summary: dict[str, float | int | str] = field(default_factory=dict)


def _rms(x) -> float:
    return float(np.sqrt(np.mean(np.square(x))))


# test signals ---------------------------------------------------------------

BANDPASS_NU_MAX = 3.7
BANDPASS_T_MAX = 3.8
BANDPASS_C = 1.5


def bandpass_signal(t):
    """Two overlapping Gaussian-windowed tones, 1.2 Hz to 3.5 Hz, negligible past 3.8 s."""
    t = np.asarray(t, dtype=float)
    return (np.exp(-t ** 2 / (2 * 1.1 ** 2)) * np.cos(2 * np.pi * 2.2 * t)
            + 0.5 * np.exp(-(t + 0.8) ** 2 / (2 * 0.6 ** 2)) * np.sin(2 * np.pi * 3.2 * t))


def am_signal(t):
    """Gaussian pulse at 3 Hz with a slow 0.3 Hz amplitude modulation."""
    t = np.asarray(t, dtype=float)
    return np.exp(-t ** 2 / 2) * (1 + 0.5 * np.cos(2 * np.pi * 0.3 * t)) * np.cos(2 * np.pi * 3 * t)


def am_envelope(t):
    t = np.asarray(t, dtype=float)
    return np.exp(-t ** 2 / 2) * (1 + 0.5 * np.cos(2 * np.pi * 0.3 * t))


def smooth_transient(t):
    """Asymmetric smooth pulse used for the differentiation demo."""
    t = np.asarray(t, dtype=float)
    return np.exp(-t ** 2 / 8) * np.sin(0.9 * t + 0.4)


def smooth_transient_derivative(t):
    t = np.asarray(t, dtype=float)
    g = np.exp(-t ** 2 / 8)
    return g * (0.9 * np.cos(0.9 * t + 0.4) - t / 4 * np.sin(0.9 * t + 0.4))


def random_coefficients(count: int, rng: np.random.Generator, decay: float = 0.0) -> np.ndarray:
    n = np.arange(count)
    return rng.standard_normal(count) * np.exp(-decay * n)


def smooth_image(width: int, height: int) -> np.ndarray:
    """Band-limited test picture in [0, 1]: two blobs over a gentle gradient."""
    x = np.linspace(-1, 1, width)[None, :]
    y = np.linspace(-1, 1, height)[:, None]
    img = (0.35 + 0.15 * x - 0.1 * y
           + 0.3 * np.exp(-((x - 0.3) ** 2 + (y + 0.2) ** 2) / 0.08)
           + 0.2 * np.exp(-((x + 0.4) ** 2 + (y - 0.35) ** 2) / 0.05))
    return np.clip(img, 0.0, 1.0)


# basis tables ---------------------------------------------------------------

def _basis_traces(family, width, orders, grid, columns) -> dict[str, np.ndarray]:
    b = SinletBasis.create(family, 0.0, width)
    out = {"t": grid}
    for n in orders:
        for col in columns:
            if col == "sin":
                out[f"sl{n}"] = b.sinlet(n, grid)
            elif col == "cos":
                out[f"cl{n}"] = b.coslet(n, grid)
            elif col == "nu":
                out[f"nu{n}"] = b.inst_frequency(n, grid)
            elif col == "omega2":
                out[f"omega2_{n}"] = b.omega_squared(n, grid)
            elif col == "psi":
                out[f"abs_psi{n}"] = np.abs(b.psi(n, grid))
    return out


def erf_sinlets(seed=0, noise_sigma=None):
    grid = np.linspace(-10, 10, 2001)
    t = _basis_traces("erf", 2.0, range(8), grid, ["sin"])
    return Experiment("erf-sinlets", "first eight erf-family sinlets, t0=0, sigma=2",
                      {"sinlets": t}, {"peak_sl0": float(np.max(t["sl0"]))})


def erf_potentials(seed=0, noise_sigma=None):
    grid = np.linspace(-10, 10, 2001)
    t = _basis_traces("erf", 2.0, range(3), grid, ["omega2"])
    return Experiment("erf-potentials", "oscillator potentials of erf sinlets 0-2, sigma=2",
                      {"omega2": t}, {"omega2_0_at_center": float((math.pi - 1) / 8)})


def logistic_sinlets(seed=0, noise_sigma=None):
    grid = np.linspace(-20, 20, 2001)
    t = _basis_traces("logistic", 2.0, range(8), grid, ["sin"])
    return Experiment("logistic-sinlets", "first eight logistic-family sinlets, t0=0, sigma=2",
                      {"sinlets": t}, {"peak_sl0": float(np.max(t["sl0"]))})


def logistic_frequencies(seed=0, noise_sigma=None):
    grid = np.linspace(-20, 20, 2001)
    t = _basis_traces("logistic", 2.0, range(4), grid, ["nu"])
    peaks = {f"nu{n}_peak": float(np.max(t[f"nu{n}"])) for n in range(4)}
    return Experiment("logistic-frequencies", "instantaneous frequencies of logistic sinlets 0-3",
                      {"frequency": t}, peaks)


def logistic_potentials(seed=0, noise_sigma=None):
    grid = np.linspace(-20, 20, 2001)
    t = _basis_traces("logistic", 2.0, range(3), grid, ["omega2"])
    return Experiment("logistic-potentials",
                      "oscillator potentials of logistic sinlets 0-2, sigma=2",
                      {"omega2": t}, {"omega2_floor": -1.0 / 16})


def bandpass(seed=0, noise_sigma=None):
    t = np.arange(-12.0, 12.0, 0.005)
    u = bandpass_signal(t)
    if noise_sigma:
        u = u + np.random.default_rng(seed).normal(0.0, noise_sigma, t.size)
    sig = SampledSignal(t, u)
    basis = estimate_basis(sig, "logistic", BANDPASS_C)
    nmax = estimate_nmax(basis, BANDPASS_NU_MAX, BANDPASS_T_MAX)
    coeffs = decompose(sig, basis, nmax + 1)
    rec = reconstruct(coeffs, t).values
    spectrum = np.abs(np.fft.rfft(u)) * (t[1] - t[0]) * 2
    freq = np.fft.rfftfreq(t.size, t[1] - t[0])
    keep = freq <= 10.0
    clean = bandpass_signal(t)
    return Experiment(
        "bandpass", "bandpass transient, logistic sinlets with heuristic t0, sigma, n_max",
        {"signal": {"t": t, "u": u, "reconstructed": rec},
         "spectrum": {"frequency": freq[keep], "amplitude": spectrum[keep]},
         "coefficients": {"n": np.arange(nmax + 1), "a": coeffs.coeffs}},
        {"t0": basis.center, "sigma": basis.width, "n_max": nmax,
         "rms_residual": _rms(rec - clean),
         "relative_residual": _rms(rec - clean) / _rms(clean)})


def sinlet_coslet_pairs(seed=0, noise_sigma=None):
    grid = np.linspace(-20, 20, 2001)
    t = _basis_traces("logistic", 2.0, range(7), grid, ["sin", "cos"])
    return Experiment("sinlet-coslet-pairs", "logistic sinlets and coslets 0-6, sigma=2",
                      {"pairs": t}, {})


def joint_functions(seed=0, noise_sigma=None):
    grid = np.linspace(-20, 20, 2001)
    b = SinletBasis.create("logistic", 0.0, 2.0)
    t = {"t": grid}
    for n in range(7):
        psi = b.psi(n, grid)
        t[f"re{n}"], t[f"im{n}"] = psi.real, psi.imag
    t["abs"] = b.amplitude(grid)
    return Experiment("joint-functions", "joint complex functions Psi_n of logistic sinlets 0-6",
                      {"psi": t}, {})


DENOISE_ORDER = 12


def denoising(seed=0, noise_sigma=None):
    noise_sigma = 0.1 if noise_sigma is None else noise_sigma
    rng = np.random.default_rng(seed)
    basis = SinletBasis.create("logistic", 0.0, 1.0)
    t = np.arange(-10.0, 10.0, 0.01)
    a = random_coefficients(DENOISE_ORDER, rng, decay=0.15)
    clean = reconstruct(CoefficientVector(Kind.SIN, basis, a), t).values
    noisy = clean + rng.normal(0.0, noise_sigma, t.size)
    out = denoise(SampledSignal(t, noisy), basis, DENOISE_ORDER).values
    return Experiment(
        "denoise", "random 12-sinlet transient plus white noise, projected on 12 sinlets",
        {"signal": {"t": t, "clean": clean, "noisy": noisy, "denoised": out}},
        {"noise_rms": _rms(noisy - clean), "residual_rms": _rms(out - clean),
         "N": DENOISE_ORDER})


NONUNIFORM_ORDER = 32


def nonuniform_setup(rng: np.random.Generator):
    """Basis and coefficients of the random-sampling demo (logistic, t in [-5, 5])."""
    basis = SinletBasis.create("logistic", 0.0, 0.6)
    a = random_coefficients(NONUNIFORM_ORDER, rng, decay=0.08)
    return basis, a


def nonuniform(seed=0, noise_sigma=None, count=150):
    rng = np.random.default_rng(seed)
    basis, a = nonuniform_setup(rng)
    times = np.sort(rng.uniform(-5.0, 5.0, count))
    truth = CoefficientVector(Kind.SIN, basis, a)
    x = reconstruct(truth, times).values
    if noise_sigma:
        x = x + rng.normal(0.0, noise_sigma, count)
    fit = fit_nonuniform(SampledSignal(times, x), basis, NONUNIFORM_ORDER)
    dense = np.linspace(-5.0, 5.0, 2001)
    orig = reconstruct(truth, dense).values
    rec = reconstruct(fit, dense).values
    return Experiment(
        "nonuniform", f"{count} random samples on [-5, 5], K=32 logistic sinlets",
        {"samples": {"t": times, "x": x},
         "signal": {"t": dense, "original": orig, "reconstructed": rec}},
        {"N": count, "K": NONUNIFORM_ORDER, "rms_residual": _rms(rec - orig),
         "coeff_rms_error": _rms(fit.coeffs - a)})


def nonuniform_noisy(seed=0, noise_sigma=None):
    exp = nonuniform(seed, 0.05 if noise_sigma is None else noise_sigma, count=300)
    exp.name = "nonuniform-noisy"
    return exp


ENVELOPE_BASIS = ("erf", 0.0, 2.0)
ENVELOPE_ORDER = 124


def envelope_demo(seed=0, noise_sigma=None):
    t = np.arange(-20.0, 20.0, 0.004)
    u = am_signal(t)
    if noise_sigma:
        u = u + np.random.default_rng(seed).normal(0.0, noise_sigma, t.size)
    sig = SampledSignal(t, u)
    basis = SinletBasis.create(*ENVELOPE_BASIS)
    a = decompose(sig, basis, ENVELOPE_ORDER, "sin")
    b = decompose(sig, basis, ENVELOPE_ORDER, "cos")
    env_a = envelope(a, t).values
    env_b = envelope(b, t).values
    env_h = analytic_envelope(u)
    truth = am_envelope(t)
    core = np.abs(t) < 3.0
    return Experiment(
        "envelope", "AM Gaussian pulse: sinlet, coslet and analytic-signal envelopes",
        {"envelope": {"t": t, "u": u, "sinlet": env_a, "coslet": env_b,
                      "analytic": env_h, "true": truth}},
        {"peak": float(env_a.max()),
         "sin_vs_cos": float(np.abs(env_a - env_b).max() / env_a.max()),
         "sin_vs_analytic": float(np.abs(env_a - env_h)[core].max() / env_a.max()),
         "rms_error_sinlet": _rms((env_a - truth)[core]),
         "rms_error_analytic": _rms((env_h - truth)[core])})


def envelope_noisy(seed=0, noise_sigma=None):
    exp = envelope_demo(seed, 0.1 if noise_sigma is None else noise_sigma)
    exp.name = "envelope-noisy"
    return exp


def analytic_envelope(u) -> np.ndarray:
    """Magnitude of the discrete analytic signal."""
    from scipy.signal import hilbert
    return np.abs(hilbert(np.asarray(u, dtype=float)))


DERIVATIVE_ORDER = 14


def derivative(seed=0, noise_sigma=None):
    noise_sigma = 0.05 if noise_sigma is None else noise_sigma
    rng = np.random.default_rng(seed)
    t = np.arange(-12.0, 12.0, 0.01)
    u = smooth_transient(t) + rng.normal(0.0, noise_sigma, t.size)
    basis = SinletBasis.create("erf", 0.0, 3.0)
    coeffs = decompose(SampledSignal(t, u), basis, DERIVATIVE_ORDER)
    du = differentiate(coeffs, t, closed_form=True).values
    truth = smooth_transient_derivative(t)
    naive = np.gradient(u, t)
    return Experiment(
        "derivative", "noisy smooth transient differentiated through 14 erf sinlets",
        {"signal": {"t": t, "noisy": u, "derivative": du, "true_derivative": truth,
                    "finite_difference": naive}},
        {"rms_error": _rms(du - truth), "finite_difference_rms_error": _rms(naive - truth),
         "N": DERIVATIVE_ORDER})


def basis_2d(seed=0, noise_sigma=None):
    b = Basis2D.create("logistic", 0.0, 0.75)
    axis = np.linspace(-5, 5, 101)
    x, y = np.meshgrid(axis, axis)
    table = {"x": x.ravel(), "y": y.ravel()}
    for k1, k2 in [(0, 0), (1, 0), (0, 1), (1, 1), (2, 1), (3, 2)]:
        table[f"phi{k1}{k2}"] = basis2d_eval(b, k1, k2, x, y).ravel()
    return Experiment("basis-2d", "two-dimensional logistic sinlets, sigma=0.75",
                      {"functions": table}, {})


def doppler(seed=0, noise_sigma=None):
    rng = np.random.default_rng(seed)
    basis = SinletBasis.create("logistic", 0.0, 0.2)
    a = CoefficientVector(Kind.SIN, basis, random_coefficients(24, rng, decay=0.1))
    params = DopplerParams(1500.0, 15.0, 750.0)
    t = np.linspace(-4.0, 6.0, 20001)
    tx = reconstruct(a, t).values
    rx = doppler_echo(a, params, t).values
    direct = math.sqrt(params.alpha) * reconstruct(a, params.alpha * (t - params.delay)).values
    return Experiment(
        "doppler", "stored 24-sinlet waveform, echo at c=1500, v=15, range 750",
        {"waveform": {"t": t, "transmit": tx, "echo": rx}},
        {"alpha": params.alpha, "tau": params.delay,
         "max_mismatch": float(np.abs(rx - direct).max()),
         "energy_ratio": float(np.trapezoid(rx ** 2, t) / np.trapezoid(tx ** 2, t))})


def image_demo(seed=0, noise_sigma=None, width=281, height=231, k1=200, k2=200):
    img = GrayImage(smooth_image(width, height))
    b = Basis2D.create("logistic", 0.0, 1.0)
    c = image_decompose(img, b, k1, k2)
    rec = image_reconstruct(c, width, height)
    return Experiment(
        "image", f"smooth {width}x{height} picture coded with {k1}x{k2} coefficients",
        {"restored": {"row": np.repeat(np.arange(height), width),
                      "col": np.tile(np.arange(width), height),
                      "original": img.pixels.ravel(), "restored": rec.pixels.ravel()}},
        {"DCR": round(dcr(k1, k2, width, height), 4),
         "DCR_bytes": dcr_bytes(k1, k2, width, height),
         "PSNR": psnr(img, rec.clamped())})


EXPERIMENTS: dict[str, Callable[..., Experiment]] = {
    "erf-sinlets": erf_sinlets,
    "erf-potentials": erf_potentials,
    "logistic-sinlets": logistic_sinlets,
    "logistic-frequencies": logistic_frequencies,
    "logistic-potentials": logistic_potentials,
    "bandpass": bandpass,
    "sinlet-coslet-pairs": sinlet_coslet_pairs,
    "joint-functions": joint_functions,
    "denoise": denoising,
    "nonuniform": nonuniform,
    "nonuniform-noisy": nonuniform_noisy,
    "envelope": envelope_demo,
    "envelope-noisy": envelope_noisy,
    "derivative": derivative,
    "basis-2d": basis_2d,
    "doppler": doppler,
    "image": image_demo,
}
