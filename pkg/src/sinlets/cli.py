"""
Command-line front end.

Every subcommand prints one ``key=value`` summary line on standard output.
Exit status: 0 ok, 2 usage, 3 unreadable or malformed input, 4 numerical or
domain error, 5 aliasing or rank deficiency.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import formats
from .analysis import (DopplerParams, denoise, differentiate, doppler_coefficients,
                       envelope, fit_nonuniform)
from .basis import SinletBasis
from .errors import AliasingError, FormatError, IllPosedError, SinletError
from .experiments import EXPERIMENTS
from .image import MAPPINGS, Basis2D, dcr, dcr_bytes, image_decompose, image_reconstruct, psnr
from .transform import (SampledSignal, cos_to_sin, decompose, estimate_center,
                        estimate_nmax, estimate_width, reconstruct, sin_to_cos)

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_DOMAIN, EXIT_ALIASING = 0, 2, 3, 4, 5


class UsageError(Exception):
    pass


def _summary(op: str, **fields) -> None:
    parts = [f"op={op}"]
    for key, value in fields.items():
        if isinstance(value, float):
            value = format(value, ".10g")
        parts.append(f"{key}={value}")
    print(" ".join(parts))


def parse_grid(text: str) -> np.ndarray:
    """``start:stop:count`` -> evenly spaced points, endpoints included."""
    parts = text.split(":")
    try:
        if len(parts) != 3:
            raise ValueError
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"grid must be START:STOP:COUNT, got {text!r}") from None
    if not (math.isfinite(start) and math.isfinite(stop)) or stop <= start or count < 2:
        raise UsageError(f"grid needs START < STOP and COUNT >= 2, got {text!r}")
    return np.linspace(start, stop, count)


def parse_orders(text: str) -> list[int]:
    """``0-7`` or ``0,2,5`` or a mix such as ``0-3,8``."""
    orders: list[int] = []
    for item in (p.strip() for p in text.split(",")):
        if not item:
            continue
        try:
            if "-" in item:
                lo, hi = (int(x) for x in item.split("-", 1))
                if lo > hi:
                    raise ValueError
                orders.extend(range(lo, hi + 1))
            else:
                orders.append(int(item))
        except ValueError:
            raise UsageError(f"bad order list {text!r}") from None
    if not orders:
        raise UsageError("order list is empty")
    if min(orders) < 0:
        raise UsageError("orders must be non-negative")
    return orders


def _with_noise(signal: SampledSignal, args) -> SampledSignal:
    if not args.noise_sigma:
        return signal
    if args.noise_sigma < 0:
        raise UsageError("--noise-sigma must be non-negative")
    rng = np.random.default_rng(args.seed)
    return signal.with_values(signal.values + rng.normal(0.0, args.noise_sigma, len(signal)))


def _basis_for(signal: SampledSignal, args) -> SinletBasis:
    center = estimate_center(signal) if args.center is None else args.center
    width = estimate_width(signal, args.c) if args.width is None else args.width
    return SinletBasis.create(args.family, center, width)


def _eval_grid(args, fallback=None) -> np.ndarray:
    if args.grid:
        return parse_grid(args.grid)
    if args.times:
        return formats.read_signal(args.times).times
    if fallback is not None:
        return fallback
    raise UsageError("give --grid START:STOP:COUNT or --times FILE")


def _rms(x) -> float:
    return float(np.sqrt(np.mean(np.square(x))))


# -- subcommands --------------------------------------------------------------

def cmd_basis(args) -> None:
    orders = parse_orders(args.orders)
    grid = parse_grid(args.grid)
    b = SinletBasis.create(args.family, args.center, args.width)
    columns = {"t": grid}
    for n in orders:
        columns[f"sl{n}"] = b.sinlet(n, grid)
        columns[f"cl{n}"] = b.coslet(n, grid)
        columns[f"nu{n}"] = b.inst_frequency(n, grid)
        columns[f"omega2_{n}"] = b.omega_squared(n, grid)
        columns[f"abs_psi{n}"] = np.abs(b.psi(n, grid))
    formats.write_table(args.output, columns)
    _summary("basis", family=b.family.value, N=len(orders), points=grid.size,
             peak_nu=float(max(np.max(columns[f"nu{n}"]) for n in orders)))


def cmd_estimate(args) -> None:
    signal = formats.read_signal(args.input)
    t0 = estimate_center(signal)
    sigma = estimate_width(signal, args.c)
    fields = dict(family=args.family, center=t0, width=sigma)
    if args.nu_max is not None:
        t_max = signal.times[-1] if args.t_max is None else args.t_max
        fields["n_max"] = estimate_nmax(SinletBasis.create(args.family, t0, sigma),
                                        args.nu_max, t_max)
    _summary("estimate", **fields)


def cmd_decompose(args) -> None:
    signal = _with_noise(formats.read_signal(args.input), args)
    basis = _basis_for(signal, args)
    coeffs = decompose(signal, basis, args.N, args.kind)
    formats.write_coefficients(args.output, coeffs)
    inside = (signal.times >= basis.window()[0]) & (signal.times <= basis.window()[1])
    back = reconstruct(coeffs, signal.times[inside]).values
    _summary("decompose", kind=coeffs.kind.value, N=len(coeffs), center=basis.center,
             width=basis.width, energy=coeffs.energy,
             residual=_rms(back - signal.values[inside]))


def cmd_reconstruct(args) -> None:
    coeffs = formats.read_coefficients(args.input)
    reference = formats.read_signal(args.reference) if args.reference else None
    grid = _eval_grid(args, None if reference is None else reference.times)
    out = reconstruct(coeffs, grid)
    formats.write_signal(args.output, out)
    fields = dict(kind=coeffs.kind.value, N=len(coeffs), energy=out.energy)
    if reference is not None:
        if not np.array_equal(reference.times, grid):
            raise UsageError("--reference must share the evaluation grid")
        fields["residual"] = _rms(out.values - reference.values)
    _summary("reconstruct", **fields)


def cmd_denoise(args) -> None:
    signal = _with_noise(formats.read_signal(args.input), args)
    basis = _basis_for(signal, args)
    out = denoise(signal, basis, args.N)
    formats.write_signal(args.output, out)
    _summary("denoise", N=args.N, center=basis.center, width=basis.width,
             energy=out.energy, residual=_rms(out.values - signal.values))


def cmd_envelope(args) -> None:
    coeffs = formats.read_coefficients(args.input)
    grid = _eval_grid(args)
    out = envelope(coeffs, grid)
    formats.write_signal(args.output, out)
    _summary("envelope", kind=coeffs.kind.value, N=len(coeffs), energy=out.energy,
             peak=float(out.values.max()))


def cmd_differentiate(args) -> None:
    coeffs = formats.read_coefficients(args.input)
    grid = _eval_grid(args)
    out = differentiate(coeffs, grid, closed_form=args.closed_form)
    formats.write_signal(args.output, out)
    _summary("differentiate", N=len(coeffs), energy=out.energy,
             peak=float(np.abs(out.values).max()))


def cmd_map(args) -> None:
    coeffs = formats.read_coefficients(args.input)
    out = sin_to_cos(coeffs) if coeffs.kind.value == "sin" else cos_to_sin(coeffs)
    formats.write_coefficients(args.output, out)
    _summary("map", kind=f"{coeffs.kind.value}->{out.kind.value}", N=len(out),
             energy=out.energy)


def cmd_resample(args) -> None:
    samples = formats.read_signal(args.input)
    clean = samples
    samples = _with_noise(samples, args)
    if args.center is None or args.width is None:
        raise UsageError("resample needs --center and --width")
    basis = SinletBasis.create(args.family, args.center, args.width)
    coeffs = fit_nonuniform(samples, basis, args.K)
    formats.write_coefficients(args.output, coeffs)
    fitted = reconstruct(coeffs, samples.times).values
    fields = dict(N=len(samples), K=args.K, energy=coeffs.energy,
                  residual=_rms(fitted - clean.values))
    if args.grid or args.times:
        grid = _eval_grid(args)
        formats.write_signal(args.signal_output or Path(args.output).with_suffix(".csv"),
                             reconstruct(coeffs, grid))
    _summary("resample", **fields)


def cmd_doppler(args) -> None:
    coeffs = formats.read_coefficients(args.input)
    params = DopplerParams(args.speed, args.velocity, args.range)
    echo = doppler_coefficients(coeffs, params, args.origin)
    formats.write_coefficients(args.output, echo)
    fields = dict(N=len(echo), alpha=params.alpha, tau=params.delay,
                  center=echo.center, width=echo.width, energy=echo.energy)
    if args.grid or args.times:
        grid = _eval_grid(args)
        formats.write_signal(args.signal_output or Path(args.output).with_suffix(".csv"),
                             reconstruct(echo, grid))
    _summary("doppler", **fields)


def cmd_img_encode(args) -> None:
    img = formats.read_image(args.input)
    b = Basis2D.create(args.family, (args.x_center, args.y_center), (args.x_width, args.y_width))
    k1 = args.K1 if args.K1 is not None else img.width
    k2 = args.K2 if args.K2 is not None else img.height
    coeffs = image_decompose(img, b, k1, k2, args.mapping)
    formats.write_image_coefficients(args.output, coeffs)
    restored = image_reconstruct(coeffs, img.width, img.height).clamped()
    _summary("img-encode", K=f"{k1}x{k2}", size=f"{img.width}x{img.height}",
             DCR=f"{dcr(k1, k2, img.width, img.height):.4f}",
             DCR_bytes=dcr_bytes(k1, k2, img.width, img.height),
             energy=float(np.sum(coeffs.coeffs ** 2)), PSNR=psnr(img, restored))


def cmd_img_decode(args) -> None:
    coeffs = formats.read_image_coefficients(args.input)
    if args.size:
        try:
            w, h = (int(v) for v in args.size.lower().split("x"))
        except ValueError:
            raise UsageError(f"--size must be WxH, got {args.size!r}") from None
        if w < 1 or h < 1:
            raise UsageError("--size must be positive")
    elif coeffs.source:
        w, h = coeffs.source
    else:
        raise UsageError("coefficient file has no source size; pass --size WxH")
    img = image_reconstruct(coeffs, w, h)
    formats.write_pgm(args.output, img)
    k1, k2 = coeffs.shape
    _summary("img-decode", K=f"{k1}x{k2}", size=f"{w}x{h}",
             DCR=f"{dcr(k1, k2, w, h):.4f}", energy=float(np.sum(coeffs.coeffs ** 2)))


def cmd_experiment(args) -> None:
    if args.name == "list":
        print("\n".join(EXPERIMENTS))
        return
    exp = EXPERIMENTS[args.name](seed=args.seed, noise_sigma=args.noise_sigma)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for table, columns in exp.tables.items():
        formats.write_table(out / f"{exp.name}_{table}.csv", columns)
    _summary(f"experiment:{exp.name}", **exp.summary)


# -- parser ---------------------------------------------------------------------

def _family(p, default="logistic"):
    p.add_argument("--family", choices=["erf", "logistic"], default=default)


def _placement(p, required=False):
    p.add_argument("--center", type=float, default=0.0 if required else None,
                   help="basis center t0 (estimated from the signal if omitted)")
    p.add_argument("--width", type=float, default=2.0 if required else None,
                   help="basis width sigma (estimated from the signal if omitted)")
    p.add_argument("--c", type=float, default=1.5, help="width multiplier in [1, 2]")


def _noise(p):
    p.add_argument("--noise-sigma", type=float, default=0.0,
                   help="add white Gaussian noise of this standard deviation to the input")
    p.add_argument("--seed", type=int, default=0, help="seed of the noise generator")


def _grid(p):
    p.add_argument("--grid", help="evaluation grid START:STOP:COUNT")
    p.add_argument("--times", help="take evaluation times from a signal file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sinlets",
                                     description="Sinlet and coslet transforms of transients and images.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("basis", help="tabulate basis functions")
    _family(p)
    p.add_argument("--center", type=float, default=0.0)
    p.add_argument("--width", type=float, default=2.0)
    p.add_argument("--orders", default="0-7", help="e.g. 0-7 or 0,2,5")
    p.add_argument("--grid", default="-20:20:2001")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("estimate", help="heuristic center, width and order")
    p.add_argument("input")
    _family(p)
    p.add_argument("--c", type=float, default=1.5)
    p.add_argument("--nu-max", type=float)
    p.add_argument("--t-max", type=float)
    p.set_defaults(func=cmd_estimate)

    for name, func, helptext in (("decompose", cmd_decompose, "signal -> coefficients"),
                                 ("denoise", cmd_denoise, "project a signal on N sinlets")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("input")
        p.add_argument("-N", type=int, required=True, help="number of basis functions")
        _family(p)
        _placement(p)
        _noise(p)
        if name == "decompose":
            p.add_argument("--kind", choices=["sin", "cos"], default="sin")
        p.add_argument("-o", "--output", required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("reconstruct", help="coefficients -> signal")
    p.add_argument("input")
    _grid(p)
    p.add_argument("--reference", help="signal file to report the RMS residual against")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_reconstruct)

    for name, func in (("envelope", cmd_envelope), ("differentiate", cmd_differentiate)):
        p = sub.add_parser(name, help=f"{name} of a coefficient expansion")
        p.add_argument("input")
        _grid(p)
        if name == "differentiate":
            p.add_argument("--closed-form", action="store_true",
                           help="use the Gaussian closed form (erf family only)")
        p.add_argument("-o", "--output", required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("map", help="sinlet <-> coslet coefficients via the coupling matrix")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("resample", help="least-squares fit to non-uniform samples")
    p.add_argument("input")
    p.add_argument("-K", type=int, required=True)
    _family(p)
    p.add_argument("--center", type=float)
    p.add_argument("--width", type=float)
    _noise(p)
    _grid(p)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--signal-output")
    p.set_defaults(func=cmd_resample)

    p = sub.add_parser("doppler", help="delayed, Doppler-scaled echo of a stored waveform")
    p.add_argument("input")
    p.add_argument("--speed", type=float, required=True, help="propagation speed c")
    p.add_argument("--velocity", type=float, default=0.0, help="radial velocity v")
    p.add_argument("--range", type=float, default=0.0, help="target distance")
    p.add_argument("--origin", type=float, help="time origin of the compression")
    _grid(p)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--signal-output")
    p.set_defaults(func=cmd_doppler)

    p = sub.add_parser("img-encode", help="grayscale PGM/PPM -> 2D coefficients")
    p.add_argument("input")
    p.add_argument("--K1", type=int)
    p.add_argument("--K2", type=int)
    _family(p)
    p.add_argument("--mapping", choices=MAPPINGS, default="phase")
    for axis in ("x", "y"):
        p.add_argument(f"--{axis}-center", type=float, default=0.0)
        p.add_argument(f"--{axis}-width", type=float, default=1.0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_img_encode)

    p = sub.add_parser("img-decode", help="2D coefficients -> PGM")
    p.add_argument("input")
    p.add_argument("--size", help="output WxH (defaults to the encoded size)")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_img_decode)

    p = sub.add_parser("experiment", help="regenerate a demonstration as CSV tables")
    p.add_argument("name", choices=["list", *EXPERIMENTS])
    p.add_argument("--outdir", default=".")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise-sigma", type=float)
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"sinlets: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FormatError, OSError) as exc:
        print(f"sinlets: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (AliasingError, IllPosedError) as exc:
        print(f"sinlets: error: {exc}", file=sys.stderr)
        return EXIT_ALIASING
    except SinletError as exc:
        print(f"sinlets: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
