"""Command-line surface.

Exit codes: 0 success, 1 usage/parameter error, 2 data or file-format error.
"""
from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from .bottleneck import bottleneck_distance
from .core import ScalarSample
from .denoise import METHODS
from .dtm import dtm_filter, dtm_self, k_from_mass
from .fileio import (
    FormatError,
    read_diagram_csv,
    read_points_csv,
    write_diagram_csv,
    write_diagram_svg,
    write_points_csv,
)
from .images import psnr, read_pgm
from .metrics import gap
from .neighbors import NeighborIndex
from .noisegen import (
    Clutter,
    GaussianFunctional,
    GaussianGeometric,
    ImpulseConstant,
    ImpulseUniform,
    apply_noise,
    sample_bone,
    sample_circle,
)
from .pipeline import PipelineConfig, denoise_with, eta_from_percentile, run_pipeline

__all__ = ["main"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _fmt(x: float) -> str:
    return "inf" if math.isinf(x) else repr(float(x))


def _add_noise_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--impulse-uniform", nargs=3, type=float, metavar=("P", "LO", "HI"),
                   help="replace each value with prob P by a uniform draw from [LO, HI]")
    p.add_argument("--impulse-constant", nargs=2, type=float, metavar=("P", "VALUE"),
                   help="replace each value with prob P by VALUE")
    p.add_argument("--gaussian-functional", type=float, metavar="SIGMA",
                   help="add N(0, SIGMA^2) noise to every value")
    p.add_argument("--gaussian-geometric", type=float, metavar="SIGMA",
                   help="add N(0, SIGMA^2) noise to every coordinate")
    p.add_argument("--clutter", type=int, metavar="COUNT",
                   help="append COUNT uniform points in the sample bounding box")


def _noise_specs(args, sample: ScalarSample):
    specs = []
    if args.impulse_uniform is not None:
        p, lo, hi = args.impulse_uniform
        specs.append(ImpulseUniform(p, lo, hi))
    if args.impulse_constant is not None:
        p, v = args.impulse_constant
        specs.append(ImpulseConstant(p, v))
    if args.gaussian_functional is not None:
        specs.append(GaussianFunctional(args.gaussian_functional))
    if args.gaussian_geometric is not None:
        specs.append(GaussianGeometric(args.gaussian_geometric))
    if args.clutter is not None:
        box = np.column_stack([sample.points.min(axis=0), sample.points.max(axis=0)])
        specs.append(Clutter(args.clutter, tuple(map(tuple, box))))
    return specs


def _dtm_k(args, n: int) -> int:
    if args.mass is not None:
        return k_from_mass(n, args.mass)
    if args.k is None:
        raise _UsageError("one of --k or --mass is required")
    return args.k


def _resolve_eta(args, sample: ScalarSample, dtm_k: int) -> float:
    if args.eta is not None:
        return args.eta
    if args.eta_percentile is not None:
        return eta_from_percentile(sample, dtm_k, args.eta_percentile)
    raise _UsageError("one of --eta or --eta-percentile is required")


def _build_parser() -> _Parser:
    parser = _Parser(prog="topofield",
                     description="Robust persistence diagrams of sampled scalar fields")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate synthetic samples with optional noise")
    shape = p.add_subparsers(dest="shape", required=True)
    for name in ("circle", "bone"):
        sp = shape.add_parser(name)
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", required=True)
        if name == "circle":
            sp.add_argument("--radius", type=float, default=1.0)
            sp.add_argument("--field", choices=("height", "geodesic"), default="height")
        else:
            sp.add_argument("--neck-width", type=float, default=0.3)
        _add_noise_flags(sp)

    p = sub.add_parser("denoise", help="denoise the value column of a points CSV")
    p.add_argument("input")
    p.add_argument("--method", choices=METHODS, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--kprime", type=int, default=None)
    p.add_argument("--out", required=True)

    p = sub.add_parser("dtm", help="emit the distance to the empirical measure per point")
    p.add_argument("input")
    p.add_argument("--k", type=int)
    p.add_argument("--mass", type=float)
    p.add_argument("--out", default=None)

    p = sub.add_parser("filter", help="keep points with dtm <= eta")
    p.add_argument("input")
    p.add_argument("--k", type=int)
    p.add_argument("--mass", type=float)
    p.add_argument("--eta", type=float)
    p.add_argument("--eta-percentile", type=float,
                   help="heuristic: eta as this percentile of the sample's dtm values")
    p.add_argument("--out", required=True)

    p = sub.add_parser("diagram", help="nested-pair persistence diagram of a points CSV")
    p.add_argument("input")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--delta-prime", type=float, default=None,
                   help="large scale (default 2*delta)")
    p.add_argument("--max-dim", type=int, default=1)
    p.add_argument("--out", required=True)

    p = sub.add_parser("pipeline", help="filter + denoise + diagram in one pass")
    p.add_argument("input")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--kprime", type=int, default=None)
    p.add_argument("--method", choices=METHODS, default="median")
    p.add_argument("--dtm-k", type=int)
    p.add_argument("--dtm-mass", type=float)
    p.add_argument("--eta", type=float)
    p.add_argument("--eta-percentile", type=float)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--delta-prime", type=float, default=None)
    p.add_argument("--max-dim", type=int, default=1)
    p.add_argument("--out", required=True)
    p.add_argument("--out-points", default=None,
                   help="also write the filtered points with denoised values")

    p = sub.add_parser("bottleneck", help="bottleneck distance between two diagram CSVs")
    p.add_argument("first")
    p.add_argument("second")

    p = sub.add_parser("psnr", help="peak signal-to-noise ratio between two PGMs")
    p.add_argument("first")
    p.add_argument("second")

    p = sub.add_parser("gap", help="lifespan gap ratio of a diagram CSV")
    p.add_argument("input")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--n-relevant", type=int, required=True)

    p = sub.add_parser("plot", help="render a diagram CSV to SVG")
    p.add_argument("input")
    p.add_argument("--out", required=True)
    return parser


def _cmd_synth(args) -> int:
    if args.shape == "circle":
        sample = sample_circle(args.n, args.radius, args.field)
    else:
        sample = sample_bone(args.n, args.neck_width, args.seed)
    for i, spec in enumerate(_noise_specs(args, sample)):
        sample = apply_noise(sample, spec, args.seed + i)
    write_points_csv(args.out, sample)
    print(f"wrote {len(sample)} points to {args.out}")
    return 0


def _cmd_denoise(args) -> int:
    sample, _ = read_points_csv(args.input)
    kprime = args.kprime if args.kprime is not None else args.k
    den = denoise_with(sample, args.method, args.k, kprime)
    write_points_csv(args.out, sample.with_values(den.denoised))
    print(f"wrote {len(sample)} denoised points to {args.out}")
    return 0


def _cmd_dtm(args) -> int:
    sample, _ = read_points_csv(args.input)
    values = dtm_self(NeighborIndex(sample.points), _dtm_k(args, len(sample)))
    lines = "\n".join(repr(float(v)) for v in values)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(lines + "\n")
    else:
        print(lines)
    return 0


def _cmd_filter(args) -> int:
    sample, _ = read_points_csv(args.input)
    k = _dtm_k(args, len(sample))
    eta = _resolve_eta(args, sample, k)
    kept, filtered = dtm_filter(sample, k, eta)
    if kept.size == 0:
        raise ValueError(f"no point has dtm <= eta={eta}; increase eta")
    write_points_csv(args.out, filtered)
    print(f"kept {kept.size} of {len(sample)} points at eta={_fmt(eta)}")
    return 0


def _cmd_diagram(args) -> int:
    from .persistence import image_diagram
    from .rips import build_nested_pair

    sample, _ = read_points_csv(args.input)
    dprime = args.delta_prime if args.delta_prime is not None else 2.0 * args.delta
    pair = build_nested_pair(sample.points, sample.values, args.delta, dprime,
                             args.max_dim)
    dgm = image_diagram(pair, args.max_dim)
    write_diagram_csv(args.out, dgm)
    print(f"wrote {len(dgm)} pairs to {args.out}")
    return 0


def _cmd_pipeline(args) -> int:
    sample, _ = read_points_csv(args.input)
    kprime = args.kprime if args.kprime is not None else args.k
    if args.dtm_mass is not None:
        dtm_k = k_from_mass(len(sample), args.dtm_mass)
    elif args.dtm_k is not None:
        dtm_k = args.dtm_k
    else:
        dtm_k = args.k
    if args.eta is not None:
        eta = args.eta
    elif args.eta_percentile is not None:
        eta = eta_from_percentile(sample, dtm_k, args.eta_percentile)
    else:
        raise _UsageError("one of --eta or --eta-percentile is required")
    dprime = args.delta_prime if args.delta_prime is not None else 2.0 * args.delta
    cfg = PipelineConfig(
        k=args.k, kprime=kprime, eta=eta, delta=args.delta, delta_prime=dprime,
        method=args.method, max_dim=args.max_dim, dtm_k=dtm_k,
    )
    dgm, kept, den = run_pipeline(sample, cfg)
    write_diagram_csv(args.out, dgm)
    if args.out_points:
        write_points_csv(args.out_points, den.sample.with_values(den.denoised))
    print(f"kept {kept.size}/{len(sample)} points; wrote {len(dgm)} pairs to {args.out}")
    return 0


def _cmd_bottleneck(args) -> int:
    print(_fmt(bottleneck_distance(read_diagram_csv(args.first),
                                   read_diagram_csv(args.second))))
    return 0


def _cmd_psnr(args) -> int:
    print(_fmt(psnr(read_pgm(args.first), read_pgm(args.second))))
    return 0


def _cmd_gap(args) -> int:
    print(_fmt(gap(read_diagram_csv(args.input), args.dim, args.n_relevant)))
    return 0


def _cmd_plot(args) -> int:
    write_diagram_svg(args.out, read_diagram_csv(args.input))
    print(f"wrote {args.out}")
    return 0


_COMMANDS = {
    "synth": _cmd_synth,
    "denoise": _cmd_denoise,
    "dtm": _cmd_dtm,
    "filter": _cmd_filter,
    "diagram": _cmd_diagram,
    "pipeline": _cmd_pipeline,
    "bottleneck": _cmd_bottleneck,
    "psnr": _cmd_psnr,
    "gap": _cmd_gap,
    "plot": _cmd_plot,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except FormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"file error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
