"""Command line front door: compress, reconstruct, morph, laws, metrics.

Compression is the separable scheme: a one-dimensional transform over
every row, then over every column of the row coefficients.  All pixel
arithmetic runs on an integer chain whose denominator is the least
common multiple of the image maxval, the side lengths minus one, and
n - 1, so normalization g/maxval and every basis value are exact
levels.  Reconstruction therefore dominates the input exactly and
recompressing a reconstruction reproduces the coefficients bit for
bit, which is what the round-trip tests pin down.
"""
from __future__ import annotations

import argparse
import math
import os
import random
import sys

from qkit.fuzzy import FuzzyPartition, f_up, f_up_inverse, load_partition, luk_kernel
from qkit.morphology import (
    BOUNDED,
    WRAP,
    Grid,
    GreyImage,
    StructuringElement,
    closing_grey,
    dilate_grey,
    erode_grey,
    image_leq,
    load_structuring,
    opening_grey,
)
from qkit.pgm import PgmImage, read_pgm, write_pgm
from qkit.qmodule import ModuleVector
from qkit.quantale import (
    Carrier,
    CarrierMismatchError,
    ChainQuantale,
    FloatUnitQuantale,
    GODEL,
    LUKASIEWICZ,
    PRODUCT,
)
from qkit.suites import SUITES, run_suites
from qkit.transform import apply_direct, apply_inverse

COEFF_MAGIC = "qkit-coefficients v1"


def parse_carrier(spec: str, tnorm: str) -> Carrier:
    if spec == "float":
        return FloatUnitQuantale(tnorm)
    if spec.startswith("chain:"):
        d = int(spec.split(":", 1)[1])
        if tnorm == PRODUCT:
            raise ValueError("the product t-norm lives on the float carrier only")
        return ChainQuantale(d, tnorm)
    raise ValueError(f"unknown carrier {spec!r}, expected chain:<d> or float")


def _seed_from(args) -> int:
    if args.seed is not None:
        return args.seed
    return int(os.environ.get("QKIT_SEED", "0"))


# ------------------------------------------------------------ normalization

def _pixel_scale(carrier: Carrier, maxval: int) -> int:
    if carrier.d % maxval != 0:
        raise ValueError(
            f"chain denominator {carrier.d} is not a multiple of maxval {maxval}"
        )
    return carrier.d // maxval


def _levels_from_pixels(carrier: Carrier, pixels, maxval: int) -> tuple:
    if isinstance(carrier, ChainQuantale):
        s = _pixel_scale(carrier, maxval)
        return tuple(p * s for p in pixels)
    return tuple(p / maxval for p in pixels)


def _pixel_from_value(carrier: Carrier, v, maxval: int) -> int:
    if isinstance(carrier, ChainQuantale):
        d = carrier.d
        return (2 * v * maxval + d) // (2 * d)
    return min(maxval, max(0, math.floor(v * maxval + 0.5)))


# ---------------------------------------------------------------- compress

def _separable_direct(carrier, kern_w, kern_h, levels, width, height):
    """Rows then columns; returns the coefficient matrix as row tuples."""
    n = len(kern_w.y_index)
    row_stage = []
    for y in range(height):
        vec = ModuleVector(carrier, kern_w.x_index, levels[y * width : (y + 1) * width])
        row_stage.append(apply_direct(kern_w, vec).values)
    cols = []
    for k in range(n):
        vec = ModuleVector(
            carrier, kern_h.x_index, tuple(row_stage[y][k] for y in range(height))
        )
        cols.append(apply_direct(kern_h, vec).values)
    m = len(kern_h.y_index)
    return tuple(tuple(cols[k][i] for k in range(n)) for i in range(m))


def _separable_inverse(carrier, kern_w, kern_h, coeffs, width, height):
    """Inverts the column stage, then the row stage."""
    n = len(kern_w.y_index)
    cols = []
    for k in range(n):
        vec = ModuleVector(
            carrier, kern_h.y_index, tuple(row[k] for row in coeffs)
        )
        cols.append(apply_inverse(kern_h, vec).values)
    out = []
    for y in range(height):
        vec = ModuleVector(
            carrier, kern_w.y_index, tuple(cols[k][y] for k in range(n))
        )
        out.extend(apply_inverse(kern_w, vec).values)
    return tuple(out)


def _format_level(carrier: Carrier, v) -> str:
    return repr(v) if isinstance(carrier, FloatUnitQuantale) else str(v)


def _parse_level(carrier: Carrier, token: str):
    return float(token) if isinstance(carrier, FloatUnitQuantale) else int(token)


def write_coefficients(path, meta: dict, matrix, carrier: Carrier) -> None:
    lines = [COEFF_MAGIC]
    for key, value in meta.items():
        lines.append(f"{key}={value}")
    for row in matrix:
        lines.append(" ".join(_format_level(carrier, v) for v in row))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def read_coefficients(path):
    with open(path, "r", encoding="ascii") as fh:
        lines = [ln.strip() for ln in fh.read().splitlines() if ln.strip()]
    if not lines or lines[0] != COEFF_MAGIC:
        raise ValueError("not a coefficients file")
    meta = {}
    body_at = 1
    for i, ln in enumerate(lines[1:], start=1):
        if "=" not in ln:
            body_at = i
            break
        key, value = ln.split("=", 1)
        meta[key] = value
        body_at = i + 1
    required = ("method", "carrier", "tnorm", "n", "width", "height", "maxval", "rows", "cols")
    missing = [k for k in required if k not in meta]
    if missing:
        raise ValueError(f"coefficients file lacks keys: {', '.join(missing)}")
    if meta["carrier"] == "chain":
        if "denominator" not in meta:
            raise ValueError("chain coefficients need a denominator key")
        carrier = ChainQuantale(int(meta["denominator"]), meta["tnorm"])
    elif meta["carrier"] == "float":
        carrier = FloatUnitQuantale(meta["tnorm"])
    else:
        raise ValueError(f"unknown carrier {meta['carrier']!r}")
    rows, cols = int(meta["rows"]), int(meta["cols"])
    body = lines[body_at:]
    if len(body) != rows:
        raise ValueError(f"expected {rows} coefficient rows, found {len(body)}")
    matrix = []
    for ln in body:
        row = tuple(_parse_level(carrier, t) for t in ln.split())
        if len(row) != cols:
            raise ValueError(f"expected {cols} coefficients per row")
        matrix.append(row)
    return meta, carrier, tuple(matrix)


def _compress_carrier(args, img: PgmImage, n: int) -> Carrier:
    if args.carrier is not None:
        return parse_carrier(args.carrier, args.tnorm)
    d = math.lcm(img.maxval, max(img.width - 1, 1), max(img.height - 1, 1), n - 1)
    return ChainQuantale(d, args.tnorm)


def cmd_compress(args) -> int:
    img = read_pgm(args.image)
    if args.method == "luk":
        n = args.n
        if n is None or n < 2:
            raise ValueError("the triangular basis needs --n at least 2")
        carrier = _compress_carrier(args, img, n)
        kern_w = luk_kernel(n, img.width, carrier)
        kern_h = luk_kernel(n, img.height, carrier)
        levels = _levels_from_pixels(carrier, img.pixels, img.maxval)
        matrix = _separable_direct(carrier, kern_w, kern_h, levels, img.width, img.height)
    else:
        if args.partition is None:
            raise ValueError("--method partition-file needs --partition")
        carrier = (
            parse_carrier(args.carrier, args.tnorm)
            if args.carrier is not None
            else ChainQuantale(img.maxval, args.tnorm)
        )
        part = load_partition(args.partition, carrier)
        if part.l != img.width or part.l != img.height:
            raise ValueError(
                f"partition covers {part.l} nodes; image is {img.width}x{img.height}"
            )
        n = part.n
        levels = _levels_from_pixels(carrier, img.pixels, img.maxval)
        row_stage = [
            f_up(part, levels[y * img.width : (y + 1) * img.width])
            for y in range(img.height)
        ]
        matrix = tuple(
            zip(*(f_up(part, tuple(row[k] for row in row_stage)) for k in range(n)))
        )
    meta = {
        "method": args.method,
        "carrier": "float" if isinstance(carrier, FloatUnitQuantale) else "chain",
        "tnorm": carrier.tnorm,
        "denominator": getattr(carrier, "d", 0),
        "n": n,
        "width": img.width,
        "height": img.height,
        "maxval": img.maxval,
        "rows": len(matrix),
        "cols": len(matrix[0]),
    }
    write_coefficients(args.out, meta, matrix, carrier)
    return 0


def cmd_reconstruct(args) -> int:
    meta, carrier, matrix = read_coefficients(args.coefficients)
    width, height = int(meta["width"]), int(meta["height"])
    maxval = int(meta["maxval"])
    n = int(meta["n"])
    if meta["method"] == "luk":
        kern_w = luk_kernel(n, width, carrier)
        kern_h = luk_kernel(n, height, carrier)
        levels = _separable_inverse(carrier, kern_w, kern_h, matrix, width, height)
    elif meta["method"] == "partition-file":
        if args.partition is None:
            raise ValueError("reconstructing partition-file coefficients needs --partition")
        part = load_partition(args.partition, carrier)
        if part.n != n or part.l != width or part.l != height:
            raise ValueError("partition does not match the coefficients header")
        cols = [
            f_up_inverse(part, tuple(row[k] for row in matrix)) for k in range(n)
        ]
        levels = []
        for y in range(height):
            levels.extend(f_up_inverse(part, tuple(cols[k][y] for k in range(n))))
        levels = tuple(levels)
    else:
        raise ValueError(f"unknown method {meta['method']!r}")
    pixels = tuple(_pixel_from_value(carrier, v, maxval) for v in levels)
    if isinstance(carrier, ChainQuantale) and any(
        v * maxval % carrier.d for v in levels
    ):
        print(
            "warning: some reconstructed levels fall between pixel values; "
            "the written image is quantized, so compressing it again may "
            "not reproduce these coefficients",
            file=sys.stderr,
        )
    write_pgm(args.out, PgmImage(width, height, maxval, pixels), binary=args.binary)
    return 0


# ------------------------------------------------------------------- morph

def cmd_morph(args) -> int:
    img = read_pgm(args.image)
    carrier = (
        parse_carrier(args.carrier, args.tnorm)
        if args.carrier is not None
        else ChainQuantale(img.maxval, args.tnorm)
    )
    se = load_structuring(args.se, carrier)
    grid = Grid(img.width, img.height, mode=args.mode)
    levels = _levels_from_pixels(carrier, img.pixels, img.maxval)
    grey = GreyImage(grid, carrier, levels)
    ops = {
        "dilate": dilate_grey,
        "erode": erode_grey,
        "open": opening_grey,
        "close": closing_grey,
    }
    result = ops[args.op](grey, se)
    if args.check_adjunction:
        ok = image_leq(opening_grey(grey, se), grey) and image_leq(
            grey, closing_grey(grey, se)
        )
        print(f"adjunction: {'pass' if ok else 'fail'}")
        if not ok:
            return 1
    pixels = tuple(_pixel_from_value(carrier, v, img.maxval) for v in result.values)
    write_pgm(args.out, PgmImage(img.width, img.height, img.maxval, pixels), binary=args.binary)
    return 0


# -------------------------------------------------------------------- laws

def cmd_laws(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    carrier = parse_carrier(args.carrier, args.tnorm) if args.carrier else None
    rng = random.Random(_seed_from(args))
    reports = run_suites(names, carrier=carrier, rng=rng)
    failed = 0
    for report in reports:
        print(report.summary())
        if not report.ok:
            failed += 1
    total = len(reports)
    print(f"{total - failed}/{total} law families clean")
    return 0 if failed == 0 else 1


# ----------------------------------------------------------------- metrics

def cmd_metrics(args) -> int:
    a, b = read_pgm(args.original), read_pgm(args.reconstructed)
    if (a.width, a.height) != (b.width, b.height):
        raise ValueError(
            f"size mismatch: {a.width}x{a.height} vs {b.width}x{b.height}"
        )
    if a.maxval != b.maxval:
        raise ValueError(f"maxval mismatch: {a.maxval} vs {b.maxval}")
    diffs = [abs(x - y) for x, y in zip(a.pixels, b.pixels)]
    count = len(diffs)
    mse = sum(d * d for d in diffs) / count
    max_abs = max(diffs)
    mean_abs = sum(diffs) / count
    psnr = "inf" if mse == 0 else f"{10 * math.log10(a.maxval ** 2 / mse):.4f}"
    print(f"psnr={psnr}")
    print(f"max_abs={max_abs}")
    print(f"mean_abs={mean_abs:.6f}")
    return 0


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qkit",
        description="Lattice-valued image transforms: compression, morphology, law suites.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--carrier", help="chain:<d> or float (default: exact chain from the image)")
        p.add_argument(
            "--tnorm",
            default=LUKASIEWICZ,
            choices=(LUKASIEWICZ, GODEL, PRODUCT),
        )
        p.add_argument("--seed", type=int, default=None, help="fixes randomized suites (env: QKIT_SEED)")

    c = sub.add_parser("compress", help="PGM to coefficients file")
    c.add_argument("image")
    c.add_argument("out")
    c.add_argument("--method", default="luk", choices=("luk", "partition-file"))
    c.add_argument("--n", type=int, default=None, help="components per axis for --method luk")
    c.add_argument("--partition", default=None, help="partition file for --method partition-file")
    add_common(c)
    c.set_defaults(func=cmd_compress)

    r = sub.add_parser("reconstruct", help="coefficients file to PGM")
    r.add_argument("coefficients")
    r.add_argument("out")
    r.add_argument("--partition", default=None, help="partition file when the coefficients used one")
    r.add_argument("--binary", action="store_true", help="write P5 instead of P2")
    add_common(r)
    r.set_defaults(func=cmd_reconstruct)

    m = sub.add_parser("morph", help="dilate/erode/open/close a PGM")
    m.add_argument("op", choices=("dilate", "erode", "open", "close"))
    m.add_argument("image")
    m.add_argument("se", help="structuring element file")
    m.add_argument("out")
    m.add_argument("--mode", default=WRAP, choices=(WRAP, BOUNDED))
    m.add_argument("--check-adjunction", action="store_true")
    m.add_argument("--binary", action="store_true", help="write P5 instead of P2")
    add_common(m)
    m.set_defaults(func=cmd_morph)

    l = sub.add_parser("laws", help="run law suites, exit 0 iff all pass")
    l.add_argument(
        "suite",
        nargs="?",
        default="all",
        choices=tuple(SUITES) + ("all",),
    )
    add_common(l)
    l.set_defaults(func=cmd_laws)

    t = sub.add_parser("metrics", help="error metrics between two PGMs")
    t.add_argument("original")
    t.add_argument("reconstructed")
    t.set_defaults(func=cmd_metrics)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, CarrierMismatchError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
