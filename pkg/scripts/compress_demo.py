"""Compress a PGM at several basis sizes and report the reconstruction error.

Writes everything into a scratch directory and prints one row per basis
size, showing the coefficient grid, PSNR, worst pixel error, and the two
exact guarantees: reconstruction dominates the input and recompression
reproduces the coefficients byte for byte.

    python scripts/compress_demo.py [input.pgm] [--sizes 5 9 17]
"""

import argparse
import math
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from qkit.cli import main as qkit_main
from qkit.pgm import ramp_image, read_pgm, write_pgm


def psnr(a, b, maxval):
    mse = sum((x - y) ** 2 for x, y in zip(a.pixels, b.pixels)) / len(a.pixels)
    return math.inf if mse == 0 else 10 * math.log10(maxval * maxval / mse)


def run(src: Path, sizes, workdir: Path) -> None:
    original = read_pgm(src)
    print(f"input: {src} ({original.width}x{original.height}, maxval {original.maxval})")
    print(f"{'n':>4} {'coeffs':>8} {'psnr':>8} {'max err':>8} {'dominates':>10} {'exact':>6}")
    for n in sizes:
        coef = workdir / f"n{n}.coef"
        recon = workdir / f"n{n}.pgm"
        coef2 = workdir / f"n{n}b.coef"
        if qkit_main(["compress", str(src), str(coef), "--n", str(n)]) != 0:
            print(f"{n:>4} compression failed")
            continue
        qkit_main(["reconstruct", str(coef), str(recon)])
        rebuilt = read_pgm(recon)
        dominates = all(b >= a for a, b in zip(original.pixels, rebuilt.pixels))
        qkit_main(["compress", str(recon), str(coef2), "--n", str(n)])
        exact = coef.read_text() == coef2.read_text()
        err = max(abs(a - b) for a, b in zip(original.pixels, rebuilt.pixels))
        print(
            f"{n:>4} {n * n:>8} {psnr(original, rebuilt, original.maxval):>8.2f} "
            f"{err:>8} {str(dominates):>10} {str(exact):>6}"
        )


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("input", nargs="?", help="PGM file; a 65x65 ramp when omitted")
    ap.add_argument("--sizes", type=int, nargs="+", default=[3, 5, 9, 17, 33])
    args = ap.parse_args()
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        if args.input:
            src = Path(args.input)
        else:
            src = tmp / "ramp.pgm"
            write_pgm(src, ramp_image(65, 65, 64))
        run(src, args.sizes, tmp)
    return 0


if __name__ == "__main__":
    sys.exit(main())
