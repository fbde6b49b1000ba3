"""Fuzzy morphology on a toy grey image, rendered as ASCII.

Builds a blob with salt specks, runs the four operators with a soft
cross structuring element on a torus, prints each result, and checks
the adjunction plus the opening/closing sandwich along the way.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from qkit.quantale import ChainQuantale, LUKASIEWICZ
from qkit.morphology import (
    Grid,
    GreyImage,
    StructuringElement,
    closing_grey,
    dilate_grey,
    erode_grey,
    image_leq,
    opening_grey,
)

SHADES = " .:-=+*#%@"


def render(image: GreyImage, label: str) -> None:
    d = image.carrier.d
    print(label)
    for row in image.rows():
        print("  " + "".join(SHADES[v * (len(SHADES) - 1) // d] for v in row))
    print()


def main() -> int:
    q = ChainQuantale(9, LUKASIEWICZ)
    grid = Grid(16, 12)
    values = [0] * grid.size
    for x, y in [(x, y) for x in range(4, 9) for y in range(3, 8)]:
        values[y * grid.width + x] = 9
    for x, y, v in [(12, 2, 9), (13, 9, 7), (2, 10, 9), (11, 6, 5)]:
        values[y * grid.width + x] = v
    img = GreyImage(grid, q, tuple(values))

    se = StructuringElement(
        q,
        (((0, 0), 9), ((1, 0), 6), ((-1, 0), 6), ((0, 1), 6), ((0, -1), 6)),
    )

    dil = dilate_grey(img, se)
    ero = erode_grey(img, se)
    opened = opening_grey(img, se)
    closed = closing_grey(img, se)

    render(img, "input")
    render(dil, "dilation (grows the blob, keeps specks)")
    render(ero, "erosion (shrinks the blob, drops specks)")
    render(opened, "opening (specks gone, blob kept)")
    render(closed, "closing (holes filled, blob kept)")

    assert image_leq(opened, img) and image_leq(img, closed)
    assert image_leq(dilate_grey(ero, se), img) and image_leq(img, erode_grey(dil, se))
    print("checks: opening <= input <= closing, and the adjunction bounds hold")
    return 0


if __name__ == "__main__":
    sys.exit(main())
