"""Translation-invariant dilation and erosion on finite grids.

Binary images are cell sets, grey images carry quantale values, and a
structuring element is a finite-support map from offsets to values.
Dilation is the join of weighted translates, erosion the meet of the
matching residua, and in wrap mode the pair is literally the kernel
transform of k(x, y) = A(y - x), so all three forms can be compared
bit for bit.

Wrap mode treats the grid as a torus, which is what makes translation
a group and the translate-kernel well defined.  Bounded mode pads the
image with bottom instead: dilation drops contributions that fall off
the grid, and erosion constrains only in-grid pixels (an offset that
pokes outside imposes nothing, so border meets can come up empty and
yield top).  That skip rule is forced by the adjunction: it makes the
bounded erosion the exact residual of the clipped dilation.  The price
is that translation invariance fails at the edges, so only wrap mode
gets the invariance suite.

Costs scale with the support of the structuring element, not with the
grid squared; a full-grid element is allowed but quadratic.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from qkit.quantale import (
    Carrier,
    CarrierMismatchError,
    ChainQuantale,
    FloatUnitQuantale,
    LUKASIEWICZ,
)
from qkit.transform import Kernel

WRAP = "wrap"
BOUNDED = "bounded"


@dataclass(frozen=True)
class Grid:
    """A width x height pixel grid; cells are (x, y) pairs."""

    width: int
    height: int
    mode: str = WRAP

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("grid sides must be positive")
        if self.mode not in (WRAP, BOUNDED):
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def size(self) -> int:
        return self.width * self.height

    def cells(self) -> tuple:
        return tuple(
            (x, y) for y in range(self.height) for x in range(self.width)
        )

    def contains(self, cell) -> bool:
        x, y = cell
        return 0 <= x < self.width and 0 <= y < self.height

    def shift(self, cell, offset):
        """Cell moved by offset; None when it leaves a bounded grid."""
        x, y = cell[0] + offset[0], cell[1] + offset[1]
        if self.mode == WRAP:
            return (x % self.width, y % self.height)
        if 0 <= x < self.width and 0 <= y < self.height:
            return (x, y)
        return None

    def canonical(self, offset) -> tuple:
        if self.mode != WRAP:
            raise ValueError("offsets have canonical forms only on a torus")
        return (offset[0] % self.width, offset[1] % self.height)


@dataclass(frozen=True)
class StructuringElement:
    """Finite-support offset weights; the origin is offset (0, 0).

    Bottom weights are dropped at construction, so the stored entries
    are exactly the support.
    """

    carrier: Carrier
    entries: tuple

    def __post_init__(self):
        seen = {}
        for off, v in self.entries:
            off = (int(off[0]), int(off[1]))
            self.carrier.require(v)
            if off in seen:
                raise ValueError(f"duplicate offset {off}")
            seen[off] = v
        bot, eq = self.carrier.bot, self.carrier.eq
        kept = tuple(sorted((o, v) for o, v in seen.items() if not eq(v, bot)))
        if not kept:
            raise ValueError("structuring element has empty support")
        object.__setattr__(self, "entries", kept)

    @classmethod
    def from_dict(cls, carrier: Carrier, weights) -> "StructuringElement":
        return cls(carrier, tuple(weights.items()))

    @classmethod
    def flat(cls, carrier: Carrier, offsets: Iterable) -> "StructuringElement":
        """Unit weight on every given offset."""
        return cls(carrier, tuple((off, carrier.unit) for off in offsets))

    @cached_property
    def _table(self) -> dict:
        return dict(self.entries)

    def support(self) -> frozenset:
        return frozenset(self._table)

    def weight(self, offset):
        return self._table.get(tuple(offset), self.carrier.bot)


def reflect(se: StructuringElement) -> StructuringElement:
    """Offsets negated; reflecting twice gives back the original."""
    return StructuringElement(
        se.carrier, tuple(((-dx, -dy), v) for (dx, dy), v in se.entries)
    )


def reflect_offsets(offsets: Iterable) -> frozenset:
    return frozenset((-dx, -dy) for dx, dy in offsets)


# ---------------------------------------------------------------- binary

def translate(grid: Grid, cells: Iterable, offset) -> frozenset:
    """Shift a cell set; bounded grids drop what falls off."""
    out = set()
    for c in cells:
        moved = grid.shift(c, offset)
        if moved is not None:
            out.add(moved)
    return frozenset(out)


def dilate_binary(grid: Grid, cells: Iterable, offsets: Iterable) -> frozenset:
    """Union of the structuring set translated to every image cell."""
    offsets = tuple(offsets)
    out = set()
    for c in cells:
        for off in offsets:
            moved = grid.shift(c, off)
            if moved is not None:
                out.add(moved)
    return frozenset(out)


def erode_binary(grid: Grid, cells: Iterable, offsets: Iterable) -> frozenset:
    """Cells where every in-grid translate of the structuring set lands
    inside the image."""
    members = frozenset(cells)
    offsets = tuple(offsets)
    out = set()
    for c in grid.cells():
        ok = True
        for off in offsets:
            moved = grid.shift(c, off)
            if moved is not None and moved not in members:
                ok = False
                break
        if ok:
            out.add(c)
    return frozenset(out)


def opening_binary(grid: Grid, cells: Iterable, offsets: Iterable) -> frozenset:
    offsets = tuple(offsets)
    return dilate_binary(grid, erode_binary(grid, cells, offsets), offsets)


def closing_binary(grid: Grid, cells: Iterable, offsets: Iterable) -> frozenset:
    offsets = tuple(offsets)
    return erode_binary(grid, dilate_binary(grid, cells, offsets), offsets)


# ------------------------------------------------------------------ grey

@dataclass(frozen=True)
class GreyImage:
    """Total map from grid cells to carrier values, row-major."""

    grid: Grid
    carrier: Carrier
    values: tuple

    def __post_init__(self):
        vals = tuple(self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) != self.grid.size:
            raise ValueError(
                f"expected {self.grid.size} values, got {len(vals)}"
            )
        for v in vals:
            self.carrier.require(v)

    @classmethod
    def constant(cls, grid: Grid, carrier: Carrier, value) -> "GreyImage":
        return cls(grid, carrier, (value,) * grid.size)

    @classmethod
    def from_rows(cls, grid: Grid, carrier: Carrier, rows) -> "GreyImage":
        flat = tuple(v for row in rows for v in row)
        return cls(grid, carrier, flat)

    def at(self, cell):
        x, y = cell
        return self.values[y * self.grid.width + x]

    def rows(self) -> tuple:
        w = self.grid.width
        return tuple(
            self.values[y * w : (y + 1) * w] for y in range(self.grid.height)
        )


def image_from_set(grid: Grid, carrier: Carrier, cells: Iterable) -> GreyImage:
    members = frozenset(cells)
    vals = tuple(
        carrier.unit if c in members else carrier.bot for c in grid.cells()
    )
    return GreyImage(grid, carrier, vals)


def set_from_image(image: GreyImage) -> frozenset:
    bot, eq = image.carrier.bot, image.carrier.eq
    return frozenset(
        c for c in image.grid.cells() if not eq(image.at(c), bot)
    )


def translate_image(image: GreyImage, offset) -> GreyImage:
    grid, q = image.grid, image.carrier
    neg = (-offset[0], -offset[1])
    vals = []
    for c in grid.cells():
        src = grid.shift(c, neg)
        vals.append(q.bot if src is None else image.at(src))
    return GreyImage(grid, q, tuple(vals))


def _require_match(image: GreyImage, se: StructuringElement):
    if image.carrier != se.carrier:
        raise CarrierMismatchError(
            "image and structuring element live on different carriers"
        )


def dilate_grey(image: GreyImage, se: StructuringElement) -> GreyImage:
    """At y: the join over offsets a of A(a) * X(y - a)."""
    _require_match(image, se)
    grid, q = image.grid, image.carrier
    out = []
    for c in grid.cells():
        acc = q.bot
        for off, w in se.entries:
            src = grid.shift(c, (-off[0], -off[1]))
            if src is None:
                continue
            acc = q.join2(acc, q.mul(w, image.at(src)))
        out.append(acc)
    return GreyImage(grid, q, tuple(out))


def erode_grey(image: GreyImage, se: StructuringElement) -> GreyImage:
    """At x: the meet over offsets a of A(a) -> X(x + a).

    Offsets leaving a bounded grid impose nothing, which keeps this the
    exact residual of the clipped dilation.
    """
    _require_match(image, se)
    grid, q = image.grid, image.carrier
    out = []
    for c in grid.cells():
        acc = q.top
        for off, w in se.entries:
            tgt = grid.shift(c, off)
            if tgt is None:
                continue
            acc = q.meet2(acc, q.lres(w, image.at(tgt)))
        out.append(acc)
    return GreyImage(grid, q, tuple(out))


def opening_grey(image: GreyImage, se: StructuringElement) -> GreyImage:
    return dilate_grey(erode_grey(image, se), se)


def closing_grey(image: GreyImage, se: StructuringElement) -> GreyImage:
    return erode_grey(dilate_grey(image, se), se)


def complement_set(grid: Grid, cells: Iterable) -> frozenset:
    return frozenset(grid.cells()) - frozenset(cells)


def image_join(a: GreyImage, b: GreyImage) -> GreyImage:
    if a.grid != b.grid or a.carrier != b.carrier:
        raise CarrierMismatchError("images are not comparable")
    q = a.carrier
    return GreyImage(
        a.grid, q, tuple(q.join2(x, y) for x, y in zip(a.values, b.values))
    )


def image_meet(a: GreyImage, b: GreyImage) -> GreyImage:
    if a.grid != b.grid or a.carrier != b.carrier:
        raise CarrierMismatchError("images are not comparable")
    q = a.carrier
    return GreyImage(
        a.grid, q, tuple(q.meet2(x, y) for x, y in zip(a.values, b.values))
    )


def image_leq(a: GreyImage, b: GreyImage) -> bool:
    if a.grid != b.grid or a.carrier != b.carrier:
        raise CarrierMismatchError("images are not comparable")
    leq = a.carrier.leq
    return all(leq(x, y) for x, y in zip(a.values, b.values))


def image_eq(a: GreyImage, b: GreyImage) -> bool:
    if a.grid != b.grid or a.carrier != b.carrier:
        raise CarrierMismatchError("images are not comparable")
    eq = a.carrier.eq
    return all(eq(x, y) for x, y in zip(a.values, b.values))


def random_image(grid: Grid, carrier: Carrier, rng: random.Random) -> GreyImage:
    els = tuple(carrier.elements())
    return GreyImage(
        grid, carrier, tuple(rng.choice(els) for _ in range(grid.size))
    )


# ---------------------------------------------------------------- kernel

def kernel_of_structuring(se: StructuringElement, grid: Grid) -> Kernel:
    """The translate kernel k(x, y) = A(y - x) over a torus grid.

    Raw offsets are folded onto the torus first; two support offsets
    meeting at the same canonical cell would make the kernel ambiguous
    and are refused.
    """
    if grid.mode != WRAP:
        raise ValueError("the translate kernel needs the torus group; use wrap mode")
    q = se.carrier
    canon = {}
    for off, v in se.entries:
        c = grid.canonical(off)
        if c in canon:
            raise ValueError(f"offsets collide on the torus at {c}")
        canon[c] = v
    cells = grid.cells()
    bot = q.bot
    w, h = grid.width, grid.height
    rows = tuple(
        tuple(
            canon.get(((yx - xx) % w, (yy - xy) % h), bot)
            for (yx, yy) in cells
        )
        for (xx, xy) in cells
    )
    return Kernel(q, cells, cells, rows)


# ------------------------------------------------------------------ I/O

def save_structuring(path, se: StructuringElement) -> None:
    """Write `w h ox oy` then the bounding-box grid of weights.

    Chain weights are written as exact fractions of the denominator,
    float weights as decimals; cells outside the support write 0.
    """
    xs = [off[0] for off, _ in se.entries]
    ys = [off[1] for off, _ in se.entries]
    ox, oy = -min(xs), -min(ys)
    w, h = max(xs) + ox + 1, max(ys) + oy + 1
    lines = [f"{w} {h} {ox} {oy}"]
    for y in range(h):
        row = []
        for x in range(w):
            row.append(_format_weight(se, (x - ox, y - oy)))
        lines.append(" ".join(row))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def _format_weight(se: StructuringElement, offset) -> str:
    v = se.weight(offset)
    if isinstance(se.carrier, ChainQuantale):
        return str(Fraction(v, se.carrier.d))
    return repr(v)


def load_structuring(path, carrier: Carrier | None = None) -> StructuringElement:
    """Read a structuring element; defaults to the Lukasiewicz float
    carrier.  Chain carriers scale decimal or fraction tokens onto
    exact levels and refuse values that land between levels."""
    if carrier is None:
        carrier = FloatUnitQuantale(LUKASIEWICZ)
    with open(path, "r", encoding="ascii") as fh:
        tokens = fh.read().split()
    if len(tokens) < 4:
        raise ValueError("structuring element file too short")
    w, h, ox, oy = (int(t) for t in tokens[:4])
    body = tokens[4:]
    if w < 1 or h < 1:
        raise ValueError("structuring element box must be positive")
    if len(body) != w * h:
        raise ValueError(f"expected {w * h} weights, found {len(body)}")
    entries = []
    for i, tok in enumerate(body):
        x, y = i % w, i // w
        v = _parse_weight(carrier, tok)
        entries.append(((x - ox, y - oy), v))
    return StructuringElement(carrier, tuple(entries))


def _parse_weight(carrier: Carrier, token: str):
    f = Fraction(token)
    if not 0 <= f <= 1:
        raise ValueError(f"weight {token} outside the unit interval")
    if isinstance(carrier, ChainQuantale):
        scaled = f * carrier.d
        if scaled.denominator != 1:
            raise ValueError(
                f"weight {token} is not a multiple of 1/{carrier.d}"
            )
        return int(scaled)
    return float(f)
