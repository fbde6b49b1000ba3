"""Kernel transforms between free modules and the coder taxonomy.

A kernel p over X x Y induces the adjoint pair

    direct:  (H f)(y) = join_x f(x) . p(x, y)
    inverse: (L g)(x) = meet_y g(y) / p(x, y)

with H f <= g  iff  f <= L g.  H is a module hom, L its residual,
L . H a nucleus on Q^X.  Kernels with a distinguished embedding
e: Y -> X classify into coder grades; strong coders make H . L the
identity on Q^Y, which is what exact reconstruction rests on.

Bottom entries can never influence a join (they multiply to bottom)
nor a meet (they divide to top), so both applications skip them; this
keeps grid-sized kernels with small support cheap.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Sequence

from qkit.quantale import Carrier, CarrierMismatchError, ChainQuantale, FloatUnitQuantale
from qkit.qmodule import (
    FreeModule,
    ModuleVector,
    Nucleus,
    basis_vector,
)


class EmbeddingError(ValueError):
    """The kernel lacks a usable embedding of Y into X."""


class LiftError(ValueError):
    """A projection handed to the lifting construction is not surjective."""


@dataclass(frozen=True)
class CoderClass:
    """Classification flags; the definitional implications are enforced."""

    is_coder: bool
    is_normal: bool
    is_strong: bool
    is_orthogonal: bool
    is_orthonormal: bool

    def __post_init__(self) -> None:
        if self.is_orthonormal and not (self.is_orthogonal and self.is_normal):
            raise ValueError("orthonormal must be orthogonal and normal")
        if self.is_orthonormal and not self.is_strong:
            raise ValueError("orthonormal implies strong")
        if self.is_strong and not self.is_normal:
            raise ValueError("strong implies normal")
        if self.is_normal and not self.is_coder:
            raise ValueError("normal implies coder")

    def grade(self) -> str:
        for name in ("orthonormal", "strong", "normal", "coder"):
            if getattr(self, f"is_{name}"):
                return name
        return "none"


@dataclass(frozen=True)
class Kernel:
    """Dense kernel over X x Y: rows[i][j] = p(x_i, y_j).

    `embedding` lists, per y label, the x label it sits under; when
    omitted, a y label that also occurs in X embeds as itself.
    """

    carrier: Carrier
    x_index: tuple
    y_index: tuple
    rows: tuple
    embedding: tuple | None = None

    def __post_init__(self) -> None:
        if len(self.rows) != len(self.x_index):
            raise ValueError("one row per x label required")
        width = len(self.y_index)
        for row in self.rows:
            if len(row) != width:
                raise ValueError("row width must match the y index")
            for v in row:
                self.carrier.require(v)
        if self.embedding is not None and len(self.embedding) != len(self.y_index):
            raise ValueError("embedding must list one x label per y label")

    @cached_property
    def _x_pos(self) -> dict:
        return {x: i for i, x in enumerate(self.x_index)}

    @cached_property
    def _y_pos(self) -> dict:
        return {y: j for j, y in enumerate(self.y_index)}

    def entry(self, x, y):
        return self.rows[self._x_pos[x]][self._y_pos[y]]

    @cached_property
    def epsilon(self) -> tuple:
        """Resolved embedding: the x label under each y label."""
        if self.embedding is not None:
            for x in self.embedding:
                if x not in self._x_pos:
                    raise EmbeddingError(f"embedding target {x!r} is not in X")
            return self.embedding
        missing = [y for y in self.y_index if y not in self._x_pos]
        if missing:
            raise EmbeddingError(
                f"no embedding given and Y is not contained in X: {missing!r}"
            )
        return self.y_index

    @property
    def inclusion_embedded(self) -> bool:
        try:
            return self.epsilon == self.y_index
        except EmbeddingError:
            return False

    @cached_property
    def _direct_cols(self) -> tuple:
        """Per y: the (x position, value) pairs with a non-bottom value."""
        bot = self.carrier.bot
        cols = []
        for j in range(len(self.y_index)):
            cols.append(
                tuple(
                    (i, row[j]) for i, row in enumerate(self.rows) if row[j] != bot
                )
            )
        return tuple(cols)

    @cached_property
    def _inverse_rows(self) -> tuple:
        bot = self.carrier.bot
        return tuple(
            tuple((j, v) for j, v in enumerate(row) if v != bot) for row in self.rows
        )

    def transpose(self) -> "Kernel":
        cols = tuple(
            tuple(self.rows[i][j] for i in range(len(self.x_index)))
            for j in range(len(self.y_index))
        )
        return Kernel(self.carrier, self.y_index, self.x_index, cols)

    def pointwise_join(self, others: Sequence["Kernel"]) -> "Kernel":
        join2 = self.carrier.join2
        rows = self.rows
        for other in others:
            self._require_parallel(other)
            rows = tuple(
                tuple(join2(a, b) for a, b in zip(ra, rb))
                for ra, rb in zip(rows, other.rows)
            )
        return Kernel(self.carrier, self.x_index, self.y_index, rows, self.embedding)

    def scale_left(self, q) -> "Kernel":
        mul = self.carrier.mul
        self.carrier.require(q)
        rows = tuple(tuple(mul(q, v) for v in row) for row in self.rows)
        return Kernel(self.carrier, self.x_index, self.y_index, rows, self.embedding)

    def _require_parallel(self, other: "Kernel") -> None:
        if (
            self.carrier != other.carrier
            or self.x_index != other.x_index
            or self.y_index != other.y_index
        ):
            raise CarrierMismatchError("kernels are not parallel")


def apply_direct(p: Kernel, f: ModuleVector) -> ModuleVector:
    """(H f)(y) = join_x f(x) . p(x, y); a left-module hom Q^X -> Q^Y."""
    if f.carrier != p.carrier or f.index != p.x_index:
        raise CarrierMismatchError("vector does not match the kernel's X side")
    mul, join2, bot = p.carrier.mul, p.carrier.join2, p.carrier.bot
    fv = f.values
    out = []
    for col in p._direct_cols:
        acc = bot
        for i, v in col:
            acc = join2(acc, mul(fv[i], v))
        out.append(acc)
    return ModuleVector(p.carrier, p.y_index, tuple(out))


def apply_inverse(p: Kernel, g: ModuleVector) -> ModuleVector:
    """(L g)(x) = meet_y g(y) / p(x, y); the upper adjoint of the direct map."""
    if g.carrier != p.carrier or g.index != p.y_index:
        raise CarrierMismatchError("vector does not match the kernel's Y side")
    rres, meet2, top = p.carrier.rres, p.carrier.meet2, p.carrier.top
    gv = g.values
    out = []
    for row in p._inverse_rows:
        acc = top
        for j, v in row:
            acc = meet2(acc, rres(gv[j], v))
        out.append(acc)
    return ModuleVector(p.carrier, p.x_index, tuple(out))


def apply_direct_right(p: Kernel, f: ModuleVector) -> ModuleVector:
    """Right-module variant: (H f)(y) = join_x p(x, y) . f(x)."""
    if f.carrier != p.carrier or f.index != p.x_index:
        raise CarrierMismatchError("vector does not match the kernel's X side")
    mul, join2, bot = p.carrier.mul, p.carrier.join2, p.carrier.bot
    fv = f.values
    out = []
    for col in p._direct_cols:
        acc = bot
        for i, v in col:
            acc = join2(acc, mul(v, fv[i]))
        out.append(acc)
    return ModuleVector(p.carrier, p.y_index, tuple(out))


def apply_inverse_right(p: Kernel, g: ModuleVector) -> ModuleVector:
    """Right-module variant: (L g)(x) = meet_y p(x, y) \\ g(y)."""
    if g.carrier != p.carrier or g.index != p.y_index:
        raise CarrierMismatchError("vector does not match the kernel's Y side")
    lres, meet2, top = p.carrier.lres, p.carrier.meet2, p.carrier.top
    gv = g.values
    out = []
    for row in p._inverse_rows:
        acc = top
        for j, v in row:
            acc = meet2(acc, lres(v, gv[j]))
        out.append(acc)
    return ModuleVector(p.carrier, p.x_index, tuple(out))


class KernelHom:
    """The hom realized by a kernel, with its residual attached."""

    def __init__(self, kernel: Kernel):
        self.kernel = kernel
        self.domain = FreeModule(kernel.carrier, kernel.x_index)
        self.target = FreeModule(kernel.carrier, kernel.y_index)

    def __call__(self, m: ModuleVector) -> ModuleVector:
        return apply_direct(self.kernel, m)

    def residual(self, n: ModuleVector) -> ModuleVector:
        return apply_inverse(self.kernel, n)

    def __eq__(self, other) -> bool:
        return isinstance(other, KernelHom) and self.kernel == other.kernel

    def __hash__(self) -> int:
        return hash(self.kernel)


def hom_of_kernel(p: Kernel) -> KernelHom:
    return KernelHom(p)


def kernel_of_hom(h, domain: FreeModule | None = None, embedding=None) -> Kernel:
    """Tabulate a hom out of a free module back into its kernel:
    k(x, y) = h(chi_x)(y)."""
    dom = domain or h.domain
    if not isinstance(dom, FreeModule):
        raise ValueError("kernel representation needs a free domain")
    rows = []
    y_index = None
    for x in dom.index:
        img = h(basis_vector(dom.carrier, dom.index, x))
        if y_index is None:
            y_index = img.index
        rows.append(tuple(img.values))
    return Kernel(dom.carrier, dom.index, y_index, tuple(rows), embedding)


def transform_nucleus(p: Kernel) -> Nucleus:
    """inverse . direct, a nucleus on the source module."""
    module = FreeModule(p.carrier, p.x_index)
    return Nucleus(module, lambda m: apply_inverse(p, apply_direct(p, m)))


def classify_coder(p: Kernel) -> CoderClass:
    """Grade a kernel against its embedding.

    coder       unit below every diagonal entry p(e(y), y)
    normal      diagonal entries equal the unit
    strong      normal and off-diagonal embedded rows are bottom
    orthogonal  columns multiply to bottom pointwise (both orders)
    orthonormal orthogonal and normal
    """
    q = p.carrier
    eps = p.epsilon
    e, bot = q.unit, q.bot
    diag = [p.rows[p._x_pos[ex]][j] for j, ex in enumerate(eps)]
    coder = all(q.leq(e, v) for v in diag)
    normal = all(q.eq(v, e) for v in diag)
    strong = normal and all(
        q.eq(p.rows[p._x_pos[ex]][j2], bot)
        for j1, ex in enumerate(eps)
        for j2 in range(len(p.y_index))
        if j1 != j2
    )
    ncols = len(p.y_index)
    orthogonal = all(
        q.eq(q.mul(row[j1], row[j2]), bot) and q.eq(q.mul(row[j2], row[j1]), bot)
        for row in p.rows
        for j1 in range(ncols)
        for j2 in range(j1 + 1, ncols)
    )
    return CoderClass(
        is_coder=coder,
        is_normal=normal,
        is_strong=strong,
        is_orthogonal=orthogonal,
        is_orthonormal=orthogonal and normal,
    )


def projective_coder(carrier: Carrier, x_index: Sequence, y_index: Sequence) -> Kernel:
    """The restriction kernel: unit where the labels agree, bottom elsewhere."""
    x_index, y_index = tuple(x_index), tuple(y_index)
    xs = set(x_index)
    for y in y_index:
        if y not in xs:
            raise EmbeddingError(f"label {y!r} of Y does not occur in X")
    e, bot = carrier.unit, carrier.bot
    rows = tuple(
        tuple(e if x == y else bot for y in y_index) for x in x_index
    )
    return Kernel(carrier, x_index, y_index, rows)


def _require_inclusion(p: Kernel) -> None:
    if not p.inclusion_embedded:
        raise EmbeddingError("this operation needs Y inside X with the identity embedding")


def support(p: Kernel) -> tuple:
    """Labels whose column differs from the matching projection column."""
    _require_inclusion(p)
    q = p.carrier
    e, bot = q.unit, q.bot
    out = []
    for j, y in enumerate(p.y_index):
        projective = all(
            q.eq(row[j], e if x == y else bot)
            for x, row in zip(p.x_index, p.rows)
        )
        if not projective:
            out.append(y)
    return tuple(out)


def core(p: Kernel) -> Kernel:
    """Restriction of the kernel to its support columns."""
    keep = set(support(p))
    cols = [j for j, y in enumerate(p.y_index) if y in keep]
    rows = tuple(tuple(row[j] for j in cols) for row in p.rows)
    return Kernel(p.carrier, p.x_index, tuple(p.y_index[j] for j in cols), rows)


def is_irreducible(p: Kernel) -> bool:
    return support(p) == p.y_index


def projective_extension(p: Kernel, z_index: Sequence) -> Kernel:
    """Extend with projection columns on the labels missing from Y."""
    _require_inclusion(p)
    z_index = tuple(z_index)
    zs = set(z_index)
    xs = set(p.x_index)
    if not set(p.y_index) <= zs or not zs <= xs:
        raise EmbeddingError("need Y inside Z inside X")
    e, bot = p.carrier.unit, p.carrier.bot
    ypos = p._y_pos
    rows = []
    for x, row in zip(p.x_index, p.rows):
        rows.append(
            tuple(
                row[ypos[z]] if z in ypos else (e if x == z else bot)
                for z in z_index
            )
        )
    return Kernel(p.carrier, p.x_index, z_index, tuple(rows))


def kernel_closure(p: Kernel) -> Kernel:
    """Extension all the way up to X x X."""
    return projective_extension(p, p.x_index)


def equivalent_up_to_projections(p: Kernel, p2: Kernel) -> bool:
    """Equal cores; the closures are compared as a cross-check."""
    if p.carrier != p2.carrier or p.x_index != p2.x_index:
        raise CarrierMismatchError("kernels must share a carrier and X")
    by_core = _same_kernel(core(p), core(p2))
    by_closure = _same_kernel(kernel_closure(p), kernel_closure(p2))
    if by_core != by_closure:
        raise AssertionError("core and closure comparisons disagree")
    return by_core


def _same_kernel(a: Kernel, b: Kernel) -> bool:
    if a.y_index != b.y_index:
        return False
    eq = a.carrier.eq
    return all(
        eq(u, v) for ra, rb in zip(a.rows, b.rows) for u, v in zip(ra, rb)
    )


def lift_through_projection(h, pi, pi_prime, probes: Iterable | None = None) -> Kernel:
    """Kernel k making the square commute: h . pi = pi' . H_k.

    pi: Q^X ->> M and pi': Q^Y ->> N must be surjective homs with
    residuals; then k(x, .) = residual of pi' at h(pi(chi_x)).
    Surjectivity is witnessed by direct . residual = id on the probes.
    """
    dom = pi.domain
    if not isinstance(dom, FreeModule) or not isinstance(pi_prime.domain, FreeModule):
        raise ValueError("both projections must start from free modules")
    for name, proj in (("pi", pi), ("pi_prime", pi_prime)):
        tgt = proj.target
        if probes is not None:
            sample = probes
        else:
            sample = tgt.elements()
        for m in sample:
            if not tgt.eq(proj(proj.residual(m)), m):
                raise LiftError(f"{name} is not surjective at {m!r}")
    rows = []
    for x in dom.index:
        chi = basis_vector(dom.carrier, dom.index, x)
        rows.append(tuple(pi_prime.residual(h(pi(chi))).values))
    return Kernel(dom.carrier, dom.index, pi_prime.domain.index, tuple(rows))


def random_kernel(
    carrier: Carrier, x_index: Sequence, y_index: Sequence, rng: random.Random,
    embedding=None,
) -> Kernel:
    els = tuple(carrier.elements())
    x_index, y_index = tuple(x_index), tuple(y_index)
    rows = tuple(
        tuple(rng.choice(els) for _ in y_index) for _ in x_index
    )
    return Kernel(carrier, x_index, y_index, rows, embedding)


def random_strong_kernel(
    carrier: Carrier, x_index: Sequence, y_index: Sequence, rng: random.Random
) -> Kernel:
    """Strong by construction: embedded rows are projection rows,
    everything else is random."""
    x_index, y_index = tuple(x_index), tuple(y_index)
    ys = set(y_index)
    if not ys <= set(x_index):
        raise EmbeddingError("strong kernels here use the identity embedding")
    els = tuple(carrier.elements())
    e, bot = carrier.unit, carrier.bot
    rows = []
    for x in x_index:
        if x in ys:
            rows.append(tuple(e if y == x else bot for y in y_index))
        else:
            rows.append(tuple(rng.choice(els) for _ in y_index))
    return Kernel(carrier, x_index, y_index, tuple(rows))


def save_kernel(p: Kernel, path) -> None:
    """Text form: `carrier=<kind> d=<denominator> rows=|X| cols=|Y|`,
    then one row of entries per line."""
    if isinstance(p.carrier, ChainQuantale):
        kind, d = "chain", p.carrier.d
        fmt: Callable = str
    elif isinstance(p.carrier, FloatUnitQuantale):
        kind, d = "float", 0
        fmt = lambda v: repr(float(v))  # noqa: E731
    else:
        raise ValueError("only chain and float kernels serialize to text")
    lines = [f"carrier={kind} d={d} rows={len(p.x_index)} cols={len(p.y_index)}"]
    for row in p.rows:
        lines.append(" ".join(fmt(v) for v in row))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def load_kernel(path, carrier: Carrier | None = None) -> Kernel:
    with open(path, "r", encoding="ascii") as fh:
        lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    head = dict(tok.split("=", 1) for tok in lines[0].split())
    kind = head.get("carrier")
    rows_n, cols_n = int(head["rows"]), int(head["cols"])
    body = lines[1:]
    if len(body) != rows_n:
        raise ValueError(f"expected {rows_n} rows, found {len(body)}")
    if kind == "chain":
        carrier = carrier or ChainQuantale(int(head["d"]))
        conv: Callable = int
    elif kind == "float":
        carrier = carrier or FloatUnitQuantale()
        conv = float
    else:
        raise ValueError(f"unknown carrier kind {kind!r}")
    rows = tuple(tuple(conv(tok) for tok in ln.split()) for ln in body)
    for row in rows:
        if len(row) != cols_n:
            raise ValueError("ragged kernel row")
    return Kernel(carrier, tuple(range(rows_n)), tuple(range(cols_n)), rows)
