"""Acceptance suite: ten end-to-end criteria, one printed line each.

Run as `pytest tests/test_acceptance.py -s` or directly as
`python tests/test_acceptance.py`.  Every criterion prints a single
pass/fail line with its instance counts and wall time; criteria with a
runtime budget fold it into the verdict.
"""

import itertools
import math
import random
import shutil
import subprocess
import sys
import tempfile
import time
from pathlib import Path

from qkit.quantale import (
    ChainQuantale,
    GODEL,
    LUKASIEWICZ,
    Monoid,
    PowersetMonoidQuantale,
    residual_by_search,
)
from qkit.suplattice import (
    FiniteLattice,
    enumerate_closure_operators,
    enumerate_meet_closed_subsets,
    gamma_from_meet_closed,
    image_of_closure,
)
from qkit.qmodule import (
    FreeModule,
    ModuleVector,
    basis_vector,
    check_module_laws,
    nucleus_check,
    random_vector,
)
from qkit.transform import (
    Kernel,
    apply_direct,
    apply_inverse,
    classify_coder,
    hom_of_kernel,
    kernel_of_hom,
    random_kernel,
    random_strong_kernel,
    transform_nucleus,
)
from qkit.fuzzy import luk_kernel
from qkit.morphology import (
    Grid,
    StructuringElement,
    closing_grey,
    dilate_binary,
    dilate_grey,
    erode_binary,
    erode_grey,
    image_from_set,
    image_leq,
    kernel_of_structuring,
    opening_grey,
    random_image,
    set_from_image,
    translate_image,
)
from qkit.suites import quantale_suite
from qkit.pgm import ramp_image, read_pgm, write_pgm


_RESULTS = []


def _emit(num: int, ok: bool, detail: str) -> bool:
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}", flush=True)
    _RESULTS.append((num, ok))
    return ok


def _finite_carriers():
    for d in (2, 3, 4, 5, 10):
        yield ChainQuantale(d, LUKASIEWICZ)
        yield ChainQuantale(d, GODEL)
    yield PowersetMonoidQuantale(Monoid.cyclic(3))


def test_criterion_01_quantale_laws():
    t0 = time.perf_counter()
    reports = quantale_suite()
    elapsed = time.perf_counter() - t0
    bad = sum(len(r.violations) for r in reports)
    checked = sum(r.checked for r in reports)
    ok = bad == 0 and elapsed < 5.0
    assert _emit(
        1,
        ok,
        f"quantale laws on {len(reports)} carriers, {checked} instances, "
        f"{bad} violations ({elapsed:.2f}s, budget 5s)",
    )


def test_criterion_02_residual_oracle():
    t0 = time.perf_counter()
    bad = checked = 0
    for q in _finite_carriers():
        els = tuple(q.elements())
        for x, z in itertools.product(els, repeat=2):
            checked += 1
            if q.lres(x, z) != residual_by_search(q, x, z, side="left"):
                bad += 1
            if q.rres(z, x) != residual_by_search(q, x, z, side="right"):
                bad += 1
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed < 5.0
    assert _emit(
        2,
        ok,
        f"closed-form residuals vs search on {checked} pairs, "
        f"{bad} mismatches ({elapsed:.2f}s, budget 5s)",
    )


def test_criterion_03_module_laws():
    t0 = time.perf_counter()
    small = check_module_laws(ChainQuantale(3, LUKASIEWICZ), (0, 1))
    big = check_module_laws(
        ChainQuantale(10, LUKASIEWICZ),
        tuple(range(16)),
        rng=random.Random(20260813),
        n_samples=10_000,
    )
    elapsed = time.perf_counter() - t0
    bad = len(small.violations) + len(big.violations)
    ok = bad == 0 and elapsed < 30.0
    assert _emit(
        3,
        ok,
        f"module laws exhaustive ({small.checked} instances) and sampled "
        f"10000 vectors ({big.checked} instances), {bad} violations "
        f"({elapsed:.2f}s, budget 30s)",
    )


def test_criterion_04_adjunction_and_nuclei():
    t0 = time.perf_counter()
    q2 = ChainQuantale(2, LUKASIEWICZ)
    X, Y = (0, 1), (0, 1)
    mx, my = FreeModule(q2, X), FreeModule(q2, Y)
    fs, gs = tuple(mx.elements()), tuple(my.elements())
    els = tuple(q2.elements())
    bad = checked = 0
    for rows in itertools.product(itertools.product(els, repeat=2), repeat=2):
        p = Kernel(q2, X, Y, rows)
        for f in fs:
            hf = apply_direct(p, f)
            for g in gs:
                checked += 1
                if my.leq(hf, g) != mx.leq(f, apply_inverse(p, g)):
                    bad += 1

    q10 = ChainQuantale(10, LUKASIEWICZ)
    X8, Y4 = tuple(range(8)), tuple(range(4))
    rng = random.Random(4)
    for _ in range(1000):
        p = random_kernel(q10, X8, Y4, rng)
        for _ in range(5):
            f = random_vector(q10, X8, rng)
            g = random_vector(q10, Y4, rng)
            hf = apply_direct(p, f)
            lg = apply_inverse(p, g)
            checked += 2
            if apply_direct(p, apply_inverse(p, hf)) != hf:
                bad += 1
            if apply_inverse(p, apply_direct(p, lg)) != lg:
                bad += 1
        rep = nucleus_check(transform_nucleus(p), rng=rng, n_samples=6)
        checked += rep.checked
        bad += len(rep.violations)
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed < 30.0
    assert _emit(
        4,
        ok,
        f"adjunction exhaustive at d=2 plus composite identities and "
        f"nucleus checks on 1000 kernels, {checked} instances, {bad} "
        f"failures ({elapsed:.2f}s, budget 30s)",
    )


def test_criterion_05_strong_identity():
    t0 = time.perf_counter()
    q10 = ChainQuantale(10, LUKASIEWICZ)
    X5, Y2 = tuple(range(5)), (1, 3)
    targets = tuple(FreeModule(q10, Y2).elements())
    rng = random.Random(5)
    bad = 0
    for _ in range(1000):
        p = random_strong_kernel(q10, X5, Y2, rng)
        for g in targets:
            if apply_direct(p, apply_inverse(p, g)) != g:
                bad += 1
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed < 10.0
    assert _emit(
        5,
        ok,
        f"direct-after-inverse identity on 1000 strong kernels times "
        f"{len(targets)} targets, {bad} failures ({elapsed:.2f}s, budget 10s)",
    )


def test_criterion_06_representation():
    t0 = time.perf_counter()
    q5 = ChainQuantale(5, LUKASIEWICZ)
    X4, Y3 = tuple(range(4)), tuple(range(3))
    rng = random.Random(6)
    bad = 0
    for _ in range(1000):
        p = random_kernel(q5, X4, Y3, rng)
        back = kernel_of_hom(hom_of_kernel(p))
        if back.rows != p.rows or back.x_index != p.x_index or back.y_index != p.y_index:
            bad += 1

    dom = FreeModule(q5, X4)
    basis = tuple(basis_vector(q5, X4, x) for x in X4)
    for _ in range(100):
        p1 = random_kernel(q5, X4, Y3, rng)
        p2 = random_kernel(q5, Y3, Y3, rng)
        compose = lambda v: apply_direct(p2, apply_direct(p1, v))
        k = kernel_of_hom(compose, domain=dom)
        probes = basis + tuple(random_vector(q5, X4, rng) for _ in range(100))
        for v in probes:
            if apply_direct(k, v) != compose(v):
                bad += 1
    elapsed = time.perf_counter() - t0
    ok = bad == 0
    assert _emit(
        6,
        ok,
        f"kernel-hom-kernel on 1000 kernels and hom-kernel-hom on 100 "
        f"composites times 104 probes, {bad} failures ({elapsed:.2f}s)",
    )


def test_criterion_07_closure_correspondence():
    t0 = time.perf_counter()
    bad = 0
    counts = []
    for lattice, expected in ((FiniteLattice.chain(5), 16), (FiniteLattice.powerset(3), 61)):
        subsets = enumerate_meet_closed_subsets(lattice)
        closures = enumerate_closure_operators(lattice)
        built = [gamma_from_meet_closed(lattice, s) for s in subsets]
        counts.append(len(subsets))
        if not (len(subsets) == len(closures) == expected):
            bad += 1
        if set(built) != set(closures):
            bad += 1
        for s, gamma in zip(subsets, built):
            if image_of_closure(gamma) != s:
                bad += 1
            if gamma_from_meet_closed(lattice, image_of_closure(gamma)) != gamma:
                bad += 1
        for (s, gs), (t, gt) in itertools.product(zip(subsets, built), repeat=2):
            contained = s <= t
            dominated = all(lattice.leq(gt(x), gs(x)) for x in lattice.labels)
            if contained != dominated:
                bad += 1
    elapsed = time.perf_counter() - t0
    ok = bad == 0
    assert _emit(
        7,
        ok,
        f"meet-closed subsets vs closure operators, counts {counts[0]} and "
        f"{counts[1]}, order reversal on all pairs, {bad} failures "
        f"({elapsed:.2f}s)",
    )


def test_criterion_08_triangular_kernels_orthonormal():
    t0 = time.perf_counter()
    bad = 0
    cases = 0
    rng = random.Random(8)
    for n in (2, 3, 5):
        for m in (1, 2, 4):
            cases += 1
            p = luk_kernel(n, m * (n - 1) + 1)
            if not classify_coder(p).is_orthonormal:
                bad += 1
            basis = tuple(basis_vector(p.carrier, p.y_index, y) for y in p.y_index)
            probes = basis + tuple(
                random_vector(p.carrier, p.y_index, rng) for _ in range(100)
            )
            for g in probes:
                if apply_direct(p, apply_inverse(p, g)) != g:
                    bad += 1
    elapsed = time.perf_counter() - t0
    ok = bad == 0
    assert _emit(
        8,
        ok,
        f"triangular-basis kernels orthonormal and exactly invertible on "
        f"{cases} size combinations, {bad} failures ({elapsed:.2f}s)",
    )


def test_criterion_09_morphology_equivalence():
    t0 = time.perf_counter()
    bad = checked = 0

    # 1-D wrap grid, every binary image against every structuring element
    q1 = ChainQuantale(1, GODEL)
    line = Grid(4, 1)
    cells = tuple(line.cells())
    all_offsets = tuple((x, 0) for x in range(4))
    for r in range(1, 5):
        for offs in itertools.combinations(all_offsets, r):
            se = StructuringElement(q1, tuple((o, q1.unit) for o in offs))
            kern = kernel_of_structuring(se, line)
            for bits in range(16):
                members = frozenset(c for i, c in enumerate(cells) if bits >> i & 1)
                img = image_from_set(line, q1, members)
                vec = ModuleVector(q1, kern.x_index, tuple(img.at(c) for c in kern.x_index))
                dil = dilate_grey(img, se)
                ero = erode_grey(img, se)
                checked += 1
                if set_from_image(dil) != dilate_binary(line, members, offs):
                    bad += 1
                if set_from_image(ero) != erode_binary(line, members, offs):
                    bad += 1
                if tuple(dil.at(c) for c in kern.y_index) != apply_direct(kern, vec).values:
                    bad += 1
                if tuple(ero.at(c) for c in kern.x_index) != apply_inverse(kern, vec).values:
                    bad += 1

    # random grey images on a 32x32 torus, four structuring elements
    q = ChainQuantale(16, LUKASIEWICZ)
    grid = Grid(32, 32)
    rng = random.Random(9)
    ses = (
        StructuringElement(q, (((0, 0), 16), ((1, 0), 16), ((0, 1), 16))),
        StructuringElement(q, (((0, 0), 16), ((1, 0), 8))),
        StructuringElement(q, (((-1, -1), 4), ((0, 0), 16), ((1, 1), 4))),
        StructuringElement(q, (((0, 0), 12), ((2, 0), 12), ((0, 2), 12))),
    )
    kernels = tuple(kernel_of_structuring(se, grid) for se in ses)
    for i in range(100):
        img = random_image(grid, q, rng)
        se, kern = ses[i % 4], kernels[i % 4]
        vec = ModuleVector(q, kern.x_index, tuple(img.at(c) for c in kern.x_index))
        dil = dilate_grey(img, se)
        ero = erode_grey(img, se)
        checked += 1
        if tuple(dil.at(c) for c in kern.y_index) != apply_direct(kern, vec).values:
            bad += 1
        if tuple(ero.at(c) for c in kern.x_index) != apply_inverse(kern, vec).values:
            bad += 1
        other = random_image(grid, q, rng)
        if image_leq(dil, other) != image_leq(img, erode_grey(other, se)):
            bad += 1
        opened = opening_grey(img, se)
        closed = closing_grey(img, se)
        if not (image_leq(opened, img) and image_leq(img, closed)):
            bad += 1
        if opening_grey(opened, se) != opened or closing_grey(closed, se) != closed:
            bad += 1
        shift = (rng.randrange(32), rng.randrange(32))
        if dilate_grey(translate_image(img, shift), se) != translate_image(dil, shift):
            bad += 1
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed < 60.0
    assert _emit(
        9,
        ok,
        f"set, membership and kernel morphology agree on {checked} cases "
        f"with adjunction, ordering, idempotence and shift invariance, "
        f"{bad} failures ({elapsed:.2f}s, budget 60s)",
    )


def _run_cli(args, cwd):
    exe = shutil.which("qkit")
    if exe:
        proc = subprocess.run(
            [exe, *args], cwd=cwd, capture_output=True, text=True
        )
        return proc.returncode
    from qkit.cli import main as cli_main

    return cli_main([str(a) for a in args])


def test_criterion_10_cli_end_to_end():
    t0 = time.perf_counter()
    bad = 0
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        src = tmp / "ramp.pgm"
        write_pgm(src, ramp_image(65, 65, 64))
        coef, recon, coef2 = tmp / "a.coef", tmp / "r.pgm", tmp / "b.coef"
        if _run_cli(["compress", src, coef, "--n", "9"], tmp) != 0:
            bad += 1
        if _run_cli(["reconstruct", coef, recon], tmp) != 0:
            bad += 1
        original = read_pgm(src)
        rebuilt = read_pgm(recon)
        # maxval equals the chain denominator here, so pixel order is carrier order
        if not all(b >= a for a, b in zip(original.pixels, rebuilt.pixels)):
            bad += 1
        if _run_cli(["compress", recon, coef2, "--n", "9"], tmp) != 0:
            bad += 1
        if coef.read_text() != coef2.read_text():
            bad += 1
        if _run_cli(["laws"], tmp) != 0:
            bad += 1
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed < 10.0
    assert _emit(
        10,
        ok,
        f"compress, reconstruct, domination, exact recompression and law "
        f"suite exit code on a 65x65 ramp, {bad} failures "
        f"({elapsed:.2f}s, budget 10s)",
    )


def main() -> int:
    crits = [
        test_criterion_01_quantale_laws,
        test_criterion_02_residual_oracle,
        test_criterion_03_module_laws,
        test_criterion_04_adjunction_and_nuclei,
        test_criterion_05_strong_identity,
        test_criterion_06_representation,
        test_criterion_07_closure_correspondence,
        test_criterion_08_triangular_kernels_orthonormal,
        test_criterion_09_morphology_equivalence,
        test_criterion_10_cli_end_to_end,
    ]
    failures = 0
    for crit in crits:
        try:
            crit()
        except AssertionError:
            failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
