"""Quantale-module algebra: carriers, free modules, adjoint transform pairs,
fuzzy transforms and translation-invariant morphology, with a small CLI."""

from qkit.quantale import (
    ChainQuantale,
    FloatUnitQuantale,
    PowersetMonoidQuantale,
    Monoid,
    LawReport,
    check_quantale_laws,
    residual_by_search,
)
from qkit.suplattice import (
    FiniteLattice,
    ClosureOperator,
    TabulatedMap,
    enumerate_closure_operators,
    enumerate_meet_closed_subsets,
    gamma_from_meet_closed,
    residual_of,
)
from qkit.qmodule import (
    FreeModule,
    ModuleVector,
    Nucleus,
    QuotientModule,
    basis_vector,
    check_module_laws,
    module_from_nucleus,
    nucleus_check,
    random_vector,
)
from qkit.transform import (
    Kernel,
    KernelHom,
    apply_direct,
    apply_inverse,
    classify_coder,
    hom_of_kernel,
    kernel_of_hom,
    lift_through_projection,
    random_kernel,
    random_strong_kernel,
    transform_nucleus,
)
from qkit.fuzzy import (
    FuzzyPartition,
    f_down,
    f_down_inverse,
    f_up,
    f_up_inverse,
    luk_kernel,
    luk_partition,
)
from qkit.morphology import (
    Grid,
    GreyImage,
    StructuringElement,
    closing_grey,
    dilate_binary,
    dilate_grey,
    erode_binary,
    erode_grey,
    kernel_of_structuring,
    opening_grey,
)
from qkit.pgm import PgmImage, ramp_image, read_pgm, write_pgm
from qkit.suites import run_suites

__all__ = [
    "ChainQuantale",
    "FloatUnitQuantale",
    "PowersetMonoidQuantale",
    "Monoid",
    "LawReport",
    "check_quantale_laws",
    "residual_by_search",
    "FiniteLattice",
    "ClosureOperator",
    "TabulatedMap",
    "enumerate_closure_operators",
    "enumerate_meet_closed_subsets",
    "gamma_from_meet_closed",
    "residual_of",
    "FreeModule",
    "ModuleVector",
    "Nucleus",
    "QuotientModule",
    "basis_vector",
    "check_module_laws",
    "module_from_nucleus",
    "nucleus_check",
    "random_vector",
    "Kernel",
    "KernelHom",
    "apply_direct",
    "apply_inverse",
    "classify_coder",
    "hom_of_kernel",
    "kernel_of_hom",
    "lift_through_projection",
    "random_kernel",
    "random_strong_kernel",
    "transform_nucleus",
    "FuzzyPartition",
    "f_down",
    "f_down_inverse",
    "f_up",
    "f_up_inverse",
    "luk_kernel",
    "luk_partition",
    "Grid",
    "GreyImage",
    "StructuringElement",
    "closing_grey",
    "dilate_binary",
    "dilate_grey",
    "erode_binary",
    "erode_grey",
    "kernel_of_structuring",
    "opening_grey",
    "PgmImage",
    "ramp_image",
    "read_pgm",
    "write_pgm",
    "run_suites",
]
