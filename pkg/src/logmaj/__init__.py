"""Singular value functions, determinant functions and majorization orders
for weighted block operators and decreasing step functions."""

from logmaj.majorize import (
    brown_check,
    det_fk,
    in_log_plus,
    lambda_at,
    lambda_curve,
    log_det_fk,
    log_lambda_at,
)
from logmaj.matalg import (
    BlockOperator,
    abs_and_polar,
    abs_op,
    best_approx,
    distribution,
    frac_power,
    herm_eigen,
    mu_op,
    proj_join,
    spectral_proj,
)
from logmaj.norms import KyFan, Linf, Lp, norm_op, norm_step
from logmaj.stepfn import (
    StepFunction,
    Verdict,
    apply_increasing,
    combine,
    dilate,
    evaluate,
    integral,
    log_integral,
    log_submajorizes,
    min_uniform_lambda,
    rearrange,
    submajorizes,
    uniform_majorizes,
)

__version__ = "0.1.0"

__all__ = [
    "KyFan",
    "Linf",
    "Lp",
    "norm_op",
    "norm_step",
    "abs_and_polar",
    "abs_op",
    "apply_increasing",
    "best_approx",
    "BlockOperator",
    "brown_check",
    "combine",
    "det_fk",
    "dilate",
    "distribution",
    "evaluate",
    "frac_power",
    "herm_eigen",
    "in_log_plus",
    "integral",
    "lambda_at",
    "lambda_curve",
    "log_det_fk",
    "log_integral",
    "log_lambda_at",
    "log_submajorizes",
    "min_uniform_lambda",
    "mu_op",
    "proj_join",
    "rearrange",
    "spectral_proj",
    "StepFunction",
    "submajorizes",
    "uniform_majorizes",
    "Verdict",
]
