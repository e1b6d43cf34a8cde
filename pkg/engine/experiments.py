"""
Benchmark experiments. Each one times a single arithmetic operation on a
fresh copy of the compressed model matrix and estimates its error by power
iteration against the dense matrix.
"""

import time
from dataclasses import dataclass, field
from typing import Any, Dict

import numpy as np

from arithmetic import get_multiply, h_inverse, hchol_decomp, hlr_decomp
from arithmetic import precond_error, spectral_norm_estimate
from hmatrix import HMatrix, h_zero, matvec, rmatvec
from lowrank import TruncationControl
from utils import Registry

EXPERIMENTS = Registry("experiments")


@dataclass
class ExperimentContext:
    g: HMatrix            # compressed matrix, tree ordering; not modified
    dense: np.ndarray     # dense matrix, tree ordering
    variant: str
    ctl: TruncationControl
    power_iterations: int = 20
    seed: int = 0


@dataclass
class ExperimentResult:
    wall_s: float
    error_est: float
    metadata: Dict[str, Any] = field(default_factory=dict)


@EXPERIMENTS.register("mul")
def run_mul(ctx: ExperimentContext) -> ExperimentResult:
    """ Z = G G, error ||Z - D D|| / ||D D|| """
    multiply = get_multiply(ctx.variant)
    z = h_zero(ctx.g.block)

    start = time.perf_counter()
    multiply(1.0, ctx.g, ctx.g, z, ctx.ctl)
    wall = time.perf_counter() - start

    dd = ctx.dense @ ctx.dense
    n = dd.shape[0]
    err = spectral_norm_estimate(
        lambda v: matvec(z, v) - dd @ v,
        lambda v: rmatvec(z, v) - dd.T @ v,
        n, ctx.power_iterations, ctx.seed,
    )
    ref = spectral_norm_estimate(lambda v: dd @ v, lambda v: dd.T @ v, n, ctx.power_iterations, ctx.seed)
    return ExperimentResult(wall, err / ref if ref > 0.0 else err)


@EXPERIMENTS.register("inv")
def run_inv(ctx: ExperimentContext) -> ExperimentResult:
    """ error ||I - G~^{-1} G|| """
    g = ctx.g.copy()

    start = time.perf_counter()
    h_inverse(g, ctx.ctl, ctx.variant)
    wall = time.perf_counter() - start

    err = precond_error(
        lambda v: ctx.dense @ v, lambda v: matvec(g, v), ctx.dense.shape[0],
        ctx.power_iterations, ctx.seed,
        g_apply_adjoint=lambda v: ctx.dense.T @ v,
        precond_apply_adjoint=lambda v: rmatvec(g, v),
    )
    return ExperimentResult(wall, err)


def _factor_error(ctx: ExperimentContext, pair) -> float:
    return precond_error(
        lambda v: ctx.dense @ v, pair.solve, ctx.dense.shape[0],
        ctx.power_iterations, ctx.seed,
        g_apply_adjoint=lambda v: ctx.dense.T @ v,
        precond_apply_adjoint=pair.solve_adjoint,
    )


@EXPERIMENTS.register("chol")
def run_chol(ctx: ExperimentContext) -> ExperimentResult:
    """ error ||I - (L~ L~^*)^{-1} G|| """
    g = ctx.g.copy()

    start = time.perf_counter()
    pair = hchol_decomp(g, ctx.ctl, ctx.variant)
    wall = time.perf_counter() - start

    return ExperimentResult(wall, _factor_error(ctx, pair))


@EXPERIMENTS.register("lr")
def run_lr(ctx: ExperimentContext) -> ExperimentResult:
    """ error ||I - (L~ R~)^{-1} G|| """
    g = ctx.g.copy()

    start = time.perf_counter()
    pair = hlr_decomp(g, ctx.ctl, ctx.variant)
    wall = time.perf_counter() - start

    return ExperimentResult(wall, _factor_error(ctx, pair))
