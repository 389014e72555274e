"""
Convolution operators phi -> f * phi on l2 of a desk-scale group, and three
routes to their operator norm: dense singular values on finite groups, power
iteration on truncated windows, and the Fourier sup-norm formula.
"""

import logging
from dataclasses import dataclass
from typing import Literal

import numpy as np
import scipy.linalg
from pydantic import BaseModel, ConfigDict

from lca_pego.config import DEFAULT_DUAL_GRID, DEFAULT_SEED, MATERIALIZE_CAP, POWER_BLOCK_MODES, TOLERANCES
from lca_pego.errors import GroupMismatch, TooLarge, WrongModel
from lca_pego.groups import Character, FiniteProduct, GroupModel, RealGrid, ZWindow, shift_values
from lca_pego.transform import (
    DualFunction,
    GroupFunction,
    Norm,
    character_at_maximum,
    convolve_values,
    fourier,
    involution,
    norm,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ConvolutionOperator:
    """Psi_f: phi -> f * phi, optionally backed by its dense matrix."""

    kernel: GroupFunction
    matrix: np.ndarray | None = None

    @property
    def group(self) -> GroupModel:
        return self.kernel.group

    @property
    def materialized_matrix(self) -> np.ndarray | None:
        return self.matrix


class PowerIterationResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    estimate: float
    residual: float
    iterations_used: int
    converged: bool
    block_size: int
    # the start block is seeded from argmax |f-hat|, not from noise alone
    start: Literal["fourier_maximiser"] = "fourier_maximiser"


class NormReport(BaseModel):
    """Both operator-norm routes for one kernel, side by side."""

    model_config = ConfigDict(frozen=True)

    group: dict
    l1_norm: float
    fourier_sup: float
    route: Literal["exact_svd", "power_iteration"]
    matrix_estimate: float
    gap: float
    isometry_gap: float
    iterations_used: int | None = None
    residual: float | None = None
    converged: bool | None = None
    start: str | None = None


def _dense_matrix(f: GroupFunction) -> np.ndarray:
    group = f.group
    size = group.point_count
    if isinstance(group.kind, ZWindow):
        # entry (i, j) = f(x_i - x_j); differences beyond the window read 0
        n = group.kind.half_width
        v = f.values
        column = np.zeros(size, dtype=complex)
        row = np.zeros(size, dtype=complex)
        column[: n + 1] = v[n:]
        row[: n + 1] = v[n::-1]
        return scipy.linalg.toeplitz(column, row) * group.weight

    matrix = np.empty((size, size), dtype=complex)
    for col, index in enumerate(np.ndindex(*group.shape)):
        y = group.element_at(index)
        matrix[:, col] = shift_values(f.values, y, group.cyclic).ravel()
    return matrix * group.weight


def make_operator(f: GroupFunction, materialize: bool = False) -> ConvolutionOperator:
    """
    Build Psi_f. With `materialize` the dense matrix (x, y) -> f(x - y) * weight
    is stored: circulant blocks on finite products, Toeplitz on a ZWindow.
    """
    if not materialize:
        return ConvolutionOperator(f)
    size = f.group.point_count
    if size > MATERIALIZE_CAP:
        raise TooLarge(f"materializing {size} x {size} exceeds the cap of {MATERIALIZE_CAP} points")
    return ConvolutionOperator(f, _dense_matrix(f))


def apply(op: ConvolutionOperator, phi: GroupFunction) -> GroupFunction:
    """Psi_f(phi) = f * phi, with the group's truncation semantics."""
    if phi.group != op.group:
        raise GroupMismatch(f"operator acts on {op.group.describe()}, got a function on {phi.group.describe()}")
    if op.matrix is not None:
        values = (op.matrix @ phi.values.ravel()).reshape(op.group.shape)
    else:
        values = convolve_values(op.group, op.kernel.values, phi.values)
    name = f"{op.kernel.name}*{phi.name}" if op.kernel.name and phi.name else None
    return GroupFunction(op.group, values, name)


def adjoint(op: ConvolutionOperator) -> ConvolutionOperator:
    """Psi_f^* = Psi_{f*}; on a symmetric window the truncated matrices agree too."""
    return make_operator(involution(op.kernel), materialize=op.matrix is not None)


def opnorm_exact(op: ConvolutionOperator) -> float:
    """Largest singular value of the dense matrix (finite groups only)."""
    if not isinstance(op.group.kind, FiniteProduct):
        raise WrongModel(f"exact operator norm needs a finite group, got {op.group.kind.type}")
    matrix = op.matrix if op.matrix is not None else make_operator(op.kernel, materialize=True).matrix
    return float(scipy.linalg.svdvals(matrix)[0])


def _grid_size_for(group: GroupModel, grid_size: int | None) -> int | None:
    if grid_size is None and isinstance(group.kind, ZWindow):
        return DEFAULT_DUAL_GRID
    return grid_size


def _start_block(op: ConvolutionOperator, seed: int, grid_size: int | None) -> np.ndarray:
    """
    Orthonormal start block, one column per flattened vector.

    Wave packets at the Fourier maximiser chi and at conj(chi) under the first
    POWER_BLOCK_MODES sine envelopes of the truncated axes, plus one seeded
    complex noise column. On cyclic groups the envelope is flat and the
    packets are plain characters.
    """
    group = op.group
    spectrum = fourier(op.kernel, _grid_size_for(group, grid_size))
    index, _ = character_at_maximum(spectrum)
    carrier = Character(spectrum.dual, index).table()
    truncated = [axis for axis, wrap in enumerate(group.cyclic) if not wrap]
    modes = min([POWER_BLOCK_MODES] + [group.shape[axis] for axis in truncated]) if truncated else 1

    columns = []
    for k in range(1, modes + 1):
        envelope = np.ones(group.shape)
        for axis in truncated:
            n = group.shape[axis]
            shape = [1] * group.ndim
            shape[axis] = -1
            envelope = envelope * np.sin(np.pi * k * np.arange(1, n + 1) / (n + 1)).reshape(shape)
        columns += [carrier * envelope, np.conj(carrier) * envelope]

    rng = np.random.default_rng(seed)
    columns.append(rng.standard_normal(group.shape) + 1j * rng.standard_normal(group.shape))
    # orth drops the repeated column when chi is real
    return scipy.linalg.orth(np.stack([c.ravel() for c in columns], axis=1))


def opnorm_power_iteration(
    op: ConvolutionOperator,
    iterations: int = 500,
    seed: int = DEFAULT_SEED,
    grid_size: int | None = None,
) -> PowerIterationResult:
    """
    Block power iteration on A*A for the (truncated) operator A = Psi_f.

    Each step applies A*A to an orthonormal block, takes the top Rayleigh-Ritz
    pair (lambda, v) of the block and re-orthonormalises. Returns the sigma_max
    estimate sqrt(lambda) and the residual |A*A v - lambda v| of the unit
    vector v. A residual above the configured tolerance is reported as
    `converged=False`, never raised.

    The start block is built from the Fourier maximiser, so the estimate is
    not independent of the Fourier route; `start` records this.
    """
    if iterations < 1:
        raise ValueError("iterations must be at least 1")
    group = op.group
    if isinstance(group.kind, RealGrid):
        raise WrongModel("power iteration runs on finite groups and ZWindow only")

    adj = adjoint(op)

    def apply_block(operator: ConvolutionOperator, block: np.ndarray) -> np.ndarray:
        if operator.matrix is not None:
            return operator.matrix @ block
        batched = block.reshape(group.shape + (block.shape[1],))
        return convolve_values(group, operator.kernel.values, batched).reshape(block.shape)

    block = _start_block(op, seed, grid_size)
    lam, residual, used = 0.0, 0.0, 0
    for used in range(1, iterations + 1):
        image = apply_block(adj, apply_block(op, block))
        ritz = block.conj().T @ image
        thetas, vectors = scipy.linalg.eigh((ritz + ritz.conj().T) / 2)
        lam = float(thetas[-1])
        if lam <= 0.0:
            lam, residual = 0.0, 0.0
            break
        top = vectors[:, -1]
        residual = float(np.linalg.norm(image @ top - lam * (block @ top)))
        if residual <= TOLERANCES.power_stop or used == iterations:
            break
        block, _ = scipy.linalg.qr(image, mode="economic")

    converged = residual <= TOLERANCES.power_residual
    if not converged:
        logger.warning("power iteration stopped at residual %.3e after %d iterations", residual, used)
    else:
        logger.info("power iteration converged after %d iterations (residual %.3e)", used, residual)
    return PowerIterationResult(
        estimate=float(np.sqrt(lam)),
        residual=residual,
        iterations_used=used,
        converged=converged,
        block_size=block.shape[1],
    )


def fourier_sup(f: GroupFunction, grid_size: int | None = None) -> float:
    """|f-hat|_inf on the dual grid, the Fourier route to |Psi_f|."""
    spectrum: DualFunction = fourier(f, _grid_size_for(f.group, grid_size))
    return norm(spectrum, Norm.LINF)


def isometry_gap(f: GroupFunction, grid_size: int | None = None) -> float:
    """|f|_1 - |f-hat|_inf; positive values certify Psi is not isometric at f."""
    return norm(f, Norm.L1) - fourier_sup(f, grid_size)


def norm_report(
    f: GroupFunction,
    iterations: int = 500,
    seed: int = DEFAULT_SEED,
    grid_size: int | None = None,
) -> NormReport:
    group = f.group
    l1 = norm(f, Norm.L1)
    sup = fourier_sup(f, grid_size)
    extra = {}
    if isinstance(group.kind, FiniteProduct) and group.point_count <= MATERIALIZE_CAP:
        route = "exact_svd"
        estimate = opnorm_exact(make_operator(f, materialize=True))
    else:
        route = "power_iteration"
        result = opnorm_power_iteration(make_operator(f), iterations, seed, grid_size)
        estimate = result.estimate
        extra = {
            "iterations_used": result.iterations_used,
            "residual": result.residual,
            "converged": result.converged,
            "start": result.start,
        }
    return NormReport(
        group=group.describe(),
        l1_norm=l1,
        fourier_sup=sup,
        route=route,
        matrix_estimate=estimate,
        gap=abs(estimate - sup),
        isometry_gap=l1 - sup,
        **extra,
    )
