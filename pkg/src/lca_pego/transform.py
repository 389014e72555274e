"""
Functions on groups and duals, and the harmonic-analysis operations on them:
Fourier transform and its inverse, convolution, involution, translation and
the weighted L1 / L2 / sup norms.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Mapping

import numpy as np
import scipy.fft
import scipy.signal

from lca_pego.errors import GroupMismatch, InvalidSpec
from lca_pego.groups import (
    Carrier,
    DualModel,
    FiniteProduct,
    GroupElement,
    GroupModel,
    RealGrid,
    dual_of,
    shift_values,
)

logger = logging.getLogger(__name__)


class Norm(str, Enum):
    L1 = "L1"
    L2 = "L2"
    LINF = "Linf"


def _validated_values(carrier: Carrier, values, name: str | None) -> np.ndarray:
    array = np.array(values, dtype=complex)
    if array.shape != carrier.shape:
        if array.ndim == 1 and array.size == carrier.point_count:
            array = array.reshape(carrier.shape)
        else:
            raise InvalidSpec(
                f"function {name or '<unnamed>'} has shape {array.shape}, carrier needs {carrier.shape}"
            )
    if not np.all(np.isfinite(array)):
        raise InvalidSpec(f"function {name or '<unnamed>'} has non-finite values")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class GroupFunction:
    """Complex function on the points of a GroupModel (L1 / L2 / C0 carrier)."""

    group: GroupModel
    values: np.ndarray
    name: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "values", _validated_values(self.group, self.values, self.name))

    @property
    def carrier(self) -> GroupModel:
        return self.group

    def at(self, x: GroupElement) -> complex:
        """f(x), reading 0 outside a truncated window."""
        index = self.group.index_of(x)
        return 0j if index is None else complex(self.values[index])

    def renamed(self, name: str) -> "GroupFunction":
        return GroupFunction(self.group, self.values, name)


@dataclass(frozen=True, eq=False)
class DualFunction:
    """Complex function on the points of a DualModel (the carrier of f-hat)."""

    dual: DualModel
    values: np.ndarray
    name: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "values", _validated_values(self.dual, self.values, self.name))

    @property
    def carrier(self) -> DualModel:
        return self.dual

    def renamed(self, name: str) -> "DualFunction":
        return DualFunction(self.dual, self.values, name)


def from_support(group: GroupModel, support: Mapping[GroupElement, complex], name: str | None = None) -> GroupFunction:
    """Function with the given values on `support` and 0 elsewhere."""
    values = np.zeros(group.shape, dtype=complex)
    for element, value in support.items():
        element = (element,) if isinstance(element, int) else tuple(element)
        index = group.index_of(element)
        if index is None:
            raise InvalidSpec(f"point {element} lies outside the group window")
        values[index] = value
    return GroupFunction(group, values, name)


def point_mass(group: GroupModel, at: GroupElement | None = None, name: str | None = None) -> GroupFunction:
    return from_support(group, {at if at is not None else group.neutral: 1.0}, name or "delta")


def _supported_slice(values: np.ndarray, axis: int) -> slice:
    """Smallest index range along `axis` holding every nonzero entry."""
    other = tuple(i for i in range(values.ndim) if i != axis)
    mask = np.any(values != 0, axis=other) if other else values != 0
    hits = np.flatnonzero(mask)
    if hits.size == 0:
        return slice(0, 0)
    return slice(int(hits[0]), int(hits[-1]) + 1)


def _character_sum(values: np.ndarray, dual: DualModel, forward: bool) -> np.ndarray:
    """
    Direct trigonometric sum, one axis at a time.

    forward: values on the group -> sum_x f(x) conj(chi(x)) on the dual.
    backward: values on the dual -> sum_chi F(chi) chi(x) on the group.
    """
    out = values
    for axis in range(dual.ndim):
        n = dual.moduli[axis]
        k = dual.axis_coords(axis)
        x = dual.source.axis_coords(axis)
        # entries with no mass contribute nothing, so only their columns are built
        cols = _supported_slice(out, axis)
        if forward:
            table = np.exp(-2j * np.pi * np.mod(np.outer(k, x[cols]), n) / n)
        else:
            table = np.exp(2j * np.pi * np.mod(np.outer(x, k[cols]), n) / n)
        moved = np.moveaxis(out, axis, 0)[cols]
        out = np.moveaxis(np.tensordot(table, moved, axes=([1], [0])), 0, axis)
    return out


def _power_of_two_factors(group: GroupModel) -> bool:
    return isinstance(group.kind, FiniteProduct) and all(n & (n - 1) == 0 for n in group.kind.moduli)


def _dual_for(group: GroupModel, grid_size: int | None) -> DualModel:
    if grid_size is None and isinstance(group.kind, RealGrid):
        grid_size = group.kind.points_per_axis
    return dual_of(group, grid_size)


def fourier(f: GroupFunction, grid_size: int | None = None, fast: bool = True) -> DualFunction:
    """
    f-hat(chi) = sum_x f(x) conj(chi(x)) * haar_weight for every dual point.

    Exact DFT on finite groups (FFT fast path when every factor is a power of
    two), trigonometric-polynomial evaluation on the CircleGrid of a ZWindow.
    """
    dual = _dual_for(f.group, grid_size)
    if fast and _power_of_two_factors(f.group):
        values = scipy.fft.fftn(f.values)
    else:
        values = _character_sum(f.values, dual, forward=True)
    return DualFunction(dual, values * f.group.weight, f"{f.name}^" if f.name else None)


def inverse_fourier(F: DualFunction, fast: bool = True) -> GroupFunction:
    """f(x) = sum_chi F(chi) chi(x) * dual_haar_weight on the source group."""
    dual = F.dual
    group = dual.source
    if fast and _power_of_two_factors(group):
        # ifftn already divides by |G|, which is the finite dual weight
        values = scipy.fft.ifftn(F.values)
    else:
        values = _character_sum(F.values, dual, forward=False) * dual.weight
    return GroupFunction(group, values, f"{F.name}v" if F.name else None)


def _require_same_group(f: GroupFunction, g: GroupFunction) -> GroupModel:
    if f.group != g.group:
        raise GroupMismatch(f"cannot combine functions on {f.group.describe()} and {g.group.describe()}")
    return f.group


def _convolution_method(group: GroupModel) -> str:
    return "direct" if group.is_discrete else "auto"


def _full_linear_convolution(f: GroupFunction, g: GroupFunction) -> np.ndarray:
    method = _convolution_method(f.group)
    return scipy.signal.convolve(f.values, g.values, mode="full", method=method) * f.group.weight


def _crop_to_window(full: np.ndarray, group: GroupModel) -> np.ndarray:
    crop = tuple(slice(c, c + n) for c, n in zip(group.origin, group.shape))
    return full[crop]


def convolve_values(group: GroupModel, kernel: np.ndarray, values: np.ndarray) -> np.ndarray:
    """
    Raw-array form of `convolve`: sum_y kernel(x - y) values(y) * haar_weight
    on the points of `group`.

    On truncated groups the kernel is first cut down to its support, so short
    kernels on wide windows cost O(support * window). Trailing axes of
    `values` beyond the group's shape are a batch: each slice is convolved
    on its own.
    """
    batch = (1,) * (values.ndim - group.ndim)
    out = np.zeros(values.shape, dtype=complex)
    if group.is_compact:
        occupied = values != 0
        if batch:
            occupied = occupied.reshape(group.shape + (-1,)).any(axis=-1)
        for index in np.argwhere(occupied):
            y = tuple(int(i) for i in index)
            out += shift_values(kernel, y, group.cyclic).reshape(group.shape + batch) * values[y]
        return out * group.weight

    support = tuple(_supported_slice(kernel, axis) for axis in range(kernel.ndim))
    if any(s.stop <= s.start for s in support):
        return out
    trimmed = kernel[support]
    trimmed = trimmed.reshape(trimmed.shape + batch)
    full = scipy.signal.convolve(values, trimmed, mode="full", method=_convolution_method(group))
    dst, src = [], []
    for axis, (s, centre, n) in enumerate(zip(support, group.origin, group.shape)):
        # full index j sits at coordinate j - centre + lo, output index i at i - centre
        lo = s.start - centre
        start, stop = max(0, lo), min(n, full.shape[axis] + lo)
        if stop <= start:
            return out
        dst.append(slice(start, stop))
        src.append(slice(start - lo, stop - lo))
    out[tuple(dst)] = full[tuple(src)]
    return out * group.weight


def convolve(f: GroupFunction, g: GroupFunction) -> GroupFunction:
    """
    (f * g)(x) = sum_y f(x - y) g(y) * haar_weight.

    On truncated groups reads outside the window are 0 and the result is
    cropped back to the window; see `truncation_loss` for the mass dropped.
    """
    group = _require_same_group(f, g)
    name = f"{f.name}*{g.name}" if f.name and g.name else None
    return GroupFunction(group, convolve_values(group, f.values, g.values), name)


def truncation_loss(f: GroupFunction, g: GroupFunction) -> float:
    """L1 mass of the untruncated f * g lying outside the window (doubled-window reference)."""
    group = _require_same_group(f, g)
    if group.is_compact:
        return 0.0
    full = _full_linear_convolution(f, g)
    inside = np.abs(_crop_to_window(full, group)).sum()
    loss = float((np.abs(full).sum() - inside) * group.weight)
    return max(loss, 0.0)


def involution(f: GroupFunction) -> GroupFunction:
    """f*(x) = conj(f(-x))."""
    values = f.values
    for axis, wrap in enumerate(f.group.cyclic):
        values = np.flip(values, axis=axis)
        if wrap:
            # index 0 is the neutral element on cyclic axes
            values = np.roll(values, 1, axis=axis)
    return GroupFunction(f.group, np.conj(values), f"{f.name}~" if f.name else None)


def norm(f: GroupFunction | DualFunction, p: Norm | str = Norm.L1) -> float:
    """Weighted lp norm with the carrier's Haar weight (weight ignored for Linf)."""
    p = Norm(p)
    magnitudes = np.abs(f.values)
    if magnitudes.size == 0:
        return 0.0
    if p is Norm.LINF:
        return float(magnitudes.max())
    weight = f.carrier.weight
    if p is Norm.L1:
        return float(magnitudes.sum() * weight)
    return float(np.sqrt((magnitudes**2).sum() * weight))


def translate_fn(f: GroupFunction, y: GroupElement) -> GroupFunction:
    """T_y f(x) = f(x - y); mass shifted out of a truncated window is dropped."""
    y = (y,) if isinstance(y, int) else tuple(y)
    if not f.group.contains(y):
        raise InvalidSpec(f"translation {y} is not an element of the group")
    values = shift_values(f.values, y, f.group.cyclic)
    return GroupFunction(f.group, values, f"T{list(y)}{f.name}" if f.name else None)


def character_at_maximum(F: DualFunction) -> tuple[tuple[int, ...], float]:
    """Array index of the first dual point where |F| is maximal, and that maximum."""
    magnitudes = np.abs(F.values)
    flat = int(np.argmax(magnitudes))
    index = tuple(int(i) for i in np.unravel_index(flat, magnitudes.shape))
    return index, float(magnitudes[index])
