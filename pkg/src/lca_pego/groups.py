"""
Desk-scale models of locally compact abelian groups and their duals.

Three group kinds are supported:

- FiniteProduct: Z_{n_1} x ... x Z_{n_d} with counting measure.
- ZWindow: the integers truncated to [-N, N], counting measure, zero extension.
- RealGrid: a centred uniform grid on R^d with cell volume as Haar weight.

Values of functions on a carrier live in numpy arrays of shape `carrier.shape`.
Axis coordinates are integers: residues on cyclic axes, offsets from the
neutral element on truncated ones (grid steps on RealGrid).
"""

import json
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property
from math import prod
from typing import Annotated, Any, Literal, Union

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeInt,
    PositiveFloat,
    PositiveInt,
    TypeAdapter,
    ValidationError,
    field_validator,
)

from lca_pego.config import MATERIALIZE_CAP, max_points
from lca_pego.errors import InvalidSpec, TooLarge, UnconfiguredDualGrid

logger = logging.getLogger(__name__)

GroupElement = tuple[int, ...]


class FiniteProduct(BaseModel):
    model_config = ConfigDict(frozen=True)

    type: Literal["finite"] = "finite"
    moduli: tuple[PositiveInt, ...] = Field(min_length=1)


class ZWindow(BaseModel):
    model_config = ConfigDict(frozen=True)

    type: Literal["z_window"] = "z_window"
    half_width: NonNegativeInt


class RealGrid(BaseModel):
    model_config = ConfigDict(frozen=True)

    type: Literal["real_grid"] = "real_grid"
    dims: PositiveInt
    half_extent: PositiveFloat
    points_per_axis: PositiveInt

    @field_validator("points_per_axis")
    @classmethod
    def _odd(cls, value: int) -> int:
        if value % 2 == 0:
            raise ValueError("points_per_axis must be odd")
        return value

    @property
    def step(self) -> float:
        return 2.0 * self.half_extent / self.points_per_axis


GroupKind = Annotated[Union[FiniteProduct, ZWindow, RealGrid], Field(discriminator="type")]
_GROUP_KIND = TypeAdapter(GroupKind)


class Carrier(BaseModel, ABC):
    """Geometry shared by groups and duals: shape, wrap flags and neutral index."""

    model_config = ConfigDict(frozen=True)

    @property
    @abstractmethod
    def shape(self) -> tuple[int, ...]:
        ...

    @property
    @abstractmethod
    def cyclic(self) -> tuple[bool, ...]:
        ...

    @property
    @abstractmethod
    def origin(self) -> tuple[int, ...]:
        ...

    @property
    @abstractmethod
    def weight(self) -> float:
        ...

    @property
    @abstractmethod
    def is_discrete(self) -> bool:
        ...

    @property
    @abstractmethod
    def is_compact(self) -> bool:
        ...

    @property
    def ndim(self) -> int:
        return len(self.shape)

    @property
    def point_count(self) -> int:
        return prod(self.shape)

    def axis_coords(self, axis: int) -> np.ndarray:
        """Integer coordinate of every array position along `axis`."""
        return np.arange(self.shape[axis], dtype=np.int64) - self.origin[axis]

    def index_of(self, element: GroupElement) -> tuple[int, ...] | None:
        """Array index of `element`, or None when it lies outside a truncated axis."""
        if len(element) != self.ndim:
            raise InvalidSpec(f"element {element} has {len(element)} coordinates, carrier has {self.ndim}")
        index = []
        for coord, n, wrap, centre in zip(element, self.shape, self.cyclic, self.origin):
            if wrap:
                index.append(int(coord) % n)
                continue
            position = int(coord) + centre
            if position < 0 or position >= n:
                return None
            index.append(position)
        return tuple(index)

    def element_at(self, index: tuple[int, ...]) -> GroupElement:
        return tuple(int(i) - c for i, c in zip(index, self.origin))

    def contains(self, element: GroupElement) -> bool:
        return self.index_of(element) is not None

    def distance_from_origin(self) -> np.ndarray:
        """Max-norm distance (in index steps) of every point from the neutral element."""
        grids = []
        for axis, (n, wrap) in enumerate(zip(self.shape, self.cyclic)):
            coords = np.abs(self.axis_coords(axis))
            if wrap:
                coords = np.minimum(coords % n, n - coords % n)
            grids.append(coords)
        mesh = np.meshgrid(*grids, indexing="ij")
        return np.max(np.stack(mesh), axis=0)

    @property
    def max_radius(self) -> int:
        return int(self.distance_from_origin().max())


class GroupModel(Carrier):
    kind: GroupKind

    @property
    def shape(self) -> tuple[int, ...]:
        kind = self.kind
        if isinstance(kind, FiniteProduct):
            return tuple(kind.moduli)
        if isinstance(kind, ZWindow):
            return (2 * kind.half_width + 1,)
        return (kind.points_per_axis,) * kind.dims

    @property
    def cyclic(self) -> tuple[bool, ...]:
        return (isinstance(self.kind, FiniteProduct),) * self.ndim

    @property
    def origin(self) -> tuple[int, ...]:
        kind = self.kind
        if isinstance(kind, FiniteProduct):
            return (0,) * self.ndim
        if isinstance(kind, ZWindow):
            return (kind.half_width,)
        return ((kind.points_per_axis - 1) // 2,) * kind.dims

    @property
    def weight(self) -> float:
        kind = self.kind
        if isinstance(kind, RealGrid):
            return kind.step**kind.dims
        return 1.0

    haar_weight = weight

    @property
    def step(self) -> float:
        return self.kind.step if isinstance(self.kind, RealGrid) else 1.0

    @property
    def is_discrete(self) -> bool:
        return not isinstance(self.kind, RealGrid)

    @property
    def is_compact(self) -> bool:
        return isinstance(self.kind, FiniteProduct)

    @property
    def neutral(self) -> GroupElement:
        return (0,) * self.ndim

    def positions(self, axis: int) -> np.ndarray:
        """Real positions along `axis` (integer coordinates scaled by the grid step)."""
        return self.axis_coords(axis) * self.step

    def describe(self) -> dict[str, Any]:
        return self.kind.model_dump()


class FiniteDual(BaseModel):
    model_config = ConfigDict(frozen=True)

    type: Literal["finite_dual"] = "finite_dual"
    moduli: tuple[PositiveInt, ...]


class CircleGrid(BaseModel):
    model_config = ConfigDict(frozen=True)

    type: Literal["circle_grid"] = "circle_grid"
    grid_size: PositiveInt


class RealGridDual(BaseModel):
    model_config = ConfigDict(frozen=True)

    type: Literal["real_grid_dual"] = "real_grid_dual"
    dims: PositiveInt
    step: PositiveFloat
    grid_size: PositiveInt

    @property
    def spacing(self) -> float:
        return 1.0 / (self.grid_size * self.step)


DualKind = Annotated[Union[FiniteDual, CircleGrid, RealGridDual], Field(discriminator="type")]


class DualModel(Carrier):
    kind: DualKind
    source: GroupModel

    @property
    def shape(self) -> tuple[int, ...]:
        kind = self.kind
        if isinstance(kind, FiniteDual):
            return tuple(kind.moduli)
        if isinstance(kind, CircleGrid):
            return (kind.grid_size,)
        return (kind.grid_size,) * kind.dims

    @property
    def cyclic(self) -> tuple[bool, ...]:
        return (not isinstance(self.kind, RealGridDual),) * self.ndim

    @property
    def origin(self) -> tuple[int, ...]:
        kind = self.kind
        if isinstance(kind, RealGridDual):
            return (kind.grid_size // 2,) * kind.dims
        return (0,) * self.ndim

    @property
    def weight(self) -> float:
        kind = self.kind
        if isinstance(kind, FiniteDual):
            return 1.0 / prod(kind.moduli)
        if isinstance(kind, CircleGrid):
            return 1.0 / kind.grid_size
        return kind.spacing**kind.dims

    dual_haar_weight = weight

    @property
    def is_discrete(self) -> bool:
        return isinstance(self.kind, FiniteDual)

    @property
    def is_compact(self) -> bool:
        return not isinstance(self.kind, RealGridDual)

    @property
    def moduli(self) -> tuple[int, ...]:
        """Modulus used in the integer phase k*x mod n along each axis."""
        kind = self.kind
        if isinstance(kind, FiniteDual):
            return tuple(kind.moduli)
        if isinstance(kind, CircleGrid):
            return (kind.grid_size,)
        return (kind.grid_size,) * kind.dims

    def alphas(self) -> np.ndarray:
        """Grid points j/M of a CircleGrid (the parameter of chi_alpha)."""
        if not isinstance(self.kind, CircleGrid):
            raise InvalidSpec("alphas are defined on CircleGrid duals only")
        return np.arange(self.kind.grid_size) / self.kind.grid_size

    def frequencies(self, axis: int) -> np.ndarray:
        """Real frequency of every dual point along `axis` (RealGridDual only)."""
        if not isinstance(self.kind, RealGridDual):
            raise InvalidSpec("frequencies are defined on RealGridDual duals only")
        return self.axis_coords(axis) * self.kind.spacing

    def describe(self) -> dict[str, Any]:
        return self.kind.model_dump()


def _check_cap(shape: tuple[int, ...], what: str) -> None:
    count = prod(shape)
    cap = max_points()
    if count > cap:
        raise InvalidSpec(f"{what} has {count} points, exceeding the cap of {cap}")


def make_group(spec: GroupModel | FiniteProduct | ZWindow | RealGrid | dict | str) -> GroupModel:
    """
    Validate a group spec and return the corresponding GroupModel.

    Accepts a kind model, a dict such as {"type": "finite", "moduli": [4, 3]},
    or the same as a JSON string.
    """
    if isinstance(spec, GroupModel):
        group = spec
    else:
        try:
            if isinstance(spec, str):
                spec = json.loads(spec)
            kind = spec if isinstance(spec, (FiniteProduct, ZWindow, RealGrid)) else _GROUP_KIND.validate_python(spec)
        except (ValidationError, json.JSONDecodeError, TypeError) as e:
            raise InvalidSpec(f"invalid group spec: {e}") from e
        group = GroupModel(kind=kind)
    _check_cap(group.shape, "group")
    return group


def dual_of(group: GroupModel, grid_size: int | None = None) -> DualModel:
    """Dual model of `group`; `grid_size` is required for ZWindow and RealGrid."""
    kind = group.kind
    if isinstance(kind, FiniteProduct):
        return DualModel(kind=FiniteDual(moduli=kind.moduli), source=group)
    if grid_size is None:
        raise UnconfiguredDualGrid(f"a dual grid size is required for {kind.type} groups")
    if grid_size < 2:
        raise InvalidSpec(f"dual grid size must be at least 2, got {grid_size}")
    if isinstance(kind, ZWindow):
        dual = DualModel(kind=CircleGrid(grid_size=grid_size), source=group)
    else:
        dual = DualModel(kind=RealGridDual(dims=kind.dims, step=kind.step, grid_size=grid_size), source=group)
    _check_cap(dual.shape, "dual")
    return dual


def translate(group: GroupModel, x: GroupElement, y: GroupElement) -> GroupElement | None:
    """x - y in `group`; None when the difference leaves a truncated window."""
    difference = tuple(int(a) - int(b) for a, b in zip(x, y))
    if group.is_compact:
        return tuple(d % n for d, n in zip(difference, group.shape))
    return difference if group.contains(difference) else None


def axis_character_table(dual: DualModel, axis: int) -> np.ndarray:
    """
    Matrix chi(x) for the 1-d factor `axis`: rows are dual points, columns are
    source points. Phases are reduced as integers (k*x mod n) before the
    exponential so equivalent phases evaluate identically.
    """
    n = dual.moduli[axis]
    k = dual.axis_coords(axis)
    x = dual.source.axis_coords(axis)
    phase = np.mod(np.outer(k, x), n)
    return np.exp(2j * np.pi * phase / n)


def character_table(dual: DualModel) -> np.ndarray:
    """All characters as a matrix: row j is chi_j evaluated at every group point (C-order)."""
    size = dual.point_count * dual.source.point_count
    if size > MATERIALIZE_CAP**2:
        raise TooLarge(f"character table of {dual.point_count} x {dual.source.point_count} entries is too large")
    table = np.ones((1, 1), dtype=complex)
    for axis in range(dual.ndim):
        table = np.kron(table, axis_character_table(dual, axis))
    return table


def dual_integrate(dual: DualModel, values: Any) -> complex:
    """Haar integral over the dual: sum of values times the dual weight."""
    array = np.asarray(getattr(values, "values", values))
    if array.shape != dual.shape:
        raise InvalidSpec(f"values of shape {array.shape} do not match dual shape {dual.shape}")
    return complex(np.sum(array) * dual.weight)


@dataclass(frozen=True)
class Character:
    """The character of `dual` at array position `index`."""

    dual: DualModel
    index: tuple[int, ...]

    @cached_property
    def coords(self) -> tuple[int, ...]:
        return self.dual.element_at(self.index)

    def __call__(self, x: GroupElement) -> complex:
        turns = 0.0
        for k, xi, n in zip(self.coords, x, self.dual.moduli):
            turns += ((k * int(xi)) % n) / n
        return complex(np.exp(2j * np.pi * turns))

    @property
    def alpha(self) -> float:
        """h(chi_alpha) = alpha for CircleGrid characters."""
        return self.index[0] / self.dual.shape[0]

    def table(self) -> np.ndarray:
        """Values of the character on every source point."""
        result = np.ones(self.dual.source.shape, dtype=complex)
        for axis, (k, n) in enumerate(zip(self.coords, self.dual.moduli)):
            x = self.dual.source.axis_coords(axis)
            row = np.exp(2j * np.pi * np.mod(k * x, n) / n)
            shape = [1] * self.dual.ndim
            shape[axis] = -1
            result = result * row.reshape(shape)
        return result


def characters(dual: DualModel) -> list[Character]:
    return [Character(dual, tuple(int(i) for i in idx)) for idx in np.ndindex(*dual.shape)]


def _shift_axis(values: np.ndarray, offset: int, axis: int, wrap: bool) -> np.ndarray:
    if offset == 0:
        return values
    if wrap:
        return np.roll(values, offset, axis=axis)
    n = values.shape[axis]
    out = np.zeros_like(values)
    if abs(offset) >= n:
        return out
    src = [slice(None)] * values.ndim
    dst = [slice(None)] * values.ndim
    if offset > 0:
        dst[axis] = slice(offset, None)
        src[axis] = slice(None, n - offset)
    else:
        dst[axis] = slice(None, n + offset)
        src[axis] = slice(-offset, None)
    out[tuple(dst)] = values[tuple(src)]
    return out


def shift_values(values: np.ndarray, offset: tuple[int, ...], cyclic: tuple[bool, ...]) -> np.ndarray:
    """
    Array of x -> values(x - offset): wraps on cyclic axes, zero-fills
    truncated ones.
    """
    out = values
    for axis, (step, wrap) in enumerate(zip(offset, cyclic)):
        out = _shift_axis(out, int(step), axis, wrap)
    return out
