"""
Builtin family generators.

Each generator is registered under its tag and rebuilds the same members for
the same parameters, so a longer prefix always starts with the shorter one.
"""

import logging
from itertools import product

import numpy as np

from lca_pego.compactness import FamilyGenerator, FunctionFamily, generate_family, register_generator
from lca_pego.config import DEFAULT_SEED
from lca_pego.errors import InvalidSpec
from lca_pego.groups import GroupModel, RealGrid, ZWindow, make_group
from lca_pego.transform import GroupFunction, from_support, translate_fn

logger = logging.getLogger(__name__)

# g(0) = g(1) = 1, g(2) = -1: |g|_1 = 3 while |g-hat|_inf = sqrt(5)
COUNTEREXAMPLE_KERNEL = {(0,): 1.0, (1,): 1.0, (2,): -1.0}

DEFAULT_COUNTS = {
    "indicator_shifts": 32,
    "modulations": 32,
    "span_random": 64,
    "gaussian_bumps": 8,
}


def counterexample_kernel(group: GroupModel) -> GroupFunction:
    """The kernel g = (1, 1, -1) on 0, 1, 2 of a ZWindow or cyclic group."""
    return from_support(group, COUNTEREXAMPLE_KERNEL, "g")


def _window(generator: FamilyGenerator, needed: int, default: int) -> GroupModel:
    half_width = int(generator.params.get("half_width", default))
    if half_width < needed:
        logger.info("widening %s window from %d to %d", generator.tag, half_width, needed)
        half_width = needed
    return make_group(ZWindow(half_width=half_width))


def _with_window(generator: FamilyGenerator, group: GroupModel) -> FamilyGenerator:
    params = {**generator.params, "half_width": group.kind.half_width}
    return generator.model_copy(update={"params": params})


@register_generator("indicator_shifts")
def indicator_shifts(generator: FamilyGenerator) -> FunctionFamily:
    """1_{n} for n = 1..count on a ZWindow (pairwise sup distance 1)."""
    count = generator.count
    group = _window(generator, needed=count, default=max(64, 2 * count))
    members = [from_support(group, {(n,): 1.0}, f"indicator_{n}") for n in range(1, count + 1)]
    return FunctionFamily(tuple(members), _with_window(generator, group))


@register_generator("modulations")
def modulations(generator: FamilyGenerator) -> FunctionFamily:
    """
    T_n base for n = 0..count-1; on the dual these are the modulations
    conj(chi(n)) * base-hat. The base defaults to g = (1, 1, -1) and may be
    given as a list of values on 0, 1, ...
    """
    count = generator.count
    base_values = generator.params.get("base")
    support = (
        COUNTEREXAMPLE_KERNEL
        if base_values is None
        else {(k,): complex(*v) if isinstance(v, (list, tuple)) else float(v) for k, v in enumerate(base_values)}
    )
    reach = max(k for (k,) in support)
    group = _window(generator, needed=count - 1 + reach, default=max(64, 2 * count + reach))
    base = from_support(group, support, "base")
    members = [translate_fn(base, (n,)).renamed(f"shift_{n}") for n in range(count)]
    return FunctionFamily(tuple(members), _with_window(generator, group))


def span_basis(group: GroupModel, dim: int) -> np.ndarray:
    """Gaussians exp(-2 (k - c_j)^2) centred at c_j = j - (dim - 1) / 2."""
    k = group.axis_coords(0).astype(float)
    centres = np.arange(dim) - (dim - 1) / 2
    return np.exp(-2.0 * (k[None, :] - centres[:, None]) ** 2)


@register_generator("span_random")
def span_random(generator: FamilyGenerator) -> FunctionFamily:
    """
    Members of a fixed dim-dimensional span with coefficients in {-1, 0, 1}.

    The first 3^dim members run through the whole lattice in a seeded order;
    member k beyond that repeats the lattice point drawn by default_rng([seed, k]),
    so every prefix of every length is reproducible. At most 3^dim distinct
    functions ever appear (27 for dim 3), so N(eps) stops growing by
    construction: a stable covering table for this family confirms the
    net computation rather than giving independent evidence of compactness.
    """
    dim = int(generator.params.get("dim", 3))
    seed = int(generator.params.get("seed", DEFAULT_SEED))
    if not 1 <= dim <= 8:
        raise InvalidSpec(f"span_random needs 1 <= dim <= 8, got {dim}")
    group = _window(generator, needed=dim, default=16)
    basis = span_basis(group, dim)
    lattice = np.array(list(product((-1.0, 0.0, 1.0), repeat=dim)))
    order = np.random.default_rng(seed).permutation(len(lattice))

    members = []
    for k in range(generator.count):
        if k < len(lattice):
            coefficients = lattice[order[k]]
        else:
            coefficients = lattice[np.random.default_rng([seed, k]).integers(len(lattice))]
        members.append(GroupFunction(group, coefficients @ basis, f"span_{k}"))
    params = {**generator.params, "dim": dim, "seed": seed, "half_width": group.kind.half_width}
    return FunctionFamily(tuple(members), generator.model_copy(update={"params": params}))


@register_generator("gaussian_bumps")
def gaussian_bumps(generator: FamilyGenerator) -> FunctionFamily:
    """exp(-|x - c_k e_1|^2) with c_k = 0.1 k, sampled on a RealGrid."""
    grid = RealGrid(
        dims=int(generator.params.get("dims", 1)),
        half_extent=float(generator.params.get("half_extent", 8.0)),
        points_per_axis=int(generator.params.get("points_per_axis", 257)),
    )
    group = make_group(grid)
    axes = np.meshgrid(*(group.positions(a) for a in range(group.ndim)), indexing="ij")
    members = []
    for k in range(generator.count):
        shifted = [axes[0] - 0.1 * k] + list(axes[1:])
        squared = sum(a**2 for a in shifted)
        members.append(GroupFunction(group, np.exp(-squared), f"bump_{k}"))
    params = {**generator.params, **grid.model_dump(exclude={"type"})}
    return FunctionFamily(tuple(members), generator.model_copy(update={"params": params}))


def build_family(tag: str, count: int | None = None, **params) -> FunctionFamily:
    """Generate a builtin family by tag; `count` falls back to the tag's default."""
    if count is None:
        count = DEFAULT_COUNTS.get(tag, 32)
    if count < 1:
        raise InvalidSpec(f"family count must be positive, got {count}")
    return generate_family(FamilyGenerator(tag=tag, count=count, params=params))
