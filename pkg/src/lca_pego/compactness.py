"""
Compactness diagnostics for finite prefixes of function families.

Two criteria sets are evaluated on the same machinery:

- Pego (P1-P3) on the Fourier images of an L1 family: boundedness,
  equicontinuity and equivanishing of the transforms on the dual carrier.
- Arzela-Ascoli (AA1-AA3) on a C0 family directly on its carrier.

Neighbourhoods are max-norm balls counted in carrier index steps. Verdicts on
a finite prefix are backed by an independent covering-number oracle: a greedy
epsilon-net evaluated on the prefix and on a doubled prefix.
"""

import logging
from dataclasses import dataclass
from itertools import product
from typing import Any, Callable, Iterator, Literal, Sequence

import numpy as np
import polars as pl
from pydantic import BaseModel, ConfigDict, Field, PositiveInt, model_validator

from lca_pego.config import (
    DEFAULT_DUAL_GRID,
    DEFAULT_EPS_SCHEDULE,
    THRESHOLDS,
    SudakovThresholds,
    Thresholds,
)
from lca_pego.errors import CarrierMismatch, GeneratorUnavailable, InvalidSpec
from lca_pego.groups import Carrier, GroupElement, GroupModel, ZWindow, shift_values
from lca_pego.transform import DualFunction, GroupFunction, Norm, fourier

logger = logging.getLogger(__name__)

Member = GroupFunction | DualFunction
Criteria = Literal["pego", "aa"]


class FamilyGenerator(BaseModel):
    """Recipe of a parametrized family; `count` is the prefix length."""

    model_config = ConfigDict(frozen=True)

    tag: str
    count: PositiveInt
    params: dict[str, Any] = Field(default_factory=dict)


_GENERATORS: dict[str, Callable[[FamilyGenerator], "FunctionFamily"]] = {}


def register_generator(tag: str):
    def decorator(builder: Callable[[FamilyGenerator], "FunctionFamily"]):
        _GENERATORS[tag] = builder
        return builder

    return decorator


def generator_tags() -> list[str]:
    return sorted(_GENERATORS)


def generate_family(generator: FamilyGenerator) -> "FunctionFamily":
    try:
        builder = _GENERATORS[generator.tag]
    except KeyError:
        raise InvalidSpec(f"unknown family generator {generator.tag!r}; known: {generator_tags()}") from None
    family = builder(generator)
    logger.info("built %s family with %d members", generator.tag, len(family))
    return family


@dataclass(frozen=True, eq=False)
class FunctionFamily:
    """Ordered, nonempty collection of functions sharing one carrier."""

    members: tuple[Member, ...]
    generator: FamilyGenerator | None = None

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise InvalidSpec("a family needs at least one member")
        first = members[0]
        for member in members[1:]:
            if type(member) is not type(first) or member.carrier != first.carrier:
                raise CarrierMismatch("all family members must live on one carrier")
        members = tuple(m if m.name else m.renamed(f"member_{i}") for i, m in enumerate(members))
        names = [m.name for m in members]
        if len(set(names)) != len(names):
            duplicates = sorted({n for n in names if names.count(n) > 1})
            raise InvalidSpec(f"member names must be unique, repeated: {duplicates}")
        object.__setattr__(self, "members", members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Member]:
        return iter(self.members)

    @property
    def carrier(self) -> Carrier:
        return self.members[0].carrier

    @property
    def generator_tag(self) -> str | None:
        return self.generator.tag if self.generator else None

    def stack(self) -> np.ndarray:
        """Member values stacked on a leading axis."""
        return np.stack([m.values for m in self.members])

    def extend(self, count: int) -> "FunctionFamily":
        """Regenerate a prefix of length `count`; the first members are unchanged."""
        if self.generator is None:
            raise GeneratorUnavailable("this family has no generator to extend it with")
        return generate_family(self.generator.model_copy(update={"count": count}))

    def transformed(self, grid_size: int | None = None) -> "FunctionFamily":
        """Family of Fourier transforms of the (group) members."""
        if not all(isinstance(m, GroupFunction) for m in self.members):
            raise CarrierMismatch("only families on a group can be Fourier transformed")
        return FunctionFamily(tuple(fourier(m, grid_size) for m in self.members))


def make_family(members: Sequence[Member], generator: FamilyGenerator | None = None) -> FunctionFamily:
    return FunctionFamily(tuple(members), generator)


# ---------------------------------------------------------------------------
# Moduli
# ---------------------------------------------------------------------------


def _offsets_at(radius: int, ndim: int) -> Iterator[GroupElement]:
    """Offsets with max-norm exactly `radius`."""
    if radius == 0:
        yield (0,) * ndim
        return
    span = range(-radius, radius + 1)
    for y in product(span, repeat=ndim):
        if max(abs(c) for c in y) == radius:
            yield y


def _read_shifted(stack: np.ndarray, carrier: Carrier, y: GroupElement) -> np.ndarray:
    """Array of f(x + y) for every member f and point x; off-carrier reads are 0."""
    offset = (0,) + tuple(-c for c in y)
    return shift_values(stack, offset, (True,) + carrier.cyclic)


def _radius_limit(carrier: Carrier) -> int:
    """Largest radius that still produces new offsets on the carrier."""
    return max(n // 2 if wrap else n for n, wrap in zip(carrier.shape, carrier.cyclic))


def pointwise_table(fam: FunctionFamily) -> np.ndarray:
    """max over members of |f(x)| at every carrier point."""
    return np.abs(fam.stack()).max(axis=0)


def equicontinuity_modulus(fam: FunctionFamily, radii: Sequence[int]) -> dict[int, float]:
    """
    omega(r) = max over members f, points x and offsets |y| <= r of
    |f(x + y) - f(x)|, for every requested radius.
    """
    carrier = fam.carrier
    stack = fam.stack()
    limit = _radius_limit(carrier)
    wanted = sorted({int(r) for r in radii})
    if not wanted:
        return {}
    if wanted[0] < 0:
        raise InvalidSpec("radii must be nonnegative")
    by_radius = {0: 0.0}
    omega = 0.0
    for r in range(1, min(wanted[-1], limit) + 1):
        for y in _offsets_at(r, carrier.ndim):
            omega = max(omega, float(np.abs(_read_shifted(stack, carrier, y) - stack).max()))
        by_radius[r] = omega
    return {r: by_radius[min(r, limit)] for r in wanted}


def equivanishing_tail(fam: FunctionFamily, windows: Sequence[int] | None = None) -> dict[int, float]:
    """
    tau(m) = max over members of sup |f| outside the centred window of radius m
    (0 once the window covers the carrier).
    """
    carrier = fam.carrier
    peak = pointwise_table(fam)
    distance = carrier.distance_from_origin()
    top = int(distance.max())
    ring_max = np.zeros(top + 2)
    np.maximum.at(ring_max, distance.ravel(), peak.ravel())
    # tail[m] = max over rings strictly beyond m
    tail = np.maximum.accumulate(ring_max[::-1])[::-1][1:]
    if windows is None:
        windows = range(top + 1)
    return {int(m): float(tail[m]) if m <= top else 0.0 for m in windows}


def _table_radii(carrier: Carrier, thresholds: Thresholds) -> list[int]:
    limit = _radius_limit(carrier)
    radii = {r for r in (0, 1, 2, 4, 8, 16) if r <= limit}
    radii.add(thresholds.radius)
    return sorted(radii)


# ---------------------------------------------------------------------------
# Epsilon nets
# ---------------------------------------------------------------------------


class EpsilonNet(BaseModel):
    model_config = ConfigDict(frozen=True)

    eps: float
    norm: Norm
    net: list[int]
    covering_number: int


def _distances(stack: np.ndarray, i: int, others: Sequence[int], p: Norm, weight: float) -> np.ndarray:
    diff = np.abs(stack[list(others)] - stack[i]).reshape(len(others), -1)
    if p is Norm.LINF:
        return diff.max(axis=1)
    if p is Norm.L1:
        return diff.sum(axis=1) * weight
    return np.sqrt((diff**2).sum(axis=1) * weight)


def greedy_epsilon_net(fam: FunctionFamily, eps: float, norm_p: Norm | str = Norm.LINF) -> EpsilonNet:
    """
    Scan members by index; a member joins the net iff it lies at distance
    >= eps from every current net member.
    """
    if eps <= 0:
        raise InvalidSpec(f"eps must be positive, got {eps}")
    p = Norm(norm_p)
    stack = fam.stack()
    weight = fam.carrier.weight
    net = [0]
    for i in range(1, len(fam)):
        if np.all(_distances(stack, i, net, p, weight) >= eps):
            net.append(i)
    return EpsilonNet(eps=eps, norm=p, net=net, covering_number=len(net))


def verify_net(
    fam: FunctionFamily,
    net: Sequence[int],
    eps: float,
    norm_p: Norm | str = Norm.LINF,
    separation: float | None = None,
) -> bool:
    """
    Exhaustive check: every member is within eps of some net member and net
    members are pairwise at least `separation` (default eps) apart.
    """
    p = Norm(norm_p)
    if not net:
        return False
    stack = fam.stack()
    weight = fam.carrier.weight
    separation = eps if separation is None else separation
    for i in range(len(fam)):
        if not np.any(_distances(stack, i, net, p, weight) < eps):
            return False
    for a, i in enumerate(net):
        rest = list(net[a + 1 :])
        if rest and np.any(_distances(stack, i, rest, p, weight) < separation):
            return False
    return True


class CoveringEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    eps: float
    covering_number: int
    net: list[int]
    # eps the net was built at; smaller than `eps` when a finer net was reused
    built_at: float


def covering_table(fam: FunctionFamily, eps_schedule: Sequence[float], norm_p: Norm | str) -> list[CoveringEntry]:
    """
    Greedy nets for every eps, ascending. An eps'-net with eps' <= eps also
    covers at eps, so a coarser level never reports more members than a finer
    one.
    """
    schedule = sorted({float(e) for e in eps_schedule})
    if not schedule or schedule[0] <= 0:
        raise InvalidSpec("eps schedule must be nonempty and positive")
    entries: list[CoveringEntry] = []
    for eps in schedule:
        net = greedy_epsilon_net(fam, eps, norm_p)
        entry = CoveringEntry(eps=eps, covering_number=net.covering_number, net=net.net, built_at=eps)
        if entries and entries[-1].covering_number < entry.covering_number:
            logger.info("greedy net at eps=%g is larger than at eps=%g; reusing the finer net", eps, entries[-1].eps)
            entry = entries[-1].model_copy(update={"eps": eps})
        entries.append(entry)
    return entries


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


class ModulusEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    radius: int
    omega: float


class TailEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    window: int
    tau: float


class CriterionVerdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    value: float
    threshold: float
    passed: bool
    note: str | None = None


class SudakovBound(BaseModel):
    model_config = ConfigDict(frozen=True)

    bound: float | None
    reason: str
    window: int | None = None
    radius: int | None = None
    witness: tuple[int, ...] | None = None
    iterates: int | None = None
    family_sup: float

    @property
    def applicable(self) -> bool:
        return self.bound is not None


class CompactnessReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    criteria: Criteria
    carrier: dict[str, Any]
    member_count: int
    generator_tag: str | None
    distance: Norm
    pointwise_bound: float
    pointwise_table: list[float]
    equicontinuity: list[ModulusEntry]
    equivanishing: list[TailEntry]
    covering: list[CoveringEntry]
    verdicts: list[CriterionVerdict]
    passed: bool
    # boundedness replayed from the other two criteria on non-compact carriers
    boundedness: SudakovBound | None = None

    @model_validator(mode="after")
    def _monotone_tables(self) -> "CompactnessReport":
        omegas = [e.omega for e in sorted(self.equicontinuity, key=lambda e: e.radius)]
        if any(b < a for a, b in zip(omegas, omegas[1:])):
            raise ValueError("equicontinuity modulus must be nondecreasing in the radius")
        taus = [e.tau for e in sorted(self.equivanishing, key=lambda e: e.window)]
        if any(b > a for a, b in zip(taus, taus[1:])):
            raise ValueError("equivanishing tail must be nonincreasing in the window")
        counts = [e.covering_number for e in sorted(self.covering, key=lambda e: e.eps)]
        if any(b > a for a, b in zip(counts, counts[1:])):
            raise ValueError("covering numbers must be nonincreasing in eps")
        if any(c > self.member_count for c in counts):
            raise ValueError("a covering number cannot exceed the member count")
        return self

    def verdict(self, name: str) -> CriterionVerdict:
        return next(v for v in self.verdicts if v.name == name)

    def covering_number(self, eps: float) -> int:
        return next(e.covering_number for e in self.covering if e.eps == eps)

    def omega(self, radius: int) -> float:
        return next(e.omega for e in self.equicontinuity if e.radius == radius)

    def tau(self, window: int) -> float:
        return next(e.tau for e in self.equivanishing if e.window == window)

    def to_frame(self) -> pl.DataFrame:
        """omega, tau and N tables in one long frame (table, argument, value)."""
        frames = [
            pl.DataFrame(
                {
                    "table": "omega",
                    "argument": [float(e.radius) for e in self.equicontinuity],
                    "value": [e.omega for e in self.equicontinuity],
                }
            ),
            pl.DataFrame(
                {
                    "table": "tau",
                    "argument": [float(e.window) for e in self.equivanishing],
                    "value": [e.tau for e in self.equivanishing],
                }
            ),
            pl.DataFrame(
                {
                    "table": "covering",
                    "argument": [e.eps for e in self.covering],
                    "value": [float(e.covering_number) for e in self.covering],
                }
            ),
        ]
        schema = {"table": pl.String, "argument": pl.Float64, "value": pl.Float64}
        return pl.concat([f.cast(schema) for f in frames])


def _lookup(table: dict[int, float], key: int) -> float:
    if key in table:
        return table[key]
    return table[max(k for k in table if k <= key)] if any(k <= key for k in table) else 0.0


def _build_report(
    criteria: Criteria,
    subject: FunctionFamily,
    net_family: FunctionFamily,
    distance: Norm,
    thresholds: Thresholds,
    eps_schedule: Sequence[float],
    names: tuple[str, str, str],
) -> CompactnessReport:
    """Moduli of `subject`, nets of `net_family`, verdicts under `thresholds`."""
    carrier = subject.carrier
    peak = pointwise_table(subject)
    bound = float(peak.max())
    omega = equicontinuity_modulus(subject, _table_radii(carrier, thresholds))
    tau = equivanishing_tail(subject)
    covering = covering_table(net_family, eps_schedule, distance)

    b_name, c_name, t_name = names
    # on a non-compact carrier the bound follows from the other two criteria
    boundedness = None if carrier.is_compact else sudakov_bound(subject)
    implied = None
    if boundedness is not None and boundedness.applicable:
        implied = f"implied by {c_name} and {t_name} (replayed bound {boundedness.bound:g})"
    verdicts = [
        CriterionVerdict(
            name=b_name, value=bound, threshold=thresholds.bound, passed=bound <= thresholds.bound, note=implied
        )
    ]

    # discrete groups: radius-0 neighbourhoods make AA2 vacuous; a finite dual
    # is judged on its index shifts like any other dual carrier
    if carrier.is_discrete and criteria == "aa":
        verdicts.append(
            CriterionVerdict(
                name=c_name,
                value=omega[0],
                threshold=thresholds.eps_cont,
                passed=True,
                note="vacuous on a discrete carrier (radius-0 neighbourhoods)",
            )
        )
    else:
        value = omega[thresholds.radius]
        verdicts.append(
            CriterionVerdict(
                name=c_name, value=value, threshold=thresholds.eps_cont, passed=value < thresholds.eps_cont
            )
        )

    tail_value = _lookup(tau, thresholds.window)
    if carrier.is_compact:
        verdicts.append(
            CriterionVerdict(
                name=t_name,
                value=tail_value,
                threshold=thresholds.eps_tail,
                passed=True,
                note="trivially satisfied (compact carrier)" if criteria == "aa" else "trivially satisfied (compact dual)",
            )
        )
    else:
        verdicts.append(
            CriterionVerdict(
                name=t_name,
                value=tail_value,
                threshold=thresholds.eps_tail,
                passed=tail_value < thresholds.eps_tail,
            )
        )

    return CompactnessReport(
        criteria=criteria,
        carrier=carrier.describe(),
        member_count=len(subject),
        generator_tag=net_family.generator_tag,
        distance=distance,
        pointwise_bound=bound,
        pointwise_table=[float(v) for v in peak.ravel()],
        equicontinuity=[ModulusEntry(radius=r, omega=v) for r, v in sorted(omega.items())],
        equivanishing=[TailEntry(window=m, tau=v) for m, v in sorted(tau.items())],
        covering=covering,
        verdicts=verdicts,
        passed=all(v.passed for v in verdicts),
        boundedness=boundedness,
    )


def _dual_grid_for(fam: FunctionFamily, grid_size: int | None) -> int | None:
    carrier = fam.carrier
    if grid_size is None and isinstance(carrier, GroupModel) and isinstance(carrier.kind, ZWindow):
        return DEFAULT_DUAL_GRID
    return grid_size


def pego_check(
    fam: FunctionFamily,
    thresholds: Thresholds = THRESHOLDS,
    eps_schedule: Sequence[float] = DEFAULT_EPS_SCHEDULE,
    grid_size: int | None = None,
) -> CompactnessReport:
    """
    P1-P3 on the transforms of an L1 family: sup bound, equicontinuity on the
    dual carrier, equivanishing on the dual carrier. Covering numbers use L1
    distances between the members themselves.
    """
    if not isinstance(fam.carrier, GroupModel):
        raise CarrierMismatch("the Pego criteria take a family of functions on a group")
    transforms = fam.transformed(_dual_grid_for(fam, grid_size))
    return _build_report("pego", transforms, fam, Norm.L1, thresholds, eps_schedule, ("P1", "P2", "P3"))


def aa_check(
    fam: FunctionFamily,
    thresholds: Thresholds = THRESHOLDS,
    eps_schedule: Sequence[float] = DEFAULT_EPS_SCHEDULE,
) -> CompactnessReport:
    """AA1-AA3 on the family itself; covering numbers in the sup norm."""
    return _build_report("aa", fam, fam, Norm.LINF, thresholds, eps_schedule, ("AA1", "AA2", "AA3"))


# ---------------------------------------------------------------------------
# Boundedness from equicontinuity and equivanishing
# ---------------------------------------------------------------------------


def _radius_schedule(carrier: Carrier) -> list[int]:
    """Powers of two up to the carrier's reach, descending."""
    limit = max(_radius_limit(carrier), 1)
    radii = []
    r = 1
    while r <= limit:
        radii.append(r)
        r *= 2
    return radii[::-1]


def uniform_equicontinuity_on_compact(
    fam: FunctionFamily, K: Sequence[GroupElement], eps: float
) -> int | None:
    """
    Largest scheduled radius r with max over members, x in K and |y| <= r of
    |f(x + y) - f(x)| < eps; None when even radius 1 fails.
    """
    carrier = fam.carrier
    points = [carrier.index_of(tuple(x)) for x in K]
    if any(p is None for p in points):
        raise InvalidSpec("every point of K must lie on the carrier")
    if not points:
        return _radius_schedule(carrier)[0]
    index = np.array(points, dtype=np.int64)
    stack = fam.stack()
    base = stack[(slice(None),) + tuple(index.T)]
    shape = np.array(carrier.shape)
    cyclic = np.array(carrier.cyclic)

    def ring_sup(r: int) -> float:
        worst = 0.0
        for y in _offsets_at(r, carrier.ndim):
            moved = index + np.array(y)
            moved = np.where(cyclic, moved % shape, moved)
            inside = np.all((moved >= 0) & (moved < shape), axis=1)
            read = np.zeros_like(base)
            if inside.any():
                read[:, inside] = stack[(slice(None),) + tuple(moved[inside].T)]
            worst = max(worst, float(np.abs(read - base).max()))
        return worst

    schedule = sorted(_radius_schedule(carrier))
    best = None
    modulus = 0.0
    reached = 0
    for r in schedule:
        for ring in range(reached + 1, r + 1):
            modulus = max(modulus, ring_sup(ring))
        reached = r
        if modulus >= eps:
            break
        best = r
    return best


def sudakov_witness(carrier: Carrier, r: int) -> GroupElement | None:
    """
    Element x* with |x*| <= r whose multiples escape every centred window;
    None on compact carriers or when r < 1.
    """
    if carrier.is_compact or r < 1:
        return None
    return (1,) + (0,) * (carrier.ndim - 1)



def sudakov_bound(fam: FunctionFamily, thresholds: SudakovThresholds = SudakovThresholds()) -> SudakovBound:
    """
    Replay of the boundedness argument: a window K with tail below eps_tail,
    a radius of uniform equicontinuity on K at eps_cont, an escaping witness
    x*, and the first n with n*x* + K disjoint from K. Walking from any x in K
    in steps of x* changes |f| by less than 1 per step inside K and ends
    outside K where |f| < 1, so sup|f| < n + 2.
    """
    carrier = fam.carrier
    family_sup = float(np.abs(fam.stack()).max())
    if carrier.is_compact:
        return SudakovBound(bound=None, reason="compact carrier: no escaping sequence", family_sup=family_sup)

    tail = equivanishing_tail(fam)
    window = next((m for m, t in sorted(tail.items()) if t < thresholds.eps_tail), None)
    if window is None:
        return SudakovBound(bound=None, reason="no window with tail below eps_tail", family_sup=family_sup)

    distance = carrier.distance_from_origin()
    K = [carrier.element_at(tuple(int(i) for i in idx)) for idx in np.argwhere(distance <= window)]
    radius = uniform_equicontinuity_on_compact(fam, K, thresholds.eps_cont)
    if radius is None:
        return SudakovBound(
            bound=None, reason="no radius of uniform equicontinuity on K", window=window, family_sup=family_sup
        )

    witness = sudakov_witness(carrier, radius)
    if witness is None:
        return SudakovBound(
            bound=None, reason="no escaping witness", window=window, radius=radius, family_sup=family_sup
        )

    step = max(abs(c) for c in witness)
    # n*x* + K misses K once the shift exceeds the window diameter
    iterates = 2 * window // step + 1
    bound = float(iterates + 2)
    if bound < family_sup:
        logger.warning("Sudakov bound %g falls below the family sup %g", bound, family_sup)
    return SudakovBound(
        bound=bound,
        reason="ok",
        window=window,
        radius=radius,
        witness=witness,
        iterates=iterates,
        family_sup=family_sup,
    )


# ---------------------------------------------------------------------------
# Cross-check against the covering-number oracle
# ---------------------------------------------------------------------------


class CoveringComparison(BaseModel):
    model_config = ConfigDict(frozen=True)

    eps: float
    prefix: int
    doubled: int


class ConsistencyReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    criteria: Criteria
    generator_tag: str | None
    prefix_count: int
    doubled_count: int
    prefix: CompactnessReport
    doubled: CompactnessReport | None
    covering: list[CoveringComparison]
    criteria_passed: bool
    growth: bool
    stable: bool
    consistent: bool
    inconsistencies: list[str]


def _run_criteria(
    fam: FunctionFamily,
    criteria: Criteria,
    thresholds: Thresholds,
    eps_schedule: Sequence[float],
    grid_size: int | None,
) -> CompactnessReport:
    if criteria == "pego":
        return pego_check(fam, thresholds, eps_schedule, grid_size)
    return aa_check(fam, thresholds, eps_schedule)


def oracle_cross_check(
    fam: FunctionFamily,
    thresholds: Thresholds = THRESHOLDS,
    eps_schedule: Sequence[float] = DEFAULT_EPS_SCHEDULE,
    criteria: Criteria = "pego",
    double: bool = True,
    grid_size: int | None = None,
) -> ConsistencyReport:
    """
    Criteria verdict on the prefix and the doubled prefix versus covering
    number behaviour: a failing family must show growth of N(eps) at some eps,
    a passing family identical N(eps) at every eps. Disagreements are listed.
    """
    if double and fam.generator is None:
        raise GeneratorUnavailable("doubling the prefix needs a family generator")

    prefix = _run_criteria(fam, criteria, thresholds, eps_schedule, grid_size)
    if double:
        longer = fam.extend(2 * len(fam))
        doubled = _run_criteria(longer, criteria, thresholds, eps_schedule, grid_size)
    else:
        doubled = prefix

    comparison = [
        CoveringComparison(eps=a.eps, prefix=a.covering_number, doubled=b.covering_number)
        for a, b in zip(prefix.covering, doubled.covering)
    ]
    growth = any(c.doubled > c.prefix for c in comparison)
    stable = all(c.doubled == c.prefix for c in comparison)
    passed = prefix.passed and doubled.passed

    inconsistencies = []
    if passed and not stable:
        grown = [c.eps for c in comparison if c.doubled != c.prefix]
        inconsistencies.append(f"criteria pass but covering numbers change at eps {grown}")
    if not passed and not growth:
        failed = [v.name for v in prefix.verdicts + doubled.verdicts if not v.passed]
        inconsistencies.append(f"criteria fail ({sorted(set(failed))}) but covering numbers do not grow")
    for line in inconsistencies:
        logger.warning("cross-check: %s", line)

    return ConsistencyReport(
        criteria=criteria,
        generator_tag=fam.generator_tag,
        prefix_count=len(fam),
        doubled_count=doubled.member_count,
        prefix=prefix,
        doubled=doubled if double else None,
        covering=comparison,
        criteria_passed=passed,
        growth=growth,
        stable=stable,
        consistent=not inconsistencies,
        inconsistencies=inconsistencies,
    )
