"""
Constants and tunable defaults shared by the library, the CLI and the tests.
"""

import os

from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt

from lca_pego.errors import InvalidSpec

SCHEMA = "lca-pego/1"

DEFAULT_MAX_POINTS = 2**22
MAX_POINTS_ENV = "LCA_PEGO_MAX_POINTS"
MATERIALIZE_CAP = 4096
DEFAULT_DUAL_GRID = 4096
DEFAULT_SEED = 42
DEFAULT_EPS_SCHEDULE = (1.0, 0.5, 0.25, 0.125)
# sine envelopes per wave packet in the power-iteration start block
POWER_BLOCK_MODES = 32


class Tolerances(BaseModel):
    model_config = ConfigDict(frozen=True)

    exact: float = 1e-10
    grid: float = 1e-6
    power_residual: float = 1e-6
    # power iteration exits early once the residual drops below this
    power_stop: float = 1e-13


class Thresholds(BaseModel):
    """
    Pass/fail levels for the compactness criteria.

    `radius` and `window` count carrier index steps (grid steps on sampled
    carriers, integers on discrete ones).
    """

    model_config = ConfigDict(frozen=True)

    bound: PositiveFloat = 1e3
    radius: int = Field(default=1, ge=0)
    eps_cont: PositiveFloat = 1e-2
    window: int = Field(default=16, ge=0)
    eps_tail: PositiveFloat = 1e-2


class SudakovThresholds(BaseModel):
    """Levels used when replaying the boundedness argument (both 1 in the proof)."""

    model_config = ConfigDict(frozen=True)

    eps_cont: PositiveFloat = 1.0
    eps_tail: PositiveFloat = 1.0


class PaperCheckParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    half_width: PositiveInt = 512
    dual_grid: PositiveInt = 4096
    iterations: PositiveInt = 500
    seed: int = DEFAULT_SEED


TOLERANCES = Tolerances()
THRESHOLDS = Thresholds()
PAPER_CHECK = PaperCheckParams()


def max_points() -> int:
    """Point-count cap, overridable through LCA_PEGO_MAX_POINTS."""
    raw = os.environ.get(MAX_POINTS_ENV)
    if raw is None or not raw.strip():
        return DEFAULT_MAX_POINTS
    try:
        value = int(raw)
    except ValueError:
        raise InvalidSpec(f"{MAX_POINTS_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise InvalidSpec(f"{MAX_POINTS_ENV} must be positive, got {value}")
    return value
