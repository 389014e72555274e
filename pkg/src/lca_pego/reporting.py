"""
Input parsing and report serialization.

JSON reports are written with floats at 17 significant digits so that equal
inputs give byte-identical files; non-finite floats become null. Tables go out
as CSV through polars.
"""

import json
import math
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np
import polars as pl
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from lca_pego.compactness import FunctionFamily
from lca_pego.config import SCHEMA
from lca_pego.errors import InvalidSpec
from lca_pego.groups import CircleGrid, GroupModel, RealGridDual
from lca_pego.transform import DualFunction, GroupFunction


# ---------------------------------------------------------------------------
# Input documents
# ---------------------------------------------------------------------------


def _as_complex(value: float | list[float]) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"complex values are [re, im] pairs, got {value}")
        return complex(value[0], value[1])
    return complex(value)


class SparseEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    at: list[int] | int
    value: float | list[float]


class FunctionSpec(BaseModel):
    """A function given densely (C-order `values`) or by its `sparse` support."""

    model_config = ConfigDict(frozen=True)

    name: str | None = None
    values: list[float | list[float]] | None = None
    sparse: list[SparseEntry] | None = None

    @model_validator(mode="after")
    def _one_encoding(self) -> "FunctionSpec":
        if (self.values is None) == (self.sparse is None):
            raise ValueError("a function needs exactly one of 'values' or 'sparse'")
        return self

    def to_function(self, group: GroupModel) -> GroupFunction:
        try:
            if self.values is not None:
                values = np.array([_as_complex(v) for v in self.values], dtype=complex)
                return GroupFunction(group, values, self.name)
            out = np.zeros(group.shape, dtype=complex)
            for entry in self.sparse:
                at = (entry.at,) if isinstance(entry.at, int) else tuple(entry.at)
                index = group.index_of(at)
                if index is None:
                    raise InvalidSpec(f"sparse point {list(at)} lies outside the group")
                out[index] = _as_complex(entry.value)
            return GroupFunction(group, out, self.name)
        except ValueError as e:
            raise InvalidSpec(str(e)) from e


class FamilySpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    members: list[FunctionSpec] = Field(min_length=1)


def load_json(path: Path | str) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except OSError as e:
        raise InvalidSpec(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise InvalidSpec(f"malformed JSON in {path}: {e}") from e


def parse_function(document: Any, group: GroupModel) -> GroupFunction:
    try:
        spec = FunctionSpec.model_validate(document)
    except ValidationError as e:
        raise InvalidSpec(f"invalid function spec: {e}") from e
    return spec.to_function(group)


def parse_family(document: Any, group: GroupModel) -> FunctionFamily:
    """`{"members": [...]}` or a bare list of function documents."""
    if isinstance(document, list):
        document = {"members": document}
    try:
        spec = FamilySpec.model_validate(document)
    except ValidationError as e:
        raise InvalidSpec(f"invalid family spec: {e}") from e
    return FunctionFamily(tuple(m.to_function(group) for m in spec.members))


# ---------------------------------------------------------------------------
# JSON output
# ---------------------------------------------------------------------------


def _plain(value: Any) -> Any:
    """Reduce models, arrays and numpy scalars to JSON-shaped Python values."""
    if isinstance(value, BaseModel):
        return _plain(value.model_dump())
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def _encode(value: Any) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g") if math.isfinite(value) else "null"
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, list):
        return "[" + ", ".join(_encode(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_encode(v)}" for k, v in value.items()) + "}"
    raise TypeError(f"cannot encode {type(value).__name__}")


def to_json(payload: dict[str, Any]) -> str:
    """Deterministic JSON text with the schema tag first."""
    return _encode({"schema": SCHEMA, **_plain(payload)}) + "\n"


def error_json(kind: str, message: str) -> str:
    return _encode({"schema": SCHEMA, "error": kind, "message": message})


# ---------------------------------------------------------------------------
# CSV output
# ---------------------------------------------------------------------------


def function_frame(f: GroupFunction) -> pl.DataFrame:
    """(point index, re, im) in C-order of the carrier."""
    flat = f.values.ravel()
    return pl.DataFrame(
        {
            "index": np.arange(flat.size, dtype=np.int64),
            "re": flat.real,
            "im": flat.imag,
        }
    )


def dual_frame(F: DualFunction) -> pl.DataFrame:
    """
    Dual values with their magnitude; CircleGrid rows carry alpha and
    one-axis RealGridDual rows carry the frequency.
    """
    flat = F.values.ravel()
    df = pl.DataFrame(
        {
            "index": np.arange(flat.size, dtype=np.int64),
            "re": flat.real,
            "im": flat.imag,
        }
    ).with_columns((pl.col("re") ** 2 + pl.col("im") ** 2).sqrt().alias("abs"))
    kind = F.dual.kind
    if isinstance(kind, CircleGrid):
        df = df.with_columns(pl.Series("alpha", F.dual.alphas())).select("alpha", "abs", "index", "re", "im")
    elif isinstance(kind, RealGridDual) and kind.dims == 1:
        df = df.with_columns(pl.Series("frequency", F.dual.frequencies(0))).select(
            "frequency", "abs", "index", "re", "im"
        )
    return df


def write_output(text_or_frame: str | pl.DataFrame, path: Path | str | None) -> str | None:
    """Write to `path`, or return the text for stdout when no path is given."""
    text = text_or_frame.write_csv() if isinstance(text_or_frame, pl.DataFrame) else text_or_frame
    if path is None:
        return text
    try:
        Path(path).write_text(text)
    except OSError as e:
        raise InvalidSpec(f"cannot write {path}: {e}") from e
    return None
