"""
Unit tests for input parsing and report serialization.
"""

import json
import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from lca_pego.config import SCHEMA
from lca_pego.errors import InvalidSpec
from lca_pego.groups import ZWindow, make_group
from lca_pego.reporting import (
    dual_frame,
    error_json,
    function_frame,
    load_json,
    parse_family,
    parse_function,
    to_json,
    write_output,
)
from lca_pego.transform import fourier, point_mass


class TestParsing:
    """Test suite for function and family documents."""

    def test_dense_values_with_complex_pairs(self, z4):
        """Dense values accept [re, im] pairs."""
        f = parse_function({"name": "f", "values": [1, [0, 1], 0, 0]}, z4)
        assert f.name == "f"
        assert np.array_equal(f.values, [1, 1j, 0, 0])

    def test_sparse_support(self, window8):
        """Sparse entries accept scalar or list coordinates and values."""
        f = parse_function({"sparse": [{"at": -2, "value": 3}, {"at": [5], "value": [1, -1]}]}, window8)
        assert f.at((-2,)) == 3
        assert f.at((5,)) == 1 - 1j
        assert f.at((0,)) == 0

    def test_exactly_one_encoding(self, z4):
        """A function document needs values or sparse, not both or neither."""
        with pytest.raises(InvalidSpec):
            parse_function({"values": [1, 0, 0, 0], "sparse": []}, z4)
        with pytest.raises(InvalidSpec):
            parse_function({"name": "empty"}, z4)

    def test_sparse_point_outside_window(self, window8):
        """Sparse points off the window are refused."""
        with pytest.raises(InvalidSpec):
            parse_function({"sparse": [{"at": 9, "value": 1}]}, window8)

    def test_wrong_length(self, z4):
        """Dense values must match the point count."""
        with pytest.raises(InvalidSpec):
            parse_function({"values": [1, 2, 3]}, z4)

    def test_malformed_complex_pair(self, z4):
        """Complex pairs need exactly two entries."""
        with pytest.raises(InvalidSpec):
            parse_function({"values": [[1, 2, 3], 0, 0, 0]}, z4)

    def test_family_from_bare_list(self, z4):
        """A bare list is a family; unnamed members get positional names."""
        family = parse_family([{"values": [1, 0, 0, 0]}, {"name": "b", "values": [0, 1, 0, 0]}], z4)
        assert [m.name for m in family] == ["member_0", "b"]

    def test_empty_family(self, z4):
        """An empty member list is refused."""
        with pytest.raises(InvalidSpec):
            parse_family({"members": []}, z4)

    def test_load_json_errors(self, tmp_path):
        """Missing and broken files both surface as InvalidSpec."""
        with pytest.raises(InvalidSpec):
            load_json(tmp_path / "missing.json")
        broken = tmp_path / "broken.json"
        broken.write_text('{"values": [1, ')
        with pytest.raises(InvalidSpec):
            load_json(broken)

    def test_load_json_reads_documents(self, write_json):
        """Readable files load as plain documents."""
        path = write_json("f.json", {"values": [1, 0]})
        assert load_json(path) == {"values": [1, 0]}


class TestJsonOutput:
    """Test suite for the deterministic JSON encoder."""

    def test_schema_comes_first(self):
        """Every report opens with the schema tag and ends in a newline."""
        text = to_json({"command": "fourier"})
        assert text.startswith(f'{{"schema": "{SCHEMA}"')
        assert text.endswith("\n")

    def test_floats_keep_seventeen_digits(self):
        """Floats are written with 17 significant digits."""
        text = to_json({"value": 0.1})
        assert "0.10000000000000001" in text
        assert json.loads(text)["value"] == 0.1

    def test_non_finite_floats_become_null(self):
        """NaN and infinities are written as null."""
        document = json.loads(to_json({"a": math.nan, "b": math.inf, "c": np.float64(-np.inf)}))
        assert document["a"] is None and document["b"] is None and document["c"] is None

    def test_numpy_and_complex_values(self):
        """numpy scalars, arrays and complex numbers are encoded."""
        document = json.loads(
            to_json({"n": np.int64(3), "ok": np.bool_(True), "z": 1 + 2j, "arr": np.array([1.5, 2.5])})
        )
        assert document == {"schema": SCHEMA, "n": 3, "ok": True, "z": [1.0, 2.0], "arr": [1.5, 2.5]}

    def test_equal_payloads_give_equal_text(self, z8):
        """Encoding is deterministic."""
        payload = {"values": fourier(point_mass(z8)).values.ravel()}
        assert to_json(payload) == to_json(payload)

    def test_error_document(self):
        """The error object carries schema, kind and message."""
        document = json.loads(error_json("InvalidSpec", "bad input"))
        assert document == {"schema": SCHEMA, "error": "InvalidSpec", "message": "bad input"}


class TestFrames:
    """Test suite for the CSV tables."""

    def test_function_frame(self, z4):
        """Group functions tabulate as index, re, im."""
        frame = function_frame(point_mass(z4))
        assert frame.columns == ["index", "re", "im"]
        assert frame["re"].to_list() == [1.0, 0.0, 0.0, 0.0]

    def test_finite_dual_frame(self, z4):
        """Finite-dual transforms add an abs column."""
        frame = dual_frame(fourier(point_mass(z4)))
        assert frame.columns == ["index", "re", "im", "abs"]
        assert frame["abs"].to_list() == pytest.approx([1.0] * 4)

    def test_circle_grid_frame_has_alpha(self):
        """Circle-grid rows are labelled by alpha = j / M."""
        group = make_group(ZWindow(half_width=2))
        frame = dual_frame(fourier(point_mass(group), 8))
        assert frame.columns[:2] == ["alpha", "abs"]
        assert frame["alpha"].to_list() == [j / 8 for j in range(8)]

    def test_real_grid_frame_has_frequency(self, line_grid):
        """Real-grid duals are labelled by frequency."""
        frame = dual_frame(fourier(point_mass(line_grid)))
        assert frame.columns[0] == "frequency"
        assert frame.height == 257

    def test_write_output(self, tmp_path, z4):
        """No path returns the text; a path writes the file."""
        assert write_output("text", None) == "text"
        path = tmp_path / "out.csv"
        assert write_output(function_frame(point_mass(z4)), path) is None
        assert path.read_text().splitlines()[0] == "index,re,im"

    def test_unwritable_path_is_invalid_spec(self, tmp_path):
        """A path in a missing directory raises InvalidSpec instead of OSError."""
        with pytest.raises(InvalidSpec, match="cannot write"):
            write_output("text", tmp_path / "missing" / "out.json")


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
