"""
Unit tests for the builtin family generators.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from lca_pego.compactness import generator_tags
from lca_pego.errors import InvalidSpec
from lca_pego.families import build_family, counterexample_kernel, span_basis
from lca_pego.groups import RealGrid, ZWindow, make_group
from lca_pego.transform import Norm, norm


class TestCounterexampleKernel:
    """Test suite for g = (1, 1, -1)."""

    def test_values_and_norm(self, window8):
        """g is (1, 1, -1) on 0, 1, 2 with l1 norm 3."""
        g = counterexample_kernel(window8)
        assert g.name == "g"
        assert [g.at((k,)) for k in range(-1, 4)] == [0, 1, 1, -1, 0]
        assert norm(g, Norm.L1) == 3.0

    def test_lives_on_cyclic_groups_too(self, z4):
        """g fits on Z_4."""
        assert list(counterexample_kernel(z4).values) == [1, 1, -1, 0]


class TestGenerators:
    """Test suite for the registry and the four builtin families."""

    def test_registry_lists_builtins(self):
        """All four builtin tags are registered."""
        tags = generator_tags()
        for tag in ("indicator_shifts", "modulations", "span_random", "gaussian_bumps"):
            assert tag in tags

    def test_unknown_tag(self):
        """An unknown tag is an input error."""
        with pytest.raises(InvalidSpec):
            build_family("spirals", 4)

    def test_count_must_be_positive(self):
        """A count of 0 is refused."""
        with pytest.raises(InvalidSpec):
            build_family("indicator_shifts", 0)

    def test_default_counts(self):
        """Omitted counts fall back to each tag's default."""
        assert len(build_family("indicator_shifts")) == 32
        assert len(build_family("gaussian_bumps")) == 8

    def test_indicator_shifts(self):
        """Member n is 1_{n} on [-64, 64]."""
        family = build_family("indicator_shifts", 32)
        assert family.carrier == make_group(ZWindow(half_width=64))
        assert family.generator.params["half_width"] == 64
        for n, member in enumerate(family, start=1):
            assert member.name == f"indicator_{n}"
            assert member.at((n,)) == 1.0
            assert norm(member, Norm.L1) == 1.0

    def test_narrow_window_is_widened(self):
        """A window too small for the prefix is widened to fit."""
        family = build_family("indicator_shifts", 10, half_width=4)
        assert family.carrier.kind.half_width == 10
        assert family.members[-1].at((10,)) == 1.0

    def test_modulations_shift_g(self):
        """Member 3 is g moved to 3, 4, 5."""
        family = build_family("modulations", 8)
        shifted = family.members[3]
        assert shifted.name == "shift_3"
        assert [shifted.at((k,)) for k in range(2, 7)] == [0, 1, 1, -1, 0]

    def test_modulations_with_custom_base(self):
        """A base given as values, complex pairs included, is shifted."""
        family = build_family("modulations", 4, base=[1.0, [0.0, 1.0]])
        member = family.members[2]
        assert member.at((2,)) == 1.0
        assert member.at((3,)) == 1j

    def test_span_random_runs_through_the_lattice(self):
        """With dim 3 the first 27 members are the distinct lattice points; later ones repeat."""
        family = build_family("span_random", 64, dim=3)
        rows = [tuple(np.round(m.values.real, 12)) for m in family]
        assert len(set(rows[:27])) == 27
        assert set(rows[27:]) <= set(rows[:27])

    def test_span_random_is_reproducible(self):
        """The same seed gives the same members."""
        first = build_family("span_random", 40, dim=2, seed=7)
        second = build_family("span_random", 40, dim=2, seed=7)
        for a, b in zip(first, second):
            assert np.array_equal(a.values, b.values)

    def test_span_dimension_is_bounded(self):
        """dim must lie in 1..8."""
        for dim in (0, 9):
            with pytest.raises(InvalidSpec):
                build_family("span_random", 4, dim=dim)

    def test_span_basis_is_centred(self):
        """The basis Gaussians sit symmetrically around 0."""
        group = make_group(ZWindow(half_width=8))
        basis = span_basis(group, 3)
        assert basis.shape == (3, 17)
        assert basis[1, 8] == 1.0
        assert np.allclose(basis[0], basis[2][::-1])

    def test_gaussian_bumps(self):
        """Bump k peaks at 0.1 k on the default grid."""
        family = build_family("gaussian_bumps", 8)
        assert family.carrier == make_group(RealGrid(dims=1, half_extent=8.0, points_per_axis=257))
        assert family.members[0].at((0,)) == 1.0
        peak = np.argmax(np.abs(family.members[5].values))
        assert family.carrier.positions(0)[peak] == pytest.approx(0.5, abs=family.carrier.step)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
