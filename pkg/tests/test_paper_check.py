"""
Tests for the pinned claim suite.
"""

import json
import sys
from pathlib import Path

import pytest

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from scripts.paper_check import ClaimRecord, _passes, indicator_claim, run_paper_check
from lca_pego.config import PAPER_CHECK

CLAIMS = {
    "g_l1_norm",
    "g_fourier_sup",
    "isometry_gap_positive",
    "opnorm_eq_fourier_sup",
    "nonneg_opnorm_eq_l1",
    "indicator_family_not_compact",
    "plancherel",
    "convolution_theorem",
    "sudakov_bound_dominates",
}


@pytest.fixture(scope="module")
def result():
    return run_paper_check()


class TestPaperCheck:
    """Test suite for run_paper_check."""

    def test_every_claim_holds(self, result):
        """Every pinned claim passes."""
        failed = [c.claim for c in result.claims if not c.passed]
        assert result.passed, f"failing claims: {failed}"

    def test_claim_ids_are_fixed(self, result):
        """The claim ids are exactly the pinned set."""
        assert {c.claim for c in result.claims} == CLAIMS
        assert len(result.claims) == len(CLAIMS)

    def test_counterexample_numbers(self, result):
        """|g|_1 = 3 and |g-hat|_inf = sqrt(5)."""
        by_id = {c.claim: c for c in result.claims}
        assert by_id["g_l1_norm"].computed == 3.0
        assert by_id["g_fourier_sup"].computed == pytest.approx(5**0.5, abs=1e-6)

    def test_indicator_claim_alone(self):
        """The indicator claim finds 32 net members on its own."""
        record = indicator_claim(PAPER_CHECK)
        assert isinstance(record, ClaimRecord)
        assert record.computed == 32.0 and record.passed

    def test_result_serializes(self, result):
        """The result dumps to JSON with its parameters."""
        document = json.loads(result.model_dump_json())
        assert document["params"]["half_width"] == 512


class TestComparisons:
    """Test suite for the claim comparison rules."""

    def test_nan_never_passes(self):
        """NaN fails every comparison."""
        for comparison in ("eq", "abs", "rel", "gt", "ge"):
            assert not _passes(float("nan"), 0.0, 1.0, comparison)

    def test_rules(self):
        """Each comparison rule accepts and rejects as documented."""
        assert _passes(3.0, 3.0, 0.0, "eq")
        assert _passes(1.0005, 1.0, 1e-3, "abs")
        assert not _passes(1.01, 1.0, 1e-3, "rel")
        assert _passes(0.76, 0.7, 0.0, "gt")
        assert not _passes(0.7, 0.7, 0.0, "gt")
        assert _passes(0.0, 0.0, 0.0, "ge")


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
