"""
Fixed claim suite: the counterexample kernel g = (1, 1, -1), the operator-norm
identities, the indicator family and the harmonic-analysis identities, all
with pinned parameters so that every run reports the same numbers.
"""

import logging
import math
import sys
from pathlib import Path
from typing import Callable, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict

sys.path.insert(0, str(Path(__file__).parent.parent))

from lca_pego.compactness import greedy_epsilon_net, sudakov_bound  # noqa: E402
from lca_pego.config import PAPER_CHECK, PaperCheckParams  # noqa: E402
from lca_pego.families import build_family, counterexample_kernel  # noqa: E402
from lca_pego.groups import FiniteProduct, ZWindow, make_group  # noqa: E402
from lca_pego.operator import make_operator, opnorm_exact, opnorm_power_iteration  # noqa: E402
from lca_pego.reporting import to_json  # noqa: E402
from lca_pego.transform import GroupFunction, Norm, convolve, fourier, norm  # noqa: E402

logger = logging.getLogger(__name__)

Comparison = Literal["eq", "abs", "rel", "gt", "ge"]

SQRT5 = math.sqrt(5.0)


class ClaimRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    claim: str
    expected: float
    provenance: str
    computed: float
    tolerance: float
    comparison: Comparison
    passed: bool


class PaperCheckResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    params: PaperCheckParams
    claims: list[ClaimRecord]
    passed: bool


def _passes(computed: float, expected: float, tolerance: float, comparison: Comparison) -> bool:
    if not math.isfinite(computed):
        return False
    if comparison == "eq":
        return computed == expected
    if comparison == "abs":
        return abs(computed - expected) <= tolerance
    if comparison == "rel":
        return abs(computed - expected) <= tolerance * max(abs(expected), 1e-300)
    if comparison == "gt":
        return computed > expected
    return computed >= expected - tolerance


def _claim(
    claim: str,
    computed: float,
    expected: float,
    provenance: str,
    tolerance: float = 0.0,
    comparison: Comparison = "abs",
) -> ClaimRecord:
    return ClaimRecord(
        claim=claim,
        expected=expected,
        provenance=provenance,
        computed=float(computed),
        tolerance=tolerance,
        comparison=comparison,
        passed=_passes(float(computed), expected, tolerance, comparison),
    )


def _random_complex(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def g_claims(params: PaperCheckParams) -> list[ClaimRecord]:
    group = make_group(ZWindow(half_width=params.half_width))
    g = counterexample_kernel(group)
    l1 = norm(g, Norm.L1)
    sup = norm(fourier(g, params.dual_grid), Norm.LINF)
    estimate = opnorm_power_iteration(make_operator(g), params.iterations, params.seed, params.dual_grid)
    return [
        _claim("g_l1_norm", l1, 3.0, "|g|_1 = 3", comparison="eq"),
        _claim("g_fourier_sup", sup, SQRT5, "|g-hat|_inf = sqrt(5)", 1e-6),
        _claim("isometry_gap_positive", l1 - sup, 0.7, "sqrt(5) < 3 = |g|_1", comparison="gt"),
        _claim("opnorm_eq_fourier_sup", estimate.estimate, SQRT5, "|Psi_g| = |g-hat|_inf", 1e-3),
    ]


def nonneg_claim(params: PaperCheckParams) -> ClaimRecord:
    """Worst relative gap between |f|_1 and both norm routes over 100 kernels f >= 0 on Z_16."""
    rng = np.random.default_rng(params.seed)
    group = make_group(FiniteProduct(moduli=(16,)))
    worst = 0.0
    for _ in range(100):
        f = GroupFunction(group, rng.random(16))
        l1 = norm(f, Norm.L1)
        exact = opnorm_exact(make_operator(f, materialize=True))
        sup = norm(fourier(f), Norm.LINF)
        worst = max(worst, abs(exact - l1) / l1, abs(sup - l1) / l1)
    return _claim("nonneg_opnorm_eq_l1", worst, 0.0, "f >= 0 implies |Psi_f| = |f|_1", 1e-9)


def indicator_claim(params: PaperCheckParams) -> ClaimRecord:
    family = build_family("indicator_shifts", 32)
    net = greedy_epsilon_net(family, 0.5, Norm.LINF)
    return _claim(
        "indicator_family_not_compact",
        net.covering_number,
        32.0,
        "indicators 1_{n} have no convergent subsequence",
        comparison="eq",
    )


def plancherel_claim(params: PaperCheckParams) -> ClaimRecord:
    rng = np.random.default_rng(params.seed)
    worst = 0.0
    for moduli in ((2,), (7,), (4, 9)):
        group = make_group(FiniteProduct(moduli=moduli))
        for _ in range(200):
            f = GroupFunction(group, _random_complex(rng, group.shape))
            left = norm(f, Norm.L2) ** 2
            right = norm(fourier(f), Norm.L2) ** 2
            worst = max(worst, abs(left - right) / left)
    return _claim("plancherel", worst, 0.0, "Plancherel identity", 1e-9)


def convolution_claim(params: PaperCheckParams) -> ClaimRecord:
    rng = np.random.default_rng(params.seed)
    group = make_group(FiniteProduct(moduli=(12,)))
    worst = 0.0
    for _ in range(100):
        f = GroupFunction(group, _random_complex(rng, group.shape))
        g = GroupFunction(group, _random_complex(rng, group.shape))
        left = fourier(convolve(f, g)).values
        right = fourier(f).values * fourier(g).values
        worst = max(worst, float(np.abs(left - right).max()))
    return _claim("convolution_theorem", worst, 0.0, "(f * g)-hat = f-hat g-hat", 1e-10)


def sudakov_claim(params: PaperCheckParams) -> ClaimRecord:
    family = build_family("gaussian_bumps")
    result = sudakov_bound(family)
    margin = result.bound - result.family_sup if result.bound is not None else math.nan
    return _claim(
        "sudakov_bound_dominates",
        margin,
        0.0,
        "equicontinuity and equivanishing imply boundedness",
        comparison="ge",
    )


CLAIM_GROUPS: list[Callable[[PaperCheckParams], ClaimRecord | list[ClaimRecord]]] = [
    g_claims,
    nonneg_claim,
    indicator_claim,
    plancherel_claim,
    convolution_claim,
    sudakov_claim,
]


def run_paper_check(params: PaperCheckParams = PAPER_CHECK) -> PaperCheckResult:
    claims: list[ClaimRecord] = []
    for run in CLAIM_GROUPS:
        logger.info("running %s", run.__name__)
        produced = run(params)
        claims.extend(produced if isinstance(produced, list) else [produced])
    return PaperCheckResult(params=params, claims=claims, passed=all(c.passed for c in claims))


def print_summary(result: PaperCheckResult, stream=sys.stderr) -> None:
    for c in result.claims:
        mark = "✅" if c.passed else "❌"
        print(f"{mark} {c.claim}: computed {c.computed:.10g} (expected {c.comparison} {c.expected:.10g})", file=stream)
    passed = sum(c.passed for c in result.claims)
    print(f"\n{passed}/{len(result.claims)} claims hold", file=stream)


def main() -> int:
    logging.basicConfig(level=logging.WARNING, stream=sys.stderr)
    result = run_paper_check()
    print_summary(result)
    sys.stdout.write(to_json({"command": "paper-check", **result.model_dump()}))
    return 0 if result.passed else 3


if __name__ == "__main__":
    sys.exit(main())
