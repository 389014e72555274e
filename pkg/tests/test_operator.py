"""
Unit tests for convolution operators and the operator-norm routes.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from lca_pego.errors import GroupMismatch, TooLarge, WrongModel
from lca_pego.families import counterexample_kernel
from lca_pego.groups import FiniteProduct, ZWindow, make_group
from lca_pego.operator import (
    adjoint,
    apply,
    fourier_sup,
    isometry_gap,
    make_operator,
    norm_report,
    opnorm_exact,
    opnorm_power_iteration,
)
from lca_pego.transform import GroupFunction, Norm, convolve, fourier, from_support, involution, norm, point_mass

SQRT5 = np.sqrt(5.0)


def random_function(rng, group):
    values = rng.standard_normal(group.shape) + 1j * rng.standard_normal(group.shape)
    return GroupFunction(group, values)


class TestMaterialize:
    """Test suite for dense operator matrices."""

    def test_point_mass_is_identity_matrix(self, z8):
        """delta_0 gives the identity matrix."""
        op = make_operator(point_mass(z8), materialize=True)
        assert np.array_equal(op.matrix, np.eye(8))

    def test_shifted_point_mass_is_shift_matrix(self, z8):
        """delta_1 * phi = T_1 phi, i.e. M[x, y] = 1 when x = y + 1."""
        op = make_operator(point_mass(z8, (1,)), materialize=True)
        assert np.array_equal(op.matrix, np.roll(np.eye(8), 1, axis=0))

    def test_lazy_operator_has_no_matrix(self, z8):
        """Operators are lazy unless asked to materialize."""
        assert make_operator(point_mass(z8)).materialized_matrix is None

    def test_matrix_agrees_with_convolution(self, rng, z8, window8):
        """Dense and lazy application agree on Z_8, Z_3 x Z_4 and a window."""
        product = make_group(FiniteProduct(moduli=(3, 4)))
        for group in (z8, product, window8):
            f, phi = random_function(rng, group), random_function(rng, group)
            dense = apply(make_operator(f, materialize=True), phi).values
            assert np.abs(dense - convolve(f, phi).values).max() <= 1e-10
            assert np.abs(apply(make_operator(f), phi).values - dense).max() <= 1e-10

    def test_window_matrix_is_toeplitz(self, rng, window8):
        """Entry (i, j) is f(i - j), 0 once the difference leaves [-8, 8]."""
        f = random_function(rng, window8)
        matrix = make_operator(f, materialize=True).matrix
        for i in range(17):
            for j in range(17):
                expected = f.at((i - j,))
                assert matrix[i, j] == expected

    def test_large_group_is_refused(self):
        """Materializing beyond the cap raises TooLarge."""
        group = make_group(FiniteProduct(moduli=(4097,)))
        with pytest.raises(TooLarge):
            make_operator(point_mass(group), materialize=True)


class TestApply:
    """Test suite for Psi_f(phi) = f * phi."""

    def test_point_mass_fixes_everything(self, rng, z8):
        """Psi of delta_0 is the identity."""
        phi = random_function(rng, z8)
        assert np.allclose(apply(make_operator(point_mass(z8)), phi).values, phi.values)

    def test_cyclic_convolution_commutes(self, rng, z8):
        """f * g = g * f on Z_8."""
        f, g = random_function(rng, z8), random_function(rng, z8)
        left = apply(make_operator(f), g).values
        right = apply(make_operator(g), f).values
        assert np.abs(left - right).max() <= 1e-10

    def test_young_inequality(self, rng, z8, window8):
        """|f * phi|_2 <= |f|_1 |phi|_2, with truncation only removing mass."""
        for group in (z8, window8):
            for _ in range(20):
                f, phi = random_function(rng, group), random_function(rng, group)
                out = apply(make_operator(f), phi)
                assert norm(out, Norm.L2) <= norm(f, Norm.L1) * norm(phi, Norm.L2) * (1 + 1e-12)

    def test_group_mismatch(self, z4, z8):
        """Operators only act on functions on their own group."""
        with pytest.raises(GroupMismatch):
            apply(make_operator(point_mass(z4)), point_mass(z8))


class TestAdjoint:
    """Test suite for Psi_f^* = Psi_{f*}."""

    def test_adjoint_is_conjugate_transpose(self, rng, z8, window8):
        """The adjoint matrix is the conjugate transpose."""
        for group in (z8, window8):
            op = make_operator(random_function(rng, group), materialize=True)
            assert np.array_equal(adjoint(op).matrix, op.matrix.conj().T)

    def test_lazy_adjoint_stays_lazy(self, rng, z8):
        """The adjoint of a lazy operator is lazy."""
        op = make_operator(random_function(rng, z8))
        assert adjoint(op).matrix is None

    def test_c_star_identity(self, rng):
        """|Psi_{f* * f}| = |Psi_f^* Psi_f| = |Psi_f|^2."""
        group = make_group(FiniteProduct(moduli=(10,)))
        for _ in range(20):
            f = random_function(rng, group)
            op = make_operator(f, materialize=True)
            sigma = opnorm_exact(op)
            gram = adjoint(op).matrix @ op.matrix
            assert np.linalg.svd(gram, compute_uv=False)[0] == pytest.approx(sigma**2, rel=1e-9)
            assert opnorm_exact(make_operator(convolve(involution(f), f))) == pytest.approx(sigma**2, rel=1e-9)


class TestHomomorphism:
    """Test suite for f -> Psi_f as an algebra map on Z_8."""

    def test_convolution_maps_to_product(self, rng, z8):
        """Psi_{f * g} = Psi_f Psi_g."""
        f, g = random_function(rng, z8), random_function(rng, z8)
        left = make_operator(convolve(f, g), materialize=True).matrix
        right = make_operator(f, materialize=True).matrix @ make_operator(g, materialize=True).matrix
        assert np.abs(left - right).max() <= 1e-10

    def test_linearity(self, rng, z8):
        """Psi_{af + bg} = a Psi_f + b Psi_g."""
        f, g = random_function(rng, z8), random_function(rng, z8)
        a, b = 2.0 - 1.0j, 0.5j
        combined = GroupFunction(z8, a * f.values + b * g.values)
        left = make_operator(combined, materialize=True).matrix
        right = a * make_operator(f, materialize=True).matrix + b * make_operator(g, materialize=True).matrix
        assert np.abs(left - right).max() <= 1e-12

    def test_unit_maps_to_identity(self, z8):
        """The unit delta_0 maps to the identity."""
        assert np.array_equal(make_operator(point_mass(z8), materialize=True).matrix, np.eye(8))


class TestExactNorm:
    """Test suite for the singular-value route."""

    def test_point_mass_has_norm_one(self, z8):
        """|Psi of delta_0| = 1."""
        assert opnorm_exact(make_operator(point_mass(z8))) == pytest.approx(1.0)

    def test_nonnegative_kernels_reach_l1(self, rng):
        """f >= 0 on Z_16 gives |Psi_f| = |f|_1."""
        group = make_group(FiniteProduct(moduli=(16,)))
        for _ in range(50):
            f = GroupFunction(group, rng.random(16))
            assert opnorm_exact(make_operator(f, materialize=True)) == pytest.approx(norm(f, Norm.L1), rel=1e-9)

    def test_matches_fourier_sup_on_cyclic_groups(self, rng):
        """|Psi_f| = |f-hat|_inf on Z_n for 200 random kernels."""
        for _ in range(200):
            group = make_group(FiniteProduct(moduli=(int(rng.integers(2, 65)),)))
            f = random_function(rng, group)
            sup = norm(fourier(f), Norm.LINF)
            assert opnorm_exact(make_operator(f)) == pytest.approx(sup, rel=1e-9)

    def test_window_is_the_wrong_model(self, window8):
        """The exact route refuses windows."""
        with pytest.raises(WrongModel):
            opnorm_exact(make_operator(point_mass(window8)))


class TestPowerIteration:
    """Test suite for the truncated-window estimate."""

    def test_point_mass_stops_after_one_step(self, z8):
        """The identity converges on the first step."""
        result = opnorm_power_iteration(make_operator(point_mass(z8)))
        assert result.iterations_used == 1
        assert result.estimate == pytest.approx(1.0, abs=1e-12)
        assert result.converged

    def test_counterexample_norm_is_fourier_sup(self):
        """On [-512, 512] the estimate for g = (1, 1, -1) is within 1e-3 of sqrt(5)."""
        group = make_group(ZWindow(half_width=512))
        result = opnorm_power_iteration(make_operator(counterexample_kernel(group)), 500, 42, 4096)
        assert abs(result.estimate - SQRT5) <= 1e-3
        assert result.residual <= 1e-6
        assert result.converged
        assert result.start == "fourier_maximiser"

    def test_residual_is_unscaled(self):
        """The residual is |A*A v - lambda v| for a unit v, checked against the dense matrix."""
        group = make_group(ZWindow(half_width=64))
        op = make_operator(counterexample_kernel(group), materialize=True)
        result = opnorm_power_iteration(op, 500, 42, 4096)
        gram = op.matrix.conj().T @ op.matrix
        top = np.linalg.eigvalsh(gram)[-1]
        assert result.estimate**2 == pytest.approx(top, rel=1e-10)
        assert result.residual <= 1e-6

    def test_estimates_grow_with_the_window(self):
        """Truncations are compressions: the norm of g is nondecreasing in N and below sqrt(5)."""
        group = make_group(ZWindow(half_width=512))
        ceiling = fourier_sup(counterexample_kernel(group), 2**14)
        estimates = []
        for half_width in (32, 64, 128, 256, 512):
            result = opnorm_power_iteration(make_operator(counterexample_kernel(make_group(ZWindow(half_width=half_width)))))
            assert result.residual <= 1e-6
            estimates.append(result.estimate)
        for smaller, larger in zip(estimates, estimates[1:]):
            assert larger >= smaller - 1e-9
        assert max(estimates) <= ceiling + 1e-9

    def test_random_kernel_estimates_grow_with_the_window(self, rng):
        """A fixed random kernel on [-8, 8]: nondecreasing in N, bounded by |f-hat|_inf on a 2^14 grid."""
        support = {(x,): complex(*rng.standard_normal(2)) for x in range(-8, 9)}
        estimates = []
        for half_width in (32, 64, 128, 256):
            f = from_support(make_group(ZWindow(half_width=half_width)), support)
            result = opnorm_power_iteration(make_operator(f))
            assert result.residual <= 1e-6
            estimates.append(result.estimate)
        for smaller, larger in zip(estimates, estimates[1:]):
            assert larger >= smaller - 1e-9
        assert max(estimates) <= fourier_sup(f, 2**14) + 1e-9

    def test_nonnegative_window_kernel(self):
        """A constant 1/4 on [-4, 4] has l1 norm 9/4; the window estimate approaches it."""
        group = make_group(ZWindow(half_width=256))
        f = GroupFunction(group, np.where(np.abs(group.axis_coords(0)) <= 4, 0.25, 0.0))
        estimate = opnorm_power_iteration(make_operator(f)).estimate
        assert estimate <= 2.25 + 1e-9
        assert abs(estimate - 2.25) <= 1e-3

    def test_agrees_with_exact_route_on_finite_groups(self, rng):
        """On Z_12 the iteration matches the singular value."""
        group = make_group(FiniteProduct(moduli=(12,)))
        f = GroupFunction(group, rng.random(12))
        result = opnorm_power_iteration(make_operator(f))
        assert result.estimate == pytest.approx(opnorm_exact(make_operator(f)), rel=1e-6)

    def test_real_grid_is_the_wrong_model(self, line_grid):
        """Power iteration refuses real grids."""
        with pytest.raises(WrongModel):
            opnorm_power_iteration(make_operator(point_mass(line_grid)))

    def test_zero_iterations_rejected(self, z8):
        """The budget must be at least one step."""
        with pytest.raises(ValueError):
            opnorm_power_iteration(make_operator(point_mass(z8)), iterations=0)

    def test_zero_kernel_reports_zero(self, z8):
        """The zero kernel gives estimate 0 and counts as converged."""
        result = opnorm_power_iteration(make_operator(GroupFunction(z8, np.zeros(8))))
        assert result.estimate == 0.0
        assert result.converged


class TestReports:
    """Test suite for isometry_gap and norm_report."""

    def test_counterexample_gap(self):
        """|g|_1 - |g-hat|_inf = 3 - sqrt(5)."""
        group = make_group(ZWindow(half_width=16))
        assert isometry_gap(counterexample_kernel(group)) == pytest.approx(3 - SQRT5, abs=1e-6)

    def test_nonnegative_kernels_have_no_gap(self, rng):
        """Nonnegative kernels have |f|_1 = |f-hat|_inf."""
        group = make_group(FiniteProduct(moduli=(16,)))
        f = GroupFunction(group, rng.random(16))
        assert isometry_gap(f) == pytest.approx(0.0, abs=1e-12)

    def test_finite_groups_use_svd(self, rng):
        """Finite groups take the exact route and match the Fourier sup."""
        group = make_group(FiniteProduct(moduli=(16,)))
        report = norm_report(random_function(rng, group))
        assert report.route == "exact_svd"
        assert report.iterations_used is None
        assert report.start is None
        assert report.gap <= 1e-9 * report.fourier_sup

    def test_windows_use_power_iteration(self, window8):
        """Windows take the iterative route and record its start."""
        report = norm_report(point_mass(window8))
        assert report.route == "power_iteration"
        assert report.iterations_used == 1
        assert report.converged
        assert report.start == "fourier_maximiser"
        assert report.matrix_estimate == pytest.approx(1.0)
        assert report.gap == pytest.approx(0.0, abs=1e-9)
        assert report.isometry_gap == pytest.approx(0.0, abs=1e-9)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
