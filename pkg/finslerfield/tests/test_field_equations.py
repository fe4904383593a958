from finslerfield.core.field_equations import (LagrangianForm, lagrangian_density, euler_lagrange_residual,
                                               direct_residual, residual_convergence, radial_residual,
                                               two_dim_degeneration_check, eikonal_residual, MetricAssembly,
                                               assemble_metric, assembled_lagrangian,
                                               EUCLIDEAN_POWER, PSEUDO_POWER, RADIAL_REDUCED, SPHERICAL_REDUCED,
                                               BERWALD_MOORE_PRODUCT, BERWALD_MOORE_RADIAL)
from finslerfield.system.fields import RadialLog, IntervalLog, BerwaldMooreLog, Affine, Custom
from finslerfield.system.generators import lattice_field, centered_lattice_field
from finslerfield.errors import GridTooSmall, NonpositiveRadius, NegativeBase, FinslerFieldError

import unittest
import numpy as np


class TestLagrangianForms(unittest.TestCase):

    def test_densities(self):
        self.assertAlmostEqual(lagrangian_density(LagrangianForm(PSEUDO_POWER), [2.0, 1.0, 0.0, 0.0]), 9.0)
        self.assertAlmostEqual(lagrangian_density(LagrangianForm(EUCLIDEAN_POWER, n_dim=3), [1.0, 2.0, 2.0]), 27.0)
        self.assertAlmostEqual(lagrangian_density(LagrangianForm(BERWALD_MOORE_PRODUCT), [1.0, 2.0, 3.0, 4.0]), 24.0)
        self.assertAlmostEqual(lagrangian_density(LagrangianForm(RADIAL_REDUCED, n_dim=3), [0.5], radius=2.0),
                               4.0 * 0.125)
        self.assertAlmostEqual(lagrangian_density(LagrangianForm(SPHERICAL_REDUCED), [2.0, 1.0], radius=2.0), 36.0)

    def test_density_errors(self):
        with self.assertRaises(NegativeBase):
            lagrangian_density(LagrangianForm(PSEUDO_POWER, n_dim=3), [0.0, 1.0, 0.0])
        with self.assertRaises(NonpositiveRadius):
            lagrangian_density(LagrangianForm(RADIAL_REDUCED), [1.0], radius=0.0)
        with self.assertRaises(FinslerFieldError):
            LagrangianForm('quadratic')

    def test_lattice_dimensions(self):
        self.assertEqual(LagrangianForm(RADIAL_REDUCED, n_dim=3).lattice_dim, 1)
        self.assertEqual(LagrangianForm(BERWALD_MOORE_RADIAL).lattice_dim, 1)
        self.assertEqual(LagrangianForm(SPHERICAL_REDUCED).lattice_dim, 2)
        self.assertEqual(LagrangianForm(EUCLIDEAN_POWER, n_dim=3).lattice_dim, 3)
        self.assertEqual(LagrangianForm(BERWALD_MOORE_PRODUCT, n_dim=6).n_dim, 4)


class TestRadialSolutions(unittest.TestCase):

    def test_log_families_vanish(self):
        rho_values = np.linspace(0.3, 5.0, 25)
        for family, n_dim in ((RadialLog(C=1.3, r0=0.7), 3),
                              (RadialLog(C=-2.0), 4),
                              (IntervalLog(C=0.8, s0=1.2), 4),
                              (BerwaldMooreLog(S0=2.0, s0=0.5), 4)):
            for rho in rho_values:
                self.assertLess(abs(radial_residual(family, n_dim, rho)), 1e-12)

    def test_non_solution(self):
        # S = rho^2 in n = 3: 2 rho |S'| (S' + rho S'') = 16 at rho = 1
        self.assertAlmostEqual(radial_residual(lambda rho: rho ** 2, 3, 1.0), 16.0, places=4)
        self.assertAlmostEqual(radial_residual(lambda rho: rho ** 2, 4, 1.0, berwald_moore=True), 4.0, places=4)
        # the logarithm solves the Berwald-Moore radial equation
        self.assertLess(abs(radial_residual(np.log, 4, 2.0, berwald_moore=True)), 1e-6)

    def test_nonpositive_radius(self):
        with self.assertRaises(NonpositiveRadius):
            radial_residual(RadialLog(), 3, 0.0)

    def test_radial_lattices(self):
        form = LagrangianForm(RADIAL_REDUCED, n_dim=4)
        coarse = euler_lagrange_residual(form, lattice_field(lambda r: 2.0 * np.log(r), [0.5], 0.02, [51]))
        fine = euler_lagrange_residual(form, lattice_field(lambda r: 2.0 * np.log(r), [0.5], 0.01, [101]))
        self.assertLess(fine.max_norm, 0.02)
        # second order: compare at r = 1, a node of both lattices
        self.assertAlmostEqual(coarse.values[24] / fine.values[49], 4.0, delta=0.05)

        # a linear field is not a solution: the flux 4 r^3 has divergence 12 r^2 (+ h^2 on the lattice)
        linear = euler_lagrange_residual(form, lattice_field(lambda r: r, [0.5], 0.01, [101]))
        np.testing.assert_allclose(linear.values, 12 * (0.5 + 0.01 * np.arange(1, 100)) ** 2 + 0.01 ** 2, rtol=1e-8)

        form = LagrangianForm(BERWALD_MOORE_RADIAL)
        residual = euler_lagrange_residual(form, lattice_field(lambda s: np.log(s), [0.5], 0.01, [101]))
        self.assertLess(residual.max_norm, 0.01)

        with self.assertRaises(NonpositiveRadius):
            euler_lagrange_residual(form, lattice_field(lambda s: s, [-0.1], 0.1, [11]))


class TestLatticeResiduals(unittest.TestCase):

    def test_convergence(self):
        cases = [(LagrangianForm(EUCLIDEAN_POWER, n_dim=3),
                  lambda x, y, z: np.log(np.sqrt(x ** 2 + y ** 2 + z ** 2)), [2.0, 2.0, 2.0]),
                 (LagrangianForm(PSEUDO_POWER, n_dim=3),
                  lambda t, x, y: 0.5 * np.log(t ** 2 - x ** 2 - y ** 2), [3.0, 0.5, 0.5])]
        for form, function, center in cases:
            spacings, errors, orders = residual_convergence(form, function, center, 0.5, [9, 17, 33])
            np.testing.assert_allclose(spacings, [0.125, 0.0625, 0.03125])
            self.assertGreater(np.min(orders), 1.8)

    def test_berwald_moore_exact(self):
        # product fluxes of the separable log field do not vary along their own axis
        form = LagrangianForm(BERWALD_MOORE_PRODUCT)
        field = centered_lattice_field(lambda a, b, c, d: 0.25 * np.log(a * b * c * d), [2.0, 2.0, 2.0, 2.0], 0.5, 9)
        self.assertLess(euler_lagrange_residual(form, field).max_norm, 1e-10)

        # S = a b c d is not a solution: the fluxes are a (abcd)^2, ..., with divergence 12 (abcd)^2
        field = centered_lattice_field(lambda a, b, c, d: a * b * c * d, [1.0, 1.0, 1.0, 1.0], 0.5, 9)
        self.assertGreater(euler_lagrange_residual(form, field).max_norm, 1.0)

    def test_spherical_reduced(self):
        # S = x0 - r is null, every flux vanishes
        form = LagrangianForm(SPHERICAL_REDUCED)
        field = lattice_field(lambda t, r: t - r, [0.0, 0.5], 0.1, [11, 11])
        self.assertLess(euler_lagrange_residual(form, field).max_norm, 1e-10)

    def test_eikonal(self):
        form = LagrangianForm(PSEUDO_POWER, n_dim=4)
        field = centered_lattice_field(lambda t, x, y, z: t - 0.6 * x - 0.8 * y, np.zeros(4), 1.0, 7)
        self.assertLess(euler_lagrange_residual(form, field).max_norm, 1e-9)
        self.assertAlmostEqual(eikonal_residual(Affine([1.0, 0.6, 0.8, 0.0]), np.zeros(4)), 0.0, places=14)

    def test_two_dim_degenerations(self):
        field = centered_lattice_field(lambda x, y: x ** 2 - y ** 2 + 3 * x * y, [0.0, 0.0], 1.0, 17)
        result = two_dim_degeneration_check(field, 'laplace')
        self.assertLess(result['linear'].max_norm, 1e-9)
        self.assertLess(result['nonlinear'].max_norm, 1e-9)

        field = centered_lattice_field(lambda t, x: t ** 2 + x ** 2 + t * x, [0.0, 0.0], 1.0, 17)
        result = two_dim_degeneration_check(field, 'wave')
        self.assertLess(result['linear'].max_norm, 1e-9)
        self.assertLess(result['nonlinear'].max_norm, 1e-9)

        # not a harmonic function
        field = centered_lattice_field(lambda x, y: x ** 2 + y ** 2, [0.0, 0.0], 1.0, 9)
        self.assertAlmostEqual(two_dim_degeneration_check(field, 'laplace')['linear'].max_norm, 4.0, places=9)

        with self.assertRaises(FinslerFieldError):
            two_dim_degeneration_check(field, 'heat')

    def test_grid_too_small(self):
        form = LagrangianForm(EUCLIDEAN_POWER, n_dim=2)
        with self.assertRaises(GridTooSmall):
            euler_lagrange_residual(form, centered_lattice_field(lambda x, y: x * y, [0.0, 0.0], 1.0, 4))
        with self.assertRaises(GridTooSmall):
            residual_convergence(form, lambda x, y: x * y, [0.0, 0.0], 1.0, [9, 12])

    def test_norms(self):
        form = LagrangianForm(EUCLIDEAN_POWER, n_dim=2)
        field = centered_lattice_field(lambda x, y: x ** 2 + y ** 2, [0.0, 0.0], 1.0, 9)
        residual = euler_lagrange_residual(form, field)
        # flux 2 grad S, divergence 8 on every interior node
        np.testing.assert_allclose(residual.values, 8.0, rtol=1e-12)
        self.assertAlmostEqual(residual.l2_norm, np.sqrt(0.25 ** 2 * 49 * 64), places=10)


class TestTwoWayAgreement(unittest.TestCase):

    def test_log_fields(self):
        x = np.array([2.0, 1.5, 1.2, 1.7])
        cases = ((LagrangianForm(EUCLIDEAN_POWER, n_dim=4), RadialLog(C=1.0)),
                 (LagrangianForm(PSEUDO_POWER, n_dim=4), IntervalLog(C=1.0)),
                 (LagrangianForm(BERWALD_MOORE_PRODUCT), BerwaldMooreLog(S0=1.0)))
        x_interval = np.array([4.0, 0.5, 0.3, 0.2])
        for form, field in cases:
            point = x_interval if field.family == 'interval_log' else x
            self.assertLess(abs(direct_residual(form, field, point)), 1e-6)

    def test_linear_flux(self):
        # n = 2 fluxes are linear in the gradient, the two evaluations agree to round-off
        form = LagrangianForm(EUCLIDEAN_POWER, n_dim=2)
        function = lambda x, y: 0.5 * x ** 2 + x * y - 2 * y ** 2
        field = centered_lattice_field(function, [0.0, 0.0], 1.0, 9)
        lattice = euler_lagrange_residual(form, field).values

        closed = Custom(lambda p: function(p[0], p[1]), gradient=lambda p: [p[0] + p[1], p[0] - 4 * p[1]])
        direct = direct_residual(form, closed, np.array([0.3, -0.2]))
        self.assertAlmostEqual(direct, 2 * (1 - 4), places=6)
        np.testing.assert_allclose(lattice, direct, atol=1e-6)

    def test_direct_needs_full_form(self):
        with self.assertRaises(FinslerFieldError):
            direct_residual(LagrangianForm(RADIAL_REDUCED), RadialLog(), [1.0])


class TestMetricAssembly(unittest.TestCase):

    def test_flat_metric(self):
        fields = [Affine(row) for row in np.eye(4)]
        assembly = MetricAssembly(fields, signs=[1, -1, -1, -1])
        metric, det = assemble_metric(assembly, np.zeros(4))
        np.testing.assert_allclose(metric, np.diag([1.0, -1.0, -1.0, -1.0]))
        self.assertAlmostEqual(det, -1.0)
        self.assertAlmostEqual(assembled_lagrangian(assembly, np.zeros(4)), 1.0)

    def test_degenerate(self):
        assembly = MetricAssembly([Affine([1.0, 2.0])])
        metric, det = assemble_metric(assembly, np.zeros(2))
        np.testing.assert_allclose(metric, [[1.0, 2.0], [2.0, 4.0]])
        self.assertAlmostEqual(det, 0.0)

    def test_degenerate_random(self):
        rng = np.random.default_rng(23)

        def quadratic_field(b, a):
            return Custom(lambda x: b @ x + 0.5 * x @ a @ x, gradient=lambda x: b + a @ x)

        for n_dim in (3, 4, 5):
            for n_fields in range(1, n_dim):
                fields = []
                for _ in range(n_fields):
                    a = rng.normal(size=(n_dim, n_dim))
                    fields.append(quadratic_field(rng.normal(size=n_dim), a + a.T))
                signs = [int(s) for s in rng.choice([1, -1], size=n_fields)]
                x = rng.normal(size=n_dim)
                metric, det = assemble_metric(MetricAssembly(fields, signs=signs), x)
                np.testing.assert_allclose(metric, metric.T, atol=1e-14)
                self.assertEqual(np.linalg.matrix_rank(metric), n_fields)
                self.assertLess(abs(det), 1e-12 * max(1.0, np.max(np.abs(metric))) ** n_dim)

    def test_orthonormal_fields(self):
        metric, det = assemble_metric(MetricAssembly([Affine(row) for row in np.eye(3)]), np.ones(3))
        np.testing.assert_allclose(metric, np.eye(3))

        rng = np.random.default_rng(29)
        rotation, _ = np.linalg.qr(rng.normal(size=(4, 4)))
        assembly = MetricAssembly([Affine(row, offset=1.0) for row in rotation])
        metric, det = assemble_metric(assembly, rng.normal(size=4))
        np.testing.assert_allclose(metric, np.eye(4), atol=1e-13)
        self.assertAlmostEqual(det, 1.0, places=12)

    def test_invalid(self):
        with self.assertRaises(FinslerFieldError):
            MetricAssembly([])
        with self.assertRaises(FinslerFieldError):
            MetricAssembly([Affine([1.0])], signs=[2])


if __name__ == '__main__':
    unittest.main()
