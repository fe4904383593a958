from finslerfield.core.curvature import (ConformalExponentField, conformal_metric, christoffel, riemann, ricci,
                                         riemann_from_connection, ricci_from_riemann, closed_form_discrepancy,
                                         scalar_curvature, scalar_curvature_discrepancy, stress_energy,
                                         full_stress_energy_from_gradient, full_stress_energy, tensor_bundle,
                                         generic_oracle_curvature)
from finslerfield.core.cosmology import integrate_phi, psi_and_field
from finslerfield.system.fields import Affine
from finslerfield.utils import minkowski_metric, observed_order
from finslerfield.errors import DerivativeUnavailable, SingularMetric, NonpositiveKappa, FinslerFieldError

import unittest
import numpy as np


class TestConformalCurvature(unittest.TestCase):

    def setUp(self):
        self.cases = [(ConformalExponentField.exponential(0.7), np.array([0.3, 0.1, 0.2, 0.4])),
                      (ConformalExponentField.interval_log(1.5), np.array([2.0, 0.3, 0.2, 0.1])),
                      (ConformalExponentField.spatial_radial_log(1.5), np.array([0.5, 1.0, 0.7, 0.4]))]

    def test_exponential_reference(self):
        beta = 0.7
        field = ConformalExponentField.exponential(beta)
        expected = np.diag([0.0, 2 * beta ** 2, 2 * beta ** 2, 2 * beta ** 2])
        np.testing.assert_allclose(ricci(field, [0.3, 0.1, 0.2, 0.4]), expected, atol=1e-14)
        self.assertAlmostEqual(scalar_curvature(field, [0.3, 0.0, 0.0, 0.0]), -6 * beta ** 2 * np.exp(-2 * beta * 0.3),
                               places=13)

    def test_exponential_christoffel(self):
        beta = 0.7
        gamma = christoffel(ConformalExponentField.exponential(beta), [0.3, 0.1, 0.2, 0.4])
        self.assertAlmostEqual(gamma[0, 0, 0], beta, places=15)
        for k in (1, 2, 3):
            self.assertAlmostEqual(gamma[0, k, k], beta, places=15)
            self.assertAlmostEqual(gamma[k, k, 0], beta, places=15)
            self.assertAlmostEqual(gamma[k, 0, k], beta, places=15)
        self.assertEqual(np.count_nonzero(gamma), 10)

    def test_closed_forms(self):
        for field, x in self.cases:
            np.testing.assert_allclose(riemann(field, x), riemann_from_connection(field, x), atol=1e-12)
            np.testing.assert_allclose(ricci(field, x), ricci_from_riemann(field, x), atol=1e-12)
            deviation = closed_form_discrepancy(field, x)
            self.assertLess(deviation['riemann'], 1e-12)
            self.assertLess(deviation['ricci'], 1e-12)

    def test_other_dimensions(self):
        for n_dim in (2, 3, 5):
            field = ConformalExponentField.interval_log(0.8, n_dim=n_dim)
            x = np.zeros(n_dim)
            x[0] = 2.0
            x[1:] = 0.3
            np.testing.assert_allclose(riemann(field, x), riemann_from_connection(field, x), atol=1e-12)
            np.testing.assert_allclose(ricci(field, x), ricci_from_riemann(field, x), atol=1e-12)
        # two dimensional conformal metrics have R_km = -1/2 box(a) eta_km
        field = ConformalExponentField.exponential(0.4, n_dim=2)
        np.testing.assert_allclose(ricci(field, [0.1, 0.2]), np.zeros((2, 2)), atol=1e-14)

    def test_symmetries(self):
        for field, x in self.cases:
            gamma = christoffel(field, x)
            np.testing.assert_allclose(gamma, np.swapaxes(gamma, 1, 2), atol=1e-14)
            curvature = riemann(field, x)
            np.testing.assert_allclose(curvature, -np.swapaxes(curvature, 2, 3), atol=1e-13)
            ricci_tensor = ricci(field, x)
            np.testing.assert_allclose(ricci_tensor, ricci_tensor.T, atol=1e-13)

    def test_printed_scalar_ratio(self):
        for field, x in self.cases[:2]:
            result = scalar_curvature_discrepancy(field, x)
            self.assertAlmostEqual(result['ratio'], 2.0, places=10)
            self.assertAlmostEqual(result['trace'], scalar_curvature(field, x), places=14)

    def test_stress_trace(self):
        for field, x in self.cases:
            for factor in (1.0, 2.5):
                tensor, trace = stress_energy(field, x, factor=factor)
                scalar = scalar_curvature(field, x)
                self.assertLess(abs(trace + factor * scalar), 1e-10 * max(1.0, abs(scalar)))
                np.testing.assert_allclose(tensor, tensor.T, atol=1e-13)

    def test_conformal_metric(self):
        field, x = self.cases[1]
        metric = conformal_metric(field)(x)
        np.testing.assert_allclose(metric, field.kappa(x) ** 2 * minkowski_metric(4), rtol=1e-14)

    def test_not_differentiable(self):
        with self.assertRaises(DerivativeUnavailable):
            christoffel(ConformalExponentField.interval_log(1.0), [0.1, 1.0, 0.0, 0.0])
        with self.assertRaises(DerivativeUnavailable):
            ricci(ConformalExponentField.spatial_radial_log(1.0), [1.0, 0.0, 0.0, 0.0])
        with self.assertRaises(FinslerFieldError):
            christoffel(ConformalExponentField.exponential(1.0), [0.0, 0.0, 0.0])


class TestFiniteDifferenceProviders(unittest.TestCase):

    def test_from_kappa(self):
        beta = 0.7
        exact = ConformalExponentField.exponential(beta)
        numeric = ConformalExponentField.from_kappa(lambda x: np.exp(beta * x[0]))
        x = np.array([0.3, 0.1, 0.2, 0.4])
        np.testing.assert_allclose(ricci(numeric, x), ricci(exact, x), atol=1e-5)

    def test_nonpositive_kappa(self):
        field = ConformalExponentField.from_kappa(lambda x: x[0])
        with self.assertRaises(NonpositiveKappa):
            field.a([-1.0, 0.0, 0.0, 0.0])

    def test_cosmology_provider(self):
        solution = integrate_phi(0.5, rel_tol=1e-11)
        field = ConformalExponentField.cosmology(solution)
        x = np.array([0.1, 0.1, 0.05, 0.05])
        self.assertAlmostEqual(field.kappa(x), psi_and_field(solution, x[0], np.linalg.norm(x[1:]))[2], places=12)
        tensor, trace = stress_energy(field, x)
        self.assertLess(abs(trace + scalar_curvature(field, x)), 1e-8)


class TestStressEnergy(unittest.TestCase):

    def test_unit_time_gradient(self):
        tensor = full_stress_energy_from_gradient([1.0, 0.0, 0.0, 0.0])
        np.testing.assert_allclose(tensor, np.diag([3.0, -1.0, -1.0, -1.0]), atol=1e-15)

    def test_traceless(self):
        rng = np.random.default_rng(5)
        for gradient in rng.normal(size=(200, 4)):
            tensor = full_stress_energy_from_gradient(gradient)
            quadratic = gradient[0] ** 2 - np.dot(gradient[1:], gradient[1:])
            self.assertLess(abs(np.trace(tensor)), 1e-10 * (1 + quadratic ** 2))

    def test_from_field(self):
        tensor = full_stress_energy(Affine([2.0, 1.0, 0.0, 0.0]), np.zeros(4))
        # Q = 3: T^0_0 = 4 * 4 * 3 - 9
        self.assertAlmostEqual(tensor[0, 0], 39.0, places=12)
        with self.assertRaises(FinslerFieldError):
            full_stress_energy_from_gradient([1.0, 0.0, 0.0])

    def test_bundle(self):
        field = ConformalExponentField.exponential(0.5)
        x = np.array([0.2, 0.0, 0.0, 0.0])
        bundle = tensor_bundle(field, x, factor=2.0, S_field=Affine([1.0, 0.0, 0.0, 0.0]))
        np.testing.assert_allclose(bundle.ricci, ricci(field, x))
        self.assertAlmostEqual(bundle.stress_trace, -2.0 * bundle.scalar, places=12)
        np.testing.assert_allclose(bundle.full_stress, np.diag([3.0, -1.0, -1.0, -1.0]), atol=1e-15)
        self.assertIsNone(tensor_bundle(field, x).full_stress)


class TestOracle(unittest.TestCase):

    def test_oracle_agreement(self):
        for field, x in ((ConformalExponentField.exponential(0.7), [0.3, 0.1, 0.2, 0.4]),
                         (ConformalExponentField.interval_log(1.5), [2.0, 0.3, 0.2, 0.1])):
            x = np.array(x)
            oracle = generic_oracle_curvature(conformal_metric(field), x, step=1e-3)
            bundle = tensor_bundle(field, x)
            np.testing.assert_allclose(oracle.christoffel, bundle.christoffel, atol=1e-6)
            np.testing.assert_allclose(oracle.ricci, bundle.ricci, atol=1e-4)
            self.assertAlmostEqual(oracle.scalar, bundle.scalar, delta=1e-4)
            self.assertAlmostEqual(oracle.stress_trace, bundle.stress_trace, delta=1e-4)

    def test_oracle_order(self):
        cases = [(ConformalExponentField.exponential(0.7), [0.3, 0.1, 0.2, 0.4]),
                 (ConformalExponentField.interval_log(1.5), [2.0, 0.3, 0.2, 0.1]),
                 (ConformalExponentField.spatial_radial_log(1.5), [0.5, 1.0, 0.7, 0.4])]
        for field, x in cases:
            exact = tensor_bundle(field, x)
            oracles = [generic_oracle_curvature(conformal_metric(field), x, step=h) for h in (0.02, 0.01, 0.005)]
            for tensor in ('christoffel', 'riemann', 'ricci'):
                errors = [np.max(np.abs(getattr(oracle, tensor) - getattr(exact, tensor))) for oracle in oracles]
                self.assertGreater(np.min(observed_order(errors)), 1.9, msg='{} {}'.format(field.family, tensor))

    def test_oracle_flat(self):
        x = np.array([0.4, -0.2, 1.3, 0.7])
        oracle = generic_oracle_curvature(lambda y: minkowski_metric(4), x)
        for tensor in (oracle.christoffel, oracle.riemann, oracle.ricci):
            np.testing.assert_array_equal(tensor, 0.0)
        self.assertEqual(oracle.scalar, 0.0)
        self.assertEqual(oracle.stress_trace, 0.0)

    def test_singular_metric(self):
        with self.assertRaises(SingularMetric):
            generic_oracle_curvature(lambda x: np.zeros((4, 4)), np.zeros(4))


if __name__ == '__main__':
    unittest.main()
