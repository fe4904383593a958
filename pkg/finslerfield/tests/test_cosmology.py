from finslerfield.core.cosmology import (phi_series, phi_rhs, flux_form_residual, integrate_phi, psi_and_field,
                                         hubble, hubble_closed_form, body_velocity, cosmo_field_residual,
                                         cosmo_field, CosmoSolution)
from finslerfield.system import SpaceSpec, PSEUDO_EUCLIDEAN, kappa_from_field
from finslerfield.errors import (SingularDenominator, OriginSingularity, ToleranceNotMet, OutOfRange,
                                 FinslerFieldError)
from fractions import Fraction

import unittest
import warnings
import numpy as np

try:
    import sympy
except ImportError:
    sympy = None


def _quiet_integration(xi_max, **kwargs):
    with warnings.catch_warnings():
        warnings.simplefilter('ignore')
        return integrate_phi(xi_max, **kwargs)


class TestSeries(unittest.TestCase):

    def test_leading_coefficients(self):
        self.assertEqual(phi_series(3).coefficients, [Fraction(1), Fraction(0), Fraction(-1, 5)])
        self.assertEqual(phi_series(5).coefficients,
                         [Fraction(1), Fraction(0), Fraction(-1, 5), Fraction(0), Fraction(6, 35)])

    def test_prefix_stable(self):
        self.assertEqual(phi_series(11).coefficients[:5], phi_series(5).coefficients)

    def test_odd_function(self):
        coefficients = phi_series(11).coefficients
        self.assertTrue(all(a == 0 for a in coefficients[1::2]))

    def test_series_solves_equation(self):
        series = phi_series(11)
        for xi in (0.01, 0.05, 0.1):
            residual = flux_form_residual(xi, series(xi), series.derivative(xi))
            self.assertLess(abs(residual), 1e-9)

    def test_invalid_order(self):
        with self.assertRaises(FinslerFieldError):
            phi_series(0)

    @unittest.skipIf(sympy is None, 'sympy not available')
    def test_symbolic_balance(self):
        xi = sympy.Symbol('xi')
        phi = sum(sympy.Rational(a.numerator, a.denominator) * xi ** (k + 1)
                  for k, a in enumerate(phi_series(7).coefficients))
        equation = sympy.expand(xi * (1 - 3 * phi ** 2) * sympy.diff(phi, xi)
                                - 3 * xi * (1 - phi ** 2) ** 2 + 2 * phi * (1 - phi ** 2))
        for power in range(8):
            self.assertEqual(equation.coeff(xi, power), 0)


class TestEquation(unittest.TestCase):

    def test_rhs_errors(self):
        with self.assertRaises(OriginSingularity):
            phi_rhs(0.0, 0.0)
        with self.assertRaises(SingularDenominator):
            phi_rhs(0.6, 1 / np.sqrt(3.0))
        # the singular errors are arithmetic errors too
        self.assertTrue(issubclass(SingularDenominator, ArithmeticError))

    def test_constant_solution(self):
        # phi = 1 solves the flux form identically
        self.assertEqual(flux_form_residual(0.7, 1.0, 0.0), 0.0)
        self.assertEqual(phi_rhs(0.7, 1.0), 0.0)


class TestIntegration(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.solution = integrate_phi(0.5, rel_tol=1e-10)

    def test_no_singularity_before_half(self):
        self.assertIsNone(self.solution.singular_xi)
        self.assertAlmostEqual(self.solution.xi_end, 0.5, places=12)

    def test_series_agreement(self):
        series = phi_series(11)
        for xi in np.linspace(0.0, 0.1, 41):
            self.assertLess(abs(self.solution.phi(xi) - series(xi)), 1e-8)
            self.assertLess(abs(self.solution.integral(xi) - series.integral(xi)), 1e-9)

    def test_hubble_ratio(self):
        ratio = hubble(self.solution, 0.1) / self.solution.H0
        self.assertLess(abs(ratio - phi_series(11).over_xi(0.1)), 1e-8)
        self.assertLess(abs(ratio - 0.998), 2e-5)
        self.assertEqual(hubble(self.solution, 0.0), self.solution.H0)
        self.assertAlmostEqual(hubble_closed_form(1.0, 0.1), 0.998, places=12)

    def test_residual(self):
        self.assertLess(self.solution.residual_norm, 1e-6)
        midpoints, residuals = self.solution.midpoint_residuals()
        self.assertGreater(len(midpoints), 3)
        self.assertTrue(np.all((midpoints > 1e-3) & (midpoints < 0.5)))
        np.testing.assert_allclose(residuals, [cosmo_field_residual(self.solution, xi) for xi in midpoints],
                                   rtol=1e-12, atol=1e-15)
        for xi in (0.0005, 0.2, 0.33, 0.49):
            self.assertLess(abs(cosmo_field_residual(self.solution, xi)), 1e-5)

    def test_residual_tracks_tolerance(self):
        loose = integrate_phi(0.5, rel_tol=1e-3)
        tight = integrate_phi(0.5, rel_tol=1e-11, max_step=0.01)
        self.assertGreater(loose.residual_norm, 1e-6)
        self.assertGreater(loose.residual_norm, 100 * tight.residual_norm)

    def test_residual_of_series_solution(self):
        # a solution inside the bootstrap has no integration nodes
        solution = integrate_phi(5e-4)
        self.assertEqual(solution.residual_norm, 0.0)
        self.assertEqual(len(solution.midpoint_residuals()[0]), 0)

    def test_monotone_below_light_speed(self):
        values = [self.solution.phi(xi) for xi in np.linspace(0.0, 0.5, 51)]
        self.assertTrue(np.all(np.diff(values) > 0))
        self.assertLess(body_velocity(self.solution, 0.5), self.solution.c)

    def test_out_of_range(self):
        with self.assertRaises(OutOfRange):
            self.solution.phi(0.6)
        with self.assertRaises(OutOfRange):
            self.solution.psi(-0.1)
        with self.assertRaises(OutOfRange):
            hubble(self.solution, -1.0)

    def test_psi_and_field(self):
        psi, S, kappa = psi_and_field(self.solution, 0.0, 0.0)
        self.assertEqual(psi, 1.0)
        self.assertEqual(S, self.solution.S0)
        self.assertAlmostEqual(kappa, self.solution.gamma * self.solution.S0, places=14)

        psi, S, kappa = psi_and_field(self.solution, 0.2, 0.3)
        self.assertAlmostEqual(psi, np.exp(self.solution.integral(0.3)), places=14)
        self.assertAlmostEqual(S, np.exp(-0.2) * psi, places=14)

    def test_field_kappa(self):
        # kappa from the Hamilton-Jacobi equation equals gamma sqrt(1 - phi^2) S
        field = cosmo_field(self.solution)
        spec = SpaceSpec(PSEUDO_EUCLIDEAN, n_dim=4)
        x = np.array([0.1, 0.2, -0.1, 0.15])
        r = np.linalg.norm(x[1:])
        self.assertAlmostEqual(kappa_from_field(spec, field, x), psi_and_field(self.solution, x[0], r)[2],
                               places=12)

    def test_scaled_solution(self):
        solution = integrate_phi(0.5, rel_tol=1e-10, gamma=2.0, S0=3.0, c=1.5)
        self.assertAlmostEqual(solution.H0, 3.0)
        self.assertAlmostEqual(hubble(solution, 0.0), 3.0)
        # H0 r / c = 0.2 at r = 0.1
        self.assertAlmostEqual(hubble(solution, 0.1) / solution.H0, solution.phi_over_xi(0.2), places=12)

    def test_series_only(self):
        solution = integrate_phi(5e-4)
        self.assertEqual(solution.xi_end, 5e-4)
        self.assertAlmostEqual(solution.phi(2.5e-4), phi_series(11)(2.5e-4), places=15)

    def test_invalid_parameters(self):
        with self.assertRaises(ToleranceNotMet):
            integrate_phi(0.5, rel_tol=1e-15)
        with self.assertRaises(ToleranceNotMet):
            integrate_phi(0.5, rel_tol=0.1)
        with self.assertRaises(FinslerFieldError):
            integrate_phi(0.5, method='RK4')
        with self.assertRaises(FinslerFieldError):
            integrate_phi(0.5, S0=-1.0)
        with self.assertRaises(OutOfRange):
            integrate_phi(0.0)


class TestSingularSet(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.rk45 = _quiet_integration(2.0, rel_tol=1e-10, method='RK45')
        cls.dop853 = _quiet_integration(2.0, rel_tol=1e-10, method='DOP853')

    def test_warning(self):
        with self.assertWarns(UserWarning):
            integrate_phi(2.0, rel_tol=1e-8)

    def test_stops_at_singular_set(self):
        for solution in (self.rk45, self.dop853):
            self.assertIsNotNone(solution.singular_xi)
            self.assertGreater(solution.singular_xi, 0.5)
            self.assertLess(solution.singular_xi, 0.8)
            self.assertEqual(solution.xi_end, solution.singular_xi)
            self.assertLess(abs(solution.phi(solution.singular_xi) - 1 / np.sqrt(3.0)), 1e-6)

    def test_reproducible_across_integrators(self):
        self.assertLess(abs(self.rk45.singular_xi - self.dop853.singular_xi), 1e-6)
        self.assertEqual(self.rk45.method, 'RK45')
        self.assertEqual(self.dop853.method, 'DOP853')

    def test_not_resolved_beyond(self):
        with self.assertRaises(OutOfRange):
            self.rk45.phi(self.rk45.singular_xi + 0.01)


class TestSolutionObject(unittest.TestCase):

    def test_invalid_amplitude(self):
        series = phi_series(3)
        with self.assertRaises(FinslerFieldError):
            CosmoSolution([0.0, 1e-3], [0.0, 1e-3], [1.0, 1.0], [0.0, 5e-7], series, S0=0.0)


if __name__ == '__main__':
    unittest.main()
