import numpy as np
import warnings
from fractions import Fraction
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicHermiteSpline
from finslerfield.core.series import TruncatedSeries
from finslerfield.system.fields import CosmoExp
from finslerfield.utils.units import SPEED_OF_LIGHT, XI_SWITCH, EPS_SING
from finslerfield.errors import (SingularDenominator, OriginSingularity, ToleranceNotMet,
                                 OutOfRange, FinslerFieldError)

SERIES_ORDER = 11
_BOOTSTRAP_NODES = 4
_INTEGRATORS = ('RK45', 'DOP853')
RESIDUAL_MARGIN = 1e-2


def _equation_polynomial(phi):
    """
    xi (1 - 3 phi^2) phi' - 3 xi (1 - phi^2)^2 + 2 phi (1 - phi^2) for a truncated series phi
    """
    x = TruncatedSeries.variable(phi.order)
    one_minus = 1 - phi * phi
    return x * (1 - 3 * phi * phi) * phi.derivative() - 3 * x * one_minus * one_minus + 2 * phi * one_minus


class SeriesExpansion:
    """
    phi(xi) = sum_{k=1..N} a_k xi^k with exact rational coefficients
    """

    def __init__(self, coefficients):
        self._coefficients = [Fraction(a) for a in coefficients]

    def __repr__(self):
        return 'SeriesExpansion({})'.format(', '.join(str(a) for a in self._coefficients))

    @property
    def order(self):
        return len(self._coefficients)

    @property
    def coefficients(self):
        return list(self._coefficients)

    def as_series(self):
        return TruncatedSeries([0] + self._coefficients, self.order)

    def __call__(self, xi):
        return self.as_series()(xi)

    def derivative(self, xi):
        return self.as_series().derivative()(xi)

    def over_xi(self, xi):
        """
        phi(xi) / xi, finite at xi = 0
        """
        return self.as_series().shift(-1)(xi)

    def integral(self, xi):
        """
        int_0^xi phi
        """
        return self.as_series().antiderivative()(xi)


def phi_series(order):
    """
    power series solution of the cosmological equation around xi = 0

    The coefficient a_k enters the order xi^k balance only through (k + 2) a_k,
    so each coefficient follows from the lower ones.

    :param order: number of coefficients N (>= 1)
    :return: SeriesExpansion with [a_1, ..., a_N]
    """
    if order < 1:
        raise FinslerFieldError('series order must be at least 1')

    coefficients = [Fraction(0)] * (order + 1)
    for k in range(1, order + 1):
        residual = _equation_polynomial(TruncatedSeries(coefficients, order))
        coefficients[k] = -residual.coefficient(k) / (k + 2)

    return SeriesExpansion(coefficients[1:])


def phi_rhs(xi, phi, eps_sing=EPS_SING):
    """
    d phi / d xi = [3 xi (1 - phi^2)^2 - 2 phi (1 - phi^2)] / [xi (1 - 3 phi^2)]

    :param xi: dimensionless radius (> 0)
    :param phi: value of phi
    :param eps_sing: smallest accepted |1 - 3 phi^2|
    :return: derivative
    """
    if xi == 0:
        raise OriginSingularity('the cosmological equation is singular at xi = 0, use the series')
    denominator = 1 - 3 * phi ** 2
    if abs(denominator) < eps_sing:
        raise SingularDenominator('1 - 3 phi^2 = {} at xi = {}'.format(denominator, xi))
    one_minus = 1 - phi ** 2
    return (3 * xi * one_minus ** 2 - 2 * phi * one_minus) / (xi * denominator)


def flux_form_residual(xi, phi, dphi):
    """
    d/dxi[xi^2 phi (1 - phi^2)] - 3 xi^2 (1 - phi^2)^2 with the derivative expanded
    """
    one_minus = 1 - phi ** 2
    return (2 * xi * phi * one_minus + xi ** 2 * dphi * (1 - 3 * phi ** 2)
            - 3 * xi ** 2 * one_minus ** 2)


class CosmoSolution:
    """
    phi(xi) on [0, xi_end]: exact series on [0, xi_switch], integrated nodes beyond.
    Between nodes phi and its integral are C1 cubic Hermite interpolants built with the
    exact slopes (the equation for phi, phi itself for the integral).

    :param nodes: increasing xi values, nodes[0] = 0
    :param values: phi at the nodes
    :param slopes: d phi / d xi at the nodes
    :param integrals: int_0^xi phi at the nodes
    :param series: SeriesExpansion used below xi_switch
    """

    def __init__(self,
                 nodes,
                 values,
                 slopes,
                 integrals,
                 series,
                 xi_switch=XI_SWITCH,
                 singular_xi=None,
                 gamma=1.0,
                 S0=1.0,
                 c=SPEED_OF_LIGHT,
                 method='RK45',
                 rel_tol=None):

        if S0 <= 0:
            raise FinslerFieldError('S0 must be positive so that kappa > 0')
        if gamma <= 0 or c <= 0:
            raise FinslerFieldError('gamma and c must be positive')

        self._nodes = np.array(nodes, dtype=float)
        self._values = np.array(values, dtype=float)
        self._slopes = np.array(slopes, dtype=float)
        self._integrals = np.array(integrals, dtype=float)
        self._series = series
        self._xi_switch = float(xi_switch)
        self._singular_xi = None if singular_xi is None else float(singular_xi)
        self._gamma = float(gamma)
        self._S0 = float(S0)
        self._c = float(c)
        self._method = method
        self._rel_tol = rel_tol

        outer = self._nodes >= self._xi_switch
        if np.count_nonzero(outer) >= 2:
            self._phi_spline = CubicHermiteSpline(self._nodes[outer], self._values[outer], self._slopes[outer])
            self._integral_spline = CubicHermiteSpline(self._nodes[outer], self._integrals[outer],
                                                       self._values[outer])
            self._dphi_spline = self._phi_spline.derivative()
        else:
            self._phi_spline = self._integral_spline = self._dphi_spline = None

    def __repr__(self):
        return 'CosmoSolution(xi_end={}, singular_xi={}, method={}, gamma={}, S0={}, c={})'.format(
            self.xi_end, self._singular_xi, self._method, self._gamma, self._S0, self._c)

    @property
    def nodes(self):
        return self._nodes.copy()

    @property
    def values(self):
        return self._values.copy()

    @property
    def slopes(self):
        return self._slopes.copy()

    @property
    def integrals(self):
        return self._integrals.copy()

    @property
    def series(self):
        return self._series

    @property
    def xi_switch(self):
        return self._xi_switch

    @property
    def xi_end(self):
        return self._nodes[-1]

    @property
    def singular_xi(self):
        return self._singular_xi

    @property
    def gamma(self):
        return self._gamma

    @property
    def S0(self):
        return self._S0

    @property
    def c(self):
        return self._c

    @property
    def H0(self):
        return self._c * self._gamma

    @property
    def method(self):
        return self._method

    @property
    def rel_tol(self):
        return self._rel_tol

    def midpoint_residuals(self, margin=RESIDUAL_MARGIN):
        """
        flux form residual of the dense output halfway between consecutive integration nodes

        The nodes carry the slopes of the equation itself, so only points between them
        measure the integration error. Intervals with 1 - 3 phi^2 < margin at either end
        are skipped.

        :param margin: distance to the singular set below which intervals are skipped
        :return: midpoints, residuals
        """
        if self._phi_spline is None:
            return np.array([]), np.array([])

        outer = self._nodes >= self._xi_switch
        nodes = self._nodes[outer]
        regular = 1 - 3 * self._values[outer] ** 2 >= margin
        keep = regular[:-1] & regular[1:]
        midpoints = (0.5 * (nodes[:-1] + nodes[1:]))[keep]
        return midpoints, flux_form_residual(midpoints, self._phi_spline(midpoints), self._dphi_spline(midpoints))

    @property
    def residual_norm(self):
        """
        max |flux form residual| at the interior midpoints (0 for a pure series solution)
        """
        _, residuals = self.midpoint_residuals()
        if len(residuals) == 0:
            return 0.0
        return float(np.max(np.abs(residuals)))

    def _check_range(self, xi):
        if xi < 0 or xi > self.xi_end * (1 + 1e-12):
            raise OutOfRange('xi = {} outside the resolved range [0, {}]'.format(xi, self.xi_end))

    def _in_series(self, xi):
        return xi <= self._xi_switch or self._phi_spline is None

    def phi(self, xi):
        self._check_range(xi)
        if self._in_series(xi):
            return self._series(xi)
        return float(self._phi_spline(xi))

    def dphi(self, xi):
        self._check_range(xi)
        if self._in_series(xi):
            return self._series.derivative(xi)
        return float(self._dphi_spline(xi))

    def phi_over_xi(self, xi):
        self._check_range(xi)
        if self._in_series(xi):
            return self._series.over_xi(xi)
        return float(self._phi_spline(xi)) / xi

    def integral(self, xi):
        """
        int_0^xi phi
        """
        self._check_range(xi)
        if self._in_series(xi):
            return self._series.integral(xi)
        return float(self._integral_spline(xi))

    def psi(self, xi):
        """
        psi = exp(int_0^xi phi), with psi(0) = 1
        """
        return np.exp(self.integral(xi))


def integrate_phi(xi_max,
                  rel_tol=1e-10,
                  gamma=1.0,
                  S0=1.0,
                  c=SPEED_OF_LIGHT,
                  method='RK45',
                  max_step=np.inf,
                  series_order=SERIES_ORDER,
                  xi_switch=XI_SWITCH,
                  eps_sing=EPS_SING):
    """
    integrate the cosmological equation for phi(xi) from the series bootstrap at xi_switch

    The integration stops at xi_max or where 1 - 3 phi^2 drops below eps_sing,
    whichever comes first. The integral of phi is carried as a second component.

    :param xi_max: end of the requested range (> 0)
    :param rel_tol: relative tolerance of the integrator, in [1e-13, 1e-3]
    :param gamma: inverse length, xi = gamma r
    :param S0: amplitude of the World function (> 0)
    :param c: speed of light
    :param method: 'RK45' (Dormand-Prince 5(4)) or 'DOP853'
    :param max_step: largest step allowed to the integrator
    :param series_order: number of series coefficients of the bootstrap
    :param xi_switch: end of the series bootstrap
    :param eps_sing: singular set detection threshold
    :return: CosmoSolution
    """
    if not xi_max > 0:
        raise OutOfRange('xi_max must be positive')
    if not 1e-13 <= rel_tol <= 1e-3:
        raise ToleranceNotMet('rel_tol must lie in [1e-13, 1e-3], got {}'.format(rel_tol))
    if method not in _INTEGRATORS:
        raise FinslerFieldError('unknown integrator {}, use one of {}'.format(method, _INTEGRATORS))

    series = phi_series(series_order)
    switch = min(xi_switch, xi_max)

    bootstrap = np.linspace(0.0, switch, _BOOTSTRAP_NODES)
    nodes = list(bootstrap)
    values = [series(xi) for xi in bootstrap]
    slopes = [series.derivative(xi) for xi in bootstrap]
    integrals = [series.integral(xi) for xi in bootstrap]

    if xi_max <= xi_switch:
        return CosmoSolution(nodes, values, slopes, integrals, series, xi_switch=xi_switch,
                             gamma=gamma, S0=S0, c=c, method=method, rel_tol=rel_tol)

    def rhs(xi, y):
        # no exceptions inside the integrator, the terminal event stops it first
        with np.errstate(divide='ignore', invalid='ignore'):
            one_minus = 1 - y[0] ** 2
            dphi = (3 * xi * one_minus ** 2 - 2 * y[0] * one_minus) / (xi * (1 - 3 * y[0] ** 2))
        return [dphi, y[0]]

    def singular_set(xi, y):
        return 1 - 3 * y[0] ** 2 - eps_sing

    singular_set.terminal = True
    singular_set.direction = -1

    solution = solve_ivp(rhs, (switch, xi_max), [values[-1], integrals[-1]],
                         method=method, rtol=rel_tol, atol=rel_tol * 1e-3,
                         max_step=max_step, events=singular_set)

    if solution.status == -1:
        raise ToleranceNotMet('integration failed: {}'.format(solution.message))

    singular_xi = None
    if solution.status == 1 and len(solution.t_events[0]) > 0:
        singular_xi = solution.t_events[0][0]
        warnings.warn('phi reached the singular set 1 - 3 phi^2 = 0 at xi = {:.10f} before xi_max = {}'.format(
            singular_xi, xi_max))

    xi_new = solution.t[1:]
    phi_new = solution.y[0, 1:]
    nodes += list(xi_new)
    values += list(phi_new)
    slopes += [rhs(xi, [phi])[0] for xi, phi in zip(xi_new, phi_new)]
    integrals += list(solution.y[1, 1:])

    return CosmoSolution(nodes, values, slopes, integrals, series, xi_switch=xi_switch,
                         singular_xi=singular_xi, gamma=gamma, S0=S0, c=c,
                         method=method, rel_tol=rel_tol)


def psi_and_field(sol, x0, r):
    """
    psi, World function S and conformal factor kappa at (x0, r)

    :param sol: CosmoSolution
    :param x0: time coordinate c t
    :param r: spatial radius (>= 0)
    :return: psi, S, kappa
    """
    if r < 0:
        raise OutOfRange('radius must be non negative')
    xi = sol.gamma * r
    psi = sol.psi(xi)
    S = sol.S0 * np.exp(-sol.gamma * x0) * psi
    kappa = sol.gamma * np.sqrt(1 - sol.phi(xi) ** 2) * S
    return psi, S, kappa


def hubble(sol, r):
    """
    H(r) = H0 phi(H0 r / c) / (H0 r / c), equal to H0 at r = 0
    """
    if r < 0:
        raise OutOfRange('radius must be non negative')
    return sol.H0 * sol.phi_over_xi(sol.H0 * r / sol.c)


def hubble_closed_form(H0, r, c=SPEED_OF_LIGHT):
    """
    small distance Hubble law H0 (1 - (H0 r / c)^2 / 5)
    """
    return H0 * (1 - (H0 * r / c) ** 2 / 5.0)


def body_velocity(sol, r):
    """
    dr/dt = c phi(gamma r) of a sample body, |dr/dt| < c
    """
    if r < 0:
        raise OutOfRange('radius must be non negative')
    return sol.c * sol.phi(sol.gamma * r)


def cosmo_field_residual(sol, xi):
    """
    flux form residual of the cosmological equation from the interpolated phi and d phi / d xi
    """
    return flux_form_residual(xi, sol.phi(xi), sol.dphi(xi))


def cosmo_field(sol, S0=None, gamma=None):
    """
    World function S(x) = S0 exp(-gamma x0) psi(gamma r) as a FieldSpec
    """
    return CosmoExp(sol,
                    S0=sol.S0 if S0 is None else S0,
                    gamma=sol.gamma if gamma is None else gamma)
