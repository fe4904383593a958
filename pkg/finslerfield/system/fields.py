import numpy as np
from finslerfield.utils import numerical_gradient
from finslerfield.errors import BoundaryPoint, OutOfRange, FinslerFieldError


class FieldSpec:
    """
    Scalar field S(x). Closed form families expose exact gradients, the
    lattice family exposes second order central differences on interior nodes.
    """
    family = None
    closed_form = True

    def value(self, x):
        raise NotImplementedError

    def gradient(self, x):
        raise NotImplementedError

    def __repr__(self):
        return '{}({})'.format(type(self).__name__,
                               ', '.join('{}={}'.format(k, v) for k, v in self.parameters().items()))

    def parameters(self):
        return {}


class _LogFamily(FieldSpec):
    """
    S = C ln(rho / rho0) for a radial-like variable rho(x)
    """

    def __init__(self, amplitude, reference):
        if amplitude == 0:
            raise FinslerFieldError('amplitude of the logarithmic field must be non zero')
        if reference <= 0:
            raise FinslerFieldError('reference value must be positive')
        self._amplitude = float(amplitude)
        self._reference = float(reference)

    @property
    def amplitude(self):
        return self._amplitude

    def radial_variable(self, x):
        raise NotImplementedError

    def radial_derivatives(self, rho):
        """
        :param rho: radial variable (> 0)
        :return: dS/drho, d2S/drho2
        """
        return self._amplitude / rho, -self._amplitude / rho ** 2

    def radial_value(self, rho):
        return self._amplitude * np.log(rho / self._reference)

    def value(self, x):
        return self.radial_value(self.radial_variable(x))


class RadialLog(_LogFamily):
    """
    S = C ln(r / r0) with r the euclidean radius of all coordinates
    """
    family = 'radial_log'

    def __init__(self, C=1.0, r0=1.0):
        _LogFamily.__init__(self, C, r0)

    @property
    def C(self):
        return self._amplitude

    @property
    def r0(self):
        return self._reference

    def parameters(self):
        return {'C': self.C, 'r0': self.r0}

    def radial_variable(self, x):
        r = np.linalg.norm(x)
        if r == 0:
            raise OutOfRange('radial log field is singular at the origin')
        return r

    def gradient(self, x):
        x = np.asarray(x, dtype=float)
        r = self.radial_variable(x)
        return self.C * x / r ** 2


class IntervalLog(_LogFamily):
    """
    S = C ln(s / s0) with s the pseudo euclidean interval from the origin
    """
    family = 'interval_log'

    def __init__(self, C=1.0, s0=1.0):
        _LogFamily.__init__(self, C, s0)

    @property
    def C(self):
        return self._amplitude

    @property
    def s0(self):
        return self._reference

    def parameters(self):
        return {'C': self.C, 's0': self.s0}

    def radial_variable(self, x):
        x = np.asarray(x, dtype=float)
        s2 = x[0] ** 2 - np.dot(x[1:], x[1:])
        if s2 <= 0 or x[0] <= 0:
            raise OutOfRange('point {} is outside the forward cone'.format(list(x)))
        return np.sqrt(s2)

    def gradient(self, x):
        x = np.asarray(x, dtype=float)
        s = self.radial_variable(x)
        grad = -self.C * x / s ** 2
        grad[0] = self.C * x[0] / s ** 2
        return grad


class BerwaldMooreLog(_LogFamily):
    """
    S = S0 ln(s / s0) with s = (xi1 xi2 xi3 xi4)^(1/4) in the isotropic basis
    """
    family = 'berwald_moore_log'

    def __init__(self, S0=1.0, s0=1.0):
        _LogFamily.__init__(self, S0, s0)

    @property
    def S0(self):
        return self._amplitude

    @property
    def s0(self):
        return self._reference

    def parameters(self):
        return {'S0': self.S0, 's0': self.s0}

    def radial_variable(self, x):
        x = np.asarray(x, dtype=float)
        if len(x) != 4 or np.any(x <= 0):
            raise OutOfRange('isotropic coordinates must be 4 positive numbers, got {}'.format(list(x)))
        return np.prod(x) ** 0.25

    def gradient(self, x):
        x = np.asarray(x, dtype=float)
        self.radial_variable(x)
        # ds/dxi_i = s / (4 xi_i)
        return self.S0 / (4.0 * x)


class CosmoExp(FieldSpec):
    """
    S(x0, r) = S0 exp(-gamma x0) psi(gamma r) with psi = exp(int_0^xi phi)

    :param S0: amplitude (> 0)
    :param gamma: inverse length
    :param solution: object exposing phi(xi), phi_over_xi(xi) and psi(xi)
    """
    family = 'cosmo_exp'

    def __init__(self, solution, S0=1.0, gamma=1.0):
        if S0 <= 0:
            raise FinslerFieldError('S0 must be positive so that kappa > 0')
        if gamma <= 0:
            raise FinslerFieldError('gamma must be positive')
        self.solution = solution
        self.S0 = float(S0)
        self.gamma = float(gamma)

    def parameters(self):
        return {'S0': self.S0, 'gamma': self.gamma}

    def value(self, x):
        x = np.asarray(x, dtype=float)
        r = np.linalg.norm(x[1:])
        return self.S0 * np.exp(-self.gamma * x[0]) * self.solution.psi(self.gamma * r)

    def gradient(self, x):
        x = np.asarray(x, dtype=float)
        xi = self.gamma * np.linalg.norm(x[1:])
        s = self.value(x)
        grad = np.empty_like(x)
        grad[0] = -self.gamma * s
        # dS/dx^mu = S gamma phi(xi) x^mu / r, written with phi/xi to stay finite at r = 0
        grad[1:] = s * self.gamma ** 2 * self.solution.phi_over_xi(xi) * x[1:]
        return grad


class Affine(FieldSpec):
    """
    S = offset + gradient . x
    """
    family = 'affine'

    def __init__(self, gradient, offset=0.0):
        self._gradient = np.array(gradient, dtype=float)
        self.offset = float(offset)

    def parameters(self):
        return {'gradient': list(self._gradient), 'offset': self.offset}

    def value(self, x):
        return self.offset + np.dot(self._gradient, x)

    def gradient(self, x):
        return self._gradient.copy()


class Custom(FieldSpec):
    """
    user scalar function. Without an explicit gradient callable the gradient
    is obtained by central differences.
    """
    family = 'custom'

    def __init__(self, function, gradient=None):
        self._function = function
        self._gradient = gradient
        self.closed_form = gradient is not None

    def value(self, x):
        return self._function(np.asarray(x, dtype=float))

    def gradient(self, x):
        if self._gradient is not None:
            return np.asarray(self._gradient(np.asarray(x, dtype=float)), dtype=float)
        return numerical_gradient(self._function, x)


class GridSampled(FieldSpec):
    """
    scalar field sampled on a regular lattice

    :param origin: coordinates of the node with index (0, ..., 0)
    :param spacing: lattice spacing per axis
    :param values: n-dimensional array of S values
    """
    family = 'grid_sampled'
    closed_form = False

    def __init__(self, origin, spacing, values):
        self.values = np.array(values, dtype=float)
        n_dim = self.values.ndim
        self.origin = np.array(origin, dtype=float).reshape(n_dim)
        self.spacing = np.array(np.broadcast_to(spacing, (n_dim,)), dtype=float)
        if np.any(self.spacing <= 0):
            raise FinslerFieldError('lattice spacing must be positive')

    def parameters(self):
        return {'origin': list(self.origin), 'spacing': list(self.spacing), 'shape': list(self.shape)}

    @property
    def shape(self):
        return self.values.shape

    @property
    def n_dim(self):
        return self.values.ndim

    def axis_coordinates(self, axis):
        return self.origin[axis] + self.spacing[axis] * np.arange(self.shape[axis])

    def mesh(self):
        return np.meshgrid(*[self.axis_coordinates(a) for a in range(self.n_dim)], indexing='ij')

    def node_index(self, x):
        x = np.asarray(x, dtype=float)
        scaled = (x - self.origin) / self.spacing
        index = np.rint(scaled).astype(int)
        if np.any(np.abs(scaled - index) > 1e-8):
            raise OutOfRange('point {} is not a lattice node'.format(list(x)))
        if np.any(index < 0) or np.any(index >= np.array(self.shape)):
            raise OutOfRange('point {} is outside the lattice'.format(list(x)))
        return tuple(index)

    def value(self, x):
        return self.values[self.node_index(x)]

    def gradient(self, x):
        index = self.node_index(x)
        if any(i < 1 or i > n - 2 for i, n in zip(index, self.shape)):
            raise BoundaryPoint('central differences need an interior node, got index {}'.format(index))

        grad = np.zeros(self.n_dim)
        for axis in range(self.n_dim):
            up = list(index)
            down = list(index)
            up[axis] += 1
            down[axis] -= 1
            grad[axis] = (self.values[tuple(up)] - self.values[tuple(down)]) / (2 * self.spacing[axis])
        return grad
