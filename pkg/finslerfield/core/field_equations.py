import numpy as np
from finslerfield.system.fields import FieldSpec, GridSampled
from finslerfield.system.generators import centered_lattice_field
from finslerfield.utils import numerical_jacobian, fd_step, observed_order
from finslerfield.errors import NegativeBase, GridTooSmall, NonpositiveRadius, FinslerFieldError

EUCLIDEAN_POWER = 'euclidean_power'
PSEUDO_POWER = 'pseudo_power'
RADIAL_REDUCED = 'radial_reduced'
SPHERICAL_REDUCED = 'spherical_reduced'
BERWALD_MOORE_PRODUCT = 'berwald_moore_product'
BERWALD_MOORE_RADIAL = 'berwald_moore_radial'

_forms = (EUCLIDEAN_POWER, PSEUDO_POWER, RADIAL_REDUCED, SPHERICAL_REDUCED,
          BERWALD_MOORE_PRODUCT, BERWALD_MOORE_RADIAL)

MIN_LATTICE_POINTS = 5


class LagrangianForm:
    def __init__(self,
                 kind,
                 n_dim=4,
                 variable='r'):
        """
        Lagrangian density written with the derivatives of the World function S

        :param kind: one of euclidean_power, pseudo_power, radial_reduced, spherical_reduced,
                     berwald_moore_product, berwald_moore_radial
        :param n_dim: dimension of the space (4 for the spherical and Berwald-Moore forms)
        :param variable: radial variable of the radial_reduced form, 'r' (euclidean) or 's' (interval)
        """
        if kind not in _forms:
            raise FinslerFieldError('unknown Lagrangian form {}'.format(kind))
        if kind in (SPHERICAL_REDUCED, BERWALD_MOORE_PRODUCT, BERWALD_MOORE_RADIAL):
            n_dim = 4
        if n_dim < 2:
            raise FinslerFieldError('dimension must be at least 2')
        if variable not in ('r', 's'):
            raise FinslerFieldError('radial variable must be r or s')

        self._kind = kind
        self._n_dim = n_dim
        self._variable = variable

    def __repr__(self):
        return 'LagrangianForm(kind={}, n_dim={})'.format(self._kind, self._n_dim)

    @property
    def kind(self):
        return self._kind

    @property
    def n_dim(self):
        return self._n_dim

    @property
    def variable(self):
        return self._variable

    @property
    def lattice_dim(self):
        """
        number of lattice axes the form acts on
        """
        if self._kind in (RADIAL_REDUCED, BERWALD_MOORE_RADIAL):
            return 1
        if self._kind == SPHERICAL_REDUCED:
            return 2
        return self._n_dim

    def _power_base(self, quadratic):
        # Q^(n/2 - 1) with Q allowed negative only for integer exponents
        exponent = self._n_dim / 2.0 - 1
        if self._n_dim % 2 == 1 and np.any(quadratic < 0):
            raise NegativeBase('quadratic form is negative and the power n/2 - 1 = {} is fractional'.format(exponent))
        if self._n_dim % 2 == 1:
            return np.power(np.maximum(quadratic, 0.0), exponent)
        return np.power(quadratic, int(exponent))

    def fluxes(self, grad, coordinates=None):
        """
        dL / d(dS/dx^a) for every axis a

        :param grad: list with one array per derivative component
        :param coordinates: coordinate arrays matching grad (needed by the weighted reduced forms)
        :return: list of flux arrays
        """
        n = self._n_dim
        if self._kind == EUCLIDEAN_POWER:
            base = self._power_base(sum(g ** 2 for g in grad))
            return [n * g * base for g in grad]

        if self._kind == PSEUDO_POWER:
            quadratic = grad[0] ** 2 - sum(g ** 2 for g in grad[1:])
            base = self._power_base(quadratic)
            return [n * grad[0] * base] + [-n * g * base for g in grad[1:]]

        if self._kind == BERWALD_MOORE_PRODUCT:
            fluxes = []
            for a in range(len(grad)):
                product = 1.0
                for b, g in enumerate(grad):
                    if b != a:
                        product = product * g
                fluxes.append(product)
            return fluxes

        if self._kind == RADIAL_REDUCED:
            rho = coordinates[0]
            return [n * rho ** (n - 1) * np.sign(grad[0]) * np.abs(grad[0]) ** (n - 1)]

        if self._kind == BERWALD_MOORE_RADIAL:
            s = coordinates[0]
            return [4 * s ** 3 * grad[0] ** 3]

        # spherical reduced, lattice axes (x0, r)
        r = coordinates[1]
        quadratic = grad[0] ** 2 - grad[1] ** 2
        return [4 * r ** 2 * grad[0] * quadratic, -4 * r ** 2 * grad[1] * quadratic]


def lagrangian_density(form, grad, radius=None):
    """
    value of the Lagrangian density for a field derivative

    :param form: LagrangianForm
    :param grad: covector dS/dx (full forms), dS/drho (radial forms) or (dS/dx0, dS/dr) (spherical form)
    :param radius: radial variable, required by the reduced forms
    :return: density
    """
    grad = np.atleast_1d(np.asarray(grad, dtype=float))
    n = form.n_dim

    if form.kind in (RADIAL_REDUCED, SPHERICAL_REDUCED, BERWALD_MOORE_RADIAL):
        if radius is None:
            raise FinslerFieldError('the {} form needs the radial variable'.format(form.kind))
        if radius <= 0:
            raise NonpositiveRadius('radial variable must be positive, got {}'.format(radius))

    if form.kind == EUCLIDEAN_POWER:
        return np.dot(grad, grad) ** (n / 2.0)

    if form.kind == PSEUDO_POWER:
        quadratic = grad[0] ** 2 - np.dot(grad[1:], grad[1:])
        if quadratic < 0 and n % 2 == 1:
            raise NegativeBase('quadratic form {} is negative for odd n = {}'.format(quadratic, n))
        return quadratic ** (n // 2) if n % 2 == 0 else quadratic ** (n / 2.0)

    if form.kind == BERWALD_MOORE_PRODUCT:
        return np.prod(grad)

    if form.kind == RADIAL_REDUCED:
        return radius ** (n - 1) * abs(grad[0]) ** n

    if form.kind == BERWALD_MOORE_RADIAL:
        return radius ** 3 * grad[0] ** 4

    return radius ** 2 * (grad[0] ** 2 - grad[1] ** 2) ** 2


class LatticeResidual:
    """
    residual values on the interior nodes of a lattice (one boundary cell removed)
    """

    def __init__(self, values, spacing):
        self.values = values
        self.spacing = np.asarray(spacing, dtype=float)

    @property
    def max_norm(self):
        return np.max(np.abs(self.values))

    @property
    def l2_norm(self):
        # discrete L2 norm with the cell volume as weight
        return np.sqrt(np.prod(self.spacing) * np.sum(self.values ** 2))

    def __repr__(self):
        return 'LatticeResidual(max={}, l2={})'.format(self.max_norm, self.l2_norm)


def _along(n_dim, axis, selection):
    index = [slice(None)] * n_dim
    index[axis] = selection
    return tuple(index)


def _half_point_gradient(values, spacing, axis):
    """
    gradient components at the half nodes i + 1/2 of one axis, restricted to
    the interior of the other axes
    """
    n_dim = values.ndim
    grad = []
    for b in range(n_dim):
        if b == axis:
            component = np.diff(values, axis=axis) / spacing[axis]
        else:
            central = (values[_along(n_dim, b, slice(2, None))]
                       - values[_along(n_dim, b, slice(None, -2))]) / (2 * spacing[b])
            component = 0.5 * (central[_along(n_dim, axis, slice(None, -1))]
                               + central[_along(n_dim, axis, slice(1, None))])
        for c in range(n_dim):
            if c != axis and c != b:
                component = component[_along(n_dim, c, slice(1, -1))]
        grad.append(component)
    return grad


def _half_point_coordinates(field, axis):
    axes = []
    for c in range(field.n_dim):
        coordinates = field.axis_coordinates(c)
        if c == axis:
            axes.append(0.5 * (coordinates[1:] + coordinates[:-1]))
        else:
            axes.append(coordinates[1:-1])
    return np.meshgrid(*axes, indexing='ij')


def euler_lagrange_residual(form, field):
    """
    divergence of the fluxes dL/d(dS/dx^a) on the interior lattice nodes.
    Fluxes are evaluated at half steps and differenced once more, so the
    residual of a smooth field is of order h^2.

    :param form: LagrangianForm
    :param field: GridSampled FieldSpec with one lattice axis per form variable
    :return: LatticeResidual
    """
    if not isinstance(field, GridSampled):
        raise FinslerFieldError('the lattice residual needs a GridSampled field')
    if field.n_dim != form.lattice_dim:
        raise FinslerFieldError('form {} acts on {} axes, the lattice has {}'.format(form.kind, form.lattice_dim,
                                                                                      field.n_dim))
    if min(field.shape) < MIN_LATTICE_POINTS:
        raise GridTooSmall('need at least {} points per axis, got {}'.format(MIN_LATTICE_POINTS, field.shape))

    if form.kind in (RADIAL_REDUCED, BERWALD_MOORE_RADIAL):
        if field.axis_coordinates(0)[0] <= 0:
            raise NonpositiveRadius('radial lattice must start at a positive radius')
    if form.kind == SPHERICAL_REDUCED and field.axis_coordinates(1)[0] < 0:
        raise NonpositiveRadius('the r axis of the spherical lattice must be non negative')

    residual = 0.0
    for axis in range(field.n_dim):
        grad = _half_point_gradient(field.values, field.spacing, axis)
        coordinates = _half_point_coordinates(field, axis)
        flux = form.fluxes(grad, coordinates)[axis]
        residual = residual + np.diff(flux, axis=axis) / field.spacing[axis]

    return LatticeResidual(residual, field.spacing)


def direct_residual(form, field, x):
    """
    field equation with the divergence expanded,
    sum_ab d(flux_a)/d(grad_b) d2S/dx^a dx^b, for closed form fields.
    Second derivatives are central differences of the exact gradient.

    :param form: LagrangianForm of kind euclidean_power, pseudo_power or berwald_moore_product
    :param field: FieldSpec
    :param x: point
    :return: residual at x
    """
    if form.kind not in (EUCLIDEAN_POWER, PSEUDO_POWER, BERWALD_MOORE_PRODUCT):
        raise FinslerFieldError('direct expansion is available for the full forms only, got {}'.format(form.kind))

    x = np.asarray(x, dtype=float)
    g = field.gradient(x)
    hessian = numerical_jacobian(field.gradient, x)
    hessian = 0.5 * (hessian + hessian.T)
    n = form.n_dim

    if form.kind == BERWALD_MOORE_PRODUCT:
        jacobian = np.zeros((4, 4))
        for a in range(4):
            for b in range(4):
                if a != b:
                    jacobian[a, b] = np.prod([g[c] for c in range(4) if c != a and c != b])
        return np.sum(jacobian * hessian)

    eta = np.ones(n)
    if form.kind == PSEUDO_POWER:
        eta[1:] = -1.0
    quadratic = np.dot(eta, g ** 2)
    m = n / 2.0 - 1
    if quadratic < 0 and n % 2 == 1:
        raise NegativeBase('quadratic form {} is negative for odd n = {}'.format(quadratic, n))

    if m == 0:
        jacobian = n * np.diag(eta)
    else:
        jacobian = n * (np.diag(eta) * quadratic ** m
                        + 2 * m * quadratic ** (m - 1) * np.outer(eta * g, eta * g))
    return np.sum(jacobian * hessian)


def residual_convergence(form, function, center, half_width, points_list):
    """
    lattice residuals of a function sampled on nested lattices of the same box,
    compared on the interior nodes of the coarsest lattice

    :param form: LagrangianForm
    :param function: vectorized callable f(x0, x1, ...)
    :param center: box center
    :param half_width: box half width (same on every axis)
    :param points_list: points per axis, each refinement halving the spacing (e.g. [9, 17, 33])
    :return: spacings, max errors on the common nodes, observed orders
    """
    coarse = points_list[0]
    spacings = []
    errors = []
    for points in points_list:
        ratio = (points - 1) // (coarse - 1)
        if (coarse - 1) * ratio != points - 1:
            raise GridTooSmall('lattices {} are not nested'.format(points_list))
        field = centered_lattice_field(function, center, half_width, points)
        residual = euler_lagrange_residual(form, field)
        common = residual.values[tuple([slice(ratio - 1, None, ratio)] * field.n_dim)]
        spacings.append(field.spacing[0])
        errors.append(np.max(np.abs(common)))

    return np.array(spacings), np.array(errors), observed_order(errors, ratio=2.0)


def radial_residual(family, n_dim, rho, berwald_moore=None):
    """
    radial field equation at rho:
        d/drho[rho^(n-1) sign(S') |S'|^(n-1)] for the euclidean and interval forms,
        d/ds[s S'] for the Berwald-Moore form

    :param family: closed form FieldSpec exposing radial_derivatives, or a callable S(rho)
    :param n_dim: dimension n
    :param rho: radial variable (> 0)
    :param berwald_moore: use the Berwald-Moore form (default: only for the berwald_moore_log family)
    :return: residual
    """
    if not rho > 0:
        raise NonpositiveRadius('radial variable must be positive, got {}'.format(rho))

    if isinstance(family, FieldSpec):
        if not hasattr(family, 'radial_derivatives'):
            raise FinslerFieldError('field family {} has no radial form'.format(family.family))
        d1, d2 = family.radial_derivatives(rho)
        if berwald_moore is None:
            berwald_moore = family.family == 'berwald_moore_log'
    else:
        h = fd_step(np.array([rho]))
        f0 = family(rho)
        d1 = (family(rho + h) - family(rho - h)) / (2 * h)
        d2 = (family(rho + h) - 2 * f0 + family(rho - h)) / h ** 2
        berwald_moore = bool(berwald_moore)

    if berwald_moore:
        return d1 + rho * d2

    n = n_dim
    return (n - 1) * rho ** (n - 2) * np.abs(d1) ** (n - 2) * (d1 + rho * d2)


def _second_difference(values, spacing, axis):
    n_dim = values.ndim
    second = (values[_along(n_dim, axis, slice(2, None))] - 2 * values[_along(n_dim, axis, slice(1, -1))]
              + values[_along(n_dim, axis, slice(None, -2))]) / spacing[axis] ** 2
    other = 1 - axis
    return second[_along(n_dim, other, slice(1, -1))]


def two_dim_degeneration_check(field, kind):
    """
    for n = 2 the field equation reduces to the Laplace (euclidean) or wave
    (pseudo euclidean, axis 0 is time) equation

    :param field: GridSampled field on a 2-D lattice
    :param kind: 'laplace' or 'wave'
    :return: dict with the 5-point linear residual and the nonlinear lattice residual
    """
    if not isinstance(field, GridSampled) or field.n_dim != 2:
        raise FinslerFieldError('the degeneration check needs a 2-D lattice')
    if min(field.shape) < MIN_LATTICE_POINTS:
        raise GridTooSmall('need at least {} points per axis, got {}'.format(MIN_LATTICE_POINTS, field.shape))

    d00 = _second_difference(field.values, field.spacing, 0)
    d11 = _second_difference(field.values, field.spacing, 1)

    if kind == 'laplace':
        linear = d00 + d11
        form = LagrangianForm(EUCLIDEAN_POWER, n_dim=2)
    elif kind == 'wave':
        linear = d00 - d11
        form = LagrangianForm(PSEUDO_POWER, n_dim=2)
    else:
        raise FinslerFieldError('unknown degeneration {}, use laplace or wave'.format(kind))

    return {'linear': LatticeResidual(linear, field.spacing),
            'nonlinear': euler_lagrange_residual(form, field)}


def eikonal_residual(field, x):
    """
    pseudo euclidean square of the gradient (0 for eikonal fields)
    """
    grad = field.gradient(x)
    return grad[0] ** 2 - np.dot(grad[1:], grad[1:])


class MetricAssembly:
    def __init__(self, fields, signs=None):
        """
        metric g_ij = sum_a sign_a df_a/dx^i df_a/dx^j built from scalar fields

        :param fields: list of N >= 1 FieldSpec
        :param signs: list of +1/-1 (all +1 by default)
        """
        if len(fields) < 1:
            raise FinslerFieldError('metric assembly needs at least one field')
        if signs is None:
            signs = [1] * len(fields)
        if len(signs) != len(fields) or any(s not in (1, -1) for s in signs):
            raise FinslerFieldError('signs must be +1 or -1, one per field')
        self.fields = list(fields)
        self.signs = list(signs)

    @property
    def n_fields(self):
        return len(self.fields)


def assemble_metric(assembly, x):
    """
    :param assembly: MetricAssembly
    :param x: point
    :return: metric matrix g_ij, determinant
    """
    gradients = np.array([f.gradient(x) for f in assembly.fields])
    metric = np.einsum('a,ai,aj->ij', np.array(assembly.signs, dtype=float), gradients, gradients)
    return metric, np.linalg.det(metric)


def assembled_lagrangian(assembly, x):
    """
    invariant volume density sqrt|det g| of the assembled metric
    """
    return np.sqrt(np.abs(assemble_metric(assembly, x)[1]))
