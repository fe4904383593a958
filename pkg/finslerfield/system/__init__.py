import numpy as np
from finslerfield.system.fields import FieldSpec
from finslerfield.errors import (InadmissibleDirection, ZeroDirection, NonpositiveKappa,
                                 SpacelikeGradient, FinslerFieldError)

EUCLIDEAN = 'euclidean'
PSEUDO_EUCLIDEAN = 'pseudo_euclidean'
BERWALD_MOORE = 'berwald_moore'
REGULARIZED_HYPERBOLOID = 'regularized_hyperboloid'

_kinds = (EUCLIDEAN, PSEUDO_EUCLIDEAN, BERWALD_MOORE, REGULARIZED_HYPERBOLOID)

# relative tolerance used to absorb round-off on the light cone
_CONE_TOLERANCE = 1e-14


class SpaceSpec:
    def __init__(self,
                 kind,
                 n_dim=4,
                 q0=None,
                 kappa=1.0):
        """
        :param kind: 'euclidean', 'pseudo_euclidean', 'berwald_moore' or 'regularized_hyperboloid'
        :param n_dim: dimension (fixed to 4 for berwald_moore and regularized_hyperboloid)
        :param q0: regularization parameter (> 0) of the regularized hyperboloid
        :param kappa: constant conformal factor or FieldSpec from which kappa is derived
        """

        if kind not in _kinds:
            raise FinslerFieldError('unknown space kind {}'.format(kind))

        if kind in (BERWALD_MOORE, REGULARIZED_HYPERBOLOID):
            n_dim = 4
        if n_dim < 2:
            raise FinslerFieldError('dimension must be at least 2')

        if kind == REGULARIZED_HYPERBOLOID:
            if q0 is None or q0 <= 0:
                raise FinslerFieldError('regularized hyperboloid requires q0 > 0')
            if isinstance(kappa, FieldSpec):
                raise FinslerFieldError('the regularized hyperboloid takes a constant conformal factor')
        elif q0 is not None:
            raise FinslerFieldError('q0 only applies to the regularized hyperboloid')

        if not isinstance(kappa, FieldSpec) and kappa <= 0:
            raise NonpositiveKappa('conformal factor must be positive, got {}'.format(kappa))

        self._kind = kind
        self._n_dim = n_dim
        self._q0 = None if q0 is None else float(q0)
        self._kappa_source = kappa

    def __repr__(self):
        return 'SpaceSpec(kind={}, n_dim={}, q0={}, kappa={})'.format(self._kind, self._n_dim,
                                                                       self._q0, self._kappa_source)

    @property
    def kind(self):
        return self._kind

    @property
    def n_dim(self):
        return self._n_dim

    @property
    def q0(self):
        return self._q0

    @property
    def kappa_source(self):
        return self._kappa_source

    @property
    def is_pseudo(self):
        return self._kind in (PSEUDO_EUCLIDEAN, REGULARIZED_HYPERBOLOID)

    @property
    def degree(self):
        """
        polynomial degree of the base form (2 for quadratic metrics, 4 for Berwald-Moore)
        """
        return 4 if self._kind == BERWALD_MOORE else 2

    def signature(self):
        signature = -np.ones(self._n_dim)
        signature[0] = 1.0
        return signature if self.is_pseudo else np.ones(self._n_dim)

    def kappa(self, x):
        """
        conformal factor at x, from the constant or from the field source
        """
        if isinstance(self._kappa_source, FieldSpec):
            value = kappa_from_field(self, self._kappa_source, x)
        else:
            value = float(self._kappa_source)
        if not value > 0:
            raise NonpositiveKappa('conformal factor must be positive, got {} at {}'.format(value, list(x)))
        return value


def _check_length(spec, vector):
    vector = np.asarray(vector, dtype=float)
    if vector.shape != (spec.n_dim,):
        raise FinslerFieldError('expected a vector of length {}, got shape {}'.format(spec.n_dim, vector.shape))
    return vector


def _pseudo_square(dx):
    return dx[0] ** 2 - np.dot(dx[1:], dx[1:])


def _cone_interval(dx):
    """
    interval of a direction in the closed forward cone (0 on the light cone)
    """
    if dx[0] < 0:
        raise InadmissibleDirection('direction {} is past directed'.format(list(dx)))
    s2 = _pseudo_square(dx)
    if s2 < 0:
        if s2 >= -_CONE_TOLERANCE * dx[0] ** 2:
            return 0.0
        raise InadmissibleDirection('direction {} is outside the forward cone'.format(list(dx)))
    return np.sqrt(s2)


def base_norm(spec, dx):
    """
    metric function of the flat space (kappa = 1)

    :param spec: SpaceSpec
    :param dx: direction
    :return: length of dx
    """
    dx = _check_length(spec, dx)

    if spec.kind == EUCLIDEAN:
        return np.linalg.norm(dx)

    if spec.kind == PSEUDO_EUCLIDEAN:
        return _cone_interval(dx)

    if spec.kind == REGULARIZED_HYPERBOLOID:
        return _cone_interval(dx) + spec.q0 * dx[0]

    if np.any(dx <= 0):
        raise InadmissibleDirection('Berwald-Moore directions need 4 positive components, got {}'.format(list(dx)))
    return np.prod(dx) ** 0.25


def metric_function(spec, x, dx):
    """
    length element ds = kappa(x) * L0(dx), homogeneous of degree 1 in dx

    :param spec: SpaceSpec
    :param x: point
    :param dx: direction
    :return: ds
    """
    return spec.kappa(x) * base_norm(spec, dx)


def unit_vector(spec, x, dx):
    """
    unit vector co-directional with dx: dx = ds * xi_(1)
    """
    dx = _check_length(spec, dx)
    length = metric_function(spec, x, dx)
    if length == 0:
        raise InadmissibleDirection('null direction {} has no unit vector'.format(list(dx)))
    return dx / length


def euclidean_length_ratio(spec, x, dx):
    """
    ds = |dx|_eu / |xi_(1)|_eu
    """
    return np.linalg.norm(dx) / np.linalg.norm(unit_vector(spec, x, dx))


def generalized_momenta(spec, x, dx):
    """
    p_i = dL/d(dx^i), homogeneous of degree 0 in dx

    :param spec: SpaceSpec
    :param x: point
    :param dx: direction
    :return: covector p
    """
    dx = _check_length(spec, dx)
    if not np.any(dx):
        raise ZeroDirection('momenta are undefined for the zero direction')

    kappa = spec.kappa(x)

    if spec.kind == EUCLIDEAN:
        return kappa * dx / np.linalg.norm(dx)

    if spec.kind == BERWALD_MOORE:
        return 0.25 * kappa * base_norm(spec, dx) / dx

    s = _cone_interval(dx)
    if s == 0:
        raise InadmissibleDirection('momenta diverge on the light cone, direction {}'.format(list(dx)))
    p = kappa * spec.signature() * dx / s
    if spec.kind == REGULARIZED_HYPERBOLOID:
        p[0] += kappa * spec.q0
    return p


def tangential_indicatrix_residual(spec, x, p):
    """
    left minus right side of the tangential equation of the indicatrix.
    Zero iff p lies on the figuratrix.
    """
    p = _check_length(spec, p)
    kappa = spec.kappa(x)

    if spec.kind == EUCLIDEAN:
        return np.dot(p, p) - kappa ** 2

    if spec.kind == PSEUDO_EUCLIDEAN:
        return _pseudo_square(p) - kappa ** 2

    if spec.kind == REGULARIZED_HYPERBOLOID:
        shifted = p.copy()
        shifted[0] -= kappa * spec.q0
        return _pseudo_square(shifted) - kappa ** 2

    return np.prod(p) - kappa ** 4 / 4 ** 4


def indicatrix_residual(spec, x, xi, quadratic=False):
    """
    L(xi; x) - 1, vanishing on the indicatrix

    :param quadratic: if True return the polynomial form instead,
                      (base form of degree d) - 1/kappa^d
    """
    xi = _check_length(spec, xi)
    if not quadratic:
        return metric_function(spec, x, xi) - 1.0

    kappa = spec.kappa(x)
    if spec.kind == EUCLIDEAN:
        return np.dot(xi, xi) - 1 / kappa ** 2
    if spec.kind == PSEUDO_EUCLIDEAN:
        _cone_interval(xi)
        return _pseudo_square(xi) - 1 / kappa ** 2
    if spec.kind == REGULARIZED_HYPERBOLOID:
        _cone_interval(xi)
        return _pseudo_square(xi) - (1 / kappa - spec.q0 * xi[0]) ** 2
    base_norm(spec, xi)
    return np.prod(xi) - 1 / kappa ** 4


def hamilton_jacobi_form(spec, gradient):
    """
    left side of the Hamilton-Jacobi equation for a field gradient
    (sum of squares, pseudo euclidean square or product of the components)
    """
    gradient = _check_length(spec, gradient)
    if spec.kind == EUCLIDEAN:
        return np.dot(gradient, gradient)
    if spec.kind == PSEUDO_EUCLIDEAN:
        return _pseudo_square(gradient)
    if spec.kind == BERWALD_MOORE:
        return np.prod(gradient)
    raise FinslerFieldError('the regularized hyperboloid has no Hamilton-Jacobi reduction')


def hamilton_jacobi_residual(spec, field, x):
    """
    (Hamilton-Jacobi left side) - kappa^2 (kappa^4 / 4^4 for Berwald-Moore),
    with kappa taken from the space kappa source

    :param spec: SpaceSpec
    :param field: FieldSpec
    :param x: point (interior node for lattice fields)
    :return: residual
    """
    lhs = hamilton_jacobi_form(spec, field.gradient(x))
    kappa = spec.kappa(x)
    if spec.kind == BERWALD_MOORE:
        return lhs - kappa ** 4 / 4 ** 4
    return lhs - kappa ** 2


def kappa_from_field(spec, field, x):
    """
    conformal factor defined by a World function S through the Hamilton-Jacobi equation

    :param spec: SpaceSpec (the kind selects the equation)
    :param field: FieldSpec
    :param x: point
    :return: kappa(x) > 0
    """
    lhs = hamilton_jacobi_form(spec, field.gradient(x))

    if spec.kind == EUCLIDEAN:
        if not lhs > 0:
            raise NonpositiveKappa('vanishing gradient at {}'.format(list(x)))
        return np.sqrt(lhs)

    if spec.kind == PSEUDO_EUCLIDEAN:
        if not lhs > 0:
            raise SpacelikeGradient('gradient at {} is not timelike (form = {})'.format(list(x), lhs))
        return np.sqrt(lhs)

    if not lhs > 0:
        raise NonpositiveKappa('gradient product at {} is not positive ({})'.format(list(x), lhs))
    return 4.0 * lhs ** 0.25


def riemannian_volume_element(metric):
    """
    invariant volume density sqrt|det g|
    """
    return np.sqrt(np.abs(np.linalg.det(metric)))
