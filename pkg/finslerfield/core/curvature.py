import numpy as np
from finslerfield.utils import minkowski_metric, numerical_gradient, numerical_hessian, fd_step
from finslerfield.utils.units import COUPLING_FACTOR
from finslerfield.errors import DerivativeUnavailable, SingularMetric, NonpositiveKappa, FinslerFieldError


class ConformalExponentField:
    """
    a(x) = ln(kappa^2(x)) of the conformally flat metric g = kappa^2 eta, with its
    first and second derivatives

    :param value: callable a(x)
    :param first: callable returning da/dx^i
    :param second: callable returning d2a/dx^i dx^j
    :param n_dim: dimension
    :param family: label of the provider
    """

    def __init__(self, value, first, second, n_dim=4, family='custom'):
        self._value = value
        self._first = first
        self._second = second
        self._n_dim = n_dim
        self.family = family

    def __repr__(self):
        return 'ConformalExponentField(family={}, n_dim={})'.format(self.family, self._n_dim)

    @property
    def n_dim(self):
        return self._n_dim

    def _checked(self, function, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self._n_dim,):
            raise FinslerFieldError('expected a point of length {}'.format(self._n_dim))
        with np.errstate(all='ignore'):
            result = np.asarray(function(x), dtype=float)
        if not np.all(np.isfinite(result)):
            raise DerivativeUnavailable('{} exponent is not differentiable at {}'.format(self.family, list(x)))
        return result

    def a(self, x):
        return float(self._checked(self._value, x))

    def da(self, x):
        return self._checked(self._first, x)

    def dda(self, x):
        return self._checked(self._second, x)

    def kappa(self, x):
        return np.exp(0.5 * self.a(x))

    @classmethod
    def exponential(cls, beta, n_dim=4):
        """
        kappa = exp(beta x0), a = 2 beta x0
        """
        da = np.zeros(n_dim)
        da[0] = 2 * beta
        return cls(lambda x: 2 * beta * x[0],
                   lambda x: da.copy(),
                   lambda x: np.zeros((n_dim, n_dim)),
                   n_dim=n_dim, family='exponential')

    @classmethod
    def interval_log(cls, C=1.0, n_dim=4):
        """
        kappa = |C| / s with s the interval from the origin (forward cone only)
        """
        eta = np.diag(minkowski_metric(n_dim))

        def s2(x):
            value = np.dot(eta, x ** 2)
            if value <= 0 or x[0] <= 0:
                return np.nan
            return value

        def first(x):
            return -2 * eta * x / s2(x)

        def second(x):
            s_2 = s2(x)
            return -2 * np.diag(eta) / s_2 + 4 * np.outer(eta * x, eta * x) / s_2 ** 2

        return cls(lambda x: np.log(C ** 2 / s2(x)), first, second, n_dim=n_dim, family='interval_log')

    @classmethod
    def spatial_radial_log(cls, C=1.0, n_dim=4):
        """
        kappa = |C| / r with r the radius of the spatial coordinates
        """

        def r2(x):
            value = np.dot(x[1:], x[1:])
            return value if value > 0 else np.nan

        def first(x):
            grad = np.zeros(n_dim)
            grad[1:] = -2 * x[1:] / r2(x)
            return grad

        def second(x):
            spatial = np.zeros(n_dim)
            spatial[1:] = x[1:]
            projector = np.eye(n_dim)
            projector[0, 0] = 0.0
            r_2 = r2(x)
            return -2 * projector / r_2 + 4 * np.outer(spatial, spatial) / r_2 ** 2

        return cls(lambda x: np.log(C ** 2 / r2(x)), first, second, n_dim=n_dim, family='spatial_radial_log')

    @classmethod
    def from_kappa(cls, kappa, n_dim=4, step=None):
        """
        finite difference provider for any positive kappa(x)
        """

        def value(x):
            k = kappa(x)
            if not k > 0:
                raise NonpositiveKappa('conformal factor must be positive, got {} at {}'.format(k, list(x)))
            return 2 * np.log(k)

        return cls(value,
                   lambda x: numerical_gradient(value, x, step=step),
                   lambda x: numerical_hessian(value, x, step=step),
                   n_dim=n_dim, family='finite_difference')

    @classmethod
    def cosmology(cls, sol, step=None):
        """
        kappa = gamma sqrt(1 - phi^2) S of the cosmological World function
        """
        from finslerfield.core.cosmology import psi_and_field
        return cls.from_kappa(lambda x: psi_and_field(sol, x[0], np.linalg.norm(x[1:]))[2], n_dim=4, step=step)


def conformal_metric(field):
    """
    :return: callable g(x) = exp(a(x)) eta
    """
    eta = minkowski_metric(field.n_dim)
    return lambda x: np.exp(field.a(x)) * eta


def christoffel(field, x):
    """
    Gamma^i_kl = 1/2 (delta^i_k a_l + delta^i_l a_k - eta_kl eta^is a_s), indices [i, k, l]
    """
    da = field.da(x)
    eta = minkowski_metric(field.n_dim)
    delta = np.eye(field.n_dim)
    raised = eta @ da
    return 0.5 * (np.einsum('ik,l->ikl', delta, da) + np.einsum('il,k->ikl', delta, da)
                  - np.einsum('kl,i->ikl', eta, raised))


def _christoffel_derivative(field, x):
    """
    d_l Gamma^i_km from the second derivatives of a, indices [l, i, k, m]
    """
    dda = field.dda(x)
    eta = minkowski_metric(field.n_dim)
    delta = np.eye(field.n_dim)
    raised = dda @ eta  # d_l eta^is a_s, indices [l, i]
    return 0.5 * (np.einsum('ik,lm->likm', delta, dda) + np.einsum('im,lk->likm', delta, dda)
                  - np.einsum('km,li->likm', eta, raised))


def _riemann_from_connection(gamma, dgamma):
    """
    R^i_klm = d_l Gamma^i_km - d_m Gamma^i_kl + Gamma^i_ln Gamma^n_km - Gamma^i_mn Gamma^n_kl

    :param gamma: Gamma^i_kl, indices [i, k, l]
    :param dgamma: d_l Gamma^i_km, indices [l, i, k, m]
    :return: indices [i, k, l, m]
    """
    derivative = np.einsum('likm->iklm', dgamma)
    quadratic = np.einsum('iln,nkm->iklm', gamma, gamma)
    return derivative - np.swapaxes(derivative, 2, 3) + quadratic - np.swapaxes(quadratic, 2, 3)


def riemann(field, x):
    """
    R^i_klm of g = exp(a) eta evaluated term by term from a_k and a_kl, indices [i, k, l, m]:

        1/2 (a_lk d^i_m - a_km d^i_l - A^i_l eta_km + A^i_m eta_kl)
      + 1/4 (a_m a_k d^i_l - a_l a_k d^i_m - Q d^i_l eta_km + a_l eta_km A^i
             + Q d^i_m eta_kl - a_m eta_kl A^i)

    with A^i = eta^is a_s, A^i_l = eta^is a_ls and Q = eta^ns a_n a_s
    """
    da = field.da(x)
    dda = field.dda(x)
    eta = minkowski_metric(field.n_dim)
    delta = np.eye(field.n_dim)
    raised = eta @ da
    raised_second = eta @ dda  # [i, l]
    square = da @ raised

    second = (np.einsum('lk,im->iklm', dda, delta) - np.einsum('km,il->iklm', dda, delta)
              - np.einsum('il,km->iklm', raised_second, eta) + np.einsum('im,kl->iklm', raised_second, eta))
    first = (np.einsum('m,k,il->iklm', da, da, delta) - np.einsum('l,k,im->iklm', da, da, delta)
             - square * np.einsum('il,km->iklm', delta, eta) + np.einsum('l,km,i->iklm', da, eta, raised)
             + square * np.einsum('im,kl->iklm', delta, eta) - np.einsum('m,kl,i->iklm', da, eta, raised))
    return 0.5 * second + 0.25 * first


def riemann_from_connection(field, x):
    """
    R^i_klm by the generic expansion in the Christoffel symbols and their derivatives
    """
    return _riemann_from_connection(christoffel(field, x), _christoffel_derivative(field, x))


def ricci(field, x):
    """
    R_km = 1/2 (-(n-2) d_k d_m a - (box a) eta_km) + (n-2)/4 (a_k a_m - (a.a) eta_km)

    For n = 4 this is 1/2 (-2 a_km - (box a) eta_km + a_k a_m - (a.a) eta_km).
    """
    n = field.n_dim
    da = field.da(x)
    dda = field.dda(x)
    eta = minkowski_metric(n)
    box = np.einsum('ij,ij', eta, dda)
    square = da @ eta @ da
    return 0.5 * (-(n - 2) * dda - box * eta) + 0.25 * (n - 2) * (np.outer(da, da) - square * eta)


def ricci_from_riemann(field, x):
    """
    R_km = R^l_klm, the contraction of the term by term Riemann tensor
    """
    return np.einsum('lklm->km', riemann(field, x))


def closed_form_discrepancy(field, x):
    """
    largest deviation of the term by term Riemann and Ricci tensors from the generic
    connection expansion and from the contraction

    :return: dict with riemann and ricci deviations
    """
    return {'riemann': float(np.max(np.abs(riemann(field, x) - riemann_from_connection(field, x)))),
            'ricci': float(np.max(np.abs(ricci(field, x) - ricci_from_riemann(field, x))))}


def scalar_curvature(field, x):
    """
    R = kappa^-2 eta^km R_km
    """
    eta = minkowski_metric(field.n_dim)
    return np.exp(-field.a(x)) * np.einsum('km,km', eta, ricci(field, x))


def scalar_curvature_discrepancy(field, x):
    """
    compares the trace of the Ricci tensor with the printed closed expression
    -3 kappa^-2 (2 box a + a.a) of the four dimensional scalar curvature

    :return: dict with trace, printed and their ratio
    """
    eta = minkowski_metric(field.n_dim)
    da = field.da(x)
    printed = -3 * np.exp(-field.a(x)) * (2 * np.einsum('ij,ij', eta, field.dda(x)) + da @ eta @ da)
    trace = scalar_curvature(field, x)
    ratio = printed / trace if trace != 0 else np.nan
    return {'trace': trace, 'printed': printed, 'ratio': ratio}


def stress_energy(field, x, factor=COUPLING_FACTOR):
    """
    T_km = factor (R_km - 1/2 kappa^2 eta_km R) and its trace T = kappa^-2 eta^km T_km

    :return: T_km, T
    """
    eta = minkowski_metric(field.n_dim)
    kappa2 = np.exp(field.a(x))
    ricci_tensor = ricci(field, x)
    scalar = np.einsum('km,km', eta, ricci_tensor) / kappa2
    tensor = factor * (ricci_tensor - 0.5 * kappa2 * eta * scalar)
    return tensor, np.einsum('km,km', eta, tensor) / kappa2


def full_stress_energy_from_gradient(gradient):
    """
    T^k_m = 4 eta^ks S_s S_m Q - delta^k_m Q^2 with Q = eta^rs S_r S_s (traceless in four dimensions)
    """
    gradient = np.asarray(gradient, dtype=float)
    if gradient.shape != (4,):
        raise FinslerFieldError('the full energy-momentum tensor is defined in four dimensions')
    eta = minkowski_metric(4)
    raised = eta @ gradient
    quadratic = gradient @ raised
    return 4 * np.outer(raised, gradient) * quadratic - np.eye(4) * quadratic ** 2


def full_stress_energy(S_field, x):
    try:
        gradient = S_field.gradient(x)
    except FinslerFieldError as error:
        raise DerivativeUnavailable('gradient unavailable at {}: {}'.format(list(x), error))
    return full_stress_energy_from_gradient(gradient)


class TensorBundle:
    def __init__(self,
                 point,
                 christoffel,
                 riemann,
                 ricci,
                 scalar,
                 stress,
                 stress_trace,
                 full_stress=None,
                 factor=COUPLING_FACTOR):
        self.point = np.array(point, dtype=float)
        self.christoffel = christoffel
        self.riemann = riemann
        self.ricci = ricci
        self.scalar = scalar
        self.stress = stress
        self.stress_trace = stress_trace
        self.full_stress = full_stress
        self.factor = factor

    def __repr__(self):
        return 'TensorBundle(point={}, scalar={}, stress_trace={})'.format(list(self.point), self.scalar,
                                                                           self.stress_trace)


def tensor_bundle(field, x, factor=COUPLING_FACTOR, S_field=None):
    """
    the whole tensor chain of a conformal exponent field at x

    :param field: ConformalExponentField
    :param x: point
    :param factor: coupling factor c^4 / (8 pi k)
    :param S_field: optional World function for the full energy-momentum tensor
    :return: TensorBundle
    """
    stress, trace = stress_energy(field, x, factor=factor)
    return TensorBundle(x,
                        christoffel(field, x),
                        riemann(field, x),
                        ricci(field, x),
                        scalar_curvature(field, x),
                        stress,
                        trace,
                        full_stress=None if S_field is None else full_stress_energy(S_field, x),
                        factor=factor)


def _metric_derivative(metric, x, h):
    """
    d_l g_sk by central differences, indices [l, s, k]
    """
    n_dim = len(x)
    derivative = []
    for l in range(n_dim):
        e = np.zeros(n_dim)
        e[l] = h
        derivative.append((metric(x + e) - metric(x - e)) / (2 * h))
    return np.array(derivative)


def _oracle_christoffel(metric, x, h):
    g = metric(x)
    if abs(np.linalg.det(g)) < 1e-14 * max(1.0, np.max(np.abs(g))) ** len(x):
        raise SingularMetric('metric is singular at {}'.format(list(x)))
    inverse = np.linalg.inv(g)
    dg = _metric_derivative(metric, x, h)
    # [s, k, l] = d_l g_sk + d_k g_sl - d_s g_kl
    lowered = np.einsum('lsk->skl', dg) + np.einsum('ksl->skl', dg) - dg
    return 0.5 * np.einsum('is,skl->ikl', inverse, lowered)


def generic_oracle_curvature(metric, x, step=None, factor=COUPLING_FACTOR):
    """
    curvature of an arbitrary metric by nested central differences, independent
    of the conformal closed forms

    :param metric: callable g(x) returning a symmetric invertible matrix
    :param x: point
    :param step: difference step h (scaled default if None)
    :param factor: coupling factor of the energy-momentum tensor
    :return: TensorBundle (full_stress is None)
    """
    x = np.asarray(x, dtype=float)
    n_dim = len(x)
    h = fd_step(x) if step is None else step

    gamma = _oracle_christoffel(metric, x, h)
    dgamma = []
    for l in range(n_dim):
        e = np.zeros(n_dim)
        e[l] = h
        dgamma.append((_oracle_christoffel(metric, x + e, h) - _oracle_christoffel(metric, x - e, h)) / (2 * h))
    dgamma = np.array(dgamma)  # [l, i, k, m]

    riemann_tensor = _riemann_from_connection(gamma, dgamma)
    ricci_tensor = np.einsum('lklm->km', riemann_tensor)
    g = metric(x)
    inverse = np.linalg.inv(g)
    scalar = np.einsum('km,km', inverse, ricci_tensor)
    stress = factor * (ricci_tensor - 0.5 * g * scalar)
    trace = np.einsum('km,km', inverse, stress)

    return TensorBundle(x, gamma, riemann_tensor, ricci_tensor, scalar, stress, trace, factor=factor)
