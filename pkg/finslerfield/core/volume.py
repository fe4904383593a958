import numpy as np
import warnings
from scipy.integrate import quad
from finslerfield.system import EUCLIDEAN, PSEUDO_EUCLIDEAN, BERWALD_MOORE, REGULARIZED_HYPERBOLOID
from finslerfield.utils import unit_ball_volume
from finslerfield.utils.units import QUADRATURE_RTOL
from finslerfield.errors import NotPositiveDefinite, NonpositiveQ0, InfiniteVolume

CLOSED_FORM = 'closed_form'
SCALING_LAW = 'scaling_law'
QUADRATURE = 'quadrature'
UNBOUNDED = 'unbounded'


class VolumeResult:
    def __init__(self,
                 value,
                 method,
                 error_estimate=0.0):
        self._value = float(value)
        self._method = method
        self._error_estimate = float(error_estimate)

    def __repr__(self):
        return 'VolumeResult(value={}, method={}, error_estimate={})'.format(self._value, self._method,
                                                                              self._error_estimate)

    @property
    def value(self):
        return self._value

    @property
    def method(self):
        return self._method

    @property
    def error_estimate(self):
        return self._error_estimate

    @property
    def is_finite(self):
        return np.isfinite(self._value)


def ellipsoid_volume(metric):
    """
    volume of the indicatrix g_ij xi^i xi^j = 1 measured as if the tangent space were euclidean

    :param metric: symmetric positive definite n x n matrix
    :return: VolumeResult with value omega_n / sqrt(det g)
    """
    metric = np.array(metric, dtype=float)
    if metric.ndim != 2 or metric.shape[0] != metric.shape[1] or not np.allclose(metric, metric.T):
        raise NotPositiveDefinite('metric must be a symmetric square matrix')
    try:
        cholesky = np.linalg.cholesky(metric)
    except np.linalg.LinAlgError:
        raise NotPositiveDefinite('metric is not positive definite')

    sqrt_det = np.prod(np.diag(cholesky))
    return VolumeResult(unit_ball_volume(len(metric)) / sqrt_det, CLOSED_FORM)


def hyperboloid_slice_volume(t, q0):
    """
    3-volume of the slice xi^0 = t of the body sqrt((xi^0)^2 - |xi|^2) + q0 xi^0 <= 1
    inside the forward cone: a ball of radius t, or a spherical annulus once the
    hyperboloid cuts the slice.
    """
    if t <= 0 or q0 * t >= 1:
        return 0.0
    inner2 = t ** 2 - (1 - q0 * t) ** 2
    inner = np.sqrt(inner2) if inner2 > 0 else 0.0
    return 4.0 * np.pi / 3.0 * (t ** 3 - inner ** 3)


def regularized_hyperboloid_volume(q0, rtol=QUADRATURE_RTOL):
    """
    4-volume of the indicatrix body of L(dx) = sqrt(dx^2) + q0 dx^0 restricted to dx^0 >= 0

    :param q0: regularization parameter (> 0)
    :param rtol: relative tolerance of the adaptive quadrature
    :return: VolumeResult (method quadrature)
    """
    if not q0 > 0:
        raise NonpositiveQ0('q0 must be positive, got {}'.format(q0))

    breakpoint = 1.0 / (1.0 + q0)
    panels = [(0.0, breakpoint), (breakpoint, 1.0 / q0)]

    value = 0.0
    error = 0.0
    for a, b in panels:
        panel_value, panel_error = quad(hyperboloid_slice_volume, a, b, args=(q0,),
                                        epsabs=0.0, epsrel=rtol, limit=200)
        value += panel_value
        error += panel_error

    if error > 10 * rtol * value:
        warnings.warn('indicatrix volume quadrature error {} above tolerance (q0={})'.format(error, q0))

    return VolumeResult(value, QUADRATURE, error)


def hyperboloid_body_contains(points, q0):
    """
    membership test of points (N x 4 array) in the regularized indicatrix body
    """
    t = points[:, 0]
    rho2 = np.sum(points[:, 1:] ** 2, axis=1)
    s2 = t ** 2 - rho2
    with np.errstate(invalid='ignore'):
        return (t >= 0) & (s2 >= 0) & (np.sqrt(np.maximum(s2, 0.0)) + q0 * t <= 1.0)


def monte_carlo_volume(q0, samples=10 ** 6, seed=0, chunk=10 ** 6):
    """
    rejection sampling estimate of the regularized indicatrix volume inside the box
    [0, 1/q0] x [-1/q0, 1/q0]^3

    :return: (volume, standard error)
    """
    if not q0 > 0:
        raise NonpositiveQ0('q0 must be positive, got {}'.format(q0))

    rng = np.random.default_rng(seed)
    edge = 1.0 / q0
    box_volume = edge * (2 * edge) ** 3

    hits = 0
    remaining = int(samples)
    while remaining > 0:
        n = min(chunk, remaining)
        points = np.empty((n, 4))
        points[:, 0] = rng.uniform(0.0, edge, n)
        points[:, 1:] = rng.uniform(-edge, edge, (n, 3))
        hits += int(np.count_nonzero(hyperboloid_body_contains(points, q0)))
        remaining -= n

    fraction = hits / float(samples)
    std_error = box_volume * np.sqrt(fraction * (1 - fraction) / samples)
    return box_volume * fraction, std_error


def volume_normalization(spec):
    """
    indicatrix volume assigned to kappa = 1 (constants fixed so that the
    lagrangian of the conformal families equals kappa^n)
    """
    if spec.kind == EUCLIDEAN:
        return unit_ball_volume(spec.n_dim)
    return 1.0


def conformal_indicatrix_volume(spec, x, assigned=True):
    """
    indicatrix volume at x: V_base / kappa^n(x)

    :param spec: SpaceSpec
    :param x: point
    :param assigned: if False the unbounded pseudo euclidean and Berwald-Moore
                     indicatrices report an infinite volume
    :return: VolumeResult
    """
    kappa = spec.kappa(x)
    scale = kappa ** spec.n_dim

    if spec.kind == EUCLIDEAN:
        return VolumeResult(unit_ball_volume(spec.n_dim) / scale, CLOSED_FORM)

    if spec.kind in (PSEUDO_EUCLIDEAN, BERWALD_MOORE):
        if not assigned:
            return VolumeResult(np.inf, UNBOUNDED)
        return VolumeResult(1.0 / scale, SCALING_LAW)

    base = regularized_hyperboloid_volume(spec.q0)
    return VolumeResult(base.value / scale, QUADRATURE, base.error_estimate / scale)


def lagrangian_from_volume(spec, x, assigned=True):
    """
    lagrangian density = const / V_ind(x), normalized to kappa^n for the conformal families

    :param spec: SpaceSpec
    :param x: point
    :param assigned: see conformal_indicatrix_volume
    :return: lagrangian density
    """
    volume = conformal_indicatrix_volume(spec, x, assigned=assigned)
    if not volume.is_finite:
        raise InfiniteVolume('the {} indicatrix is unbounded; no lagrangian without regularization'.format(spec.kind))
    return volume_normalization(spec) / volume.value


__all__ = ['VolumeResult', 'ellipsoid_volume', 'hyperboloid_slice_volume', 'regularized_hyperboloid_volume',
           'monte_carlo_volume', 'conformal_indicatrix_volume', 'lagrangian_from_volume', 'volume_normalization',
           'REGULARIZED_HYPERBOLOID']
