import numpy as np
from scipy.integrate import solve_ivp, quad
from finslerfield.analysis import Trajectory
from finslerfield.system import EUCLIDEAN, PSEUDO_EUCLIDEAN, BERWALD_MOORE
from finslerfield.errors import ZeroLambda, LeftDomain, DerivativeUnavailable, OutOfRange, FinslerFieldError


class UnitLambda:
    def __call__(self, x):
        return 1.0

    def __repr__(self):
        return 'unit'


class ReferenceLambda:
    """
    scalar function lambda(x) reducing the congruence velocity of a logarithmic
    (or cosmological) World function to xdot = x (dx0/dtau = 1 for the cosmological field)
    """

    def __init__(self, field):
        if field.family not in ('radial_log', 'interval_log', 'berwald_moore_log', 'cosmo_exp'):
            raise FinslerFieldError('no reducing lambda known for the {} family'.format(field.family))
        self.field = field

    def __repr__(self):
        return 'reference({})'.format(self.field.family)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        family = self.field.family
        if family == 'radial_log':
            return np.dot(x, x) / self.field.C
        if family == 'interval_log':
            return (x[0] ** 2 - np.dot(x[1:], x[1:])) / self.field.C
        if family == 'berwald_moore_log':
            return 4 ** 3 * np.prod(x) / self.field.S0 ** 3
        return -1.0 / (self.field.gamma * self.field.value(x))


def reference_lambda(space, field):
    """
    :param space: SpaceSpec (kind must match the field family)
    :param field: FieldSpec of a logarithmic or cosmological family
    :return: callable lambda(x)
    """
    expected = {'radial_log': EUCLIDEAN,
                'interval_log': PSEUDO_EUCLIDEAN,
                'berwald_moore_log': BERWALD_MOORE,
                'cosmo_exp': PSEUDO_EUCLIDEAN}
    if expected.get(field.family) != space.kind:
        raise FinslerFieldError('the {} family does not live in a {} space'.format(field.family, space.kind))
    return ReferenceLambda(field)


class FlowSpec:
    def __init__(self,
                 space,
                 field,
                 lambda_choice='unit'):
        """
        normal congruence of geodesics defined by a World function

        :param space: SpaceSpec (euclidean, pseudo_euclidean or berwald_moore)
        :param field: FieldSpec
        :param lambda_choice: 'unit', 'reference' or a callable lambda(x)
        """
        if space.kind not in (EUCLIDEAN, PSEUDO_EUCLIDEAN, BERWALD_MOORE):
            raise FinslerFieldError('congruences are defined for the conformal families, not {}'.format(space.kind))

        if lambda_choice == 'unit':
            lambda_function = UnitLambda()
        elif lambda_choice == 'reference':
            lambda_function = reference_lambda(space, field)
        elif callable(lambda_choice):
            lambda_function = lambda_choice
        else:
            raise FinslerFieldError('lambda choice must be unit, reference or a callable')

        self.space = space
        self.field = field
        self.lambda_function = lambda_function

    def __repr__(self):
        return 'FlowSpec(space={}, field={}, lambda={})'.format(self.space.kind, self.field, self.lambda_function)


def congruence_velocity(flow, x):
    """
    tangent of the congruence: lambda dS/dx^i with the index raised by the flat
    metric (euclidean, pseudo euclidean), lambda prod_j dS/dxi^j / (dS/dxi^i) (Berwald-Moore)

    :param flow: FlowSpec
    :param x: point
    :return: velocity dx/dtau
    """
    x = np.asarray(x, dtype=float)
    try:
        grad = flow.field.gradient(x)
    except OutOfRange:
        raise
    except FinslerFieldError as error:
        raise DerivativeUnavailable('field gradient unavailable at {}: {}'.format(list(x), error))

    lam = flow.lambda_function(x)
    if lam == 0:
        raise ZeroLambda('lambda vanishes at {}'.format(list(x)))

    kind = flow.space.kind
    if kind == EUCLIDEAN:
        return lam * grad
    if kind == PSEUDO_EUCLIDEAN:
        return lam * flow.space.signature() * grad
    return lam * np.prod(grad) / grad


def integrate_flow(flow, x_start, tau_span=(0.0, 1.0), tol=1e-10, samples=101):
    """
    integral curve of the congruence through x_start. For pseudo euclidean spaces the
    direction of tau is chosen so that dx0/dtau > 0 at the start.

    :param flow: FlowSpec
    :param x_start: starting point
    :param tau_span: (tau_start, tau_end)
    :param tol: relative tolerance of the DOP853 integrator
    :param samples: number of uniformly spaced output samples
    :return: Trajectory
    """
    x_start = np.asarray(x_start, dtype=float)
    try:
        velocity = congruence_velocity(flow, x_start)
    except FinslerFieldError as error:
        raise LeftDomain('flow undefined at the start point: {}'.format(error))

    orientation = 1.0
    if flow.space.is_pseudo and velocity[0] < 0:
        orientation = -1.0

    def rhs(tau, x):
        try:
            return orientation * congruence_velocity(flow, x)
        except FinslerFieldError as error:
            raise LeftDomain('trajectory left the domain at tau = {}: {}'.format(tau, error))

    t_eval = np.linspace(tau_span[0], tau_span[1], samples)
    solution = solve_ivp(rhs, tau_span, x_start, method='DOP853', t_eval=t_eval,
                         rtol=tol, atol=tol * 1e-2)
    if solution.status == -1:
        raise LeftDomain('integration failed: {}'.format(solution.message))

    metadata = {'space': flow.space.kind,
                'family': flow.field.family,
                'lambda': repr(flow.lambda_function),
                'orientation': orientation,
                'tol': tol}
    return Trajectory(solution.t, solution.y.T, metadata=metadata)


def _flow_task(flow, x_start, tau_span, tol, samples):
    return integrate_flow(flow, x_start, tau_span=tau_span, tol=tol, samples=samples)


def integrate_flows(flow, starts, tau_span=(0.0, 1.0), tol=1e-10, samples=101, processors=1):
    """
    independent integral curves from a list of starting points, in input order
    """
    from finslerfield import calculate_sweep
    tasks = [(flow, x_start, tau_span, tol, samples) for x_start in starts]
    return calculate_sweep(_flow_task, tasks, processors=processors)


def cosmo_trajectory(sol, x_start, x0_span, tol=1e-10, samples=101):
    """
    motion of a sample body along the cosmological congruence,
    dx^mu/dx0 = phi(gamma r) x^mu / r, with x0 as evolution parameter

    :param sol: CosmoSolution
    :param x_start: spatial starting point (3 components)
    :param x0_span: (x0_start, x0_end)
    :return: Trajectory with 4-vector samples (x0, x^1, x^2, x^3)
    """
    x_start = np.asarray(x_start, dtype=float)
    gamma = sol.gamma

    def rhs(x0, x):
        r = np.linalg.norm(x)
        try:
            # phi(gamma r) / r written with phi / xi to stay finite at r = 0
            return gamma * sol.phi_over_xi(gamma * r) * x
        except FinslerFieldError as error:
            raise LeftDomain('body left the resolved range at x0 = {}: {}'.format(x0, error))

    rhs(x0_span[0], x_start)

    t_eval = np.linspace(x0_span[0], x0_span[1], samples)
    solution = solve_ivp(rhs, x0_span, x_start, method='DOP853', t_eval=t_eval,
                         rtol=tol, atol=tol * 1e-2)
    if solution.status == -1:
        raise LeftDomain('integration failed: {}'.format(solution.message))

    points = np.column_stack([solution.t, solution.y.T])
    metadata = {'space': PSEUDO_EUCLIDEAN,
                'family': 'cosmo_exp',
                'lambda': 'dx0/dtau = 1',
                'orientation': 1.0,
                'tol': tol}
    return Trajectory(solution.t, points, metadata=metadata)


def radial_arrival_time(sol, r_start, r_end):
    """
    x0 elapsed while a body moves from r_start to r_end, int dr / phi(gamma r)

    :param sol: CosmoSolution
    :param r_start: starting radius (> 0)
    :param r_end: final radius
    :return: elapsed x0 = c t
    """
    if not r_start > 0:
        raise OutOfRange('starting radius must be positive')
    value, _ = quad(lambda r: 1.0 / sol.phi(sol.gamma * r), r_start, r_end,
                    epsabs=1e-13, epsrel=1e-12, limit=200)
    return value
