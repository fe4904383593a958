import argparse
import csv
import io
import json
import logging
import sys
import warnings
import numpy as np
from finslerfield import __version__, calculate_sweep
from finslerfield.errors import FinslerFieldError
from finslerfield.system import SpaceSpec, EUCLIDEAN, PSEUDO_EUCLIDEAN, BERWALD_MOORE
from finslerfield.core.volume import (ellipsoid_volume, conformal_indicatrix_volume, lagrangian_from_volume,
                                      regularized_hyperboloid_volume, QUADRATURE)
from finslerfield.core.field_equations import residual_convergence
from finslerfield.core.cosmology import integrate_phi, phi_series, hubble, hubble_closed_form
from finslerfield.core.curvature import (ConformalExponentField, tensor_bundle, conformal_metric,
                                         generic_oracle_curvature, scalar_curvature_discrepancy)
from finslerfield.analysis import straightness_deviation
from finslerfield.analysis.geodesics import integrate_flow, cosmo_trajectory
from finslerfield.verify import run_verification, RESIDUAL_CASES, CURVATURE_CASES, flow_cases

logger = logging.getLogger(__name__)


def _number(value):
    """
    shortest round trip text of a number
    """
    if isinstance(value, (bool, str)):
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    return repr(float(value))


def _positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError('{!r} is not a number'.format(text))
    if not value > 0 or not np.isfinite(value):
        raise argparse.ArgumentTypeError('{!r} must be a positive finite number'.format(text))
    return value


def _tolerance(text):
    value = _positive_float(text)
    if not 1e-13 <= value <= 1e-3:
        raise argparse.ArgumentTypeError('tolerance {!r} outside [1e-13, 1e-3]'.format(text))
    return value


def _json_rows(header, rows, provenance):
    """
    one record per row, each tagged with where its numbers come from

    :param provenance: label shared by all rows, or one label per row
    """
    if isinstance(provenance, str):
        provenance = [provenance] * len(rows)
    records = []
    for row, source in zip(rows, provenance):
        record = dict(zip(header, row))
        record.setdefault('provenance', source)
        records.append(record)
    return records


def _emit(args, command, parameters, header, rows, provenance, extra=None):
    if args.format == 'json':
        document = {'tool': 'finslerfield',
                    'version': __version__,
                    'command': command,
                    'parameters': parameters,
                    'rows': _json_rows(header, rows, provenance)}
        if extra is not None:
            document.update(extra)
        text = json.dumps(document, indent=1, sort_keys=True) + '\n'
    else:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([_number(v) for v in row])
        text = buffer.getvalue()

    if args.output is None:
        sys.stdout.write(text)
    else:
        with open(args.output, 'w', encoding='utf-8', newline='') as f:
            f.write(text)


def _regularized_row(q0):
    volume = regularized_hyperboloid_volume(q0)
    return [q0, volume.value, volume.error_estimate, 1.0 / volume.value]


def command_volume(args):
    if args.kind == 'ellipsoid':
        header = ['n', 'kappa', 'value', 'method', 'error_estimate']
        rows = []
        for n_dim in args.n:
            for kappa in args.kappa:
                volume = ellipsoid_volume(kappa ** 2 * np.eye(n_dim))
                rows.append([n_dim, kappa, volume.value, volume.method, volume.error_estimate])
        provenance = [row[3] for row in rows]

    elif args.kind == 'conformal':
        header = ['space', 'n', 'kappa', 'value', 'method', 'lagrangian']
        rows = []
        for n_dim in args.n:
            for kappa in args.kappa:
                spec = SpaceSpec(args.space, n_dim=n_dim, kappa=kappa)
                x = np.ones(spec.n_dim)
                volume = conformal_indicatrix_volume(spec, x)
                lagrangian = lagrangian_from_volume(spec, x) if volume.is_finite else ''
                rows.append([spec.kind, spec.n_dim, kappa, volume.value, volume.method, lagrangian])
        provenance = [row[4] for row in rows]

    else:
        header = ['q0', 'value', 'error_estimate', 'lagrangian']
        rows = calculate_sweep(_regularized_row, [(q0,) for q0 in args.q0], processors=args.processors)
        provenance = QUADRATURE

    _emit(args, 'volume', {'kind': args.kind, 'n': args.n, 'kappa': args.kappa, 'q0': args.q0,
                           'space': args.space}, header, rows, provenance)
    return 0


def command_cosmo(args):
    if args.cosmo_command == 'integrate':
        sol = integrate_phi(args.xi_max, rel_tol=args.rtol, method=args.method)
        logger.info('resolved range [0, %r], singular xi %r, residual norm %r', sol.xi_end, sol.singular_xi,
                    sol.residual_norm)
        header = ['xi', 'phi', 'dphi', 'psi', 'H_over_H0']
        rows = [[xi, sol.phi(xi), sol.dphi(xi), sol.psi(xi), sol.phi_over_xi(xi)]
                for xi in np.linspace(0.0, sol.xi_end, args.points)]
        extra = {'diagnostics': {'xi_end': sol.xi_end,
                                 'singular_xi': sol.singular_xi,
                                 'residual_norm': sol.residual_norm,
                                 'method': sol.method}}
        _emit(args, 'cosmo integrate', {'xi_max': args.xi_max, 'rtol': args.rtol, 'points': args.points,
                                        'method': args.method}, header, rows,
              ['series' if xi < sol.xi_switch else 'integration' for xi, *_ in rows], extra=extra)
        return 0

    gamma = args.H0 / args.c
    if args.r is not None:
        radii = list(args.r)
    else:
        radii = [xi / gamma for xi in args.xi]
    xi_max = max(max(gamma * r for r in radii), 1e-3)
    sol = integrate_phi(xi_max, rel_tol=args.rtol, gamma=gamma, c=args.c)

    header = ['r', 'xi', 'H', 'H_over_H0', 'closed_form_over_H0']
    rows = [[r, gamma * r, hubble(sol, r), hubble(sol, r) / sol.H0, hubble_closed_form(sol.H0, r, c=args.c) / sol.H0]
            for r in radii]
    _emit(args, 'cosmo hubble', {'H0': args.H0, 'c': args.c, 'rtol': args.rtol}, header, rows,
          'integration')
    return 0


def command_series(args):
    series = phi_series(args.order)
    header = ['k', 'coefficient', 'value']
    rows = [[k + 1, str(a), float(a)] for k, a in enumerate(series.coefficients)]
    _emit(args, 'series', {'order': args.order}, header, rows, 'exact series')
    return 0


def command_residual(args):
    form, function, center, half_width = RESIDUAL_CASES[args.family]
    points = args.points
    if points is None:
        points = [9, 17] if form.lattice_dim == 4 else [9, 17, 33]
    spacings, errors, orders = residual_convergence(form, function, center, half_width, points)

    header = ['points', 'h', 'max_residual', 'observed_order']
    rows = [[p, h, e, orders[i - 1] if i > 0 else ''] for i, (p, h, e) in enumerate(zip(points, spacings, errors))]
    _emit(args, 'residual', {'family': args.family, 'points': points, 'form': form.kind}, header, rows,
          'nested lattices')
    return 0


def _curvature_field(args):
    if args.family == 'cosmology':
        with warnings.catch_warnings():
            warnings.simplefilter('ignore')
            sol = integrate_phi(0.5, rel_tol=1e-11)
        return ConformalExponentField.cosmology(sol), [0.1, 0.1, 0.05, 0.05]
    return CURVATURE_CASES[args.family]


def command_curvature(args):
    field, point = _curvature_field(args)
    if args.point is not None:
        point = args.point
    point = np.array(point, dtype=float)

    bundle = tensor_bundle(field, point)
    oracle = generic_oracle_curvature(conformal_metric(field), point, step=args.step)
    discrepancy = scalar_curvature_discrepancy(field, point)

    header = ['quantity', 'closed_form', 'oracle', 'delta']
    rows = []
    for quantity in ('christoffel', 'riemann', 'ricci', 'scalar', 'stress', 'stress_trace'):
        closed = np.asarray(getattr(bundle, quantity))
        reference = np.asarray(getattr(oracle, quantity))
        rows.append([quantity, np.max(np.abs(closed)), np.max(np.abs(reference)),
                     np.max(np.abs(closed - reference))])
    rows.append(['printed_scalar_ratio', discrepancy['ratio'], '', ''])

    _emit(args, 'curvature', {'family': args.family, 'point': list(point), 'step': args.step}, header, rows,
          ['finite difference oracle'] * (len(rows) - 1) + ['documented discrepancy'])
    return 0


def command_geodesic(args):
    start = args.start
    if args.family == 'cosmology':
        with warnings.catch_warnings():
            warnings.simplefilter('ignore')
            sol = integrate_phi(0.5, rel_tol=1e-11)
        spatial = [0.06, 0.05, 0.02] if start is None else start
        trajectory = cosmo_trajectory(sol, spatial, (0.0, args.tau), samples=args.samples)
        diagnostics = {'direction_spread': trajectory.direction_spread(spatial=True)}
    else:
        flow = flow_cases()[args.family]
        trajectory = integrate_flow(flow, [1.0, 0.5, 0.3, 0.1] if start is None else start,
                                    tau_span=(0.0, args.tau), samples=args.samples)
        diagnostics = {'straightness': straightness_deviation(trajectory)}
        if args.family == 'interval_log':
            diagnostics['interval_slope'] = trajectory.interval_fit()[0]
        if args.family == 'berwald_moore_log':
            diagnostics['ratio_spread'] = trajectory.ratio_spread()

    for key, value in sorted(diagnostics.items()):
        logger.info('%s: %r', key, value)

    header = ['tau'] + ['x{}'.format(i) for i in range(trajectory.get_dimension())]
    rows = [[tau] + list(x) for tau, x in zip(trajectory.times, trajectory.points)]
    _emit(args, 'geodesic', {'family': args.family, 'start': start, 'tau': args.tau, 'samples': args.samples},
          header, rows, 'integration',
          extra={'diagnostics': diagnostics, 'metadata': trajectory.metadata})
    return 0


def command_verify(args):
    checks = run_verification(seed=args.seed, mc_samples=args.mc_samples, quick=args.quick)
    header = ['name', 'passed', 'value', 'tolerance', 'provenance']
    rows = [[c.name, c.passed, c.value, c.tolerance, c.provenance] for c in checks]
    _emit(args, 'verify', {'seed': args.seed, 'mc_samples': args.mc_samples, 'quick': args.quick}, header, rows,
          [c.provenance for c in checks], extra={'checks': [c.as_dict() for c in checks]})
    return 0 if all(c.passed for c in checks) else 1


def build_parser():
    parser = argparse.ArgumentParser(prog='finslerfield',
                                     description='indicatrix volume Lagrangians, field equations, cosmology '
                                                 'and curvature of conformally flat Finsler spaces')
    parser.add_argument('--version', action='version', version='%(prog)s {}'.format(__version__))
    parser.add_argument('--format', choices=['csv', 'json'], default='csv')
    parser.add_argument('--output', default=None, help='output file (stdout if omitted)')
    parser.add_argument('--seed', type=int, default=42)
    parser.add_argument('--verbose', action='store_true')
    subparsers = parser.add_subparsers(dest='command', required=True)

    volume = subparsers.add_parser('volume', help='indicatrix volumes')
    volume.add_argument('--kind', choices=['ellipsoid', 'conformal', 'regularized'], default='regularized')
    volume.add_argument('--space', choices=[EUCLIDEAN, PSEUDO_EUCLIDEAN, BERWALD_MOORE], default=EUCLIDEAN)
    volume.add_argument('--n', type=int, nargs='+', default=[2, 3, 4])
    volume.add_argument('--kappa', type=float, nargs='+', default=[1.0, 2.0])
    volume.add_argument('--q0', type=float, nargs='+', default=[0.25, 0.5, 1.0, 2.0])
    volume.add_argument('--processors', type=int, default=1)

    cosmo = subparsers.add_parser('cosmo', help='cosmological solution')
    cosmo_commands = cosmo.add_subparsers(dest='cosmo_command', required=True)
    integrate = cosmo_commands.add_parser('integrate')
    integrate.add_argument('--xi-max', type=_positive_float, default=2.0)
    integrate.add_argument('--rtol', type=_tolerance, default=1e-10)
    integrate.add_argument('--points', type=int, default=101)
    integrate.add_argument('--method', choices=['RK45', 'DOP853'], default='RK45')
    hubble_parser = cosmo_commands.add_parser('hubble')
    distances = hubble_parser.add_mutually_exclusive_group()
    distances.add_argument('--xi', type=float, nargs='+', default=[0.0, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5])
    distances.add_argument('--r', type=float, nargs='+', default=None)
    hubble_parser.add_argument('--H0', type=_positive_float, default=1.0)
    hubble_parser.add_argument('--c', type=_positive_float, default=1.0)
    hubble_parser.add_argument('--rtol', type=_tolerance, default=1e-10)

    series = subparsers.add_parser('series', help='exact series coefficients of phi')
    series.add_argument('--order', type=int, default=11)

    residual = subparsers.add_parser('residual', help='lattice field equation residuals')
    residual.add_argument('--family', choices=sorted(RESIDUAL_CASES), default='radial_log')
    residual.add_argument('--points', type=int, nargs='+', default=None)

    curvature = subparsers.add_parser('curvature', help='conformal tensor chain against the generic oracle')
    curvature.add_argument('--family', choices=sorted(CURVATURE_CASES) + ['cosmology'], default='exponential')
    curvature.add_argument('--point', type=float, nargs=4, default=None)
    curvature.add_argument('--step', type=_positive_float, default=1e-3)

    geodesic = subparsers.add_parser('geodesic', help='integral curves of the normal congruence')
    geodesic.add_argument('--family', choices=['radial_log', 'interval_log', 'berwald_moore_log', 'cosmology'],
                          default='interval_log')
    geodesic.add_argument('--start', type=float, nargs='+', default=None)
    geodesic.add_argument('--tau', type=float, default=2.0)
    geodesic.add_argument('--samples', type=int, default=21)

    verify = subparsers.add_parser('verify', help='run the acceptance suite')
    verify.add_argument('--mc-samples', type=int, default=10 ** 7)
    verify.add_argument('--quick', action='store_true')

    return parser


_commands = {'volume': command_volume,
             'cosmo': command_cosmo,
             'series': command_series,
             'residual': command_residual,
             'curvature': command_curvature,
             'geodesic': command_geodesic,
             'verify': command_verify}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr,
                        format='%(levelname)s %(name)s: %(message)s')
    logging.captureWarnings(True)

    try:
        return _commands[args.command](args)
    except FinslerFieldError as error:
        logger.error('%s: %s', type(error).__name__, error)
        return 1
