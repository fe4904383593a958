import json
import h5py
import numpy as np
from fractions import Fraction
from finslerfield.analysis import Trajectory
from finslerfield.core.cosmology import CosmoSolution, SeriesExpansion


def store_trajectory_list(trajectory_list, filename):
    f = h5py.File(filename, 'w')

    for i, trajectory in enumerate(trajectory_list):
        grp = f.create_group('{}'.format(i))
        grp.create_dataset('times', data=trajectory.times)
        grp.create_dataset('points', data=trajectory.points)
        grp.attrs['metadata'] = json.dumps(trajectory.metadata, sort_keys=True)

    f.close()


def load_trajectory_list(filename):
    f = h5py.File(filename, 'r')

    trajectory_list = []
    for dataset in sorted(f, key=int):
        times = f[dataset]['times'][()]
        points = f[dataset]['points'][()]
        metadata = json.loads(f[dataset].attrs['metadata'])
        trajectory_list.append(Trajectory(times, points, metadata=metadata))

    f.close()
    return trajectory_list


def store_cosmo_solution(solution, filename):
    """
    nodes, values and slopes of the solution plus the exact series (as numerator/denominator pairs)
    """
    f = h5py.File(filename, 'w')

    grp = f.create_group('solution')
    grp.create_dataset('nodes', data=solution.nodes)
    grp.create_dataset('values', data=solution.values)
    grp.create_dataset('slopes', data=solution.slopes)
    grp.create_dataset('integrals', data=solution.integrals)

    coefficients = solution.series.coefficients
    grp.create_dataset('series_numerators', data=np.array([str(a.numerator) for a in coefficients], dtype='S'))
    grp.create_dataset('series_denominators', data=np.array([str(a.denominator) for a in coefficients], dtype='S'))

    grp.attrs['xi_switch'] = solution.xi_switch
    grp.attrs['singular_xi'] = np.nan if solution.singular_xi is None else solution.singular_xi
    grp.attrs['gamma'] = solution.gamma
    grp.attrs['S0'] = solution.S0
    grp.attrs['c'] = solution.c
    grp.attrs['method'] = solution.method
    grp.attrs['rel_tol'] = np.nan if solution.rel_tol is None else solution.rel_tol

    f.close()


def load_cosmo_solution(filename):
    f = h5py.File(filename, 'r')
    grp = f['solution']

    # numerators may exceed 64 bits, kept as strings
    series = SeriesExpansion([Fraction(int(n), int(d)) for n, d in zip(grp['series_numerators'][()],
                                                                        grp['series_denominators'][()])])
    singular_xi = float(grp.attrs['singular_xi'])
    rel_tol = float(grp.attrs['rel_tol'])
    method = grp.attrs['method']
    if isinstance(method, bytes):
        method = method.decode()

    solution = CosmoSolution(grp['nodes'][()], grp['values'][()], grp['slopes'][()], grp['integrals'][()],
                             series,
                             xi_switch=float(grp.attrs['xi_switch']),
                             singular_xi=None if np.isnan(singular_xi) else singular_xi,
                             gamma=float(grp.attrs['gamma']),
                             S0=float(grp.attrs['S0']),
                             c=float(grp.attrs['c']),
                             method=method,
                             rel_tol=None if np.isnan(rel_tol) else rel_tol)
    f.close()
    return solution
