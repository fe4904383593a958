__version__ = '0.1'
from finslerfield.system import SpaceSpec, metric_function, generalized_momenta, kappa_from_field
from finslerfield.core.volume import conformal_indicatrix_volume, lagrangian_from_volume
from finslerfield.core.cosmology import integrate_phi, phi_series
from finslerfield.analysis import Trajectory


def _run_task(index, function, arguments, silent):
    result = function(*arguments)
    if not silent:
        print('Task {} done!'.format(index))
    return result


def calculate_sweep(function, parameter_list, processors=1, silent=True):
    """
    evaluate function(*arguments) for every entry of parameter_list

    :param function: picklable module level callable
    :param parameter_list: list of argument tuples
    :param processors: number of worker processes (1 runs serially)
    :param silent: do not report finished tasks
    :return: results in input order
    """
    if processors <= 1:
        return [_run_task(i, function, arguments, silent) for i, arguments in enumerate(parameter_list)]

    import concurrent.futures as futures

    with futures.ProcessPoolExecutor(max_workers=processors) as executor:
        futures_list = [executor.submit(_run_task, i, function, arguments, silent)
                        for i, arguments in enumerate(parameter_list)]
        return [f.result() for f in futures_list]
