import numpy as np
from scipy.special import gamma
from finslerfield.utils.units import FD_RELATIVE_STEP


def minkowski_metric(n_dim=4):
    """
    flat metric with signature (+,-,...,-)

    :param n_dim: dimension of the space
    :return: diagonal n_dim x n_dim array
    """
    eta = -np.eye(n_dim)
    eta[0, 0] = 1.0
    return eta


def signature_vector(n_dim, pseudo=True):
    """
    diagonal of the flat metric: (+1, -1, ..., -1) or all +1
    """
    if pseudo:
        return np.diag(minkowski_metric(n_dim)).copy()
    return np.ones(n_dim)


def unit_ball_volume(n_dim):
    """
    volume of the unit ball in n_dim euclidean dimensions
    """
    return np.pi ** (n_dim / 2.0) / gamma(n_dim / 2.0 + 1.0)


def fd_step(x, relative_step=FD_RELATIVE_STEP):
    return relative_step * (1.0 + np.linalg.norm(x))


def numerical_gradient(function, x, step=None):
    """
    central difference gradient of a scalar function

    :param function: callable f(x) -> float
    :param x: point
    :param step: difference step (scaled default if None)
    :return: gradient array (error O(step^2))
    """
    x = np.array(x, dtype=float)
    h = fd_step(x) if step is None else step
    grad = np.zeros_like(x)
    for i in range(len(x)):
        e = np.zeros_like(x)
        e[i] = h
        grad[i] = (function(x + e) - function(x - e)) / (2 * h)
    return grad


def numerical_hessian(function, x, step=None):
    """
    central difference hessian of a scalar function. Diagonal terms use the
    3-point formula and mixed terms the 4-point formula, so the result is
    symmetric by construction.
    """
    x = np.array(x, dtype=float)
    h = fd_step(x) if step is None else step
    n_dim = len(x)
    hessian = np.zeros((n_dim, n_dim))
    f0 = function(x)
    for i in range(n_dim):
        ei = np.zeros(n_dim)
        ei[i] = h
        hessian[i, i] = (function(x + ei) - 2 * f0 + function(x - ei)) / h ** 2
        for j in range(i + 1, n_dim):
            ej = np.zeros(n_dim)
            ej[j] = h
            value = (function(x + ei + ej) - function(x + ei - ej)
                     - function(x - ei + ej) + function(x - ei - ej)) / (4 * h ** 2)
            hessian[i, j] = hessian[j, i] = value
    return hessian


def numerical_jacobian(function, x, step=None):
    """
    central difference jacobian of a vector function: J[i, j] = d f_i / d x_j
    """
    x = np.array(x, dtype=float)
    h = fd_step(x) if step is None else step
    columns = []
    for j in range(len(x)):
        e = np.zeros_like(x)
        e[j] = h
        columns.append((np.asarray(function(x + e)) - np.asarray(function(x - e))) / (2 * h))
    return np.array(columns).T


def observed_order(errors, ratio=2.0):
    """
    observed convergence orders between consecutive refinements

    :param errors: error norms for spacings h, h/ratio, h/ratio^2, ...
    :param ratio: refinement ratio
    :return: array of orders log(e_k / e_k+1) / log(ratio)
    """
    errors = np.asarray(errors, dtype=float)
    return np.log(errors[:-1] / errors[1:]) / np.log(ratio)
