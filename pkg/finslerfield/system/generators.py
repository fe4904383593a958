import numpy as np
from finslerfield.system.fields import GridSampled


def regular_lattice(origin, spacing, shape):
    """
    coordinate arrays of a regular lattice (ij indexing)

    :param origin: coordinates of node (0, ..., 0)
    :param spacing: spacing per axis (scalar or list)
    :param shape: number of nodes per axis
    :return: list of coordinate arrays, one per axis, each with the lattice shape
    """
    n_dim = len(shape)
    spacing = np.broadcast_to(np.array(spacing, dtype=float), (n_dim,))
    axes = [origin[a] + spacing[a] * np.arange(shape[a]) for a in range(n_dim)]
    return np.meshgrid(*axes, indexing='ij')


def lattice_field(function, origin, spacing, shape):
    """
    sample a scalar function on a regular lattice

    :param function: vectorized callable f(x0, x1, ...) acting on coordinate arrays
    :param origin: coordinates of node (0, ..., 0)
    :param spacing: spacing per axis (scalar or list)
    :param shape: number of nodes per axis
    :return: GridSampled field
    """
    mesh = regular_lattice(origin, spacing, shape)
    values = np.broadcast_to(function(*mesh), tuple(shape))
    return GridSampled(origin, spacing, values)


def centered_lattice_field(function, center, half_width, points):
    """
    lattice of points^n nodes covering center +- half_width on every axis
    """
    center = np.asarray(center, dtype=float)
    n_dim = len(center)
    spacing = 2.0 * half_width / (points - 1)
    return lattice_field(function, center - half_width, spacing, [points] * n_dim)
