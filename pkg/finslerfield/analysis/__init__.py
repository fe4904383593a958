import numpy as np
from finslerfield.errors import TooFewSamples, ZeroDirection, FinslerFieldError


class Trajectory:
    """
    samples (tau_k, x_k) of an integral curve

    :param times: strictly increasing evolution parameter values
    :param points: array (n_samples x n_dim) of coordinates
    :param metadata: dict describing how the curve was produced
    """

    def __init__(self, times, points, metadata=None):
        self.times = np.array(times, dtype=float)
        self.points = np.array(points, dtype=float)
        self.metadata = {} if metadata is None else dict(metadata)

        if self.points.ndim != 2 or len(self.points) != len(self.times):
            raise FinslerFieldError('points must be an array with one row per sample')
        if np.any(np.diff(self.times) <= 0):
            raise FinslerFieldError('trajectory times must be strictly increasing')

    def __str__(self):
        txt_data = '\nTrajectory\n'
        txt_data += '------------------------------\n'
        txt_data += 'Dimension: {}\n'.format(self.get_dimension())
        txt_data += 'Samples: {}\n'.format(self.get_number_of_samples())
        txt_data += 'Span: [{}, {}]\n'.format(self.times[0], self.times[-1])
        for key, value in sorted(self.metadata.items()):
            txt_data += '{}: {}\n'.format(key, value)
        return txt_data

    def get_dimension(self):
        return self.points.shape[1]

    def get_number_of_samples(self):
        return len(self.times)

    def interval_values(self):
        """
        pseudo euclidean interval s = sqrt(x0^2 - |x|^2) of every sample
        """
        s2 = self.points[:, 0] ** 2 - np.sum(self.points[:, 1:] ** 2, axis=1)
        if np.any(s2 < 0):
            raise FinslerFieldError('trajectory leaves the forward cone, the interval is undefined')
        return np.sqrt(s2)

    def interval_fit(self):
        """
        linear fit of the interval against x0

        :return: slope, intercept, max absolute residual
        """
        x0 = self.points[:, 0]
        s = self.interval_values()
        slope, intercept = np.polyfit(x0, s, 1)
        return slope, intercept, np.max(np.abs(s - (slope * x0 + intercept)))

    def ray_constants(self):
        """
        C^mu = x^mu / x^0 at the first sample
        """
        return self.points[0, 1:] / self.points[0, 0]

    def ratio_spread(self):
        """
        max variation along the curve of xi^i / sum_j xi^j
        """
        ratios = self.points / np.sum(self.points, axis=1)[:, None]
        return np.max(np.ptp(ratios, axis=0))

    def direction_spread(self, spatial=False):
        """
        max distance between the unit direction x/|x| of any sample and that of the first one

        :param spatial: use the spatial components x^1..x^(n-1) only
        """
        points = self.points[:, 1:] if spatial else self.points
        directions = points / np.linalg.norm(points, axis=1)[:, None]
        return np.max(np.linalg.norm(directions - directions[0], axis=1))


def straightness_deviation(trajectory):
    """
    max over samples of the distance to the ray through the origin, normalized by the
    sample radius. The ray is the direction of the sample with the largest radius.

    :param trajectory: Trajectory with at least 3 samples
    :return: deviation (0 for exact rays)
    :raises ZeroDirection: all samples at the origin
    """
    if trajectory.get_number_of_samples() < 3:
        raise TooFewSamples('need at least 3 samples, got {}'.format(trajectory.get_number_of_samples()))

    points = trajectory.points
    radii = np.linalg.norm(points, axis=1)
    if not np.any(radii > 0):
        raise ZeroDirection('every sample lies at the origin, the ray is undefined')
    reference = points[np.argmax(radii)] / np.max(radii)

    perpendicular = points - np.outer(points @ reference, reference)
    mask = radii > 0
    return np.max(np.linalg.norm(perpendicular[mask], axis=1) / radii[mask])


class TrajectoryAnalysis:

    def __init__(self, trajectories):
        if len(trajectories) == 0:
            raise TooFewSamples('no trajectories to analyze')
        self.trajectories = trajectories
        self.n_dim = trajectories[0].get_dimension()
        self.n_traj = len(trajectories)

    def __str__(self):
        txt_data = '\nTrajectory Analysis\n'
        txt_data += '------------------------------\n'
        txt_data += 'Number of trajectories: {}\n'.format(self.n_traj)
        txt_data += 'Dimension: {}\n'.format(self.n_dim)
        txt_data += 'Max straightness deviation: {}\n'.format(self.max_straightness_deviation())
        return txt_data

    def max_straightness_deviation(self):
        return max(straightness_deviation(traj) for traj in self.trajectories)

    def max_direction_spread(self, spatial=False):
        return max(traj.direction_spread(spatial=spatial) for traj in self.trajectories)
