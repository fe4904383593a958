# This works only in python 3
from finslerfield.system import SpaceSpec, PSEUDO_EUCLIDEAN
from finslerfield.system.fields import IntervalLog
from finslerfield.analysis import TrajectoryAnalysis
from finslerfield.analysis.geodesics import FlowSpec, integrate_flows
from finslerfield.fileio import store_trajectory_list
import numpy as np

np.random.seed(1)  # for testing

#######################################################################################################################

# pseudo euclidean space with the logarithmic interval field S = C ln(s / s0)
space = SpaceSpec(PSEUDO_EUCLIDEAN, n_dim=4)
field = IntervalLog(C=1.0, s0=1.0)

flow = FlowSpec(space, field, 'reference')   # lambda = s^2 / C

#######################################################################################################################

num_trajectories = 200                   # number of rays that will be integrated
tau_span = (0.0, 2.0)
samples = 41

# starting points inside the future cone x0 > |x|
spatial = np.random.uniform(-0.5, 0.5, size=(num_trajectories, 3))
starts = np.hstack([np.ones((num_trajectories, 1)), spatial])

trajectories = integrate_flows(flow, starts, tau_span=tau_span, samples=samples, processors=4)

analysis = TrajectoryAnalysis(trajectories)
print(analysis)

slopes = np.array([trajectory.interval_fit()[0] for trajectory in trajectories])
expected = np.array([np.sqrt(1 - np.sum(trajectory.ray_constants() ** 2)) for trajectory in trajectories])
print('max interval slope deviation: {}'.format(np.max(np.abs(slopes - expected))))

store_trajectory_list(trajectories, 'rays.h5')
