from finslerfield.core.cosmology import integrate_phi, phi_series, hubble, hubble_closed_form, body_velocity
from finslerfield.fileio import store_cosmo_solution
import warnings
import numpy as np

H0 = 70.0 / 3.0857e19      # Hubble constant (1/s), 70 km/s/Mpc
c = 2.99792458e8           # speed of light (m/s)

print(phi_series(11))

with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter('always')
    sol = integrate_phi(2.0, rel_tol=1e-11, gamma=H0 / c, c=c, method='DOP853')

for w in caught:
    print('warning: {}'.format(w.message))

print(sol)
print('residual norm: {}'.format(sol.residual_norm))

# distances in Mpc up to the singular set
megaparsec = 3.0857e22   # m
print('{:>12} {:>12} {:>14} {:>14} {:>14}'.format('r (Mpc)', 'xi', 'H / H0', 'closed form', 'v / c'))
for xi in np.linspace(0.0, sol.xi_end, 12):
    r = xi / sol.gamma
    print('{:12.2f} {:12.6f} {:14.10f} {:14.10f} {:14.10f}'.format(r / megaparsec,
                                                                   xi,
                                                                   hubble(sol, r) / sol.H0,
                                                                   hubble_closed_form(sol.H0, r, c=c) / sol.H0,
                                                                   body_velocity(sol, r) / c))

store_cosmo_solution(sol, 'cosmology.h5')
