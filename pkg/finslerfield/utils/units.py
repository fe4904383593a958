SPEED_OF_LIGHT = 1.0        # geometric units, x0 = c*t
COUPLING_FACTOR = 1.0       # c^4 / (8 pi k) in geometric units
XI_SWITCH = 1e-3            # series bootstrap of the cosmological equation
EPS_SING = 1e-6             # detection threshold on 1 - 3 phi^2
QUADRATURE_RTOL = 1e-9      # indicatrix volume quadrature
FD_RELATIVE_STEP = 1e-4     # finite difference step, scaled by (1 + |x|)
