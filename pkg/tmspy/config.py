# -*- coding: utf-8 -*-

""" TMSPy configuration. """

CONVENTION = "vacuum_variance=1"
NUMPY_THRESHOLD = 16

# Covariance matrices and symplectic transforms.
SYMMETRY_RTOL = 1e-12
SYMPLECTIC_ATOL = 1e-12
PHYSICALITY_TOL = 1e-9
PURITY_RTOL = 1e-12
PAIRING_TOL = 1e-9

# Removable singularity of sin(x) / x.
SINC_SERIES_THRESHOLD = 1e-4

# Root finding on the first sinc lobe.
BISECTION_RTOL = 1e-10
BISECTION_XTOL = 1e-15
BISECTION_MAXITER = 200

# Damped Gauss-Newton (Levenberg-Marquardt).
LM_LAMBDA_INIT = 1e-3
LM_LAMBDA_UP = 10.
LM_LAMBDA_DOWN = .1
LM_LAMBDA_MAX = 1e16
LM_MAX_ITER = 200
LM_XTOL = 1e-10
LM_GTOL = 1e-10
LM_STEP_GTOL = 1e-6

# Curve fitting.
MIN_FIT_POINTS = 5
MULTISTART_OMEGA_RANGE = (1e4, 1e8)
MULTISTART_PER_DECADE = 8
NK_START_R = tuple(.02 + .08 * i for i in range(25))
NK_START_N = (0., .02, .05, .1, .2, .4, .8)
DEGENERATE_SPREAD = 1e-12
SOFTPLUS_FLOOR = 1e-6
BOUND_TOL = 1e-4
MULTISTART_TIE_RTOL = 1e-9
FIT_RMS_WARNING = .1
FIT_CHI2_WARNING = 9.

# Monte Carlo simulation of the dual-path receiver.
MIN_SAMPLE_RATE_FACTOR = 8
MIN_RECORD_CORRELATION_TIMES = 20
MIN_BATCHES = 10
SYNTHESIS_PADDING = 4
DEFAULT_WORKERS = 1

# Metadata only, neither enters any model.
CARRIER_FREQUENCY_HZ = 5.323e9
JPA_BANDWIDTH_HZ = 5e6

# Text output.
CSV_PRECISION = 17
