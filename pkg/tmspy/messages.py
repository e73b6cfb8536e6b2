# -*- coding: utf-8 -*-

"""
tmspy error messages.
"""

TYPE_ERROR = "Expected {}, got {} instead."
NOT_COMPOSABLE = "Cannot apply a {}-mode map after a {}-mode map."
NOT_SQUARE = "Expected a square matrix of even size, got shape {}."
NOT_SYMMETRIC = "Covariance matrix is not symmetric (max deviation {:.3g})."
NOT_POSITIVE_DEFINITE = "Covariance matrix is not positive definite."
NOT_PHYSICAL = "Covariance matrix violates the uncertainty relation: "\
               "smallest symplectic eigenvalue {:.12g} < 1."
NOT_SYMPLECTIC = "Transform {!r} is not symplectic "\
                 "(max deviation {:.3g})."
PAIRING_FAILED = "Eigenvalues of J V do not come in +/- pairs: {}."
WRONG_MODES = "Expected {} mode(s), got {}."
MODE_OUT_OF_RANGE = "Mode index {} out of range for {} mode(s)."
UNKNOWN_QUADRATURE = "Expected quadrature 'q' or 'p', got {!r}."
UNKNOWN_AXIS = "Expected an axis among {}, got {!r}."
SINGULAR_HOMODYNE = "Measured quadrature variance {:.3g} is singular."
DEGENERATE_MARGINAL = "Marginal sub-covariance on {} is degenerate."
COARSE_GRID = "Grid step {} leaves fewer than 2 points on [{}, {}]."
NEGATIVE_SQUEEZING = "Squeezing factor must be >= 0, got {}."
NEGATIVE_NOISE = "Noise photon number must be >= 0, got {}."
NOT_FINITE = "Expected a finite value for {}, got {}."
NO_SQUEEZING_FACTOR = "No r >= 0 gives {} dB with n = {}: "\
                      "the level must be >= {:.6g} dB."
NO_NOISE_SOLUTION = "No n >= 0 gives {} dB with {} photons per path."
NON_POSITIVE_OMEGA = "Filter rate omega must be > 0, got {}."
VACUUM_G2 = "g2 is undefined for a state with no photons."
NEGATIVE_BRACKET = "Negativity kernel bracket is not positive: {:.3g}."
NEVER_ENTANGLED = "Resource is not entangled at zero delay (N_k = {:.6g})."
NOT_INCREASING = "Delays must be strictly increasing."
NEGATIVE_STDERR = "Standard errors must be >= 0."
LENGTH_MISMATCH = "Expected {} values, got {}."
UNKNOWN_KIND = "Expected one of {}, got {!r}."
TOO_FEW_POINTS = "Expected at least {} points, got {}."
NON_POSITIVE_VALUES = "g2 values must be > 0."
FLAT_DATA = "Data is flat, the model is not identifiable."
NOT_CONVERGED = "Fit did not converge after {} iterations."
UNKNOWN_PROTOCOL = "Expected protocol 'rsp' or 'qt', got {!r}."
FIDELITY_NOT_REACHED = "Fidelity stays above {} on the first sinc lobe."
UNKNOWN_KEY = "Unknown key."
MISSING_KEY = "Missing required key."
BAD_VALUE = "Invalid value: {}."
CONFIG_MISMATCH = "Records and calibration differ in {}."
CALIBRATION_NOT_VACUUM = "Calibration records must have vacuum inputs."
G2_NEEDS_VACUUM = "g2 estimation needs JPA2 in the vacuum state."
TOO_FEW_RECORDS = "Estimation needs at least {} records, got {}."
MISSING_HEADER = "Expected header {}, got {!r}."
MALFORMED_ROW = "Expected {} numeric columns."
NON_POSITIVE_STDERR = "Standard errors must be > 0 to weight a fit."
PARAMETER_AT_BOUND = "Estimate of {} is at its bound ({:.3g})."
SINGULAR_COVARIANCE = "Estimate covariance is singular, "\
                      "some parameters are not identifiable."
LARGE_RESIDUALS = "Residual RMS {:.3g} exceeds {}."
LARGE_CHI2 = "Reduced chi-square {:.3g} exceeds {}."
OPTIMIZER_STALLED = "Damping diverged at gradient norm {:.3g}."
CONFIG_ERROR = "Invalid configuration at {!r}: {}"
SAMPLE_RATE_TOO_LOW = "Sample rate must be >= {} times the bandwidth, "\
                      "got {} Hz for {} Hz."
RECORD_TOO_SHORT = "Records must span >= {} correlation times, got {:.3g}."
NON_POSITIVE_COUNT = "Expected a count >= 1, got {!r}."
BOTH_R_AND_LEVEL = "Specify either r or s_db, not both."
LAG_OUT_OF_RANGE = "Lags must be in [0, {}), got {}."
MISSING_FILTER = "Expected --omega-rad-s or --bandwidth-hz."
