# Equality tolerance for region membership and the DF optimality check
TOL = 1e-12

# Eigenvalues below this are treated as exactly zero
EIGEN_FLOOR = 1e-300

# Bisection tolerance for the DF threshold
THRESHOLD_TOL = 1e-9

# A point enters a slope fit only with at least this many failures
MIN_FAILURES = 20

CHUNK_TRIALS = 2**16
DEFAULT_TRIALS = 10**6
DEFAULT_SEED = 0

DEFAULT_SNR_DB = (15.0, 20.0, 25.0, 30.0, 35.0, 40.0)
DEFAULT_R_STEP = 0.05

DEFAULT_RESOLUTION = 0.01
REFINE_TOL = 1e-4
