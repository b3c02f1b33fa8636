import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Worker threads for parallel scans (the --threads flag wins)
THREADS = int(os.getenv("THREADS", "1"))

# State invariants
HERMITIAN_TOLERANCE = 1e-12
TRACE_TOLERANCE = 1e-10
PSD_FLOOR = -1e-10
POSITIVITY_TOLERANCE = 1e-12

# Coherent-state tail mass allowed outside the truncation
TAIL_TOLERANCE = 1e-12

# Closed-form catalyst
DEGENERACY_THRESHOLD = 1e-9
CATALYTIC_TOLERANCE = 1e-8
PREDICTION_TOLERANCE = 1e-6

# Fixed-point solve: singular values of (1 - M) at or below this floor (times max(1, s_max))
# are round-off and are dropped from the minimum-norm solve
FIXED_POINT_CUTOFF = 1e-12
FIXED_POINT_RESIDUAL = 1e-10

# Wigner grids
DEFAULT_GRID_POINTS = 201
MASS_TOLERANCE = 1e-4

# Liouvillian propagation
PROPAGATION_FLOOR = -1e-8

# Multi-cavity joint dimension budget ((cavity_dim ** N) * 2)
MAX_JOINT_DIM = 1024

# Default catalytic-time search
RESOLVE_WINDOW = 1.0
RESOLVE_POINTS = 401
