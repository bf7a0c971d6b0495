# Numerical tolerances shared by code and tests.

# Entrywise algebra: kron, partial traces, Hermiticity, normalization
ALGEBRA_TOL = 1e-12

# Eigendecompositions, PSD checks, POVM completeness
DECOMPOSITION_TOL = 1e-10
PSD_TOL = 1e-10
COMPLETENESS_TOL = 1e-10

# Dual feasibility of the POVM subproblem witness
DUAL_FEASIBILITY_TOL = 1e-9

# Certified duality gap of the POVM subproblem
GAP_TOL = 1e-8

# Cyclic Jacobi eigensolver
JACOBI_OFFDIAG_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100
MAX_EIG_DIM = 64

# Log-det barrier schedule for the POVM subproblem
BARRIER_MU_SHRINK = 0.2
BARRIER_NEWTON_TOL = 1e-12
BARRIER_MAX_NEWTON_STEPS = 500
BARRIER_LINE_SEARCH_ALPHA = 0.01
BARRIER_LINE_SEARCH_BETA = 0.5
MAX_SDP_DIM = 16

# Two rewards closer than this are treated as identical (uniform POVM returned)
DEGENERATE_REWARD_TOL = 1e-14

# See-saw
MONOTONICITY_TOL = 1e-10
