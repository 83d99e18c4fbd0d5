"""
Configuration for entcomm
"""
import logging
import os
import sys

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    handlers=[logging.StreamHandler(sys.stdout)],
)
logger = logging.getLogger("entcomm")

# Parallelism cap for batch evaluations and see-saw restarts
threads = max(1, int(os.environ.get("ENTCOMM_THREADS", "1")))

# Numerical tolerances shared by all validators
tolerances = {
    # Hermiticity and unit trace of density operators
    "hermitian": 1e-10,
    "trace": 1e-10,
    # Lowest admissible eigenvalue of PSD operators
    "psd": 1e-9,
    # Completeness of POVMs and Kraus sets
    "povm": 1e-9,
    "kraus": 1e-9,
    # Norm of pure states
    "norm": 1e-10,
    # Row sums of correlation tables
    "table": 1e-9,
    # Row sums of classical stochastic matrices
    "stochastic": 1e-12,
    # Sub-normalised ensemble weights
    "weights": 1e-12,
}

# Minimum-error discrimination SDP
solver_settings = {
    # Certified duality gap requested by default
    "tol": 1e-7,
    "max_iters": 10_000,
    # Tried in order until one returns an optimal status
    "solvers": ["CLARABEL", "SCS"],
}

# Classical strategies, polytopes and graphs
classical_settings = {
    # Candidate decoders per scenario before enumeration is refused
    "max_decoders": 10**6,
    # Decoder classes (up to message relabelling) solved exactly by LP
    "max_decoder_classes": 200_000,
    # Vertex deduplication tolerance per coordinate
    "dedup_tol": 1e-9,
    # Multistart count for the lower-bound heuristic
    "heuristic_starts": 32,
    "heuristic_rounds": 50,
    # Largest graph accepted by the exact independence number
    "max_graph_vertices": 24,
    # Number representation handed to cddlib
    "cdd_number_type": "float",
}

# See-saw search
seesaw_settings = {
    "restarts": 64,
    "max_rounds": 200,
    "convergence_eps": 1e-7,
    "seed": 0,
    # Slack granted to the distinguishability budget
    "budget_tol": 1e-5,
    # Tolerance of seesaw_qc against its target value
    "target_tol": 1e-3,
}

# Experiment outputs
recording_settings = {
    # Base directory for experiment records
    "results_dir": "results",
    # Default parameters of the tilted sweep
    "sweep_min": 0.15,
    "sweep_max": 1.42,
    "sweep_points": 25,
    "seed": 0,
}
