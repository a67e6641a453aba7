PROJECT_NAME = "HFK Cube"
PROJECT_ICON = "🪢"

# Knot catalogue used by the acceptance runner and the golden-table exporter.
# Braid text uses the CLI syntax: "b=<strands>; <signed generators>".
KNOT_CATALOGUE = {
    "unknot": {
        "name": "Unknot",
        "braid": "b=2; 1",
        "desc": "🟢 One positive crossing on two strands. Reduced homology is F2 in grading 0.",
        "alexander": "1",
    },
    "trefoil": {
        "name": "Right-handed trefoil",
        "braid": "b=2; 1 1 1",
        "desc": "🔴 Closure of σ1³. Smallest non-trivial knot; Δ = q - 1 + q⁻¹.",
        "alexander": "q - 1 + q^-1",
    },
    "figure8": {
        "name": "Figure-eight knot",
        "braid": "b=3; 1 -2 1 -2",
        "desc": "🟠 Amphichiral, mixed crossing signs. Its all-singular resolution is the reference graph with regions E1..E4.",
        "alexander": "-q + 3 - q^-1",
    },
    "cinquefoil": {
        "name": "(2,5) torus knot",
        "braid": "b=2; 1 1 1 1 1",
        "desc": "🟣 Closure of σ1⁵. Larger cube (32 resolutions), used for timing.",
        "alexander": "q^2 - q + 1 - q^-1 + q^-2",
    },
}

# Batches kept small enough for a laptop run.
ACCEPTANCE_KNOTS = ["unknot", "trefoil", "figure8"]

# Computation caps
DEFAULT_SUBSET_CAP = 2 ** 18
DEFAULT_DEGREE_CAP = 32

# Invariance harness
DEFAULT_MOVES = 3
DEFAULT_SEED = 0

# Generator count quoted for the trefoil cube; reported, never asserted.
TREFOIL_QUOTED_GENERATORS = 13

# Environment variables
THREADS_ENV = "HFK_THREADS"
DEBUG_LOG_ENV = "HFK_DEBUG_LOG"
