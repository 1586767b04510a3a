"""tempcert: temporal inequalities for n-qubit complete-graph states.

Builds the inequality family, evaluates it on arbitrary finite-dimensional
realizations, computes classical bounds exhaustively, and runs the
self-testing certification pipeline down to graph-state fidelity.
"""

__version__ = "0.1.0"

from .certify import CertifyTolerances, certify
from .inequalities import (
    bound_formulas,
    build_i3,
    build_in,
    build_t3,
    build_tn,
    classical_bound_bruteforce,
    evaluate,
)
from .model import (
    Realization,
    canonical_observables,
    embed_realization,
    graph_state,
    perturb_realization,
    stabilizer_generators,
)

__all__ = [
    "__version__",
    "CertifyTolerances",
    "certify",
    "bound_formulas",
    "build_i3",
    "build_in",
    "build_t3",
    "build_tn",
    "classical_bound_bruteforce",
    "evaluate",
    "Realization",
    "canonical_observables",
    "embed_realization",
    "graph_state",
    "perturb_realization",
    "stabilizer_generators",
]
