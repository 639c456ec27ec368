"""Restricted isometry certification and clique-based hardness experiments.

The package has five pieces: dense symmetric linear algebra (`linalg`),
exact and lazy restricted-isometry certification (`certify`), seeded
counter-based random models (`randgen`), the graph-to-matrix reduction with
its distinguishing experiments (`reduction`), and text/JSON persistence plus
the command line (`fileio`, `cli`).
"""

from .certify import (
    BudgetExceededError,
    LazyCertificate,
    RipReport,
    UnitColumnError,
    Witness,
    block_compose,
    coherence,
    exact_rip,
    lazy_certify,
    lift_order,
    predicted_certified_order,
    subset_deviation,
    validate_unit_columns,
)
from .fileio import VERSION as __version__
from .randgen import (
    Graph,
    PlantedInstance,
    Seed,
    gen_bernoulli_sensing,
    gen_gnp_half,
    gen_model_a,
    gen_model_b,
    plant_clique,
)
from .reduction import (
    ExperimentReport,
    ReductionParams,
    cholesky_reduce,
    clique_witness,
    run_distinguishing_experiment,
    signed_adjacency,
    spectral_clique_refuter,
    verify_violation,
)

__all__ = [
    "BudgetExceededError",
    "ExperimentReport",
    "Graph",
    "LazyCertificate",
    "PlantedInstance",
    "ReductionParams",
    "RipReport",
    "Seed",
    "UnitColumnError",
    "Witness",
    "block_compose",
    "cholesky_reduce",
    "clique_witness",
    "coherence",
    "exact_rip",
    "gen_bernoulli_sensing",
    "gen_gnp_half",
    "gen_model_a",
    "gen_model_b",
    "lazy_certify",
    "lift_order",
    "plant_clique",
    "predicted_certified_order",
    "run_distinguishing_experiment",
    "signed_adjacency",
    "spectral_clique_refuter",
    "subset_deviation",
    "validate_unit_columns",
    "verify_violation",
]
