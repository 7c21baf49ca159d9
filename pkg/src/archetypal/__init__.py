"""Archetypal analysis, archetypoids and probabilistic archetypes for
binary, real-valued and functional data."""

from archetypal.aa import ArchetypalModel, FitOptions, fit_aa, rss_curve
from archetypal.ada import (
    ArchetypoidModel,
    CandidateSet,
    assign_by_max_alpha,
    candidate_sets,
    fit_ada,
    swap_optimize,
)
from archetypal.baselines import fit_kmeans, fit_pam, gower_binary, silhouette
from archetypal.core import (
    DegenerateDataWarning,
    InvalidInputError,
    SolverError,
    pnnls_solve,
    rss,
)
from archetypal.functional import (
    BasisRepresentation,
    fit_faa,
    fit_fada,
    gram_bspline,
    whiten,
)
from archetypal.io import load_csv
from archetypal.paa import PAAModel, bernoulli_loglik, fit_paa
from archetypal.report import emit_report, star_table, ternary_coords
from archetypal.simulation import (
    SimulationConfig,
    binarize,
    generate_dataset,
    hamming,
    match_error,
    run_benchmark,
    salt_pepper,
)

__all__ = [
    "ArchetypalModel", "ArchetypoidModel", "BasisRepresentation", "CandidateSet",
    "DegenerateDataWarning", "FitOptions", "InvalidInputError", "PAAModel",
    "SimulationConfig", "SolverError", "assign_by_max_alpha", "bernoulli_loglik",
    "binarize", "candidate_sets", "emit_report", "fit_aa", "fit_ada", "fit_faa",
    "fit_fada", "fit_kmeans", "fit_paa", "fit_pam", "generate_dataset",
    "gower_binary", "gram_bspline", "hamming", "load_csv", "match_error",
    "pnnls_solve", "rss", "rss_curve", "run_benchmark", "salt_pepper",
    "silhouette", "star_table", "swap_optimize", "ternary_coords", "whiten",
]
