"""Transferability scoring for pre-trained model selection.

Scores how well a model's frozen features explain label embeddings produced
by several foundation-model encoders, by minimizing a simplex-weighted least
squares objective; ranks a model zoo by the resulting scores and evaluates
the ranking against fine-tuning ground truth.
"""

from . import errors
from .labels import (
    FeatureMatrix,
    FLabelStack,
    flatten_for_t,
    normalize_flabels,
    one_hot_stack,
    stack_flabels,
)
from .linalg import as_matrix, least_squares, spectral_norm_upper_bound
from .metrics import (
    ScorePair,
    kendall_tau,
    pearson,
    rel_at_k,
    weighted_kendall_tau,
    weighted_pearson,
)
from .npyio import read_npy, write_npy
from .pipeline import RankingReport, TaskManifest, load_manifest, run_benchmark, run_ranking
from .simplex import SimplexVector, project_simplex, sparsemax
from .solver import (
    SolverConfig,
    WlsrSolution,
    emms_score,
    solve,
    solve_fast,
    solve_pgd,
    wlsr_objective,
)
from .synth import SyntheticTask, generate_model_suite, generate_task
from .tabular import read_csv_matrix, read_ground_truth

__version__ = "0.1.0"

__all__ = [
    "FeatureMatrix",
    "FLabelStack",
    "RankingReport",
    "ScorePair",
    "SimplexVector",
    "SolverConfig",
    "SyntheticTask",
    "TaskManifest",
    "WlsrSolution",
    "as_matrix",
    "emms_score",
    "errors",
    "flatten_for_t",
    "generate_model_suite",
    "generate_task",
    "kendall_tau",
    "least_squares",
    "load_manifest",
    "normalize_flabels",
    "one_hot_stack",
    "pearson",
    "project_simplex",
    "read_csv_matrix",
    "read_ground_truth",
    "read_npy",
    "rel_at_k",
    "run_benchmark",
    "run_ranking",
    "solve",
    "solve_fast",
    "solve_pgd",
    "sparsemax",
    "spectral_norm_upper_bound",
    "stack_flabels",
    "weighted_kendall_tau",
    "weighted_pearson",
    "wlsr_objective",
    "write_npy",
]
