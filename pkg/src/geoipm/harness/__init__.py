"""Problem file ingestion, random instance generation, experiment drivers, CLI."""

from .generate import generate_random_sdp
from .io import load_problem, problem_from_dict, problem_to_dict, save_problem
from .experiments import ExperimentConfig, run_experiment_fig3, run_experiment_fig4

__all__ = [
    "generate_random_sdp",
    "load_problem",
    "save_problem",
    "problem_from_dict",
    "problem_to_dict",
    "ExperimentConfig",
    "run_experiment_fig3",
    "run_experiment_fig4",
]
