"""Jigsaw percolation on random double graphs.

Simulation of the jigsaw process, the absorption and construction
algorithms, exhaustive enumeration of minimal percolating configurations,
and a seeded Monte Carlo harness for threshold sweeps.
"""

from ._kernels import BACKEND
from .absorption import AbsorptionInput, find_percolating_input, run_absorption
from .construction import derive_params, run_construction, supercritical_pipeline
from .errors import CapacityError, ContractError, InputError, ParameterError
from .graph import (
    DoubleGraph,
    GenParams,
    generate_double_graph,
    induced_double_graph,
    read_double_graph,
    union_double_graph,
    write_double_graph,
)
from .harness import SweepConfig, estimate_percolation_probability, run_sweep, run_trial
from .jigsaw import JigsawResult, percolates, run_jigsaw

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "AbsorptionInput",
    "CapacityError",
    "ContractError",
    "DoubleGraph",
    "GenParams",
    "InputError",
    "JigsawResult",
    "ParameterError",
    "SweepConfig",
    "derive_params",
    "estimate_percolation_probability",
    "find_percolating_input",
    "generate_double_graph",
    "induced_double_graph",
    "percolates",
    "read_double_graph",
    "run_absorption",
    "run_construction",
    "run_jigsaw",
    "run_sweep",
    "run_trial",
    "supercritical_pipeline",
    "union_double_graph",
    "write_double_graph",
]
