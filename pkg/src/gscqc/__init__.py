"""Nondeterministic ground-state cooling of a Grover oracle.

Block-analytic simulation of measurement-conditioned cooling, parameter
optimization, and a brute-force full-space simulator used as a reference.
"""

from .blockmath import BlockType, TwoLevelBlock, block_for_type, generalized_block, propagator, survival_prob
from .optimizer import OptimizationResult, optimal_params, optimize_params
from .protocol import (
    CoolingParams,
    CoolingReport,
    StrategyOneConfig,
    WeightState,
    copies_needed,
    copies_success,
    cooling_report,
    initial_weights,
    measurement_bound,
    min_gap_probability,
    min_measurements,
    step,
    strategy_one,
    weights_after,
)
from .thermal import SpectrumModel, ThermalSpec, boltzmann_factor, ground_state_population

__version__ = "0.1.0"
