"""Data-driven co-design of event-triggered and sparse feedback controllers.

From noisy input/state records of an unknown discrete-time linear plant, the
package builds the set of data-consistent system matrices, synthesizes
feedback gains with stability, ultimate-boundedness, or disturbance
attenuation certificates that respect relative event-trigger thresholds,
sparsifies them by reweighting, and closes the loop in an event-triggered
simulator scored by a unified communication/computation cost.
"""

__version__ = "0.1.0"

from .cost import CostCoeffs, CostExpr, compare, operational_cost, symbolic_cost
from .data import DataSet, NoiseBounds, collect_data, run_experiment
from .simulate import (ChannelStats, ClosedLoopTrace, empirical_hinf,
                       export_trace, rates, run_closed_loop, verify_uub)
from .synthesis import (SparsityConfig, SynthesisError, SynthesisResult,
                        algorithm1, algorithm2, algorithm3, alpha1_search,
                        count_nonzeros, solve_thm1, solve_thm2, solve_thm3,
                        truncate_gain)
from .systems import BENCHMARKS, EtcParams, LtiSystem, stack_systems
from .uncertainty import (UncertaintySet, build_uncertainty, membership,
                          membership_margin, sample_members)
from .validate import (SampledCheck, pi_domination, sampled_decrease,
                       sampled_dissipation, sampled_uub, scaling_transfer)

__all__ = [
    "BENCHMARKS", "ChannelStats", "ClosedLoopTrace", "CostCoeffs", "CostExpr",
    "DataSet", "EtcParams", "LtiSystem", "NoiseBounds", "SampledCheck",
    "SparsityConfig", "SynthesisError", "SynthesisResult", "UncertaintySet",
    "algorithm1", "algorithm2", "algorithm3", "alpha1_search", "collect_data",
    "compare", "count_nonzeros", "build_uncertainty", "empirical_hinf",
    "export_trace", "membership", "membership_margin", "operational_cost",
    "pi_domination", "rates", "run_closed_loop", "run_experiment",
    "sample_members", "sampled_decrease", "sampled_dissipation",
    "sampled_uub", "scaling_transfer", "solve_thm1", "solve_thm2",
    "solve_thm3", "stack_systems", "symbolic_cost", "truncate_gain",
    "verify_uub", "__version__",
]
