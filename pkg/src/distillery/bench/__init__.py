"""Benchmark ingestion and generation: RevLib MCT circuits, Toffoli
decomposition, ICM skeleton expansion, the published scheduling-results
fixture, and the Monte Carlo harness."""

from .montecarlo import MonteCarloStats, monte_carlo
from .revlib import MctCircuit, MctGate, RealFormatError, UnsupportedGateError, parse_real, simulate_permutation
from .skeleton import expand_to_icm_skeleton, random_circuit, synthetic_mct
from .reference import ReferenceRow, check_reference_results, load_reference_results
from .toffoli import decompose_mct

__all__ = [
    "MctCircuit",
    "MctGate",
    "MonteCarloStats",
    "RealFormatError",
    "ReferenceRow",
    "UnsupportedGateError",
    "check_reference_results",
    "decompose_mct",
    "expand_to_icm_skeleton",
    "load_reference_results",
    "monte_carlo",
    "parse_real",
    "random_circuit",
    "simulate_permutation",
    "synthetic_mct",
]
