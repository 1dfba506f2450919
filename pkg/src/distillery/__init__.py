"""distillery: space-time scheduling for ICM circuits with heralded,
probabilistic magic-state distillation."""

from .icm import (
    CircuitError,
    CircuitSyntaxError,
    CostBox,
    CostModel,
    IcmCircuit,
    OpKind,
    Operation,
    circuit_stats,
    effective_cost,
    parse_circuit,
    parse_cost_model,
    serialize_circuit,
)
from .layout import (
    CapacityError,
    Metrics,
    Occupancy,
    Placement,
    Schedule,
    Tag,
    export_schedule,
    metrics,
    parse_schedule,
    validate_schedule,
)
from .reliability import (
    ExtraCount,
    ReliabilityParams,
    failure_cdf,
    min_extra_offline,
    min_extra_online,
)
from .render import render, render_ascii, render_svg
from .schedulers import (
    HeraldOracle,
    OracleError,
    ScheduleTrace,
    SchedulerLimits,
    ScriptedOracle,
    StochasticOracle,
    WorstCaseOracle,
    derive_seed,
    sample_verdict,
    schedule_alaps,
    schedule_alapt,
    schedule_asap,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "CircuitError",
    "CircuitSyntaxError",
    "CostBox",
    "CostModel",
    "ExtraCount",
    "HeraldOracle",
    "IcmCircuit",
    "Metrics",
    "Occupancy",
    "OpKind",
    "Operation",
    "OracleError",
    "Placement",
    "ReliabilityParams",
    "Schedule",
    "ScheduleTrace",
    "SchedulerLimits",
    "ScriptedOracle",
    "StochasticOracle",
    "Tag",
    "WorstCaseOracle",
    "circuit_stats",
    "derive_seed",
    "effective_cost",
    "export_schedule",
    "failure_cdf",
    "metrics",
    "min_extra_offline",
    "min_extra_online",
    "parse_circuit",
    "parse_cost_model",
    "parse_schedule",
    "render",
    "render_ascii",
    "render_svg",
    "sample_verdict",
    "schedule_alaps",
    "schedule_alapt",
    "schedule_asap",
    "serialize_circuit",
    "validate_schedule",
]
