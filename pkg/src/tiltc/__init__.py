"""Compiler and fidelity simulator for linear-tape (TILT) trapped-ion devices."""

from .circuit import BARRIER, Circuit, ContractViolation, Gate, MalformedCircuitError, build_dag, gate_distance
from .frontend import ParseError, Program, decompose, dumps, load, parse
from .noise import FidelityReport, NoiseParams, evaluate, gate_time, two_qubit_fidelity
from .router import CapacityError, Mapping, RoutedCircuit, RouterConfig, initial_mapping, route, route_baseline
from .scheduler import Schedule, UnschedulableError, executable_set, schedule

__all__ = [
    "BARRIER", "Circuit", "ContractViolation", "Gate", "MalformedCircuitError", "build_dag", "gate_distance",
    "ParseError", "Program", "decompose", "dumps", "load", "parse",
    "FidelityReport", "NoiseParams", "evaluate", "gate_time", "two_qubit_fidelity",
    "CapacityError", "Mapping", "RoutedCircuit", "RouterConfig", "initial_mapping", "route", "route_baseline",
    "Schedule", "UnschedulableError", "executable_set", "schedule",
]

__version__ = "0.1.0"
