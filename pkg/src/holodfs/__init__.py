"""Holonomic quantum gates in a two-ion decoherence-free subspace."""
from .core import HilbertStructure, HoloDFSError, NumericalError, ValidationError
from .dfs import LogicalEncoding, decode, encode
from .holonomy import ControlPath, dark_states, three_segment_loop, transported_gate, wilson_loop
from .adiabatic import NoiseModel, Schedule, extract_logical_gate, simulate_schedule
from .synthesis import GateSpec, build_gate, euler_decompose, loop_for_phase
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ControlPath",
    "GateSpec",
    "HilbertStructure",
    "HoloDFSError",
    "LogicalEncoding",
    "NoiseModel",
    "NumericalError",
    "Schedule",
    "ValidationError",
    "build_gate",
    "dark_states",
    "decode",
    "encode",
    "euler_decompose",
    "extract_logical_gate",
    "loop_for_phase",
    "simulate_schedule",
    "three_segment_loop",
    "transported_gate",
    "wilson_loop",
]
