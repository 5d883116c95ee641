"""Syndrome extraction compilers and a latency simulator for QCCD trapped-ion machines."""

from .code_model import (
    Pauli,
    Stabilizer,
    StabilizerCode,
    build_color_code,
    build_repetition_code,
    build_surface_code,
    generate,
    parse_code,
    tanner_graph,
)
from .compilers import compile_baseline, compile_code, compile_mao, compile_moveless, reverse_round
from .hardware import Mapping, QccdTopology, TimingModel, make_grid, make_linear, shuttle_path, shuttle_time
from .noise import coherence_from_p, error_budget, pta_channel
from .simulator import LatencyReport, simulate, theoretical_min_latency, verify

__version__ = "0.1.0"

__all__ = [
    "LatencyReport", "Mapping", "Pauli", "QccdTopology", "Stabilizer", "StabilizerCode",
    "TimingModel", "build_color_code", "build_repetition_code", "build_surface_code",
    "coherence_from_p", "compile_baseline", "compile_code", "compile_mao", "compile_moveless",
    "error_budget", "generate", "make_grid", "make_linear", "parse_code", "pta_channel",
    "reverse_round", "shuttle_path", "shuttle_time", "simulate", "tanner_graph",
    "theoretical_min_latency", "verify",
]
