"""Simulator and gate compiler for waveguide channels encoding multi-qubit basis states."""

from .circuit import Circuit, parse_circuit, serialize_circuit
from .compiler import (
    Cnot,
    Hadamard,
    Rotation,
    bits_to_channel,
    channel_to_bits,
    compile_circuit,
    compile_cnot,
    compile_hadamard,
    compile_rotation,
    qubit_gate_matrix,
)
from .gates import (
    BeamSplit,
    GenericUnitary,
    PhaseShift,
    Switch,
    apply_gate,
    commutes,
    compose,
    gate_matrix,
    generator_of_step,
    run,
    run_inplace,
)
from .runner import density_run, simulate, verify, wdyn_run
from .state import (
    ComplexState,
    ComplexStructure,
    RealState,
    is_compatible,
    normalize_fields,
    probabilities,
    standard_complex_structure,
    to_complex,
    to_real,
)

__version__ = "0.1.0"
