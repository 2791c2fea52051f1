"""High-level runs behind the CLI subcommands."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .circuit import Circuit, format_gate
from .compiler import Cnot, Hadamard, Rotation, compile_circuit, compile_gate, qubit_gate_matrix
from .density import (
    RNG_NAME,
    PhaseEnsembleSpec,
    density_from_amplitudes,
    evolve_ensemble,
    sample_amplitudes,
)
from .gates import compose, gate_matrix, run
from .observables import SpinObservable, default_observables, expectations
from .state import ComplexState, is_compatible, probabilities, standard_complex_structure, to_real
from .wdynamics import OrthogonalStep, antilinear_split, randomize_gate

VERIFY_TOL = 1e-9


@dataclass
class RunResult:
    amplitudes: np.ndarray
    probabilities: np.ndarray
    expectations: dict[str, float]
    gate_count: int
    seed: Optional[int] = None

    def to_json(self) -> dict:
        return {
            "amplitudes": [[float(z.real), float(z.imag)] for z in self.amplitudes],
            "probabilities": [float(p) for p in self.probabilities],
            "expectations": dict(self.expectations),
            "gate_count": self.gate_count,
            "seed": self.seed,
        }


def simulate(
    circuit: Circuit,
    state: Optional[ComplexState] = None,
    observables: Optional[Sequence[SpinObservable]] = None,
) -> RunResult:
    """State-vector run; default input is all intensity in channel 1."""
    state = ComplexState.basis(1, circuit.mq) if state is None else state
    if state.n_c != circuit.n_c:
        raise ValueError(f"input has {state.n_c} channels, circuit needs {circuit.n_c}")
    gates = compile_circuit(circuit)
    out = run(gates, state)
    pbar = probabilities(out)
    obs = default_observables(circuit.mq) if observables is None else observables
    return RunResult(out.psi.copy(), pbar, expectations(pbar, obs, circuit.mq), len(gates))


def oracle_matrix(circuit: Circuit) -> np.ndarray:
    """Product of tensor-product matrices; channel-level gates use their own matrix."""
    u = np.eye(circuit.n_c, dtype=complex)
    for inst in circuit.instructions:
        if isinstance(inst, (Rotation, Hadamard, Cnot)):
            m = qubit_gate_matrix(inst, circuit.mq)
        else:
            m = gate_matrix(inst, circuit.n_c)
        u = m @ u
    return u


def verify(circuit: Circuit) -> float:
    """Max entrywise deviation between the compiled product and the oracle."""
    compiled = compose(compile_circuit(circuit), circuit.n_c)
    return float(np.max(np.abs(compiled - oracle_matrix(circuit))))


@dataclass
class DensityResult:
    diagonal: np.ndarray
    max_offdiag: float
    seed: int
    samples: int
    gate_count: int
    rho: np.ndarray = field(repr=False)

    def to_json(self) -> dict:
        return {
            "diagonal": [float(x) for x in self.diagonal],
            "max_offdiag": self.max_offdiag,
            "seed": self.seed,
            "samples": self.samples,
            "rng": RNG_NAME,
            "gate_count": self.gate_count,
        }


def density_run(circuit: Circuit, spec: PhaseEnsembleSpec) -> DensityResult:
    if len(spec.pbar) != circuit.n_c:
        raise ValueError(f"pbar has {len(spec.pbar)} entries, circuit needs {circuit.n_c}")
    gates = compile_circuit(circuit)
    amps = evolve_ensemble(sample_amplitudes(spec), gates)
    weights = np.full(spec.samples, 1.0 / spec.samples)
    rho = density_from_amplitudes(weights, amps)
    return DensityResult(
        rho.diagonal, rho.max_offdiag(), spec.seed, spec.samples, len(gates), rho.rho
    )


@dataclass
class WdynResult:
    norm_drift: float
    verdicts: list[tuple[str, bool, float]]  # (gate text, compatible, max antilinear entry)
    seed: int
    final: np.ndarray = field(repr=False)

    def to_json(self) -> dict:
        return {
            "norm_drift": self.norm_drift,
            "seed": self.seed,
            "rng": RNG_NAME,
            "gates": [
                {"gate": g, "compatible": ok, "antilinear_max": a} for g, ok, a in self.verdicts
            ],
            "final_q": [float(x) for x in self.final],
        }


def wdyn_run(
    circuit: Circuit, seed: int, state: Optional[ComplexState] = None, compatible: bool = True
) -> WdynResult:
    """Run the compiled circuit in the real picture with randomized gate phases."""
    state = ComplexState.basis(1, circuit.mq) if state is None else state
    n_c = circuit.n_c
    cs = standard_complex_structure(n_c)
    rng = np.random.default_rng(seed)
    q = to_real(state).q.copy()
    verdicts = []
    for inst in circuit.instructions:
        for g in compile_gate(inst, circuit.mq):
            step: OrthogonalStep = randomize_gate(g, n_c, rng, compatible)
            _, anti = antilinear_split(step, cs)
            verdicts.append((format_gate(g), is_compatible(step.s, cs), float(np.max(np.abs(anti)))))
            q = step.s @ q
    return WdynResult(abs(float(np.linalg.norm(q)) - 1.0), verdicts, seed, q)
