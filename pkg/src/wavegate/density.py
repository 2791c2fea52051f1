"""Density matrices from phase-randomized inputs and von Neumann evolution.

Random phases come from numpy's PCG64 generator seeded explicitly; the
generator name and seed travel with every result.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import ContractViolation
from .gates import CorrelationGate, compose, run_inplace
from .state import ComplexState

RNG_NAME = "PCG64"
TOL = 1e-10


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    rho: np.ndarray

    def __post_init__(self):
        rho = np.array(self.rho, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ContractViolation("density matrix must be square")
        if np.max(np.abs(rho - rho.conj().T)) > TOL:
            raise ContractViolation("density matrix is not Hermitian")
        if abs(np.trace(rho).real - 1.0) > TOL:
            raise ContractViolation(f"trace is {np.trace(rho).real!r}, expected 1")
        if np.linalg.eigvalsh(rho).min() < -TOL:
            raise ContractViolation("density matrix has a negative eigenvalue")
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    @property
    def diagonal(self) -> np.ndarray:
        return self.rho.diagonal().real.copy()

    def max_offdiag(self) -> float:
        off = self.rho - np.diag(self.rho.diagonal())
        return float(np.max(np.abs(off))) if len(off) > 1 else 0.0

    def purity(self) -> float:
        return float(np.trace(self.rho @ self.rho).real)


@dataclass(frozen=True)
class PhaseEnsembleSpec:
    pbar: tuple[float, ...]
    mode: Literal["uniform", "fixed"] = "uniform"
    samples: int = 1000
    seed: int = 0
    phases: tuple[float, ...] | None = None  # used by mode="fixed"; zeros if omitted

    def __post_init__(self):
        pbar = tuple(float(p) for p in self.pbar)
        object.__setattr__(self, "pbar", pbar)
        if any(p < 0 for p in pbar) or abs(sum(pbar) - 1.0) > 1e-10:
            raise ContractViolation("pbar must be a probability vector")
        if self.samples < 1:
            raise ContractViolation("need at least one sample")
        if self.mode not in ("uniform", "fixed"):
            raise ContractViolation(f"unknown phase mode {self.mode!r}")
        if self.phases is not None and len(self.phases) != len(pbar):
            raise ContractViolation("need one fixed phase per channel")


def sample_amplitudes(spec: PhaseEnsembleSpec) -> np.ndarray:
    """Member amplitudes as an ``(m, n_c)`` array; row ``k`` is member ``k``."""
    mag = np.sqrt(np.asarray(spec.pbar))
    n_c = len(mag)
    if spec.mode == "fixed":
        phi = np.zeros(n_c) if spec.phases is None else np.asarray(spec.phases, dtype=float)
        phi = np.broadcast_to(phi, (spec.samples, n_c))
    else:
        rng = np.random.Generator(np.random.PCG64(spec.seed))
        phi = rng.uniform(0.0, 2 * np.pi, size=(spec.samples, n_c))
    return mag * np.exp(1j * phi)


def sample_ensemble(spec: PhaseEnsembleSpec) -> list[tuple[float, ComplexState]]:
    w = 1.0 / spec.samples
    return [(w, ComplexState(row)) for row in sample_amplitudes(spec)]


def density_from_amplitudes(weights, amps: np.ndarray) -> DensityMatrix:
    """``sum_m w_m psi_m psi_m^dagger``, accumulated in member order."""
    weights = np.asarray(weights, dtype=float)
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > TOL:
        raise ContractViolation("ensemble weights must be non-negative and sum to 1")
    n_c = amps.shape[1]
    rho = np.zeros((n_c, n_c), dtype=complex)
    comp = np.zeros_like(rho)
    # Kahan summation in fixed member order: bit-stable and rounding-level accurate
    for w, psi in zip(weights, amps):
        y = w * np.outer(psi, psi.conj()) - comp
        t = rho + y
        comp = (t - rho) - y
        rho = t
    return DensityMatrix(rho)


def density_from_ensemble(members: Sequence[tuple[float, ComplexState]]) -> DensityMatrix:
    if not members:
        raise ContractViolation("empty ensemble")
    weights = [w for w, _ in members]
    amps = np.stack([s.psi for _, s in members])
    return density_from_amplitudes(weights, amps)


def dephased_density(pbar) -> DensityMatrix:
    """Limit of uniformly random independent phases: ``diag(pbar)``."""
    return DensityMatrix(np.diag(np.asarray(pbar, dtype=complex)))


def evolve_density(rho: DensityMatrix, gates: Sequence[CorrelationGate]) -> DensityMatrix:
    u = compose(gates, len(rho.rho))
    return DensityMatrix(u @ rho.rho @ u.conj().T)


def evolve_ensemble(amps: np.ndarray, gates: Sequence[CorrelationGate]) -> np.ndarray:
    """Evolve every member independently (vectorized over the member axis)."""
    return run_inplace(gates, np.array(amps, dtype=complex))
