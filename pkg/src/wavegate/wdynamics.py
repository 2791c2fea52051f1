"""Real orthogonal evolution of the classical wave function.

Steps need not commute with the complex structure. Stochastic gates draw
only phases or rotation angles, so every step is orthogonal by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np
import scipy.linalg

from .errors import BranchAmbiguityError, ContractViolation
from .gates import BeamSplit, CorrelationGate, PhaseShift, gate_matrix
from .state import ComplexStructure, RealState, real_embedding

ORTHO_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class OrthogonalStep:
    s: np.ndarray

    def __post_init__(self):
        s = np.array(self.s, dtype=float)
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise ContractViolation("step must be a square matrix")
        if np.max(np.abs(s.T @ s - np.eye(len(s)))) > ORTHO_TOL:
            raise ContractViolation("step is not orthogonal")
        s.setflags(write=False)
        object.__setattr__(self, "s", s)


@dataclass(frozen=True, eq=False)
class AntisymmetricGenerator:
    w: np.ndarray
    eps: float

    def __post_init__(self):
        w = np.array(self.w, dtype=float)
        if np.max(np.abs(w + w.T)) > ORTHO_TOL:
            raise ContractViolation("generator is not antisymmetric")
        object.__setattr__(self, "w", w)

    def step(self) -> OrthogonalStep:
        return OrthogonalStep(scipy.linalg.expm(self.eps * self.w))


def rotation_block(gamma: float) -> np.ndarray:
    """Rotation of one real pair: ``q1' = c q1 + s q2``, ``q2' = -s q1 + c q2``."""
    c, s = math.cos(gamma), math.sin(gamma)
    return np.array([[c, s], [-s, c]])


def apply_orthogonal(step: OrthogonalStep, state: RealState) -> RealState:
    if step.s.shape[1] != len(state.q):
        raise ContractViolation(
            f"step of size {step.s.shape} cannot act on {len(state.q)} components"
        )
    return RealState(step.s @ state.q)


def generator(step: OrthogonalStep, eps: float = 1.0, branch_tol: float = 1e-9) -> AntisymmetricGenerator:
    """Antisymmetric ``w`` with ``expm(eps * w) = s`` (principal logarithm)."""
    if eps <= 0:
        raise ContractViolation("eps must be positive")
    lam = np.linalg.eigvals(step.s)
    if np.any(np.abs(lam + 1) < branch_tol):
        raise BranchAmbiguityError("eigenvalue -1: principal logarithm is not unique")
    log = scipy.linalg.logm(step.s)
    if np.iscomplexobj(log):
        if np.max(np.abs(log.imag)) > 1e-8:
            raise BranchAmbiguityError("matrix logarithm is not real")
        log = log.real
    w = (log - log.T) / (2 * eps)
    return AntisymmetricGenerator(w, eps)


def antilinear_split(step: OrthogonalStep, cs: ComplexStructure) -> tuple[np.ndarray, np.ndarray]:
    """Split ``s`` into a part commuting and a part anticommuting with ``I``."""
    s, i = step.s, cs.I
    isi = i @ s @ i
    return (s - isi) / 2, (s + isi) / 2


def embed_gate(g: CorrelationGate, n_c: int) -> OrthogonalStep:
    """Real representation of a correlation gate."""
    return OrthogonalStep(real_embedding(gate_matrix(g, n_c)))


def _pair_rotation(n_c: int, a: int, b: int, theta_re: float, theta_im: float) -> np.ndarray:
    """Rotate the real parts of channels a, b by one angle and the imaginary parts by another."""
    s = np.eye(2 * n_c)
    for offset, theta in ((0, theta_re), (1, theta_im)):
        ia, ib = 2 * (a - 1) + offset, 2 * (b - 1) + offset
        c, sn = math.cos(theta), math.sin(theta)
        s[ia, ia], s[ia, ib], s[ib, ia], s[ib, ib] = c, sn, -sn, c
    return s


def stochastic_gate(
    kind: Literal["beam_split", "phase"],
    channels: Sequence[int],
    n_c: int,
    rng_seed,
    compatible: bool = True,
) -> OrthogonalStep:
    """Orthogonal step with uniformly random phases on the named channels.

    ``kind="phase"`` rotates each listed channel's real pair by a random angle.
    ``kind="beam_split"`` on two channels draws ``gamma, gamma', delta``
    uniformly and fixes ``delta'`` by the unitarity relation. With
    ``compatible=False`` the split instead rotates the real and imaginary
    components of the two channels by independent random angles, which
    generally mixes the wave function with its conjugate.
    """
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
    for c in channels:
        if not 1 <= c <= n_c:
            raise ContractViolation(f"channel {c} outside 1..{n_c}")
    if kind == "phase":
        phases = rng.uniform(0, 2 * math.pi, size=len(channels))
        return embed_gate(PhaseShift(dict(zip(channels, phases))), n_c)
    if kind == "beam_split":
        if len(channels) != 2 or channels[0] == channels[1]:
            raise ContractViolation("beam split needs two distinct channels")
        a, b = channels
        if not compatible:
            t1, t2 = rng.uniform(0, 2 * math.pi, size=2)
            return OrthogonalStep(_pair_rotation(n_c, a, b, t1, t2))
        g, gp, d = rng.uniform(0, 2 * math.pi, size=3)
        dp = d - g + gp + math.pi
        return embed_gate(BeamSplit(a, b, g, gp, d, dp), n_c)
    raise ContractViolation(f"unknown stochastic gate kind {kind!r}")


def randomize_gate(g: CorrelationGate, n_c: int, rng: np.random.Generator, compatible: bool = True) -> OrthogonalStep:
    """Replace the phases of a compiled gate by random ones; switches stay fixed."""
    if isinstance(g, PhaseShift):
        return stochastic_gate("phase", list(g.phases), n_c, rng)
    if isinstance(g, BeamSplit):
        return stochastic_gate("beam_split", [g.a, g.b], n_c, rng, compatible)
    return embed_gate(g, n_c)
