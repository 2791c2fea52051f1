"""Correlation gates: phase shift, switch and beam split on channel amplitudes.

Channel indices on gate objects are 1-based. A gate list is in temporal
order: the first element acts first, so ``compose([g1, g2])`` returns the
matrix product ``G2 @ G1``.

The in-place kernels (:func:`apply_gate_inplace`, :func:`run_inplace`) touch
only the named channels and accept arrays whose last axis is the channel
axis, so a whole ensemble of states can be updated in one call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

import numpy as np
import scipy.linalg

from .errors import BranchAmbiguityError, ChannelRangeError, ContractViolation, UnitarityError
from .state import ComplexState

UNITARITY_TOL = 1e-12


def cis(theta: float) -> complex:
    """``exp(i*theta)``, exact at multiples of pi/2."""
    quarter = theta / (math.pi / 2)
    k = round(quarter)
    if abs(quarter - k) <= 4 * np.finfo(float).eps * max(1.0, abs(quarter)):
        return complex((1, 1j, -1, -1j)[k % 4])
    return complex(math.cos(theta), math.sin(theta))


@dataclass(frozen=True, eq=False)
class PhaseShift:
    """Multiply ``psi[a]`` by ``exp(i * phases[a])``; unlisted channels keep phase 0."""

    phases: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self):
        phases = {int(k): float(v) for k, v in dict(self.phases).items()}
        object.__setattr__(self, "phases", phases)
        idx = np.fromiter((k - 1 for k in phases), dtype=np.intp, count=len(phases))
        fac = np.array([cis(v) for v in phases.values()], dtype=complex)
        object.__setattr__(self, "_idx", idx)
        object.__setattr__(self, "_fac", fac)

    def __eq__(self, other):
        return isinstance(other, PhaseShift) and self.phases == other.phases

    def __repr__(self):
        return f"PhaseShift({self.phases!r})"

    def channels(self) -> tuple[int, ...]:
        return tuple(self.phases)


@dataclass(frozen=True)
class Switch:
    """Exchange the amplitudes of channels ``a`` and ``b``."""

    a: int
    b: int

    def __post_init__(self):
        if self.a == self.b:
            raise ContractViolation(f"switch needs two distinct channels, got {self.a}")

    def channels(self) -> tuple[int, ...]:
        return (self.a, self.b)


@dataclass(frozen=True)
class BeamSplit:
    """Two-channel unitary ``[[e^{ig}, e^{ig'}], [e^{id}, e^{id'}]] / sqrt(2)``.

    The default phases make the split equal to the Hadamard matrix.
    """

    a: int
    b: int
    gamma: float = 0.0
    gamma_p: float = 0.0
    delta: float = 0.0
    delta_p: float = math.pi

    def __post_init__(self):
        if self.a == self.b:
            raise ContractViolation(f"beam split needs two distinct channels, got {self.a}")
        mismatch = abs(
            cis(self.delta - self.delta_p) + cis(self.gamma - self.gamma_p)
        )
        if mismatch > UNITARITY_TOL:
            raise UnitarityError(
                "beam split phases violate exp(i(d - d')) = -exp(i(g - g')): "
                f"residual {mismatch:.3e}"
            )

    @property
    def is_canonical(self) -> bool:
        return (self.gamma, self.gamma_p, self.delta, self.delta_p) == (0.0, 0.0, 0.0, math.pi)

    def block(self) -> np.ndarray:
        s = 1 / math.sqrt(2)
        return s * np.array(
            [[cis(self.gamma), cis(self.gamma_p)], [cis(self.delta), cis(self.delta_p)]],
            dtype=complex,
        )

    def channels(self) -> tuple[int, ...]:
        return (self.a, self.b)


@dataclass(frozen=True, eq=False)
class GenericUnitary:
    """Arbitrary dense unitary on all channels (verification and testing only)."""

    u: np.ndarray

    def __post_init__(self):
        u = np.array(self.u, dtype=complex)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise ContractViolation("generic unitary must be square")
        if np.max(np.abs(u.conj().T @ u - np.eye(len(u)))) > 1e-10:
            raise UnitarityError("generic matrix is not unitary")
        u.setflags(write=False)
        object.__setattr__(self, "u", u)

    def channels(self) -> tuple[int, ...]:
        return tuple(range(1, len(self.u) + 1))


CorrelationGate = Union[PhaseShift, Switch, BeamSplit, GenericUnitary]


@dataclass(frozen=True, eq=False)
class HamiltonianMatrix:
    """Hermitian ``h`` with ``exp(-i * eps * h)`` equal to one step."""

    h: np.ndarray
    eps: float


def check_channels(g: CorrelationGate, n_c: int) -> None:
    if isinstance(g, GenericUnitary):
        if len(g.u) != n_c:
            raise ChannelRangeError(f"generic unitary has size {len(g.u)}, expected {n_c}")
        return
    for c in g.channels():
        if not 1 <= c <= n_c:
            raise ChannelRangeError(f"channel {c} outside 1..{n_c}")


def apply_gate_inplace(g: CorrelationGate, psi: np.ndarray) -> np.ndarray:
    """Update ``psi`` (channel axis last) in place and return it.

    Indices are not range-checked here; callers validate once up front.
    """
    if isinstance(g, Switch):
        a, b = g.a - 1, g.b - 1
        tmp = psi[..., a].copy()
        psi[..., a] = psi[..., b]
        psi[..., b] = tmp
    elif isinstance(g, BeamSplit):
        a, b = g.a - 1, g.b - 1
        (u00, u01), (u10, u11) = g.block()
        xa = psi[..., a].copy()
        xb = psi[..., b].copy()
        psi[..., a] = u00 * xa + u01 * xb
        psi[..., b] = u10 * xa + u11 * xb
    elif isinstance(g, PhaseShift):
        if len(g._idx):
            psi[..., g._idx] *= g._fac
    elif isinstance(g, GenericUnitary):
        psi[...] = psi @ g.u.T
    else:
        raise TypeError(f"not a correlation gate: {g!r}")
    return psi


def run_inplace(gates: Sequence[CorrelationGate], psi: np.ndarray) -> np.ndarray:
    n_c = psi.shape[-1]
    for g in gates:
        check_channels(g, n_c)
    for g in gates:
        apply_gate_inplace(g, psi)
    return psi


def apply_gate(g: CorrelationGate, state: ComplexState) -> ComplexState:
    check_channels(g, state.n_c)
    return ComplexState(apply_gate_inplace(g, state.psi.copy()))


def run(gates: Sequence[CorrelationGate], state: ComplexState) -> ComplexState:
    """Apply a gate list in temporal order, copying the state once."""
    return ComplexState(run_inplace(gates, state.psi.copy()))


def gate_matrix(g: CorrelationGate, n_c: int) -> np.ndarray:
    """Dense ``n_c x n_c`` matrix of a gate."""
    check_channels(g, n_c)
    if isinstance(g, GenericUnitary):
        return g.u.copy()
    u = np.eye(n_c, dtype=complex)
    if isinstance(g, PhaseShift):
        u[g._idx, g._idx] = g._fac
    elif isinstance(g, Switch):
        a, b = g.a - 1, g.b - 1
        u[a, a] = u[b, b] = 0
        u[a, b] = u[b, a] = 1
    elif isinstance(g, BeamSplit):
        ix = np.array([g.a - 1, g.b - 1])
        u[np.ix_(ix, ix)] = g.block()
    return u


def compose(gates: Sequence[CorrelationGate], n_c: int) -> np.ndarray:
    """Matrix of a gate list; the first gate acts first (rightmost factor)."""
    u = np.eye(n_c, dtype=complex)
    for g in gates:
        u = gate_matrix(g, n_c) @ u
    return u


def commutes(g1: CorrelationGate, g2: CorrelationGate, n_c: int, tol: float = 1e-12) -> bool:
    m1 = gate_matrix(g1, n_c)
    m2 = gate_matrix(g2, n_c)
    return bool(np.max(np.abs(m1 @ m2 - m2 @ m1)) < tol)


def generator_of_step(u, eps: float, branch_tol: float = 1e-9) -> HamiltonianMatrix:
    """Hermitian ``h = (i/eps) log u`` on the principal branch.

    Eigenphases are taken in (-pi, pi]; an eigenphase at pi makes the logarithm
    ambiguous and raises :class:`BranchAmbiguityError`.
    """
    u = np.asarray(u, dtype=complex)
    if eps <= 0:
        raise ContractViolation("eps must be positive")
    if np.max(np.abs(u.conj().T @ u - np.eye(len(u)))) > 1e-10:
        raise ContractViolation("step operator is not unitary")
    t, z = scipy.linalg.schur(u, output="complex")
    lam = np.diag(t)
    if np.any(np.abs(lam + 1) < branch_tol):
        raise BranchAmbiguityError("eigenvalue -1: principal logarithm is not unique")
    theta = np.angle(lam)
    h = -(z * (theta / eps)) @ z.conj().T
    h = (h + h.conj().T) / 2
    return HamiltonianMatrix(h, eps)
