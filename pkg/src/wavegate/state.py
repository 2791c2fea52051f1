"""Real and complex wave functions over waveguide channels.

A system of ``mq`` qubits uses ``n_c = 2**mq`` channels. Each channel carries
two real field components, so the classical wave function ``q`` has ``2*n_c``
real entries. Pairing is interleaved: ``q[2a]`` is the real part and
``q[2a+1]`` the imaginary part of ``psi[a]`` (0-based internally).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, DegenerateIntensityError

NORM_TOL = 1e-12
MATRIX_TOL = 1e-10
# Constructor check for states produced by long gate sequences; rounding
# accumulates over thousands of updates.
STATE_TOL = 1e-9


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class RealState:
    """Unit vector of ``2 * n_c`` real field amplitudes."""

    q: np.ndarray

    def __post_init__(self):
        q = np.array(self.q, dtype=float)
        if q.ndim != 1 or len(q) < 2 or len(q) % 2 or not _is_power_of_two(len(q) // 2):
            raise ContractViolation(
                f"real state length must be 2 * 2**mq, got {q.shape}"
            )
        norm2 = float(q @ q)
        if abs(norm2 - 1.0) > STATE_TOL:
            raise ContractViolation(f"real state not normalized: |q|^2 = {norm2!r}")
        q.setflags(write=False)
        object.__setattr__(self, "q", q)

    @property
    def n_c(self) -> int:
        return len(self.q) // 2


@dataclass(frozen=True)
class ComplexState:
    """Unit vector of ``2**mq`` complex channel amplitudes."""

    psi: np.ndarray

    def __post_init__(self):
        psi = np.array(self.psi, dtype=complex)
        if psi.ndim != 1 or not _is_power_of_two(len(psi)):
            raise ContractViolation(
                f"complex state length must be a power of two, got {psi.shape}"
            )
        norm2 = float(np.vdot(psi, psi).real)
        if abs(norm2 - 1.0) > STATE_TOL:
            raise ContractViolation(f"complex state not normalized: |psi|^2 = {norm2!r}")
        psi.setflags(write=False)
        object.__setattr__(self, "psi", psi)

    @property
    def n_c(self) -> int:
        return len(self.psi)

    @property
    def mq(self) -> int:
        return self.n_c.bit_length() - 1

    @classmethod
    def basis(cls, channel: int, mq: int) -> "ComplexState":
        """All intensity in one channel (1-based)."""
        n_c = 2**mq
        if not 1 <= channel <= n_c:
            raise ContractViolation(f"channel {channel} outside 1..{n_c}")
        psi = np.zeros(n_c, dtype=complex)
        psi[channel - 1] = 1.0
        return cls(psi)

    @classmethod
    def from_amplitudes(cls, amps) -> "ComplexState":
        """Normalize an arbitrary nonzero amplitude vector."""
        psi = np.asarray(amps, dtype=complex)
        norm = np.linalg.norm(psi)
        if norm == 0:
            raise DegenerateIntensityError("all amplitudes are zero")
        return cls(psi / norm)


@dataclass(frozen=True)
class ComplexStructure:
    """Anticommuting pair ``(K, I)`` with ``K @ K = 1`` and ``I @ I = -1``."""

    K: np.ndarray
    I: np.ndarray

    def __post_init__(self):
        K = np.array(self.K, dtype=float)
        I = np.array(self.I, dtype=float)
        if K.shape != I.shape or K.ndim != 2 or K.shape[0] != K.shape[1]:
            raise ContractViolation("K and I must be square matrices of equal shape")
        one = np.eye(K.shape[0])
        checks = {
            "K^2 = 1": K @ K - one,
            "I^2 = -1": I @ I + one,
            "{K, I} = 0": K @ I + I @ K,
            "K orthogonal": K.T @ K - one,
            "I orthogonal": I.T @ I - one,
        }
        for name, residual in checks.items():
            if np.max(np.abs(residual)) > NORM_TOL:
                raise ContractViolation(f"complex structure fails {name}")
        K.setflags(write=False)
        I.setflags(write=False)
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "I", I)


def normalize_fields(fields) -> tuple[RealState, float]:
    """Turn raw real field values into a classical wave function.

    Returns the unit vector ``q = F / sqrt(I_tot)`` and the total intensity
    ``I_tot = sum(F**2)``, so that ``q**2`` are the relative intensities.
    """
    F = np.asarray(fields, dtype=float)
    if F.ndim != 1 or len(F) < 2:
        raise ContractViolation("need at least two field values")
    total = float(F @ F)
    if total == 0.0:
        raise DegenerateIntensityError("all field values are zero")
    return RealState(F / np.sqrt(total)), total


def to_complex(state: RealState) -> ComplexState:
    q = state.q
    return ComplexState(q[0::2] + 1j * q[1::2])


def to_real(state: ComplexState) -> RealState:
    psi = state.psi
    q = np.empty(2 * len(psi))
    q[0::2] = psi.real
    q[1::2] = psi.imag
    return RealState(q)


def probabilities(state: ComplexState) -> np.ndarray:
    """Channel probabilities ``|psi_a|**2``."""
    psi = state.psi
    return psi.real**2 + psi.imag**2


def standard_complex_structure(n_c: int) -> ComplexStructure:
    """``K`` conjugates and ``I`` multiplies by ``i`` in the interleaved pairing."""
    if n_c < 1:
        raise ContractViolation("need at least one channel")
    eye = np.eye(n_c)
    K = np.kron(eye, np.array([[1.0, 0.0], [0.0, -1.0]]))
    I = np.kron(eye, np.array([[0.0, -1.0], [1.0, 0.0]]))
    return ComplexStructure(K, I)


def real_embedding(u) -> np.ndarray:
    """Real ``2n x 2n`` matrix acting on ``q`` as ``u`` acts on ``psi``."""
    u = np.asarray(u, dtype=complex)
    return np.kron(u.real, np.eye(2)) + np.kron(u.imag, np.array([[0.0, -1.0], [1.0, 0.0]]))


def complex_form(s) -> np.ndarray:
    """Complex matrix of a real matrix commuting with the standard ``I``.

    Reads off ``Re u[a, b] = s[2a, 2b]`` and ``Im u[a, b] = s[2a+1, 2b]``. Only
    meaningful for compatible ``s``; check with :func:`is_compatible` first.
    """
    s = np.asarray(s, dtype=float)
    return s[0::2, 0::2] + 1j * s[1::2, 0::2]


def is_compatible(s, cs: ComplexStructure, tol: float = MATRIX_TOL) -> bool:
    """True when the orthogonal step ``s`` commutes with ``cs.I``.

    Such a step is represented by a unitary on the complex wave function.
    """
    s = np.asarray(s, dtype=float)
    if s.shape != cs.I.shape:
        raise ContractViolation(f"step shape {s.shape} does not match {cs.I.shape}")
    if np.max(np.abs(s.T @ s - np.eye(len(s)))) > tol:
        raise ContractViolation("step is not orthogonal")
    return bool(np.max(np.abs(s @ cs.I - cs.I @ s)) <= tol)
