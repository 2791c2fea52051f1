"""Spin expectations, operator expectations, Heisenberg picture and CHSH."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .compiler import bit_table
from .errors import ChannelRangeError, ContractViolation
from .gates import CorrelationGate, compose
from .state import ComplexState

TAU1 = np.array([[0, 1], [1, 0]], dtype=complex)
TAU3 = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True)
class SpinObservable:
    """Product ``s_j1 * s_j2 * ...`` of Ising spins (1-based qubits)."""

    qubits: tuple[int, ...]

    def __post_init__(self):
        qubits = tuple(int(j) for j in self.qubits)
        if not qubits:
            raise ContractViolation("spin observable needs at least one qubit")
        if len(set(qubits)) != len(qubits):
            raise ContractViolation(f"repeated qubit in {qubits}")
        object.__setattr__(self, "qubits", qubits)

    @classmethod
    def parse(cls, label: str) -> "SpinObservable":
        """``"s1s3"`` -> qubits (1, 3)."""
        parts = label.strip().lower().split("s")
        if parts[0] != "" or len(parts) < 2 or not all(p.isdigit() for p in parts[1:]):
            raise ContractViolation(f"bad observable label {label!r}")
        return cls(tuple(int(p) for p in parts[1:]))

    @property
    def label(self) -> str:
        return "".join(f"s{j}" for j in self.qubits)


def default_observables(mq: int) -> list[SpinObservable]:
    """Every single spin and every pair."""
    singles = [SpinObservable((j,)) for j in range(1, mq + 1)]
    pairs = [SpinObservable(p) for p in combinations(range(1, mq + 1), 2)]
    return singles + pairs


def spin_signs(obs: SpinObservable, mq: int) -> np.ndarray:
    """Eigenvalue of the spin product on every channel; a diagonal operator."""
    for j in obs.qubits:
        if not 1 <= j <= mq:
            raise ChannelRangeError(f"qubit {j} outside 1..{mq}")
    s = 2 * bit_table(mq)[:, [j - 1 for j in obs.qubits]] - 1
    return np.prod(s, axis=1).astype(float)


def spin_expectation(pbar, obs: SpinObservable, mq: int) -> float:
    pbar = np.asarray(pbar, dtype=float)
    if len(pbar) != 2**mq:
        raise ContractViolation(f"expected {2**mq} probabilities, got {len(pbar)}")
    if abs(pbar.sum() - 1.0) > 1e-9:
        raise ContractViolation(f"probabilities sum to {pbar.sum()!r}")
    return float(pbar @ spin_signs(obs, mq))


def operator_expectation(state: ComplexState, op, tol: float = 1e-10) -> float:
    op = np.asarray(op, dtype=complex)
    if np.max(np.abs(op - op.conj().T)) > tol:
        raise ContractViolation("operator is not Hermitian")
    psi = state.psi
    value = np.vdot(psi, op @ psi)
    if abs(value.imag) > tol:
        raise ContractViolation(f"expectation has imaginary part {value.imag:.3e}")
    return float(value.real)


def heisenberg_operator(op, gates: Sequence[CorrelationGate], n_c: int) -> np.ndarray:
    """``U op U^dagger`` with ``U`` the composed gate list.

    Its expectation in the evolved state equals the expectation of ``op``
    in the state before the gates.
    """
    u = compose(gates, n_c)
    return u @ np.asarray(op, dtype=complex) @ u.conj().T


def embed_single(op, j: int, mq: int) -> np.ndarray:
    """2x2 ``op`` on qubit ``j``, identity on the others."""
    factors = [np.eye(2, dtype=complex)] * mq
    factors[j - 1] = np.asarray(op, dtype=complex)
    out = np.eye(1, dtype=complex)
    for f in factors:
        out = np.kron(out, f)
    return out


def xz_setting(theta: float) -> np.ndarray:
    """Spin measurement direction at angle ``theta`` in the x-z plane."""
    return math.cos(theta) * TAU3 + math.sin(theta) * TAU1


def _check_setting(op) -> None:
    op = np.asarray(op, dtype=complex)
    if op.shape != (2, 2) or np.max(np.abs(op - op.conj().T)) > 1e-10:
        raise ContractViolation("setting must be a Hermitian 2x2 matrix")
    if np.max(np.abs(np.abs(np.linalg.eigvalsh(op)) - 1)) > 1e-10:
        raise ContractViolation("setting eigenvalues must be +1 and -1")


def chsh_value(
    state: ComplexState,
    settings: Sequence,
    qubits: tuple[int, int] = (1, 2),
) -> float:
    """``|<AB> + <AB'> + <A'B> - <A'B'>|`` with ``A, A'`` on qubit a, ``B, B'`` on b."""
    mq = state.mq
    a, b = qubits
    if mq < 2 or a == b or not (1 <= a <= mq and 1 <= b <= mq):
        raise ContractViolation(f"invalid CHSH qubits {qubits} for {mq} qubits")
    if len(settings) != 4:
        raise ContractViolation("need four settings (A, A', B, B')")
    for s in settings:
        _check_setting(s)
    A, Ap, B, Bp = (np.asarray(s, dtype=complex) for s in settings)

    def corr(x, y):
        return operator_expectation(state, embed_single(x, a, mq) @ embed_single(y, b, mq))

    return abs(corr(A, B) + corr(A, Bp) + corr(Ap, B) - corr(Ap, Bp))


def search_chsh_angles(
    state: ComplexState, qubits: tuple[int, int] = (1, 2), steps: int = 16
) -> tuple[tuple[float, float, float, float], float]:
    """Brute-force grid search over x-z plane settings.

    Returns the angles ``(a, a', b, b')`` on a ``2*pi/steps`` grid that maximize
    the CHSH combination, and the maximum.
    """
    mq = state.mq
    qa, qb = qubits
    grid = np.arange(steps) * (2 * math.pi / steps)
    # correlator E(x, y) is bilinear in (cos, sin) of both angles
    basis = {(p, q): operator_expectation(
        state, embed_single(p_op, qa, mq) @ embed_single(q_op, qb, mq))
        for p, p_op in (("z", TAU3), ("x", TAU1))
        for q, q_op in (("z", TAU3), ("x", TAU1))}
    c, s = np.cos(grid), np.sin(grid)
    E = (
        np.outer(c, c) * basis["z", "z"]
        + np.outer(c, s) * basis["z", "x"]
        + np.outer(s, c) * basis["x", "z"]
        + np.outer(s, s) * basis["x", "x"]
    )
    # S[a, a', b, b'] = E[a,b] + E[a,b'] + E[a',b] - E[a',b']
    S = (
        E[:, None, :, None]
        + E[:, None, None, :]
        + E[None, :, :, None]
        - E[None, :, None, :]
    )
    S = np.abs(S)
    flat = int(np.argmax(S))
    ia, iap, ib, ibp = np.unravel_index(flat, S.shape)
    return (grid[ia], grid[iap], grid[ib], grid[ibp]), float(S.flat[flat])


@lru_cache(maxsize=None)
def optimal_bell_angles() -> tuple[float, float, float, float]:
    """Optimal x-z angles for the Bell state ``(|11> + |00>)/sqrt(2)``, found by search."""
    bell = ComplexState(np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2))
    angles, _ = search_chsh_angles(bell)
    return tuple(float(x) for x in angles)


def optimal_bell_settings() -> tuple[np.ndarray, ...]:
    return tuple(xz_setting(t) for t in optimal_bell_angles())


def expectations(state_or_pbar, observables: Iterable[SpinObservable], mq: int) -> dict[str, float]:
    if isinstance(state_or_pbar, ComplexState):
        pbar = state_or_pbar.psi.real**2 + state_or_pbar.psi.imag**2
    else:
        pbar = np.asarray(state_or_pbar, dtype=float)
    return {o.label: spin_expectation(pbar, o, mq) for o in observables}
