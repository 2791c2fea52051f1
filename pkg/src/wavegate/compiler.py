"""Lowering of qubit gates to correlation gates, plus the tensor-product oracle.

Channel ``alpha`` (1-based) labels the bit list given by the bitwise
complement of the big-endian binary form of ``alpha - 1``; for three qubits
channels 1..8 are (1,1,1), (1,1,0), ..., (0,0,0). A bit of 1 means spin up,
``s_j = +1``. With this labelling the qubit-ordered Kronecker product of 2x2
factors is indexed directly by ``alpha - 1``, bit 1 being the upper component.

CNOT follows the control-on-zero convention: the target bit is flipped on the
channels whose control bit is 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Optional, Sequence, Union

import numpy as np

from .errors import ChannelRangeError, ContractViolation
from .gates import BeamSplit, CorrelationGate, PhaseShift, Switch, cis

DEFAULT_ROTATION = math.pi / 4


@dataclass(frozen=True)
class Rotation:
    j: int
    delta: float = DEFAULT_ROTATION


@dataclass(frozen=True)
class Hadamard:
    j: int


@dataclass(frozen=True)
class Cnot:
    control: int
    target: int

    def __post_init__(self):
        if self.control == self.target:
            raise ContractViolation("CNOT control and target must differ")


QubitGate = Union[Rotation, Hadamard, Cnot]


def _check_qubit(j: int, mq: int) -> None:
    if not 1 <= j <= mq:
        raise ChannelRangeError(f"qubit {j} outside 1..{mq}")


def channel_to_bits(alpha: int, mq: int) -> tuple[int, ...]:
    if not 1 <= alpha <= 2**mq:
        raise ChannelRangeError(f"channel {alpha} outside 1..{2**mq}")
    k = alpha - 1
    return tuple(1 - ((k >> (mq - 1 - i)) & 1) for i in range(mq))


def bits_to_channel(bits: Sequence[int], mq: Optional[int] = None) -> int:
    mq = len(bits) if mq is None else mq
    if len(bits) != mq or any(b not in (0, 1) for b in bits):
        raise ContractViolation(f"invalid bit list {tuple(bits)} for {mq} qubits")
    k = 0
    for b in bits:
        k = (k << 1) | (1 - b)
    return k + 1


def bit_table(mq: int) -> np.ndarray:
    """Array ``t[alpha - 1, j - 1]`` of bits for every channel."""
    k = np.arange(2**mq)[:, None]
    shifts = np.arange(mq - 1, -1, -1)[None, :]
    return 1 - ((k >> shifts) & 1)


def _channels_with_bit(j: int, value: int, mq: int) -> np.ndarray:
    return np.flatnonzero(bit_table(mq)[:, j - 1] == value) + 1


def _partner(alpha: int, j: int, mq: int) -> int:
    """Channel whose bit list differs from ``alpha`` only at qubit ``j``."""
    return ((alpha - 1) ^ (1 << (mq - j))) + 1


def compile_rotation(j: int, delta: float, mq: int) -> PhaseShift:
    """Phase ``delta`` on every channel whose bit ``j`` is 0."""
    _check_qubit(j, mq)
    return PhaseShift({int(a): delta for a in _channels_with_bit(j, 0, mq)})


def compile_cnot(control: int, target: int, mq: int) -> list[Switch]:
    """``2**(mq-2)`` disjoint switches flipping the target where the control bit is 0."""
    if mq < 2:
        raise ContractViolation("CNOT needs at least two qubits")
    _check_qubit(control, mq)
    _check_qubit(target, mq)
    if control == target:
        raise ContractViolation("CNOT control and target must differ")
    table = bit_table(mq)
    lows = np.flatnonzero((table[:, control - 1] == 0) & (table[:, target - 1] == 1)) + 1
    return [Switch(int(a), _partner(int(a), target, mq)) for a in lows]


def compile_hadamard(
    j: int, mq: int, split_phases: Optional[tuple[float, float, float, float]] = None
) -> list[CorrelationGate]:
    """``2**(mq-1)`` disjoint beam splits pairing channels that differ in bit ``j``.

    With ``split_phases = (gamma, gamma_p, delta, delta_p)`` the splits use those
    phases and are wrapped in correcting phase shifts, so the product is still
    the Hadamard gate on qubit ``j``.
    """
    _check_qubit(j, mq)
    ups = _channels_with_bit(j, 1, mq)
    pairs = [(int(a), _partner(int(a), j, mq)) for a in ups]
    if split_phases is None:
        return [BeamSplit(a, b) for a, b in pairs]
    g, gp, d, dp = split_phases
    splits = [BeamSplit(a, b, g, gp, d, dp) for a, b in pairs]
    pre = {}
    post = {}
    for a, b in pairs:
        pre[a], pre[b] = -g, -gp
        post[b] = -(d - g)
    return [PhaseShift(pre), *splits, PhaseShift(post)]


def compile_gate(g: Union[QubitGate, CorrelationGate], mq: int) -> list[CorrelationGate]:
    if isinstance(g, Rotation):
        return [compile_rotation(g.j, g.delta, mq)]
    if isinstance(g, Hadamard):
        return compile_hadamard(g.j, mq)
    if isinstance(g, Cnot):
        return list(compile_cnot(g.control, g.target, mq))
    return [g]


def compile_circuit(circuit) -> list[CorrelationGate]:
    """Lower every instruction of a circuit; channel-level gates pass through."""
    out: list[CorrelationGate] = []
    for pos, inst in enumerate(circuit.instructions, start=1):
        try:
            out.extend(compile_gate(inst, circuit.mq))
        except (ContractViolation, ChannelRangeError) as exc:
            raise type(exc)(f"instruction {pos} ({inst!r}): {exc}") from exc
    return out


_P_UP = np.array([[1, 0], [0, 0]], dtype=complex)
_P_DOWN = np.array([[0, 0], [0, 1]], dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def _kron_all(factors) -> np.ndarray:
    return reduce(np.kron, factors, np.eye(1, dtype=complex))


def _embed(ops: dict[int, np.ndarray], mq: int) -> np.ndarray:
    eye = np.eye(2, dtype=complex)
    return _kron_all(ops.get(j, eye) for j in range(1, mq + 1))


def qubit_gate_matrix(g: QubitGate, mq: int) -> np.ndarray:
    """Dense tensor-product matrix of a qubit gate, built from 2x2 factors."""
    if isinstance(g, Rotation):
        _check_qubit(g.j, mq)
        return _embed({g.j: np.diag([1, cis(g.delta)])}, mq)
    if isinstance(g, Hadamard):
        _check_qubit(g.j, mq)
        return _embed({g.j: _H}, mq)
    if isinstance(g, Cnot):
        _check_qubit(g.control, mq)
        _check_qubit(g.target, mq)
        flip = _embed({g.control: _P_DOWN, g.target: _X}, mq)
        keep = _embed({g.control: _P_UP}, mq)
        return flip + keep
    raise TypeError(f"not a qubit gate: {g!r}")
