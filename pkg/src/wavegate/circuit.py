"""Circuit container and the line-based circuit text format.

Format::

    # comment
    qubits 3
    H 1
    ROT 2 pi/4          # angle optional, defaults to pi/4
    CNOT 1 2
    PHASE 5 3pi/2       # channel, angle
    SWITCH 2 3
    BSPLIT 1 2          # canonical split (= Hadamard)
    BSPLIT 1 2 0 0 pi/2 -pi/2

Qubit and channel indices are 1-based. Angles are decimal radians or
multiples of pi such as ``pi``, ``-pi/2``, ``3pi/4``, ``0.5pi``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .compiler import Cnot, Hadamard, QubitGate, Rotation
from .errors import (
    ChannelRangeError,
    CircuitRangeError,
    CircuitSyntaxError,
    CircuitUnitarityError,
    UnitarityError,
)
from .gates import BeamSplit, CorrelationGate, PhaseShift, Switch

MAX_QUBITS = 30

Instruction = Union[QubitGate, PhaseShift, Switch, BeamSplit]

_DECIMAL = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_PI = re.compile(
    r"(?P<sign>[+-])?(?P<num>\d+(?:\.\d*)?|\.\d+)?\*?pi(?:/(?P<den>\d+(?:\.\d*)?))?"
)
_INT = re.compile(r"[+-]?\d+")


@dataclass
class Circuit:
    mq: int
    instructions: list = field(default_factory=list)

    @property
    def n_c(self) -> int:
        return 2**self.mq

    def validate(self) -> None:
        """Raise :class:`ChannelRangeError` for any out-of-range index."""
        for pos, inst in enumerate(self.instructions, start=1):
            for kind, value in _indices(inst):
                limit = self.mq if kind == "qubit" else self.n_c
                if not 1 <= value <= limit:
                    raise ChannelRangeError(
                        f"instruction {pos}: {kind} {value} outside 1..{limit}"
                    )


def _indices(inst) -> list[tuple[str, int]]:
    if isinstance(inst, (Rotation, Hadamard)):
        return [("qubit", inst.j)]
    if isinstance(inst, Cnot):
        return [("qubit", inst.control), ("qubit", inst.target)]
    if isinstance(inst, PhaseShift):
        return [("channel", a) for a in inst.phases]
    if isinstance(inst, (Switch, BeamSplit)):
        return [("channel", inst.a), ("channel", inst.b)]
    raise TypeError(f"unknown instruction {inst!r}")


def parse_angle(text: str) -> float:
    """Parse a decimal radian literal or a pi multiple; raise ValueError otherwise."""
    t = text.strip().lower()
    if _DECIMAL.fullmatch(t):
        return float(t)
    m = _PI.fullmatch(t)
    if not m:
        raise ValueError(f"bad angle {text!r}")
    num = float(m["num"]) if m["num"] else 1.0
    den = float(m["den"]) if m["den"] else 1.0
    if den == 0:
        raise ValueError(f"zero denominator in angle {text!r}")
    value = num * math.pi / den
    return -value if m["sign"] == "-" else value


def format_angle(angle: float) -> str:
    """Canonical text for an angle; ``parse_angle`` recovers it exactly."""
    if angle == 0:
        return "0"
    frac = Fraction(angle / math.pi).limit_denominator(64)
    if frac != 0:
        n, d = abs(frac.numerator), frac.denominator
        text = ("-" if frac < 0 else "") + ("" if n == 1 else str(n)) + "pi" + (
            "" if d == 1 else f"/{d}"
        )
        if parse_angle(text) == angle:
            return text
    return repr(float(angle))


class _Line:
    def __init__(self, raw: str, lineno: int):
        self.lineno = lineno
        body = raw.split("#", 1)[0]
        self.tokens = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", body)]

    def fail(self, message: str, col: int = 1, cls=CircuitSyntaxError):
        raise cls(message, self.lineno, col)

    def integer(self, i: int, what: str) -> int:
        tok, col = self.tokens[i]
        if not _INT.fullmatch(tok):
            self.fail(f"expected integer {what}, got {tok!r}", col)
        return int(tok)

    def angle(self, i: int) -> float:
        tok, col = self.tokens[i]
        try:
            return parse_angle(tok)
        except ValueError:
            self.fail(f"bad angle {tok!r}", col)

    def arity(self, allowed: tuple[int, ...]) -> None:
        n = len(self.tokens) - 1
        if n not in allowed:
            op, col = self.tokens[0]
            want = " or ".join(str(a) for a in allowed)
            if n > max(allowed):
                col = self.tokens[max(allowed) + 1][1]
            self.fail(f"{op} takes {want} arguments, got {n}", col)


def parse_circuit(text: str) -> Circuit:
    mq = None
    instructions: list = []
    lines = text.splitlines()
    for lineno, raw in enumerate(lines, start=1):
        line = _Line(raw, lineno)
        if not line.tokens:
            continue
        head, hcol = line.tokens[0]
        op = head.upper()
        if mq is None:
            if head.lower() != "qubits":
                line.fail(f"expected 'qubits <count>' header, got {head!r}", hcol)
            line.arity((1,))
            mq = line.integer(1, "qubit count")
            if not 1 <= mq <= MAX_QUBITS:
                line.fail(
                    f"qubit count {mq} outside 1..{MAX_QUBITS}",
                    line.tokens[1][1],
                    CircuitRangeError,
                )
            continue
        instructions.append(_parse_instruction(line, op, mq))
    if mq is None:
        raise CircuitSyntaxError("missing 'qubits <count>' header", max(1, len(lines)), 1)
    return Circuit(mq, instructions)


def _parse_instruction(line: _Line, op: str, mq: int):
    n_c = 2**mq

    def qubit(i):
        j = line.integer(i, "qubit index")
        if not 1 <= j <= mq:
            line.fail(f"qubit {j} outside 1..{mq}", line.tokens[i][1], CircuitRangeError)
        return j

    def channel(i):
        a = line.integer(i, "channel index")
        if not 1 <= a <= n_c:
            line.fail(f"channel {a} outside 1..{n_c}", line.tokens[i][1], CircuitRangeError)
        return a

    col = line.tokens[0][1]
    if op == "H":
        line.arity((1,))
        return Hadamard(qubit(1))
    if op == "ROT":
        line.arity((1, 2))
        j = qubit(1)
        return Rotation(j, line.angle(2)) if len(line.tokens) == 3 else Rotation(j)
    if op == "CNOT":
        line.arity((2,))
        c, t = qubit(1), qubit(2)
        if c == t:
            line.fail("CNOT control and target must differ", line.tokens[2][1])
        if mq < 2:
            line.fail("CNOT needs at least two qubits", col, CircuitRangeError)
        return Cnot(c, t)
    if op == "PHASE":
        line.arity((2,))
        return PhaseShift({channel(1): line.angle(2)})
    if op == "SWITCH":
        line.arity((2,))
        a, b = channel(1), channel(2)
        if a == b:
            line.fail("SWITCH needs two distinct channels", line.tokens[2][1])
        return Switch(a, b)
    if op == "BSPLIT":
        line.arity((2, 6))
        a, b = channel(1), channel(2)
        if a == b:
            line.fail("BSPLIT needs two distinct channels", line.tokens[2][1])
        if len(line.tokens) == 3:
            return BeamSplit(a, b)
        phases = [line.angle(i) for i in range(3, 7)]
        try:
            return BeamSplit(a, b, *phases)
        except UnitarityError as exc:
            line.fail(str(exc), line.tokens[3][1], CircuitUnitarityError)
    if op == "QUBITS":
        line.fail("duplicate 'qubits' header", col)
    line.fail(f"unknown instruction {line.tokens[0][0]!r}", col)


def _format_instruction(inst) -> list[str]:
    if isinstance(inst, Hadamard):
        return [f"H {inst.j}"]
    if isinstance(inst, Rotation):
        return [f"ROT {inst.j} {format_angle(inst.delta)}"]
    if isinstance(inst, Cnot):
        return [f"CNOT {inst.control} {inst.target}"]
    if isinstance(inst, PhaseShift):
        return [f"PHASE {a} {format_angle(g)}" for a, g in inst.phases.items()]
    if isinstance(inst, Switch):
        return [f"SWITCH {inst.a} {inst.b}"]
    if isinstance(inst, BeamSplit):
        if inst.is_canonical:
            return [f"BSPLIT {inst.a} {inst.b}"]
        angles = " ".join(
            format_angle(x) for x in (inst.gamma, inst.gamma_p, inst.delta, inst.delta_p)
        )
        return [f"BSPLIT {inst.a} {inst.b} {angles}"]
    raise TypeError(f"cannot serialize {inst!r}")


def serialize_circuit(circuit: Circuit) -> str:
    lines = [f"qubits {circuit.mq}"]
    for inst in circuit.instructions:
        lines.extend(_format_instruction(inst))
    return "\n".join(lines) + "\n"


def format_gate(g: CorrelationGate) -> str:
    """One-line text form of a compiled gate (multi-channel phases on one line)."""
    if isinstance(g, PhaseShift):
        body = " ".join(f"{a}:{format_angle(v)}" for a, v in g.phases.items())
        return f"PHASE {body}".rstrip()
    if isinstance(g, (Switch, BeamSplit)):
        return _format_instruction(g)[0]
    return f"UNITARY {len(g.u)}x{len(g.u)}"


__all__ = [
    "Circuit",
    "format_angle",
    "format_gate",
    "parse_angle",
    "parse_circuit",
    "serialize_circuit",
]
