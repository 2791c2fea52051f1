"""Exception hierarchy shared by the library and the CLI."""


class WavegateError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateIntensityError(WavegateError, ValueError):
    """All field values vanish, so no probability distribution exists."""


class ContractViolation(WavegateError, ValueError):
    """An input does not satisfy a documented precondition."""


class ChannelRangeError(WavegateError, IndexError):
    """A channel or qubit index lies outside the valid range."""


class UnitarityError(WavegateError, ValueError):
    """Beam split phases (or a generic matrix) do not give a unitary map."""


class BranchAmbiguityError(WavegateError, ValueError):
    """The principal matrix logarithm is not unique (eigenvalue at -1)."""


class UndefinedPhaseError(WavegateError, ValueError):
    """The phase of a zero field is undefined."""


class CircuitSyntaxError(WavegateError):
    """Malformed circuit text. Carries a 1-based line and column."""

    def __init__(self, message: str, line: int, column: int = 1):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class CircuitRangeError(CircuitSyntaxError):
    """An index in the circuit text is out of range for the declared qubits."""


class CircuitUnitarityError(CircuitSyntaxError):
    """Explicit BSPLIT phases in the circuit text violate the unitarity relation."""
