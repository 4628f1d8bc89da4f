"""Exception types shared across the package."""


class TangleQECError(Exception):
    """Base class for all domain errors."""


class DimensionError(TangleQECError):
    """Operands act on different qubit counts."""


class UnsupportedGateError(TangleQECError):
    """Instruction outside the supported Clifford set for this operation."""


class CapacityError(TangleQECError):
    """Problem size exceeds a hard implementation bound."""


class DepthError(TangleQECError):
    """Schedules of differing depth were combined."""


class ScheduleConflictError(TangleQECError):
    """Condition (a) violated: a qubit is touched twice in one step."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__(f"schedule clashes at (step, qubit): {self.violations}")


class NotAForestError(TangleQECError):
    """The tangling graph contains a cycle."""

    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__(f"tangling graph has a cycle: {self.cycle}")


class PreconditionError(TangleQECError):
    """An operation-specific precondition failed."""


class ParseError(TangleQECError):
    """Circuit text could not be parsed."""

    def __init__(self, message, line=None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


class LayoutError(TangleQECError):
    """A patch layout request is unsupported or inconsistent."""


class DetectorError(TangleQECError):
    """A declared detector is not deterministic in the noiseless circuit."""


class GraphlikeRequiredError(TangleQECError):
    """A matching decoder received a hypergraph mechanism."""


class CorrectionPendingError(TangleQECError):
    """A tangled experiment was requested with too few rounds to resolve
    the Clifford correction into a Pauli."""
