"""Exception types shared across the package."""


class TanglekitError(Exception):
    """Base class for all errors raised by tanglekit."""


class DimensionError(TanglekitError, ValueError):
    """Input has the wrong number of qubits or an incompatible shape."""


class ParameterError(TanglekitError, ValueError):
    """A scalar argument is outside its admissible range."""


class DegenerateInputError(TanglekitError, ValueError):
    """Input is structurally degenerate (e.g. an all-zero amplitude vector)."""


class ConsistencyError(TanglekitError):
    """An internal cross-check failed (values that must agree do not)."""


class IncompleteTableError(TanglekitError, ValueError):
    """A correlator table is missing entries required by a contraction."""

    def __init__(self, missing):
        self.missing = list(missing)
        super().__init__(f"correlator table is missing {len(self.missing)} strings: "
                         + ", ".join(map(str, self.missing[:8]))
                         + ("..." if len(self.missing) > 8 else ""))


class FilterSpecError(TanglekitError, ValueError):
    """A multi-copy filter specification is malformed."""


class StateFileError(TanglekitError, ValueError):
    """A state or density-matrix file could not be parsed."""


class NumericalError(TanglekitError):
    """A numerical procedure produced non-finite or unusable results."""


class NumericalStabilityError(NumericalError):
    """A numerical procedure failed to converge to the requested stability."""
