class DegenerateStateError(ValueError):
    """The requested squeezed-port state is the zero vector (b^l acting on vacuum)."""


class TruncationError(ValueError):
    """A Fock-space cutoff is too small for the requested tail bound."""

    def __init__(self, message: str, suggested_cutoff: int | None = None):
        super().__init__(message)
        self.suggested_cutoff = suggested_cutoff


class UnattainableTargetError(ValueError):
    """A target mean photon number lies below the minimum reachable value."""

    def __init__(self, message: str, minimum: float):
        super().__init__(message)
        self.minimum = minimum
