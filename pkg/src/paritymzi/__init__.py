"""Parity-detection phase estimation for a Mach-Zehnder interferometer fed
with a coherent state and a (photon-added / photon-subtracted) squeezed
vacuum."""

from .errors import DegenerateStateError, TruncationError, UnattainableTargetError
from .states import Kind, Scenario, StateSpec

__version__ = "0.1.0"

__all__ = [
    "DegenerateStateError",
    "Kind",
    "Scenario",
    "StateSpec",
    "TruncationError",
    "UnattainableTargetError",
    "__version__",
]
