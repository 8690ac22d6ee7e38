"""Logic-level circuit simulator with pluggable component models and board profiles."""

from .components import (
    CONFLICT,
    FLOATING,
    HIGH,
    LOW,
    MODELS,
    ActionError,
    ComponentModel,
    NetValue,
    analog,
    register_model,
    resolve_net,
)
from .core import (
    DEFAULT_INSTANT_BUDGET,
    Event,
    ObserveError,
    SimInstance,
    SimSetupError,
    Snapshot,
    advance,
    new_sim,
    observe,
    observe_snapshot,
    serial_text_at,
)
from .profile import ARDUINO_UNO, BoardProfile, ProfileError, builtin_profile, load_profile

__all__ = [
    "ARDUINO_UNO", "ActionError", "DEFAULT_INSTANT_BUDGET", "BoardProfile", "CONFLICT", "ComponentModel", "Event",
    "FLOATING", "HIGH", "LOW", "MODELS", "NetValue", "ObserveError", "ProfileError",
    "SimInstance", "SimSetupError", "Snapshot", "advance", "analog", "builtin_profile",
    "load_profile", "new_sim", "observe", "observe_snapshot", "register_model",
    "resolve_net", "serial_text_at",
]
