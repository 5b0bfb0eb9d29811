"""Coverability and reachability for vector addition systems with states."""

from .core import (
    COVER,
    REACH,
    Configuration,
    Instance,
    Run,
    Transition,
    Vass,
    apply_path,
    instance_size,
    step,
    to_unary,
    validate,
)

__all__ = [
    "COVER",
    "REACH",
    "Configuration",
    "Instance",
    "Run",
    "Transition",
    "Vass",
    "apply_path",
    "instance_size",
    "step",
    "to_unary",
    "validate",
]
