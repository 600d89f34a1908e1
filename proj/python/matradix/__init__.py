"""Matrix radix systems: expansions, cycles, attractors, spectra and solenoids."""

from ._matradix import (
    MatradixError,
    RadixSystem,
    SystemConfig,
    group_relation_holds,
    hadamard,
    load_config,
    spectrum,
)

__all__ = [
    "MatradixError",
    "RadixSystem",
    "SystemConfig",
    "group_relation_holds",
    "hadamard",
    "load_config",
    "spectrum",
]
