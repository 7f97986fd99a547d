# src/commands/builtin_loader.py
from .converse import MarginCommand, Theorem4Command
from .hc import FunctionalCommand, HcCheckCommand, SdpiCommand
from .oneshot import BoundsCommand, ParamsCommand
from .region import (
    CapacityCommand,
    CrCommand,
    MaxformCommand,
    MaximizeCommand,
    OneWayCommand,
    Theorem1Command,
    Theorem2Command,
)
from .simulate import ExactCommand, MonteCarloCommand, SoundnessCommand


def load_builtin_commands(registry):
    # Rate regions
    registry.register_command(Theorem1Command())
    registry.register_command(Theorem2Command())
    registry.register_command(OneWayCommand())
    registry.register_command(CrCommand())
    registry.register_command(MaxformCommand())
    registry.register_command(CapacityCommand())
    registry.register_command(MaximizeCommand())

    # One-shot bounds
    registry.register_command(BoundsCommand())
    registry.register_command(ParamsCommand())

    # Simulation
    registry.register_command(ExactCommand())
    registry.register_command(MonteCarloCommand())
    registry.register_command(SoundnessCommand())

    # Hypercontractivity
    registry.register_command(HcCheckCommand())
    registry.register_command(FunctionalCommand())
    registry.register_command(SdpiCommand())

    # Converse
    registry.register_command(Theorem4Command())
    registry.register_command(MarginCommand())
