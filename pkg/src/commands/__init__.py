"""Typed command objects behind the CLI and their registry."""

from .base_command import BaseCommand, CommandDescriptor, CommandExecutionError, CommandInput
from .builtin_loader import load_builtin_commands
from .registry import CommandAlreadyRegisteredError, CommandNotFoundError, CommandRegistry

__all__ = [
    "BaseCommand",
    "CommandAlreadyRegisteredError",
    "CommandDescriptor",
    "CommandExecutionError",
    "CommandInput",
    "CommandNotFoundError",
    "CommandRegistry",
    "load_builtin_commands",
]
