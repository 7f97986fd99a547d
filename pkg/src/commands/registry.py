from __future__ import annotations

import logging
from typing import Dict, Iterable, List, Optional, Set

from .base_command import BaseCommand, CommandDescriptor

logger = logging.getLogger(__name__)


class CommandAlreadyRegisteredError(Exception):
    pass


class CommandNotFoundError(Exception):
    pass


class CommandRegistry:
    """
    Central registry of workbench commands, unique by dotted name
    ("region.maximize", "simulate.exact", ...).

    The CLI maps each "<group> <action>" pair onto the command "<group>.<action>".
    """

    def __init__(self) -> None:
        self._commands: Dict[str, BaseCommand] = {}

    # Registration --------------------------------------------------------------

    def register_command(self, command: BaseCommand) -> None:
        """Register a command instance by its unique name."""
        name = command.name
        if name in self._commands:
            logger.warning(f"Attempted to register '{name}', but it's already registered.")
            raise CommandAlreadyRegisteredError(f"Command '{name}' is already registered.")
        self._commands[name] = command
        logger.info(f"Command '{name}' registered successfully.")

    def bulk_register(self, commands: Iterable[BaseCommand]) -> None:
        """Register multiple commands; fails fast on duplicates."""
        for c in commands:
            self.register_command(c)

    # Lookup -------------------------------------------------------------------

    def get_command(self, name: str) -> BaseCommand:
        try:
            return self._commands[name]
        except KeyError as e:
            raise CommandNotFoundError(f"Command '{name}' is not registered.") from e

    def has_command(self, name: str) -> bool:
        return name in self._commands

    # Listing and metadata ------------------------------------------------------

    def list_command_names(self, *, tags: Optional[Set[str]] = None) -> List[str]:
        """List command names; optionally filter by tags (command must include all provided tags)."""
        if tags:
            return sorted(name for name, c in self._commands.items() if tags.issubset(set(c.tags)))
        return sorted(self._commands.keys())

    def groups(self) -> Dict[str, List[str]]:
        """Actions available under each command group."""
        out: Dict[str, List[str]] = {}
        for name in self.list_command_names():
            group, _, action = name.partition(".")
            out.setdefault(group, []).append(action)
        return out

    def list_descriptors(self, *, tags: Optional[Set[str]] = None) -> List[CommandDescriptor]:
        return [self._commands[n].to_descriptor() for n in self.list_command_names(tags=tags)]
