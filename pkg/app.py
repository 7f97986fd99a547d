import logging
import sys
from typing import Iterable, Optional, Sequence

from dotenv import load_dotenv

from src.cli import run as run_cli
from src.commands import CommandRegistry, load_builtin_commands
from src.utils.config_loader import DEFAULT_PATHS, load_settings

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"


class WorkbenchApp:
    def __init__(self, config_paths: Optional[Iterable[str]] = None):

        # step 0: load env (SKWB_THREADS and anything the config expands)
        load_dotenv()

        # step 1: load config
        self.config_paths = tuple(config_paths) if config_paths else DEFAULT_PATHS
        self.settings = load_settings(self.config_paths)

        # step 2: logging on stderr, stdout carries the report only
        logging.basicConfig(format=LOG_FORMAT, stream=sys.stderr, level=self.settings.logging.level)

        # step 3: create and register commands
        self.registry = CommandRegistry()
        load_builtin_commands(self.registry)

    def run(self, argv: Sequence[str]) -> int:
        return run_cli(argv, self)

    def close(self):
        logging.getLogger(__name__).debug("workbench closed")

    def __enter__(self) -> "WorkbenchApp":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
