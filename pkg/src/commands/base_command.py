import abc
import logging
from dataclasses import dataclass
from typing import Any, Dict, FrozenSet, Generic, Optional, Type, TypeVar, Union

from pydantic import BaseModel, ConfigDict, ValidationError

from ..errors import WorkbenchError

logger = logging.getLogger(__name__)

# Type parameters for input/output models
TIn = TypeVar("TIn", bound=BaseModel)
TOut = TypeVar("TOut", bound=BaseModel)


class CommandExecutionError(WorkbenchError):
    """Raised when a command fails outside the workbench's own error hierarchy."""

    def __init__(self, message: str, *, cause: Optional[BaseException] = None, exit_status: int = 1) -> None:
        super().__init__(message)
        self.cause = cause
        self.exit_status = exit_status


class CommandInput(BaseModel):
    """Base for inputs that carry domain objects (sources, schemes) next to plain fields."""

    model_config = ConfigDict(arbitrary_types_allowed=True, extra="forbid")


@dataclass(frozen=True)
class CommandDescriptor:
    """
    A lightweight descriptor for discovery and for the CLI help text.
    """
    name: str
    description: str
    tags: FrozenSet[str]
    nats_fields: FrozenSet[str]
    output_schema: Dict[str, Any]


class BaseCommand(Generic[TIn, TOut], metaclass=abc.ABCMeta):
    """
    Base class for all workbench commands.

    - Strongly typed input/output via Pydantic models
    - Automatic input and output validation
    - `nats_fields` names the output fields measured in nats, which the report
      layer converts when bits are requested
    """

    name: str
    description: str
    input_model: Type[TIn]
    output_model: Type[TOut]
    nats_fields: FrozenSet[str] = frozenset()
    tags: FrozenSet[str] = frozenset()

    def __init__(self) -> None:
        if not getattr(self, "name", None):
            raise ValueError(f"{self.__class__.__name__} must define a non-empty 'name'.")
        if not getattr(self, "description", None):
            raise ValueError(f"{self.__class__.__name__} must define a non-empty 'description'.")
        if not getattr(self, "input_model", None) or not issubclass(self.input_model, BaseModel):
            raise ValueError(f"{self.__class__.__name__} must define 'input_model' as a Pydantic BaseModel subclass.")
        if not getattr(self, "output_model", None) or not issubclass(self.output_model, BaseModel):
            raise ValueError(f"{self.__class__.__name__} must define 'output_model' as a Pydantic BaseModel subclass.")
        unknown = set(self.nats_fields) - set(self.output_model.model_fields)
        if unknown:
            raise ValueError(f"{self.__class__.__name__} lists unknown nats fields {sorted(unknown)}.")

    # Public API ---------------------------------------------------------------

    def to_descriptor(self) -> CommandDescriptor:
        return CommandDescriptor(
            name=self.name,
            description=self.description,
            tags=frozenset(self.tags),
            nats_fields=frozenset(self.nats_fields),
            output_schema=self.output_model.model_json_schema(),
        )

    def __call__(self, data: Union[Dict[str, Any], TIn], *, context: Optional[Dict[str, Any]] = None) -> TOut:
        """
        Validate input, execute and validate the output.
        'context' can carry settings shared by every command of a run.
        """
        params = self._validate_input(data)
        return self._execute_with_handling(params, context=context)

    # To be implemented by subclasses -----------------------------------------

    @abc.abstractmethod
    def execute(self, params: TIn, *, context: Optional[Dict[str, Any]] = None) -> Union[TOut, Dict[str, Any]]:
        raise NotImplementedError

    # Helpers ------------------------------------------------------------------

    def _validate_input(self, data: Union[Dict[str, Any], TIn]) -> TIn:
        if isinstance(data, self.input_model):
            return data
        if isinstance(data, dict):
            try:
                return self.input_model.model_validate(data)
            except ValidationError as ve:
                raise CommandExecutionError(f"Invalid input for command '{self.name}': {ve}", cause=ve, exit_status=2) from ve
        raise CommandExecutionError(
            f"Invalid input type for command '{self.name}': expected dict or {self.input_model.__name__}, got {type(data)}",
            exit_status=2,
        )

    def _execute_with_handling(self, params: TIn, *, context: Optional[Dict[str, Any]]) -> TOut:
        try:
            result = self.execute(params, context=context)
        except WorkbenchError:
            # Re-raise the workbench's own errors unchanged
            raise
        except Exception as e:
            logger.debug("command %s raised", self.name, exc_info=True)
            raise CommandExecutionError(f"Command '{self.name}' failed: {e}", cause=e) from e

        # Validate output against declared output_model
        try:
            if isinstance(result, self.output_model):
                return result
            if isinstance(result, dict):
                return self.output_model.model_validate(result)
        except ValidationError as ve:
            raise CommandExecutionError(f"Invalid output from command '{self.name}': {ve}", cause=ve) from ve

        raise CommandExecutionError(
            f"Invalid output type from command '{self.name}': expected dict or {self.output_model.__name__}, got {type(result)}"
        )
