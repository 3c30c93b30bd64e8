"""Output format base classes and the handler registry."""

import logging
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, List, Union

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class BaseFormatHandler(ABC):
    """Reads and writes one artifact format.

    Example:
        >>> class TextHandler(BaseFormatHandler):
        ...     @property
        ...     def supported_extensions(self):
        ...         return [".txt"]
        ...
        ...     def read(self, source):
        ...         return Path(source).read_text()
        ...
        ...     def write(self, data, destination):
        ...         Path(destination).write_text(data)
        ...         return Path(destination)
    """

    @property
    @abstractmethod
    def supported_extensions(self) -> List[str]:
        """Return list of supported file extensions."""

    @abstractmethod
    def read(self, source: PathLike) -> Any:
        """Read an artifact back."""

    @abstractmethod
    def write(self, data: Any, destination: PathLike) -> Path:
        """Write ``data`` and return the written path."""

    def can_handle(self, path: PathLike) -> bool:
        """True if the file extension is supported."""
        path_str = str(path).lower()
        return any(path_str.endswith(ext.lower()) for ext in self.supported_extensions)

    @staticmethod
    def _prepare(destination: PathLike) -> Path:
        target = Path(destination)
        target.parent.mkdir(parents=True, exist_ok=True)
        return target


class FormatRegistry:
    """Maps file extensions to handlers.

    Example:
        >>> registry = FormatRegistry()
        >>> registry.register(CSVCurveHandler())
        >>> handler = registry.get_handler("sweep.csv")
    """

    def __init__(self):
        self._handlers: Dict[str, BaseFormatHandler] = {}

    def register(self, handler: BaseFormatHandler, override: bool = False) -> None:
        """Register a handler for all its extensions.

        Raises:
            ValueError: If an extension is already registered and override=False.
        """
        for ext in handler.supported_extensions:
            ext_lower = ext.lower()
            if ext_lower in self._handlers and not override:
                raise ValueError(f"Extension {ext} is already registered")
            self._handlers[ext_lower] = handler

    def get_handler(self, path: PathLike) -> BaseFormatHandler:
        """Handler for a file path.

        Raises:
            ValueError: If no handler matches the file extension.
        """
        path_str = str(path).lower()
        for ext, handler in self._handlers.items():
            if path_str.endswith(ext):
                return handler
        raise ValueError(f"No handler found for file: {path}")

    def get_supported_extensions(self) -> List[str]:
        return list(self._handlers)

    def is_supported(self, path: PathLike) -> bool:
        path_str = str(path).lower()
        return any(path_str.endswith(ext) for ext in self._handlers)


_global_registry = FormatRegistry()


def register_handler(handler: BaseFormatHandler, override: bool = False) -> None:
    """Register a handler with the global registry."""
    _global_registry.register(handler, override)


def get_handler(path: PathLike) -> BaseFormatHandler:
    """Handler for ``path`` from the global registry."""
    return _global_registry.get_handler(path)


def is_supported(path: PathLike) -> bool:
    """Check if a file type is supported by the global registry."""
    return _global_registry.is_supported(path)
