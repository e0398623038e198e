"""Base record loader and its configuration."""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from contextlib import contextmanager
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Generator, Literal

from ..exceptions import (
    LoaderConfigError,
    RecordError,
    RecordSourceError,
    quality_warning,
)
from ..records import SignalRecord, sort_records

LoaderMode = Literal["raise", "skip"]


@dataclass(frozen=True)
class RecordLoaderConfig:
    """Configuration shared by record loaders.

    Args:
        mode: "raise" stops at the first malformed record. "skip" drops it with
            a `QualityWarning` and keeps loading. Defaults to "raise".
    """

    mode: LoaderMode = "raise"

    def __post_init__(self) -> None:
        if self.mode not in {"raise", "skip"}:
            raise LoaderConfigError("mode must be one of 'raise' or 'skip'.")


class BaseRecordLoader(ABC):
    """Abstract base class for record loaders.

    Subclasses implement `_load_unsorted`; `load` validates the source and
    returns records in subject/visit order.
    """

    #: Whether the source is a directory (True) or a single file (False).
    expects_directory: bool = False

    def __init__(
        self,
        config: RecordLoaderConfig | None = None,
        logger: logging.Logger | None = None,
    ) -> None:
        self.config = config or RecordLoaderConfig()
        self.logger = logger or logging.getLogger("cuffless.ingest")
        self._current_source: str | None = None
        self.skipped = 0

    def load(self, path: str | Path) -> list[SignalRecord]:
        """Load every parseable record under `path`.

        Raises:
            RecordSourceError: If `path` is missing or of the wrong kind.
            RecordError: In "raise" mode, for the first malformed record.
        """
        source = Path(path)
        if not source.exists():
            raise RecordSourceError(f"Record source '{source}' does not exist.")
        if self.expects_directory and not source.is_dir():
            raise RecordSourceError(f"Record source '{source}' must be a directory.")
        if not self.expects_directory and not source.is_file():
            raise RecordSourceError(f"Record source '{source}' must be a file.")

        self.skipped = 0
        records = sort_records(self._load_unsorted(source))
        self.logger.info(
            f"Loaded {len(records)} records from {source} ({self.skipped} skipped)"
        )
        return records

    @abstractmethod
    def _load_unsorted(self, source: Path) -> list[SignalRecord]: ...

    @contextmanager
    def load_context(
        self,
        *,
        mode: LoaderMode | None = None,
        source: str | None = None,
    ) -> Generator[None, None, None]:
        """Temporarily set the loading mode and the source label for messages."""
        previous_config = self.config
        previous_source = self._current_source
        try:
            if mode is not None:
                self.config = replace(self.config, mode=mode)
            if source is not None:
                self._current_source = source
            yield
        finally:
            self.config = previous_config
            self._current_source = previous_source

    def _handle(self, error: RecordError) -> None:
        """Raise `error` in "raise" mode; otherwise warn and count the skip."""
        if self.config.mode == "raise":
            raise error
        self.skipped += 1
        message = f"Skipping malformed record: {error}"
        self.logger.warning(message)
        quality_warning(message, filename=self._current_source or "cuffless.ingest")
