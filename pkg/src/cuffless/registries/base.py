"""Interface of a versioned baseline-model store."""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from ..estimation.baselines import BaselineModel


class BaseRegistry(ABC):
    """Stores trained baselines under a name, one integer version per upload.

    Versions start at 1 and only grow. A model is looked up by name and
    version, or by name alone for the newest version.
    """

    @abstractmethod
    def register(self, name: str, model: BaselineModel) -> int:
        """Store `model` as the next version of `name`.

        Returns:
            The new version, or the newest existing one when `model` is
            identical to it.

        Raises:
            InvalidModelNameError: For an empty name or one with path characters.
            RegistryError: If the store cannot be written.
        """
        ...

    @abstractmethod
    def get(
        self,
        name: str,
        version: int | None = None,
        *,
        expected_schema_hash: str | None = None,
    ) -> BaselineModel:
        """Load version `version` of `name`, the newest when None.

        Raises:
            ModelNotFoundError: For an unknown name or version.
            SchemaMismatchError: When `expected_schema_hash` is given and the
                stored model was trained on other feature columns.
            RegistryError: If the store cannot be read.
        """
        ...

    @abstractmethod
    def list_versions(self, name: str) -> list[int]:
        """Ascending versions of `name`; empty for an unknown name."""
        ...

    @abstractmethod
    def exists(self, name: str) -> bool:
        """True once any version of `name` has been stored."""
        ...
