"""Baseline-model registry on any fsspec filesystem."""

from __future__ import annotations

import logging
import urllib.parse
import warnings
from typing import TYPE_CHECKING, Any, cast

import fsspec  # type: ignore[import]
import yaml

from ..exceptions import (
    DuplicateModelWarning,
    InvalidModelNameError,
    ModelNotFoundError,
    RegistryConnectionError,
    RegistryError,
    SchemaMismatchError,
)
from ..serializers import ModelDeserializer, ModelSerializer
from .base import BaseRegistry

if TYPE_CHECKING:
    from ..estimation.baselines import BaselineModel

VERSION_SUFFIX = ".yaml"


class FileSystemRegistry(BaseRegistry):
    """Keeps each model version as one YAML file.

    Layout, with names percent-encoded:

        {base_path}/{name}/versions/{version}.yaml

    The base path is a local directory or an fsspec URL such as
    "s3://bucket/models" or "memory://registry". The registry is not safe for
    concurrent writers of the same name.

    Args:
        base_path: Registry root.
        logger: Defaults to "cuffless.registries.filesystem".
        serializer: Model serializer; the default writes the current format.
        **fsspec_kwargs: Passed on to `fsspec.core.url_to_fs`.

    Raises:
        RegistryConnectionError: If `base_path` cannot be resolved or reached.
    """

    INVALID_NAME_CHARS = frozenset('/\\:*?<>|\0')

    def __init__(
        self,
        base_path: str,
        logger: logging.Logger | None = None,
        serializer: ModelSerializer | None = None,
        **fsspec_kwargs: Any,
    ):
        self.logger = logger or logging.getLogger("cuffless.registries.filesystem")
        try:
            fs, root = cast(
                tuple[Any, str],
                fsspec.core.url_to_fs(  # pyright: ignore[reportUnknownMemberType]
                    base_path, **fsspec_kwargs
                ),
            )
            fs.exists(root)
        except Exception as e:
            raise RegistryConnectionError(
                f"Cannot open model registry at '{base_path}': {e}",
                suggestions=["Check the URL scheme and install its fsspec backend"],
            ) from e

        self.fs: Any = fs
        self.base_path: str = str(root)
        self._serializer = serializer or ModelSerializer()
        self._deserializer = ModelDeserializer()
        self.logger.debug(f"Model registry at {self.base_path}")

    def register(self, name: str, model: BaselineModel) -> int:
        self._check_name(name)
        payload = self._serializer.serialize(model)
        versions = self.list_versions(name)
        latest = versions[-1] if versions else None

        if latest is not None and self._same_as_stored(name, latest, payload):
            warnings.warn(
                f"Model '{name}' is identical to version {latest}; nothing stored.",
                DuplicateModelWarning,
                stacklevel=2,
            )
            return latest

        version = (latest or 0) + 1
        try:
            self.fs.makedirs(self._versions_dir(name), exist_ok=True)
            with self.fs.open(self._version_path(name, version), "w") as f:
                f.write(yaml.safe_dump(payload, sort_keys=False, default_flow_style=False))
        except Exception as e:
            raise RegistryError(f"Could not store model '{name}': {e}") from e
        self.logger.info(
            f"Registered {model.kind.value} model '{name}' version {version} "
            f"({len(model.columns)} input columns)"
        )
        return version

    def get(
        self,
        name: str,
        version: int | None = None,
        *,
        expected_schema_hash: str | None = None,
    ) -> BaselineModel:
        if version is None:
            versions = self.list_versions(name)
            if not versions:
                raise ModelNotFoundError(f"Model '{name}' not found in the registry.")
            version = versions[-1]

        try:
            payload = self._load(name, version)
        except FileNotFoundError:
            raise ModelNotFoundError(
                f"Model '{name}' version {version} not found in the registry.",
                suggestions=[f"Known versions: {self.list_versions(name) or 'none'}"],
            ) from None
        except Exception as e:
            raise RegistryError(f"Could not read model '{name}' v{version}: {e}") from e

        model = self._deserializer.deserialize(payload)
        if expected_schema_hash is not None and model.schema_hash != expected_schema_hash:
            raise SchemaMismatchError(
                f"Model '{name}' version {version} was trained on a different "
                "feature schema.",
                suggestions=["Retrain the model on the current feature table"],
            )
        self.logger.debug(f"Loaded model '{name}' version {version}")
        return model

    def list_versions(self, name: str) -> list[int]:
        directory = self._versions_dir(name)
        try:
            if not self.fs.exists(directory):
                return []
            entries = cast(list[str], self.fs.ls(directory, detail=False))
        except Exception as e:
            raise RegistryError(f"Could not list versions of '{name}': {e}") from e

        versions: list[int] = []
        for entry in entries:
            stem, _, suffix = entry.rsplit("/", 1)[-1].rpartition(".")
            if f".{suffix}" == VERSION_SUFFIX and stem.isdigit():
                versions.append(int(stem))
            else:
                self.logger.debug(f"Ignoring '{entry}' in {directory}")
        return sorted(versions)

    def exists(self, name: str) -> bool:
        try:
            return bool(self.fs.exists(self._model_dir(name)))
        except Exception as e:
            self.logger.error(f"Could not check model '{name}': {e}")
            return False

    def _check_name(self, name: str) -> None:
        if not name:
            raise InvalidModelNameError("Model name cannot be empty.")
        bad = sorted(set(name) & self.INVALID_NAME_CHARS)
        if bad:
            raise InvalidModelNameError(
                f"Model name '{name}' contains invalid characters: "
                + ", ".join(repr(c) for c in bad)
            )

    def _model_dir(self, name: str) -> str:
        return f"{self.base_path}/{urllib.parse.quote(name, safe='')}"

    def _versions_dir(self, name: str) -> str:
        return f"{self._model_dir(name)}/versions"

    def _version_path(self, name: str, version: int) -> str:
        return f"{self._versions_dir(name)}/{version}{VERSION_SUFFIX}"

    def _load(self, name: str, version: int) -> dict[str, Any]:
        with self.fs.open(self._version_path(name, version), "r") as f:
            return cast(dict[str, Any], yaml.safe_load(f.read()))

    def _same_as_stored(self, name: str, version: int, payload: dict[str, Any]) -> bool:
        try:
            return self._load(name, version) == payload
        except Exception as e:
            self.logger.debug(f"Could not compare with '{name}' v{version}: {e}")
            return False
