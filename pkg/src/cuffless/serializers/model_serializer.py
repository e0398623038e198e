"""Serialization of trained baseline models to plain dictionaries."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import asdict
from typing import Any

from ..estimation.baselines import (
    BaselineHyperparameters,
    BaselineKind,
    BaselineModel,
    Regressor,
    schema_hash,
)
from ..estimation.trees import AdaBoostR2, RegressionTree
from ..exceptions import BaselineTrainingError, SchemaMismatchError

MODEL_FORMAT = "cuffless-baseline"
MODEL_FORMAT_VERSION = 1


class ModelSerializer:
    """Serialize `BaselineModel` instances into self-describing dictionaries."""

    def serialize(self, model: BaselineModel) -> dict[str, Any]:
        return {
            "format": MODEL_FORMAT,
            "format_version": MODEL_FORMAT_VERSION,
            "kind": model.kind.value,
            "seed": model.seed,
            "n_train_rows": model.n_train_rows,
            "schema_hash": model.schema_hash,
            "columns": list(model.columns),
            "hyperparameters": asdict(model.hyperparameters),
            "sbp_model": model.sbp_model.to_dict(),
            "dbp_model": model.dbp_model.to_dict(),
        }


class ModelDeserializer:
    """Rebuild a `BaselineModel`, verifying format and schema hash."""

    def deserialize(self, data: Mapping[str, Any]) -> BaselineModel:
        """Build a model from `data`.

        Raises:
            SchemaMismatchError: If the format is unknown or the stored hash
                does not match the stored columns.
            BaselineTrainingError: If a regressor payload is malformed.
        """
        if data.get("format") != MODEL_FORMAT:
            raise SchemaMismatchError(
                f"Not a baseline model file (format '{data.get('format')}')."
            )
        version = data.get("format_version")
        if version != MODEL_FORMAT_VERSION:
            raise SchemaMismatchError(
                f"Unsupported baseline model format version {version}.",
                suggestions=[f"Supported version: {MODEL_FORMAT_VERSION}"],
            )
        columns = tuple(str(c) for c in data["columns"])
        if schema_hash(columns) != data.get("schema_hash"):
            raise SchemaMismatchError("Stored schema hash does not match stored columns.")

        kind = BaselineKind(data["kind"])
        try:
            return BaselineModel(
                kind=kind,
                columns=columns,
                schema_hash=str(data["schema_hash"]),
                seed=int(data["seed"]),
                hyperparameters=BaselineHyperparameters(**data["hyperparameters"]),
                sbp_model=self._regressor(kind, data["sbp_model"]),
                dbp_model=self._regressor(kind, data["dbp_model"]),
                n_train_rows=int(data["n_train_rows"]),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise BaselineTrainingError(f"Malformed baseline model payload: {e}") from e

    @staticmethod
    def _regressor(kind: BaselineKind, payload: Mapping[str, Any]) -> Regressor:
        if kind is BaselineKind.DTR:
            return RegressionTree.from_dict(dict(payload))
        if kind is BaselineKind.ADABOOST:
            return AdaBoostR2.from_dict(dict(payload))
        raise BaselineTrainingError(f"Baseline kind '{kind.value}' has no stored model.")
