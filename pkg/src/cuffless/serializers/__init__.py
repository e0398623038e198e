"""Serializer utilities for converting cuffless models and reports to dicts."""

from .model_serializer import ModelDeserializer, ModelSerializer
from .report_serializer import ReportSerializer

__all__ = [
    "ModelDeserializer",
    "ModelSerializer",
    "ReportSerializer",
]
