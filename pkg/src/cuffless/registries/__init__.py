"""Versioned storage of trained baseline models."""

from .base import BaseRegistry
from .filesystem_registry import FileSystemRegistry

__all__ = ["BaseRegistry", "FileSystemRegistry"]
