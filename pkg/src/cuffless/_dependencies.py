"""Call-time guard for the optional `endpoint` dependency group.

The core pipeline runs on numpy, scipy, polars, pyyaml and fsspec. Only the
chat-completions client needs the packages below, so they are checked when an
endpoint call is made rather than at import time.
"""

from __future__ import annotations

import importlib
import importlib.metadata as md
import re
from dataclasses import dataclass
from functools import lru_cache, wraps
from typing import Callable, ParamSpec, TypeVar

from .exceptions import DependencyError, DependencyVersionError, MissingDependencyError

P = ParamSpec("P")
R = TypeVar("R")

__all__ = [
    "ENDPOINT_REQUIREMENTS",
    "Requirement",
    "installed_version",
    "version_at_least",
    "check_requirement",
    "requires_dependency",
]

# Mirrors the `endpoint` group in pyproject.toml.
ENDPOINT_REQUIREMENTS: dict[str, str] = {
    "openai": "1.0.0",
    "tenacity": "8.2.0",
}

_INSTALL_HINT = "Install the endpoint extras with 'uv sync --group endpoint'"
_RELEASE = re.compile(r"\d+(?:\.\d+)*")


@dataclass(frozen=True)
class Requirement:
    """An endpoint package, its minimum version and what is installed."""

    package: str
    minimum: str
    installed: str | None

    @property
    def satisfied(self) -> bool:
        return self.installed is not None and version_at_least(
            self.installed, self.minimum
        )


@lru_cache(maxsize=None)
def installed_version(package: str) -> str | None:
    """Installed distribution version of `package`, or None."""
    try:
        return md.version(package)
    except md.PackageNotFoundError:
        return None


def _release(version: str) -> tuple[int, ...]:
    match = _RELEASE.match(version.strip())
    if match is None:
        return ()
    return tuple(int(part) for part in match.group().split("."))


def version_at_least(installed: str, minimum: str) -> bool:
    """Compare the leading release numbers; "1.2" equals "1.2.0".

    Pre-release suffixes are ignored, so "1.40.0rc1" counts as 1.40.0. A version
    with no leading release number never satisfies a minimum.
    """
    have, need = _release(installed), _release(minimum)
    if not have:
        return False
    width = max(len(have), len(need))
    return have + (0,) * (width - len(have)) >= need + (0,) * (width - len(need))


def check_requirement(package: str) -> Requirement:
    """Check one endpoint package against its minimum version.

    Raises:
        DependencyError: If `package` is not an endpoint requirement.
        MissingDependencyError: If it is not installed.
        DependencyVersionError: If the installed version is too old.
    """
    minimum = ENDPOINT_REQUIREMENTS.get(package)
    if minimum is None:
        raise DependencyError(f"'{package}' is not part of the endpoint group.")
    requirement = Requirement(package, minimum, installed_version(package))
    if requirement.installed is None:
        raise MissingDependencyError(
            f"The endpoint client needs '{package}' (>= {minimum}), "
            "which is not installed.",
            suggestions=[_INSTALL_HINT],
        )
    if not requirement.satisfied:
        raise DependencyVersionError(
            f"The endpoint client needs '{package}' >= {minimum}, "
            f"found {requirement.installed}.",
            suggestions=[_INSTALL_HINT],
        )
    return requirement


def requires_dependency(package: str) -> Callable[[Callable[P, R]], Callable[P, R]]:
    """Check and import an endpoint package before the wrapped call runs."""

    def decorator(func: Callable[P, R]) -> Callable[P, R]:
        @wraps(func)
        def wrapper(*args: P.args, **kwargs: P.kwargs) -> R:
            check_requirement(package)
            importlib.import_module(package)
            return func(*args, **kwargs)

        return wrapper

    return decorator
