"""Tests for the endpoint dependency guard."""

import importlib.metadata as md
from unittest.mock import patch

import pytest

from cuffless._dependencies import (
    ENDPOINT_REQUIREMENTS,
    Requirement,
    check_requirement,
    installed_version,
    requires_dependency,
    version_at_least,
)
from cuffless.exceptions import (
    DependencyError,
    DependencyVersionError,
    MissingDependencyError,
)

INSTALLED = "cuffless._dependencies.installed_version"


@pytest.fixture(autouse=True)
def clear_version_cache():
    installed_version.cache_clear()
    yield
    installed_version.cache_clear()


class TestInstalledVersion:
    def test_found(self):
        with patch("cuffless._dependencies.md.version", return_value="1.2.3") as version:
            assert installed_version("openai") == "1.2.3"
            version.assert_called_once_with("openai")

    def test_missing(self):
        with patch(
            "cuffless._dependencies.md.version",
            side_effect=md.PackageNotFoundError("tenacity"),
        ):
            assert installed_version("tenacity") is None

    def test_lookups_are_cached(self):
        with patch("cuffless._dependencies.md.version", return_value="8.2.3") as version:
            installed_version("tenacity")
            installed_version("tenacity")
            version.assert_called_once_with("tenacity")


class TestVersionAtLeast:
    @pytest.mark.parametrize(
        "installed,minimum,expected",
        [
            ("1.0.0", "1.0.0", True),
            ("1.10.0", "1.9.0", True),
            ("1.2", "1.2.0", True),
            ("1.40.0rc1", "1.40.0", True),
            ("0.28.1", "1.0.0", False),
            ("8.1.0", "8.2.0", False),
            ("unknown", "1.0.0", False),
        ],
    )
    def test_comparison(self, installed, minimum, expected):
        assert version_at_least(installed, minimum) is expected


class TestCheckRequirement:
    def test_every_endpoint_package_has_a_minimum(self):
        assert set(ENDPOINT_REQUIREMENTS) == {"openai", "tenacity"}

    def test_satisfied(self):
        with patch(INSTALLED, return_value="1.50.0"):
            assert check_requirement("openai") == Requirement("openai", "1.0.0", "1.50.0")

    def test_missing_names_the_group(self):
        with patch(INSTALLED, return_value=None):
            with pytest.raises(MissingDependencyError) as exc_info:
                check_requirement("tenacity")
        message = str(exc_info.value)
        assert "'tenacity' (>= 8.2.0)" in message
        assert "uv sync --group endpoint" in message

    def test_outdated(self):
        with patch(INSTALLED, return_value="0.28.0"):
            with pytest.raises(DependencyVersionError, match="found 0.28.0"):
                check_requirement("openai")

    def test_unknown_package(self):
        with pytest.raises(DependencyError, match="not part of the endpoint group"):
            check_requirement("torch")


class TestRequiresDependency:
    def test_runs_when_available(self):
        @requires_dependency("tenacity")
        def add(a: int, b: int) -> int:
            return a + b

        with patch(INSTALLED, return_value="9.0.0"), patch(
            "cuffless._dependencies.importlib.import_module"
        ) as import_module:
            assert add(1, 2) == 3
        import_module.assert_called_once_with("tenacity")

    def test_does_not_run_when_missing(self):
        calls = []

        @requires_dependency("openai")
        def record() -> None:
            calls.append(1)

        with patch(INSTALLED, return_value=None):
            with pytest.raises(MissingDependencyError):
                record()
        assert calls == []

    def test_preserves_metadata(self):
        @requires_dependency("openai")
        def documented() -> None:
            """Docstring."""

        assert documented.__name__ == "documented"
        assert documented.__doc__ == "Docstring."
