"""Custom cuffless exceptions and shared warning utilities."""

from __future__ import annotations

import warnings


class CufflessError(Exception):
    """Base exception for all cuffless-related errors.

    This is the root exception that all other cuffless exceptions inherit from.
    It provides enhanced error reporting with suggestions for resolution.

    Attributes:
        suggestions: List of suggested fixes or actions.

    Example:
        >>> raise CufflessError(
        ...     "Record 'S001/D7' has 1200 ECG samples but 1199 PPG samples",
        ...     suggestions=["Re-export the session with synchronized channels"]
        ... )
    """

    def __init__(
        self,
        message: str,
        suggestions: list[str] | None = None,
    ):
        """Initialize a CufflessError.

        Args:
            message: The error message.
            suggestions: Optional list of suggestions to fix the error.
        """
        super().__init__(message)
        self.suggestions = suggestions or []

    def __str__(self) -> str:
        result = super().__str__()

        if self.suggestions:
            suggestions_text = "; ".join(self.suggestions)
            result += f" | {suggestions_text}"

        return result


class CufflessValidationError(CufflessError):
    """Base for all validation-related errors."""


# Record Exceptions
class RecordError(CufflessValidationError):
    """Measurement record definition and validation errors."""


class RecordParsingError(RecordError):
    """Errors while parsing records from NDJSON lines or CSV files."""


class RecordValidationError(RecordError):
    """Record consistency errors such as mismatched channel lengths."""


class RecordSourceError(RecordError):
    """Record source path is missing or does not match the declared format."""


class RecordRejectedError(RecordError):
    """A record failed quality screening and produced no feature vector.

    Attributes:
        report: The `QualityReport` explaining the rejection.
    """

    def __init__(self, message: str, report: object | None = None):
        super().__init__(message)
        self.report = report


# Signal Exceptions
class SignalError(CufflessValidationError):
    """Signal processing errors."""


class FilterDesignError(SignalError):
    """Invalid filter parameters such as a cutoff at or above Nyquist."""


class SignalTooShortError(SignalError):
    """Input is shorter than the operation's minimum length."""


class DetectionError(SignalError):
    """R-peak or fiducial detection could not proceed."""


# Feature Exceptions
class FeatureError(CufflessValidationError):
    """Feature computation errors."""


class BeatFeatureError(FeatureError):
    """A single beat produced undefined or invalid features."""


class GroupingError(FeatureError):
    """Feature grouping is not a partition of the 31 feature numbers."""


# Prompt Exceptions
class PromptError(CufflessValidationError):
    """Prompt rendering errors."""


class ProfileMissingError(PromptError):
    """A context level requires user profile fields that are absent."""


class ResponseParseError(PromptError):
    """A model response could not be parsed into MAP and PP.

    Attributes:
        raw: The unparsed response text.
    """

    def __init__(self, message: str, raw: str):
        super().__init__(message)
        self.raw = raw


# Blood pressure value Exceptions
class InvalidReadingError(CufflessValidationError):
    """Blood pressure values violate SBP > DBP > 0."""


class CalibrationError(CufflessValidationError):
    """Invalid calibration inputs such as alpha outside [0, 1]."""


# Estimation Exceptions
class EstimationError(CufflessError):
    """Base for estimator errors."""


class EndpointError(EstimationError):
    """Errors raised while querying an inference endpoint."""


class EndpointTransportError(EndpointError):
    """Transport failure that persisted after all retries."""


class EndpointTimeoutError(EndpointTransportError):
    """Endpoint requests timed out on every attempt."""


class BaselineTrainingError(EstimationError):
    """Baseline model could not be trained on the provided rows."""


class SchemaMismatchError(EstimationError):
    """Model was trained on a different feature schema."""


# Evaluation Exceptions
class EvaluationError(CufflessError):
    """Base for evaluation harness errors."""


class FoldPlanError(EvaluationError):
    """Invalid cross-validation fold request."""


class TrainingSizeError(EvaluationError):
    """A down-sampled training partition is too small."""


class MetricError(EvaluationError):
    """Metric inputs are inconsistent or too short."""


# Cross-cutting Exceptions (used across multiple domains)
class ConfigError(CufflessError):
    """Base for configuration-related errors."""


class RunConfigError(ConfigError):
    """Errors while resolving the command-line run configuration."""


class LoaderConfigError(ConfigError):
    """Errors during loader configuration."""


# Dependency Exceptions
class DependencyError(CufflessError):
    """Base for optional dependency errors."""


class MissingDependencyError(DependencyError):
    """Required optional dependency is not installed."""


class DependencyVersionError(DependencyError):
    """Installed dependency version does not meet requirements."""


# Registry Exceptions
class RegistryError(CufflessError):
    """Base exception for registry operations."""


class RegistryConnectionError(RegistryError):
    """Failed to connect or validate registry base path."""


class ModelNotFoundError(RegistryError):
    """Model name or version not found in registry."""


class InvalidModelNameError(RegistryError):
    """Model name contains invalid characters."""


# Shared warnings
class QualityWarning(UserWarning):
    """Warning emitted when a record is skipped for quality or parsing reasons."""


class DuplicateModelWarning(UserWarning):
    """Warning emitted when registering a model identical to the latest version."""


def quality_warning(message: str, *, filename: str, module: str | None = None) -> None:
    """Emit a categorized quality warning with a concise origin.

    Args:
        message: Human-readable warning message.
        filename: Logical filename/module label to display as the source.
        module: Module name override. Defaults to the caller's module if not provided.
    """
    warnings.warn_explicit(
        message=message,
        category=QualityWarning,
        filename=filename,
        lineno=1,
        module=module or __name__,
    )
