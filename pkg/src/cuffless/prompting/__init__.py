"""Prompt rendering, tuning export and response parsing."""

from .builder import (
    PromptBuilderConfig,
    PromptRecord,
    build_prompt,
    build_tuning_record,
    build_tuning_records,
    render_input,
    render_response,
)
from .export import write_prompt_file, write_tuning_dataset
from .formatting import format_feature_list, format_reading, format_value
from .parsing import ParsedEstimate, parse_response
from .templates import INSTRUCTION, ContextLevel

__all__ = [
    "build_prompt",
    "build_tuning_record",
    "build_tuning_records",
    "render_input",
    "render_response",
    "parse_response",
    "format_feature_list",
    "format_reading",
    "format_value",
    "write_tuning_dataset",
    "write_prompt_file",
    "INSTRUCTION",
    "ContextLevel",
    "ParsedEstimate",
    "PromptBuilderConfig",
    "PromptRecord",
]
