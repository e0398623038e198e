"""Chat-completions endpoint client for MAP/PP estimates.

The client sends the prompt's instruction as the system message and its
input as the user message, then parses the first choice of the reply.
Transient transport failures are retried with exponential backoff; parse
failures never are.
"""

from __future__ import annotations

import logging
import math
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Sequence

from .._dependencies import requires_dependency
from ..exceptions import (
    CufflessError,
    EndpointError,
    EndpointTimeoutError,
    EndpointTransportError,
    RunConfigError,
)
from ..prompting.parsing import ParsedEstimate, parse_response

if TYPE_CHECKING:
    from ..prompting.builder import PromptRecord

DEFAULT_API_KEY_ENV = "CUFFLESS_API_KEY"


@dataclass(frozen=True)
class EndpointConfig:
    """Connection settings of a served model.

    Args:
        base_url: API root; requests go to `{base_url}/chat/completions`.
        model_name: Model identifier sent with every request.
        timeout_s: Per-request timeout.
        max_retries: Retries after the first attempt for transient failures.
        max_concurrency: Maximum in-flight requests per client, across threads.
        temperature: Sampling temperature.
        api_key_env: Environment variable holding the bearer token.
        backoff_base_s: First retry delay; doubles on each retry.
        backoff_max_s: Upper bound of a single retry delay.

    Raises:
        RunConfigError: If a numeric setting is out of range.
    """

    base_url: str
    model_name: str
    timeout_s: float = 30.0
    max_retries: int = 3
    max_concurrency: int = 4
    temperature: float = 0.0
    api_key_env: str = DEFAULT_API_KEY_ENV
    backoff_base_s: float = 0.5
    backoff_max_s: float = 8.0

    def __post_init__(self) -> None:
        if not self.base_url:
            raise RunConfigError("Endpoint base_url must not be empty.")
        if not self.model_name:
            raise RunConfigError("Endpoint model_name must not be empty.")
        if not (math.isfinite(self.timeout_s) and self.timeout_s > 0):
            raise RunConfigError(f"timeout_s must be positive, got {self.timeout_s}.")
        if self.max_retries < 0:
            raise RunConfigError(f"max_retries must be >= 0, got {self.max_retries}.")
        if self.max_concurrency < 1:
            raise RunConfigError(
                f"max_concurrency must be >= 1, got {self.max_concurrency}."
            )
        if self.backoff_base_s < 0 or self.backoff_max_s < 0:
            raise RunConfigError("Backoff delays must be non-negative.")

    def fingerprint_fields(self) -> dict[str, Any]:
        """Output-affecting settings; the token variable is not among them."""
        return {
            "base_url": self.base_url,
            "model_name": self.model_name,
            "temperature": self.temperature,
        }


@dataclass(frozen=True)
class EndpointOutcome:
    """Result of one prompt in a batch: an estimate or an error message."""

    label: str
    estimate: ParsedEstimate | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.estimate is not None


def _transient_types() -> tuple[type[BaseException], ...]:
    types: list[type[BaseException]] = [ConnectionError, TimeoutError]
    try:
        import openai
    except ImportError:
        return tuple(types)
    types += [openai.APIConnectionError, openai.RateLimitError, openai.InternalServerError]
    return tuple(types)


def _is_timeout(error: BaseException) -> bool:
    if isinstance(error, TimeoutError):
        return True
    try:
        import openai
    except ImportError:
        return False
    return isinstance(error, openai.APITimeoutError)


@requires_dependency("openai")
def _build_openai_client(config: EndpointConfig, logger: logging.Logger) -> Any:
    import openai

    api_key = os.environ.get(config.api_key_env)
    if not api_key:
        logger.debug(f"{config.api_key_env} is not set; sending requests without a token")
        api_key = "unset"
    # Retries are handled here, not by the SDK.
    return openai.OpenAI(
        base_url=config.base_url.rstrip("/"),
        api_key=api_key,
        timeout=config.timeout_s,
        max_retries=0,
    )


class EndpointClient:
    """Query a chat-completions endpoint for MAP/PP estimates.

    Args:
        config: Endpoint settings.
        client: Object exposing `chat.completions.create(...)`. Defaults to an
            `openai.OpenAI` client built from `config`.
        logger: Optional logger; defaults to "cuffless.estimation.endpoint".
    """

    def __init__(
        self,
        config: EndpointConfig,
        *,
        client: Any | None = None,
        logger: logging.Logger | None = None,
    ) -> None:
        self.config = config
        self.logger = logger or logging.getLogger("cuffless.estimation.endpoint")
        self._client = client if client is not None else _build_openai_client(
            config, self.logger
        )
        # Bounds in-flight requests across every thread using this client.
        self._slots = threading.BoundedSemaphore(config.max_concurrency)

    def _messages(self, prompt: PromptRecord) -> list[dict[str, str]]:
        return [
            {"role": "system", "content": prompt.instruction},
            {"role": "user", "content": prompt.input},
        ]

    def _request(self, prompt: PromptRecord) -> str:
        response = self._client.chat.completions.create(
            model=self.config.model_name,
            messages=self._messages(prompt),
            temperature=self.config.temperature,
            timeout=self.config.timeout_s,
        )
        try:
            content = response.choices[0].message.content
        except (AttributeError, IndexError, TypeError) as e:
            raise EndpointError(
                f"Endpoint reply for '{prompt.label}' has no message content."
            ) from e
        return content or ""

    @requires_dependency("tenacity")
    def complete(self, prompt: PromptRecord) -> str:
        """Raw completion text for `prompt`, retrying transient failures.

        Raises:
            EndpointTimeoutError: If every attempt timed out.
            EndpointTransportError: If transient failures outlast the retries.
            EndpointError: For non-transient request failures.
        """
        from tenacity import (
            RetryError,
            Retrying,
            retry_if_exception_type,
            stop_after_attempt,
            wait_exponential,
        )

        cfg = self.config
        attempts = cfg.max_retries + 1

        def log_retry(state: Any) -> None:
            error = state.outcome.exception() if state.outcome else None
            self.logger.warning(
                f"Endpoint request for '{prompt.label}' failed "
                f"(attempt {state.attempt_number}/{attempts}): {error!r}; retrying"
            )

        retrying = Retrying(
            stop=stop_after_attempt(attempts),
            wait=wait_exponential(multiplier=cfg.backoff_base_s, max=cfg.backoff_max_s),
            retry=retry_if_exception_type(_transient_types()),
            before_sleep=log_retry,
        )
        try:
            with self._slots:
                return retrying(self._request, prompt)
        except RetryError as e:
            last = e.last_attempt.exception()
            if last is not None and _is_timeout(last):
                raise EndpointTimeoutError(
                    f"Endpoint timed out for '{prompt.label}' after {attempts} attempt(s)."
                ) from last
            raise EndpointTransportError(
                f"Endpoint unreachable for '{prompt.label}' after {attempts} "
                f"attempt(s): {last!r}",
                suggestions=[f"Check that {cfg.base_url} is serving '{cfg.model_name}'"],
            ) from last
        except CufflessError:
            raise
        except Exception as e:
            raise EndpointError(f"Endpoint request for '{prompt.label}' failed: {e}") from e

    def estimate(self, prompt: PromptRecord) -> ParsedEstimate:
        """Estimate MAP/PP for one prompt.

        Raises:
            ResponseParseError: If the reply cannot be parsed (never retried).
            EndpointError: For transport failures, see `complete`.
        """
        text = self.complete(prompt)
        self.logger.debug(f"Endpoint reply for '{prompt.label}': {text!r}")
        return parse_response(text)

    def estimate_many(self, prompts: Sequence[PromptRecord]) -> list[EndpointOutcome]:
        """Estimate a batch with at most `max_concurrency` requests in flight.

        Returns:
            One outcome per prompt, in input order. Failures never abort the
            batch.
        """

        def run(prompt: PromptRecord) -> EndpointOutcome:
            try:
                return EndpointOutcome(label=prompt.label, estimate=self.estimate(prompt))
            except CufflessError as e:
                self.logger.warning(str(e))
                return EndpointOutcome(label=prompt.label, error=str(e))

        with ThreadPoolExecutor(max_workers=self.config.max_concurrency) as pool:
            outcomes = list(pool.map(run, prompts))
        failed = sum(1 for o in outcomes if not o.ok)
        self.logger.info(
            f"Endpoint estimated {len(outcomes) - failed} of {len(outcomes)} prompts"
        )
        return outcomes


def estimate_via_endpoint(
    config: EndpointConfig,
    prompt: PromptRecord,
    *,
    client: Any | None = None,
) -> ParsedEstimate:
    """Estimate MAP/PP for one prompt with a fresh `EndpointClient`."""
    return EndpointClient(config, client=client).estimate(prompt)
