import logging
from typing import Any

import requests

from ..errors import BackendError
from .http import build_retrying, is_transient, raise_for_transient


class ChatCompletionsAPIClient:
    """Minimal client for an HTTP JSON chat-completion endpoint."""

    def __init__(self, endpoint: str, api_key: str, timeout: float = 60.0, retries: int = 2, backoff: float = 0.5):
        self.session = requests.Session()
        self.session.headers.update({"Authorization": f"Bearer {api_key}", "Content-Type": "application/json"})
        self.endpoint = endpoint
        self.timeout = timeout
        self._retrying = build_retrying(retries, backoff)

    def complete(self, model: str, messages: list[dict[str, Any]], **params: Any) -> str:
        payload = {"model": model, "messages": messages}
        # Sampling parameters are only sent when configured.
        payload.update({k: v for k, v in params.items() if v is not None})

        try:
            body = self._retrying(self._post, payload)
        except requests.RequestException as e:
            raise BackendError(f"Chat completion request failed: {e}", retryable=is_transient(e)) from e
        except Exception as e:
            if is_transient(e):
                raise BackendError(f"Chat completion request failed after retries: {e}") from e
            raise

        try:
            return body["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as e:
            raise BackendError(f"Malformed chat completion response: {body!r}", retryable=False) from e

    def _post(self, payload: dict[str, Any]) -> dict[str, Any]:
        logging.debug("POST %s model=%s (%d messages)", self.endpoint, payload["model"], len(payload["messages"]))
        response = self.session.post(self.endpoint, json=payload, timeout=self.timeout)
        raise_for_transient(response)
        return response.json()
