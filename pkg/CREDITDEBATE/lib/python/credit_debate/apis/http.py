import logging

import requests
from tenacity import Retrying, before_sleep_log, retry_if_exception, stop_after_attempt, wait_exponential

RETRYABLE_STATUS = frozenset({429, 500, 502, 503, 504})


class TransientAPIError(Exception):
    def __init__(self, status_code: int, body: str):
        super().__init__(f"HTTP {status_code}: {body[:200]}")
        self.status_code = status_code


def is_transient(exc: BaseException) -> bool:
    return isinstance(exc, (requests.Timeout, requests.ConnectionError, TransientAPIError))


def raise_for_transient(response: requests.Response) -> None:
    """Turn retryable statuses into TransientAPIError; everything else goes through raise_for_status."""
    if response.status_code in RETRYABLE_STATUS:
        raise TransientAPIError(response.status_code, response.text)
    response.raise_for_status()


def build_retrying(retries: int = 2, backoff: float = 0.5) -> Retrying:
    return Retrying(
        stop=stop_after_attempt(retries + 1),
        wait=wait_exponential(multiplier=backoff, max=8),
        retry=retry_if_exception(is_transient),
        before_sleep=before_sleep_log(logging.getLogger(__name__), logging.WARNING),
        reraise=True,
    )
