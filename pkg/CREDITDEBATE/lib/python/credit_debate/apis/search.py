import datetime as dt
import logging
from typing import Any, Protocol, runtime_checkable

import requests
from pydantic import BaseModel, TypeAdapter, ValidationError

from ..errors import BackendError
from .http import build_retrying, is_transient, raise_for_transient


class SearchHit(BaseModel):
    title: str = ""
    snippet: str = ""
    date: str | None = None
    source: str | None = None
    url: str | None = None


_HITS = TypeAdapter(list[SearchHit])


def parse_hits(items: Any) -> list[SearchHit]:
    try:
        return _HITS.validate_python(items)
    except ValidationError as e:
        error = e.errors()[0]
        position = ".".join(str(part) for part in error["loc"]) or "<root>"
        raise BackendError(f"Malformed search results at {position}: {error['msg']}", retryable=False) from e


@runtime_checkable
class SearchProvider(Protocol):
    def search(self, query: str, max_items: int, date_floor: dt.date) -> list[SearchHit]: ...


class SearchAPIClient:
    """Search provider speaking `{query, max_items, date_floor}` over HTTP JSON."""

    def __init__(self, endpoint: str, api_key: str | None = None, timeout: float = 30.0, retries: int = 2, backoff: float = 0.5):
        self.session = requests.Session()
        if api_key:
            self.session.headers.update({"Authorization": f"Bearer {api_key}"})
        self.endpoint = endpoint
        self.timeout = timeout
        self._retrying = build_retrying(retries, backoff)

    def search(self, query: str, max_items: int, date_floor: dt.date) -> list[SearchHit]:
        payload = {"query": query, "max_items": max_items, "date_floor": date_floor.isoformat()}
        try:
            body = self._retrying(self._post, payload)
        except requests.RequestException as e:
            raise BackendError(f"Search request failed: {e}", retryable=is_transient(e)) from e
        except Exception as e:
            if is_transient(e):
                raise BackendError(f"Search request failed after retries: {e}") from e
            raise

        items = body.get("results", []) if isinstance(body, dict) else body
        return parse_hits(items)

    def _post(self, payload: dict[str, Any]) -> Any:
        response = self.session.post(self.endpoint, json=payload, timeout=self.timeout)
        raise_for_transient(response)
        return response.json()


class StaticSearchClient:
    """
    Offline provider answering from a canned `{query: [hits]}` map.

    The `"*"` entry answers any query without its own entry.
    """

    def __init__(self, results: dict[str, list[dict[str, Any]]] | None = None):
        self._results = results or {}
        self.calls: list[dict[str, Any]] = []

    def search(self, query: str, max_items: int, date_floor: dt.date) -> list[SearchHit]:
        self.calls.append({"query": query, "max_items": max_items, "date_floor": date_floor.isoformat()})
        hits = self._results.get(query, self._results.get("*", []))
        logging.debug("Static search for %r returned %d hits", query, len(hits))
        return parse_hits(hits)
