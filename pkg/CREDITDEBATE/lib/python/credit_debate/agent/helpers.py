import json
import logging
import re
from typing import Any

SIDECAR_PATTERN = re.compile(r"```sidecar\s*\n(?P<body>.*?)```", re.DOTALL)


def parse_llm_json_response(raw_string: str) -> dict | None:
    """
    Safely extracts a JSON object from a string that might be wrapped in Markdown.
    """
    try:
        start_index = raw_string.find("{")
        end_index = raw_string.rfind("}") + 1

        if start_index == -1 or end_index == 0:
            return None

        return json.loads(raw_string[start_index:end_index])

    except (json.JSONDecodeError, IndexError):
        return None


def split_sidecar(text: str) -> tuple[str, dict[str, Any] | None]:
    """
    Separate the prose of an utterance from its trailing ```sidecar block.

    Returns the prose with the block removed and the parsed sidecar (None when absent or unreadable).
    """
    match = SIDECAR_PATTERN.search(text)
    if not match:
        return text.strip(), None

    prose = (text[: match.start()] + text[match.end() :]).strip()
    sidecar = parse_llm_json_response(match.group("body"))
    if sidecar is None:
        logging.warning("Ignoring unreadable sidecar block: %s", match.group("body")[:120])
    return prose, sidecar


def requested_searches(text: str) -> list[str]:
    """Search queries an agent asked for in its sidecar block."""
    _, sidecar = split_sidecar(text)
    if not sidecar:
        return []
    queries = sidecar.get("search") or []
    if isinstance(queries, str):
        queries = [queries]
    return [q for q in queries if isinstance(q, str) and q.strip()]
