import hashlib
import json
import logging
import threading
from pathlib import Path
from typing import Any

from .clock import Clock, WallClock


def digest_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class RunJournal:
    """
    Append-only JSON-lines event log for one session.

    Each line is `{"seq", "event", ...fields, "meta": {"ts"}}`. Wall-clock values only ever
    live under `meta`, so two scripted runs produce identical lines once `meta` is dropped.
    Without a path the journal is kept in memory only.
    """

    def __init__(self, path: Path | None = None, clock: Clock | None = None):
        self.path = Path(path) if path else None
        self._clock = clock or WallClock()
        self._events: list[dict[str, Any]] = []
        self._lock = threading.Lock()
        if self.path:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self.path.write_text("", encoding="utf-8")

    def record(self, event: str, meta: dict[str, Any] | None = None, **fields: Any) -> dict[str, Any]:
        with self._lock:
            entry = {"seq": len(self._events) + 1, "event": event, **fields}
            entry["meta"] = {"ts": self._clock.now().isoformat(), **(meta or {})}
            self._events.append(entry)
            if self.path:
                with self.path.open("a", encoding="utf-8") as fh:
                    fh.write(json.dumps(entry, ensure_ascii=False, sort_keys=True, default=str) + "\n")
        logging.debug("journal %s: %s", event, {k: v for k, v in fields.items() if k != "response"})
        return entry

    @property
    def events(self) -> list[dict[str, Any]]:
        return list(self._events)

    def select(self, event: str) -> list[dict[str, Any]]:
        return [e for e in self._events if e["event"] == event]

    @staticmethod
    def read(path: Path) -> list[dict[str, Any]]:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        return [json.loads(line) for line in lines if line.strip()]
