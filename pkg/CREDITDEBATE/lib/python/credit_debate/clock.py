import datetime as dt
import time
from typing import Protocol, runtime_checkable


@runtime_checkable
class Clock(Protocol):
    def now(self) -> dt.datetime: ...

    def monotonic(self) -> float: ...

    def today(self) -> dt.date: ...


class WallClock:
    def now(self) -> dt.datetime:
        return dt.datetime.now(dt.timezone.utc)

    def monotonic(self) -> float:
        return time.monotonic()

    def today(self) -> dt.date:
        return dt.date.today()


class FixedClock:
    """
    Deterministic clock for tests and replays.

    `now()` never moves. `monotonic()` advances by `tick` seconds per call, so elapsed
    times are reproducible (and zero with the default tick).
    """

    def __init__(self, at: dt.datetime, tick: float = 0.0):
        if at.tzinfo is None:
            at = at.replace(tzinfo=dt.timezone.utc)
        self._at = at
        self._tick = tick
        self._calls = 0

    def now(self) -> dt.datetime:
        return self._at

    def monotonic(self) -> float:
        value = self._calls * self._tick
        self._calls += 1
        return value

    def today(self) -> dt.date:
        return self._at.date()


def make_clock(mode: str, fixed_time: dt.datetime | None = None) -> Clock:
    if mode == "fixed":
        return FixedClock(fixed_time or dt.datetime(2025, 7, 1, tzinfo=dt.timezone.utc))
    return WallClock()
