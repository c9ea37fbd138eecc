import logging
import math
from collections.abc import Sequence
from enum import Enum
from pathlib import Path
from typing import Annotated

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, ValidationError
from scipy.stats import norm, rankdata

from ..errors import StatsError

EXACT_MAX_N = 25
SUS_ITEMS = tuple(f"sus_{i}" for i in range(1, 11))


class WilcoxonMethod(str, Enum):
    NORMAL = "normal_approx"
    EXACT = "exact"


class PairedSample(BaseModel):
    model_config = ConfigDict(frozen=True)

    unit_id: str
    score_a: float = Field(allow_inf_nan=False)
    score_b: float = Field(allow_inf_nan=False)

    @property
    def difference(self) -> float:
        return self.score_a - self.score_b


class WilcoxonResult(BaseModel):
    n_effective: int
    w_statistic: float
    t_plus: float
    t_minus: float
    z: float
    p_two_sided: float = Field(ge=0, le=1)
    effect_r: float
    method: WilcoxonMethod
    p_normal: float
    p_exact: float | None = None


class SusResponse(BaseModel):
    items: list[Annotated[int, Field(ge=1, le=5)]] = Field(min_length=10, max_length=10)


class LatencyRecord(BaseModel):
    system: str
    company: str
    seconds: float = Field(ge=0, allow_inf_nan=False)


class LatencySummary(BaseModel):
    per_company: dict[str, float]
    mean: float


def signed_rank_sums(differences: Sequence[float]) -> tuple[np.ndarray, float, float]:
    """Average ranks of |d| over the nonzero differences, with the positive and negative rank sums."""
    d = np.asarray(differences, dtype=float)
    d = d[d != 0]
    ranks = rankdata(np.abs(d), method="average")
    return ranks, float(ranks[d > 0].sum()), float(ranks[d < 0].sum())


def exact_null_distribution(ranks: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    """
    Distribution of the positive rank sum over all 2^n equally likely sign assignments.

    Ranks are doubled so tied (half-integer) ranks stay on an integer grid.
    Returns (support, probabilities).
    """
    doubled = np.rint(np.asarray(ranks, dtype=float) * 2).astype(int)
    counts = np.zeros(int(doubled.sum()) + 1)
    counts[0] = 1.0
    for r in doubled:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[: counts.size - r]
        counts = counts + shifted
    support = np.arange(counts.size) / 2.0
    return support, counts / 2.0 ** len(doubled)


def exact_p_value(ranks: Sequence[float], t_plus: float) -> float:
    support, probabilities = exact_null_distribution(ranks)
    lower = probabilities[support <= t_plus + 1e-9].sum()
    upper = probabilities[support >= t_plus - 1e-9].sum()
    return float(min(1.0, 2.0 * min(lower, upper)))


def wilcoxon_signed_rank(
    pairs: Sequence[PairedSample],
    method: WilcoxonMethod | str = WilcoxonMethod.NORMAL,
) -> WilcoxonResult:
    """
    Wilcoxon signed-rank test on score_a - score_b. Zero differences are dropped before
    ranking; ties get average ranks.

    W is the smaller signed-rank sum. z is taken on the positive rank sum without continuity
    or tie correction, so it is negative when score_b tends to be higher.
    """
    method = WilcoxonMethod(method)
    differences = [p.difference for p in pairs]
    ranks, t_plus, t_minus = signed_rank_sums(differences)
    n = len(ranks)
    if n == 0:
        raise StatsError("All paired differences are zero; the signed-rank test is undefined.")

    mean = n * (n + 1) / 4
    sd = math.sqrt(n * (n + 1) * (2 * n + 1) / 24)
    z = (t_plus - mean) / sd
    p_normal = float(min(1.0, 2 * norm.cdf(-abs(z))))

    p_exact = exact_p_value(ranks, t_plus) if n <= EXACT_MAX_N else None
    if method is WilcoxonMethod.EXACT and p_exact is None:
        logging.warning("Exact test needs n <= %d (got %d); reporting the normal approximation.", EXACT_MAX_N, n)
        method = WilcoxonMethod.NORMAL

    return WilcoxonResult(
        n_effective=n,
        w_statistic=min(t_plus, t_minus),
        t_plus=t_plus,
        t_minus=t_minus,
        z=z,
        p_two_sided=p_exact if method is WilcoxonMethod.EXACT else p_normal,
        effect_r=z / math.sqrt(n),
        method=method,
        p_normal=p_normal,
        p_exact=p_exact,
    )


def sus_score(response: SusResponse | Sequence[int]) -> float:
    """Standard SUS rule: odd items give score - 1, even items 5 - score, total times 2.5."""
    if not isinstance(response, SusResponse):
        try:
            response = SusResponse(items=list(response))
        except ValidationError as e:
            raise StatsError(f"Invalid SUS response: {e.errors()[0]['msg']}")
    total = sum(score - 1 if i % 2 == 0 else 5 - score for i, score in enumerate(response.items))
    return total * 2.5


def latency_summary(records: Sequence[LatencyRecord]) -> dict[str, LatencySummary]:
    if not records:
        raise StatsError("No latency records")
    frame = pd.DataFrame([r.model_dump() for r in records])
    summaries = {}
    for system, group in frame.groupby("system", sort=True):
        per_company = group.groupby("company", sort=True)["seconds"].mean()
        summaries[str(system)] = LatencySummary(
            per_company={str(c): round(float(s), 2) for c, s in per_company.items()},
            mean=round(float(per_company.mean()), 2),
        )
    return summaries


def median(values: Sequence[float]) -> float:
    if len(values) == 0:
        raise StatsError("Median of an empty list")
    return float(np.median(np.asarray(values, dtype=float)))


def _read_csv(path: Path, required: Sequence[str]) -> pd.DataFrame:
    try:
        frame = pd.read_csv(path)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise StatsError(f"Cannot read {path}: {e}")
    missing = [c for c in required if c not in frame.columns]
    if missing:
        raise StatsError(f"{path} is missing columns: {', '.join(missing)}")
    return frame


def load_pairs(path: Path) -> list[PairedSample]:
    """Paired ratings CSV with columns unit_id, score_nas, score_kpd."""
    frame = _read_csv(path, ("unit_id", "score_nas", "score_kpd"))
    try:
        return [
            PairedSample(unit_id=str(row.unit_id), score_a=row.score_nas, score_b=row.score_kpd)
            for row in frame.itertuples(index=False)
        ]
    except ValidationError as e:
        raise StatsError(f"Invalid paired sample in {path}: {e.errors()[0]['msg']}")


def load_latency(path: Path) -> list[LatencyRecord]:
    frame = _read_csv(path, ("system", "company", "seconds"))
    try:
        return [
            LatencyRecord(system=str(row.system), company=str(row.company), seconds=row.seconds)
            for row in frame.itertuples(index=False)
        ]
    except ValidationError as e:
        raise StatsError(f"Invalid latency record in {path}: {e.errors()[0]['msg']}")


def load_sus(path: Path) -> pd.DataFrame:
    """SUS CSV (sus_1..sus_10, optional system column) with a `sus_score` column added."""
    frame = _read_csv(path, SUS_ITEMS)
    scores = []
    for number, row in enumerate(frame[list(SUS_ITEMS)].itertuples(index=False), start=1):
        try:
            response = SusResponse(items=[v.item() if isinstance(v, np.generic) else v for v in row])
        except ValidationError as e:
            error = e.errors()[0]
            raise StatsError(f"Invalid SUS response in {path}, row {number}, {SUS_ITEMS[error['loc'][1]]}: {error['msg']}")
        scores.append(sus_score(response))
    frame["sus_score"] = scores
    return frame


def sus_medians(frame: pd.DataFrame) -> dict[str, float]:
    if "system" not in frame.columns:
        return {"all": median(frame["sus_score"].tolist())}
    return {str(system): median(group["sus_score"].tolist()) for system, group in frame.groupby("system", sort=True)}


def column_medians(frame: pd.DataFrame) -> dict[str, float]:
    numeric = frame.select_dtypes(include="number")
    if numeric.empty:
        raise StatsError("No numeric columns to summarize")
    return {str(column): median(numeric[column].dropna().tolist()) for column in numeric.columns}


def load_ratings(path: Path) -> pd.DataFrame:
    return _read_csv(path, ())
