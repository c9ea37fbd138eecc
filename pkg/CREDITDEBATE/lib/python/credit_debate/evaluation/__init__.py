from .stats import (
    EXACT_MAX_N,
    LatencyRecord,
    LatencySummary,
    PairedSample,
    SusResponse,
    WilcoxonMethod,
    WilcoxonResult,
    column_medians,
    exact_null_distribution,
    exact_p_value,
    latency_summary,
    load_latency,
    load_pairs,
    load_ratings,
    load_sus,
    median,
    signed_rank_sums,
    sus_medians,
    sus_score,
    wilcoxon_signed_rank,
)

__all__ = [
    "EXACT_MAX_N",
    "LatencyRecord",
    "LatencySummary",
    "PairedSample",
    "SusResponse",
    "WilcoxonMethod",
    "WilcoxonResult",
    "column_medians",
    "exact_null_distribution",
    "exact_p_value",
    "latency_summary",
    "load_latency",
    "load_pairs",
    "load_ratings",
    "load_sus",
    "median",
    "signed_rank_sums",
    "sus_medians",
    "sus_score",
    "wilcoxon_signed_rank",
]
