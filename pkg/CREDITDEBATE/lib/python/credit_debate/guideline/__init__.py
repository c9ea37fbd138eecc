from .factors import (
    FACTOR_IDS,
    Factor,
    FactorTable,
    ObservationPolarity,
    SignalPolarity,
    classify_signal,
    load_factor_table,
)
from .usage import FactorUsageLedger, Side, check_factor_reuse, evidence_fingerprint, record_usage

__all__ = [
    "FACTOR_IDS",
    "Factor",
    "FactorTable",
    "FactorUsageLedger",
    "ObservationPolarity",
    "Side",
    "SignalPolarity",
    "check_factor_reuse",
    "classify_signal",
    "evidence_fingerprint",
    "load_factor_table",
    "record_usage",
]
