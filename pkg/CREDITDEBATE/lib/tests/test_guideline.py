import pytest

from credit_debate.errors import ClassificationError
from credit_debate.guideline import (
    FACTOR_IDS,
    FactorTable,
    FactorUsageLedger,
    SignalPolarity,
    check_factor_reuse,
    classify_signal,
    evidence_fingerprint,
    load_factor_table,
    record_usage,
)
from credit_debate.violations import Severity, ViolationKind


class TestFactorTable:

    def test_table_lists_the_ten_factors_in_order(self):
        table = load_factor_table()

        assert [f.id for f in table] == list(FACTOR_IDS)
        assert table.label_for("certification_status") == "Certifications"
        assert table.label_for("esg") == "esg"

    def test_table_rejects_a_partial_factor_list(self):
        factors = list(load_factor_table())[:9]

        with pytest.raises(ValueError):
            FactorTable(factors)

    @pytest.mark.parametrize(
        "name, expected",
        [
            ("Industry Growth Outlook", "industry_growth_outlook"),
            ("industry_growth", "industry_growth_outlook"),
            ("economic cyclicalities", "economic_cyclicality"),
            ("INNOBIZ", "certification_status"),
            ("management   continuity", "managerial_continuity"),
            ("Public Perception", "search_volume_trend"),
            ("ESG rating", None),
        ],
    )
    def test_resolve_aliases(self, name, expected):
        assert load_factor_table().resolve(name) == expected

    def test_longest_alias_wins(self):
        mentions = load_factor_table().find_mentions("The industry growth outlook is strong.")

        assert mentions == [(4, "industry_growth_outlook")]

    def test_factors_in_keeps_first_mention_order(self):
        text = "Competitive intensity is high, INNOBIZ certification helps, and competition intensity persists."

        assert load_factor_table().factors_in(text) == ["competition_intensity", "certification_status"]

    def test_hangul_aliases_match_before_particles(self):
        assert load_factor_table().factors_in("정부 지원이 확대되었고 경기 민감도가 높다") == [
            "government_support",
            "economic_cyclicality",
        ]

    def test_words_containing_an_alias_do_not_match(self):
        assert load_factor_table().factors_in("Recertifications were delayed.") == []


class TestClassifySignal:

    @pytest.mark.parametrize(
        "factor, observation, expected",
        [
            ("industry_growth_outlook", "higher", SignalPolarity.FAVORABLE),
            ("Industry Competitive Intensity", "higher", SignalPolarity.ADVERSE),
            ("technological_disruption_risk", "lower", SignalPolarity.FAVORABLE),
            ("government_support", "present", SignalPolarity.FAVORABLE),
            ("government_support", "absent", SignalPolarity.CONTEXT_DEPENDENT),
            ("managerial_continuity", "less_stable", SignalPolarity.ADVERSE),
            ("search_volume_trend", "increasing", SignalPolarity.FAVORABLE),
        ],
    )
    def test_direction_rules(self, factor, observation, expected):
        assert classify_signal(factor, observation) is expected

    def test_factor_outside_the_table_is_context_dependent(self):
        assert classify_signal("ESG rating", "higher") is SignalPolarity.CONTEXT_DEPENDENT

    def test_observation_not_covered_by_the_rule(self):
        with pytest.raises(ClassificationError):
            classify_signal("managerial_continuity", "higher")

    def test_unknown_observation(self):
        with pytest.raises(ClassificationError):
            classify_signal("industry_growth_outlook", "sideways")


class TestFactorUsage:

    def test_same_side_same_evidence_is_reuse(self):
        fingerprint = evidence_fingerprint("2025-03", "KOSIS", "12.4%")
        ledger = record_usage(FactorUsageLedger(), "affirmative", "industry_growth_outlook", fingerprint, 1)
        ledger = record_usage(ledger, "affirmative", "industry_growth_outlook", fingerprint, 5)

        violations = check_factor_reuse(ledger)

        assert len(violations) == 1
        assert violations[0].kind is ViolationKind.FACTOR_REUSE
        assert violations[0].severity is Severity.ADVISORY
        assert violations[0].step_index == 5

    def test_other_side_or_new_evidence_is_not_reuse(self):
        first = evidence_fingerprint("2025-03", "KOSIS")
        ledger = record_usage(FactorUsageLedger(), "affirmative", "industry_growth_outlook", first, 1)
        ledger = record_usage(ledger, "negative", "industry_growth_outlook", first, 3)
        ledger = record_usage(ledger, "affirmative", "industry_growth_outlook", evidence_fingerprint("2025-06", "KIRIA"), 5)

        assert check_factor_reuse(ledger) == []
        assert ledger.totals()[("affirmative", "industry_growth_outlook")] == 2

    def test_recording_returns_a_new_ledger(self):
        empty = FactorUsageLedger()
        ledger = record_usage(empty, "negative", "economic_cyclicality", evidence_fingerprint(None, None), 7)

        assert len(empty) == 0
        assert ledger.uses("negative", "economic_cyclicality") == [(7, evidence_fingerprint(None, None))]

    def test_fingerprint_ignores_surrounding_whitespace(self):
        assert evidence_fingerprint("2025-03 ", " KOSIS") == evidence_fingerprint("2025-03", "KOSIS")
