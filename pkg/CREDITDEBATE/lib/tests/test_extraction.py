import pytest

from credit_debate.debate import extract_structure
from credit_debate.debate.extraction import parse_marker, split_sentences

IGO = "industry_growth_outlook"
COMP = "competition_intensity"
TECH = "technological_disruption_risk"
ECON = "economic_cyclicality"
GOV = "government_support"
CERT = "certification_status"

# Hand-labelled utterances with the (date, source) pairs a reader would mark as citations.
LABELLED_UTTERANCES = [
    ("Sales grew 12% (2025-03-31, KOSIS).", [("2025-03-31", "KOSIS")]),
    ("Margins fell (2024.12, Bank of Korea).", [("2024.12", "Bank of Korea")]),
    (
        "The grant was approved (12 March 2024, Ministry of SMEs and Startups).",
        [("12 March 2024", "Ministry of SMEs and Startups")],
    ),
    ("수출이 증가했다 (2024년 3월, 관세청).", [("2024년 3월", "관세청")]),
    ("Order growth slowed to 3% (2025-06, 3%, KIRIA).", [("2025-06", "KIRIA")]),
    ("Turnover is low [2025-01-05, National Pension Service].", [("2025-01-05", "National Pension Service")]),
    (
        "Demand is rising. Source: 'Korea Economic Daily, Robot boom (2025-04-02)'",
        [("2025-04-02", "Korea Economic Daily, Robot boom")],
    ),
    ('Prices are falling. Source: "Yonhap, 2025-05-20"', [("2025-05-20", "Yonhap")]),
    ("Rivals cut prices (Source: Maeil Business).", [(None, "Maeil Business")]),
    ("Orders doubled (2025-02).", [("2025-02", None)]),
    ("The firm (a robotics maker) grew steadily.", []),
    (
        "Exports rose (2025-01, KITA) while imports fell (2025-02, Korea Customs Service).",
        [("2025-01", "KITA"), ("2025-02", "Korea Customs Service")],
    ),
    (
        "Growth is strong (2025-03, KOSIS). Competition is fierce (2025-04-02, Korea Economic Daily).",
        [("2025-03", "KOSIS"), ("2025-04-02", "Korea Economic Daily")],
    ),
    ("The patent was granted (2023, KIPRIS).", [("2023", "KIPRIS")]),
    ("Search interest rose (Jun 2025, Naver DataLab).", [("Jun 2025", "Naver DataLab")]),
    ("Headcount reached 212 employees (up 5%).", []),
    ("고용이 안정적이다 (출처: 국민연금공단, 2025-01-05).", [("2025-01-05", "국민연금공단")]),
    ("Market size hit a record (2025.03.31., KOSIS).", [("2025.03.31.", "KOSIS")]),
    (
        'Government support helps.\n```sidecar\n{"citations": [{"date": "2025-02-10", "source": "MSS", '
        '"factor": "government support"}]}\n```',
        [("2025-02-10", "MSS")],
    ),
    (
        'Industry growth holds (2025-03, KOSIS).\n```sidecar\n{"citations": [{"date": "2025-03", '
        '"source": "KOSIS", "factor": "industry growth"}]}\n```',
        [("2025-03", "KOSIS")],
    ),
]

EXPECTED_FACTORS = {
    1: [IGO, CERT, GOV],
    2: [CERT, GOV],
    3: [COMP, TECH, IGO],
    4: [IGO],
    5: [COMP, TECH, CERT],
    6: [CERT],
    7: [GOV, ECON],
    8: [ECON],
    9: [IGO, CERT, GOV, COMP],
    10: [COMP, TECH, GOV, ECON],
}

SPEAKERS = {1: "A1", 2: "N3", 3: "N1", 4: "A3", 5: "A2", 6: "N1", 7: "N2", 8: "A1", 9: "A3", 10: "N3"}


def _step_text(script, index):
    return script[SPEAKERS[index]][str(index)]


class TestCitationMarkers:

    @pytest.mark.parametrize("text, expected", LABELLED_UTTERANCES)
    def test_labelled_utterance(self, text, expected):
        assert [c.pair for c in extract_structure(text).citations] == expected

    def test_labelled_suite_has_no_misses_or_false_positives(self):
        found = sum(len(extract_structure(text).citations) for text, _ in LABELLED_UTTERANCES)
        labelled = sum(len(expected) for _, expected in LABELLED_UTTERANCES)

        assert found == labelled == 20

    def test_values_are_kept_apart_from_the_source(self):
        citation = parse_marker("2025-03, 12.4%, KOSIS")

        assert citation.value == "12.4%"
        assert citation.source == "KOSIS"

    def test_sidecar_adds_the_factor_of_its_citation(self):
        structure = extract_structure(LABELLED_UTTERANCES[18][0])

        assert structure.citations[0].from_sidecar
        assert structure.citations[0].factor == GOV
        assert structure.factors == [GOV]

    def test_sentence_splitting_respects_markers(self):
        assert split_sentences("Rates rose (2025.03. BOK). Then fell.") == ["Rates rose (2025.03. BOK).", "Then fell."]


class TestUtteranceStructure:

    @pytest.mark.parametrize("index", range(1, 11))
    def test_fixture_factors(self, script, index):
        assert extract_structure(_step_text(script, index)).factors == EXPECTED_FACTORS[index]

    def test_fixture_citation_total(self, script):
        citations = [c for i in range(1, 11) for c in extract_structure(_step_text(script, i)).citations]

        assert len(citations) == 18
        assert all(c.is_complete for c in citations)

    @pytest.mark.parametrize("index, expected", [(1, 0), (2, 3), (4, 3), (6, 3), (8, 3), (9, 0)])
    def test_question_count(self, script, index, expected):
        assert extract_structure(_step_text(script, index)).question_count == expected

    def test_falsifiability_notes(self, script):
        assert extract_structure(_step_text(script, 1)).falsifiability_notes == (
            "This position would be wrong if the grant were withdrawn."
        )
        assert "disproven" in extract_structure(_step_text(script, 3)).falsifiability_notes
        assert extract_structure(_step_text(script, 5)).falsifiability_notes is None

    def test_uncited_figures_are_flagged(self):
        structure = extract_structure("Revenue rose 20% last year. Exports rose 5% (2025-01, KITA).")

        assert structure.unmarked_claims == [0]

    def test_sidecar_factors_and_falsifiability(self):
        text = 'We stand by it.\n```sidecar\n{"factors": ["cyclicality"], "falsifiability": "A recession would refute this."}\n```'
        structure = extract_structure(text)

        assert structure.prose == "We stand by it."
        assert structure.factors == [ECON]
        assert structure.falsifiability_notes == "A recession would refute this."
