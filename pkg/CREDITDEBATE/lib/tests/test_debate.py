import pytest

from credit_debate.agent import ScriptedBackend
from credit_debate.config import Strictness
from credit_debate.debate import (
    SCHEDULE,
    STEP_COUNT,
    StepKind,
    build_utterance,
    prepare_session,
    run_debate,
    step_spec,
    validate_step,
)
from credit_debate.debate.extraction import extract_structure
from credit_debate.errors import BackendError, ConfigurationError, ProtocolViolationError, StageError
from credit_debate.guideline import FactorUsageLedger
from credit_debate.journal import digest_text
from credit_debate.violations import FIXED_SEVERITY, Severity, ViolationKind

from .conftest import random_script

FILLER = " The order book also lengthened over the year, and customers kept extending service terms across their sites."


def _kinds(utterance):
    return [v.kind for v in utterance.violations]


class _FailingBackend(ScriptedBackend):
    def complete(self, bundle):
        if bundle.step == 4:
            raise BackendError("upstream timeout")
        return super().complete(bundle)


class TestSchedule:

    def test_speakers_and_kinds(self):
        assert [s.speaker for s in SCHEDULE] == ["A1", "N3", "N1", "A3", "A2", "N1", "N2", "A1", "A3", "N3"]
        assert [s.kind for s in SCHEDULE].count(StepKind.CROSS_EXAMINATION) == 4
        assert STEP_COUNT == 10

    def test_context_sets(self):
        contexts = {s.index: set(s.context_indices) for s in SCHEDULE}

        assert contexts == {1: set(), 2: {1}, 3: set(), 4: {3}, 5: {3}, 6: {5}, 7: {1}, 8: {7}, 9: {1, 2, 5, 8}, 10: {3, 4, 6, 7}}

    def test_limits(self):
        assert [s.char_limit for s in SCHEDULE] == [600, None, 600, None, 400, None, 400, None, 600, 600]
        assert [s.index for s in SCHEDULE if s.required_question_count == 3] == [2, 4, 6, 8]
        assert [s.index for s in SCHEDULE if not s.allow_new_factors] == [9, 10]

    def test_step_spec_bounds(self):
        assert step_spec(6).speaker == "N1"
        with pytest.raises(IndexError):
            step_spec(11)


class TestStepValidation:

    def test_wrong_speaker_is_an_order_breach(self):
        utterance = build_utterance(step_spec(3), "A1", "Industry growth holds (2025-03, KOSIS).")
        violations = validate_step(utterance, step_spec(3), FactorUsageLedger())
        assert ViolationKind.ORDER_BREACH in [v.kind for v in violations]


class TestDebateRun:

    # --- Test Case 1: The "Happy Path" ---
    def test_scripted_debate_completes_cleanly(self, pool, runtime, journal):
        transcript = run_debate("companyA", pool, runtime, run_id="r1", journal=journal)

        assert transcript.complete
        assert [u.step_index for u in transcript.utterances] == list(range(1, 11))
        assert [u.speaker for u in transcript.utterances] == [s.speaker for s in SCHEDULE]
        assert transcript.violations == []
        assert len(transcript.citation_pairs()) == 18
        assert transcript.session.company_name == "Hanbit Robotics"
        assert transcript.session.search_calls_used == 0
        assert transcript.closing_pro.speaker == "A3"
        assert transcript.closing_con.speaker == "N3"

    def test_each_step_sees_exactly_its_context(self, pool, runtime, journal):
        transcript = run_debate("companyA", pool, runtime, run_id="r1", journal=journal)

        for event in journal.select("step_started"):
            spec = step_spec(event["step"])
            assert set(event["context_indices"]) == set(spec.context_indices)
            expected = [digest_text(transcript.step(i).text) for i in spec.context_indices]
            assert event["context_digests"] == expected

    def test_journal_brackets_the_session(self, pool, runtime, journal):
        run_debate("companyA", pool, runtime, run_id="r1", journal=journal)
        events = [e["event"] for e in journal.events]

        assert events[0] == "session_started"
        assert events[-1] == "session_completed"
        assert events.count("generate") == 10
        assert [e["seq"] for e in journal.events] == list(range(1, len(events) + 1))

    def test_prepare_session_orders_evidence_and_briefs_agents(self, pool, runtime, journal):
        session = prepare_session("companyA", pool, runtime, run_id="r1", journal=journal)

        assert session.evidence_lines[0].startswith("(2025-06-30, Naver DataLab)")
        assert session.budget.max_calls == 3
        assert "Hanbit Robotics <topic> latest trends" in session.agents["A1"].system_prompt
        assert "Search Keyword: 'Hanbit Robotics + latest news'" in session.agents["A1"].system_prompt
        assert "regarding Hanbit Robotics's loan repayment capacity" in session.agents["aggregator"].system_prompt
        assert session.strict

    def test_incomplete_script_fails_before_any_step(self, pool, script, make_runtime, journal):
        del script["N3"]["10"]

        with pytest.raises(ConfigurationError, match="N3, step 10"):
            run_debate("companyA", pool, make_runtime(script), run_id="r1", journal=journal)
        assert journal.select("generate") == []


class TestSearch:

    def test_search_request_triggers_a_second_round(self, pool, script, make_runtime, journal):
        original = script["A1"]["1"]
        script["A1"]["1"] = {
            "text": original + '\n```sidecar\n{"search": ["Hanbit Robotics industry growth latest trends"]}\n```',
            "after_search": original + " Orders keep coming (2025-06-20, Yonhap).",
        }
        script["search_results"]["*"] = script["search_results"]["Hanbit Robotics latest news"]

        transcript = run_debate("companyA", pool, make_runtime(script), run_id="r1", journal=journal)

        assert transcript.step(1).text.endswith("(2025-06-20, Yonhap).")
        assert transcript.session.search_calls_used == 1
        search = journal.select("web_search")[0]
        assert (search["role"], search["step"], search["items"]) == ("A1", 1, 2)
        assert [e["round"] for e in journal.select("generate") if e["step"] == 1] == [1, 2]

    def test_closing_speaker_search_aborts_in_strict_mode(self, pool, script, make_runtime, journal):
        script["A3"]["9"] += '\n```sidecar\n{"search": ["Hanbit Robotics certification latest trends"]}\n```'

        with pytest.raises(ProtocolViolationError, match="tool_permission") as excinfo:
            run_debate("companyA", pool, make_runtime(script), run_id="r1", journal=journal)

        partial = excinfo.value.transcript
        assert not partial.complete
        assert partial.halted_at == 9
        assert len(partial.utterances) == 9
        assert ViolationKind.TOOL_PERMISSION in _kinds(partial.step(9))
        assert journal.select("search_denied")[0]["role"] == "A3"
        assert journal.select("session_partial")
        assert excinfo.value.exit_code == 5

    def test_closing_speaker_search_is_recorded_in_record_only_mode(self, pool, script, make_runtime, journal):
        script["A3"]["9"] += '\n```sidecar\n{"search": ["Hanbit Robotics certification latest trends"]}\n```'
        runtime = make_runtime(script, strictness=Strictness.RECORD_ONLY)

        transcript = run_debate("companyA", pool, runtime, run_id="r1", journal=journal)

        assert transcript.complete
        assert [v.kind for v in transcript.hard_violations] == [ViolationKind.TOOL_PERMISSION]
        assert transcript.session.search_calls_used == 0


class TestViolations:

    def test_new_factor_in_closing_is_hard(self, pool, script, make_runtime, journal):
        script["A3"]["9"] += " Employment Stability is solid (2025-01-05, National Pension Service)."

        with pytest.raises(ProtocolViolationError, match="new_factor_in_closing") as excinfo:
            run_debate("companyA", pool, make_runtime(script), run_id="r1", journal=journal)

        assert excinfo.value.transcript.halted_at == 9

    def test_char_limit_is_advisory(self, pool, script, make_runtime, journal):
        script["A2"]["5"] += FILLER * 2

        transcript = run_debate("companyA", pool, make_runtime(script), run_id="r1", journal=journal)

        assert transcript.complete
        assert _kinds(transcript.step(5)) == [ViolationKind.CHAR_LIMIT_EXCEEDED]
        assert transcript.step(5).violations[0].severity is Severity.ADVISORY

    def test_factor_reuse_with_the_same_evidence(self, pool, script, make_runtime, journal):
        script["A2"]["5"] = (
            "Industry Growth Outlook stays favorable: the market grew 12.4% (2025-03, 12.4%, KOSIS). "
            "Competitive intensity matters less than claimed (2025-01-15, company disclosure)."
        )

        transcript = run_debate("companyA", pool, make_runtime(script), run_id="r1", journal=journal)

        assert _kinds(transcript.step(5)) == [ViolationKind.FACTOR_REUSE]
        assert "industry_growth_outlook" in transcript.step(5).violations[0].detail

    def test_missing_questions_are_advisory(self, pool, script, make_runtime, journal):
        script["N3"]["2"] = "Is the market growth (2025-03, KOSIS) specific to service robots?"

        transcript = run_debate("companyA", pool, make_runtime(script), run_id="r1", journal=journal)

        assert _kinds(transcript.step(2)) == [ViolationKind.INSUFFICIENT_QUESTIONS]


class TestAborts:

    def test_out_of_order_execution_halts(self, pool, runtime, journal):
        with pytest.raises(ProtocolViolationError, match="step 2") as excinfo:
            run_debate("companyA", pool, runtime, run_id="r1", journal=journal, step_order=[2, 1, 3, 4, 5, 6, 7, 8, 9, 10])

        assert excinfo.value.transcript.utterances == []
        assert journal.select("order_breach")[0]["expected"] == 1

    def test_skipping_a_step_halts_after_the_spoken_ones(self, pool, runtime, journal):
        with pytest.raises(ProtocolViolationError) as excinfo:
            run_debate("companyA", pool, runtime, run_id="r1", journal=journal, step_order=[1, 2, 3, 4, 5, 6, 7, 8, 10, 9])

        assert len(excinfo.value.transcript.utterances) == 8
        assert excinfo.value.transcript.halted_at == 10

    def test_backend_failure_keeps_the_partial_transcript(self, pool, script, make_runtime, journal):
        runtime = make_runtime(script)
        runtime = runtime.model_copy(update={"backend": _FailingBackend(script)})

        with pytest.raises(StageError) as excinfo:
            run_debate("companyA", pool, runtime, run_id="r1", journal=journal)

        assert excinfo.value.stage == "step_4"
        assert excinfo.value.exit_code == 4
        assert [u.step_index for u in excinfo.value.transcript.utterances] == [1, 2, 3]
        assert journal.select("aborted")[0]["completed_steps"] == [1, 2, 3]


class TestProtocolProperties:

    @pytest.mark.parametrize("seed", range(100))
    def test_random_debates_follow_the_protocol(self, seed, pool, make_runtime, journal):
        runtime = make_runtime(random_script(seed), strictness=Strictness.RECORD_ONLY)

        transcript = run_debate("companyA", pool, runtime, run_id=f"seed{seed}", journal=journal)

        assert transcript.complete
        assert [u.speaker for u in transcript.utterances] == [s.speaker for s in SCHEDULE]
        for event in journal.select("step_started"):
            assert set(event["context_indices"]) == set(step_spec(event["step"]).context_indices)

        for utterance, spec in zip(transcript.utterances, SCHEDULE, strict=True):
            kinds = _kinds(utterance)
            over_limit = spec.char_limit is not None and len(utterance.prose) > spec.char_limit
            assert (ViolationKind.CHAR_LIMIT_EXCEEDED in kinds) == over_limit
            if spec.required_question_count:
                assert (ViolationKind.INSUFFICIENT_QUESTIONS in kinds) == (utterance.question_count < 3)
            if not spec.allow_new_factors:
                context = {f for i in spec.context_indices for f in transcript.step(i).factors}
                flagged = {v.detail for v in utterance.violations if v.kind is ViolationKind.NEW_FACTOR_IN_CLOSING}
                assert flagged == set(utterance.factors) - context
            assert len(utterance.citations) == len(extract_structure(utterance.text).citations)
            for violation in utterance.violations:
                assert violation.kind not in (ViolationKind.ORDER_BREACH, ViolationKind.TOOL_PERMISSION)
                if violation.kind in FIXED_SEVERITY:
                    assert violation.severity is FIXED_SEVERITY[violation.kind]
