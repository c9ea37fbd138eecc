import json

import pytest

from credit_debate.config import SearchMode
from credit_debate.errors import InsufficientDataError, ReportParseError, ReportSchemaError, StageError
from credit_debate.knowledge import RecencyPolicy
from credit_debate.nas import (
    STAGES,
    compose_prompt,
    extract_json_object,
    is_sparse,
    post_process,
    render_analysis_report,
    report_from_document,
    run_nas,
    schema_errors,
)

from .conftest import AS_OF, REPORTS_DIR

VALID = {
    "Analysis Summary": {
        "Favorable Factors Summary": ["Demand grows (2025-03-31, KOSIS)."],
        "Adverse Factors Summary": [],
        "topics": [{"topic": "Industry Growth Outlook", "Affirmative": "Demand grows (2025-03-31, KOSIS).", "Adverse": ""}],
    }
}


class TestPostProcess:

    def test_example_output_from_the_analysis_prompt(self):
        raw = (REPORTS_DIR / "analysis_example.json").read_text(encoding="utf-8")

        report = post_process(raw)

        assert len(report.favorable_summary) == 2
        assert len(report.adverse_summary) == 2
        assert [t.topic for t in report.topics] == ["Supply Chain Stability"]
        assert "KITA Supply Chain Brief (Jan 2024)" in report.topics[0].adverse

    def test_example_output_echoed_in_a_fence(self):
        raw = "```\n" + (REPORTS_DIR / "analysis_example.json").read_text(encoding="utf-8") + "```"

        assert post_process(raw).favorable_summary[0] == "Potential mitigation of risk through supply chain diversification"

    def test_prompt_example_matches_the_fixture(self, prompt_library):
        prompt = prompt_library.task("nas_analysis", company_name="Acme", company_id="acme", digest=[], web=[])
        expected = json.loads((REPORTS_DIR / "analysis_example.json").read_text(encoding="utf-8"))

        assert extract_json_object(prompt) == expected

    def test_fenced_answer_with_prose_around_it(self):
        raw = "Sure, here it is:\n```json\n" + json.dumps(VALID) + "\n```\nLet me know."

        report = post_process(raw, company_id="acme")

        assert report.company_id == "acme"
        assert report.topics[0].topic == "Industry Growth Outlook"
        assert report.topics[0].adverse == ""

    def test_first_decodable_object_wins(self):
        raw = "Draft {not json} then " + json.dumps(VALID)

        assert extract_json_object(raw) == VALID

    def test_malformed_object_reports_an_offset(self):
        with pytest.raises(ReportParseError) as excinfo:
            extract_json_object('prefix {"Analysis Summary": [1, 2')
        assert excinfo.value.offset > 0
        assert excinfo.value.exit_code == 5

    def test_no_object_at_all(self):
        with pytest.raises(ReportParseError) as excinfo:
            extract_json_object("I cannot answer that.")
        assert excinfo.value.offset == len("I cannot answer that.")

    def test_schema_errors_name_the_offending_path(self):
        document = json.loads(json.dumps(VALID))
        del document["Analysis Summary"]["topics"][0]["Adverse"]
        del document["Analysis Summary"]["Adverse Factors Summary"]

        with pytest.raises(ReportSchemaError) as excinfo:
            report_from_document(document)

        assert set(excinfo.value.paths) == {
            "Analysis Summary.Adverse Factors Summary",
            "Analysis Summary.topics[0].Adverse",
        }

    def test_missing_summary_is_reported_at_the_root(self):
        assert schema_errors({"summary": {}}) == [("Analysis Summary", "'Analysis Summary' is a required property")]

    def test_render_then_read_back(self):
        report = report_from_document(VALID, company_id="acme")

        assert report_from_document(render_analysis_report(report), company_id="acme") == report


class TestCompose:

    def test_prompt_carries_guideline_digest_and_web_evidence(self, pool, prompt_library):
        summary = pool.summarize_company("companyA")
        policy = RecencyPolicy(window_days=90, as_of=AS_OF)
        web = [summary.evidence[0]]

        bundle = compose_prompt(summary, web, prompt_library.guideline_text(), prompts=prompt_library, policy=policy)

        assert bundle.role == "nas_analyst"
        assert bundle.step == "nas"
        assert "Criterion: Stronger = (-)" in bundle.system
        assert "[Industry Growth Outlook]" in bundle.task
        assert "as of 2025-07-01" in bundle.task
        assert f"- {web[0]}" in bundle.task

    def test_sparse_detection(self, pool):
        policy = RecencyPolicy(window_days=90, as_of=AS_OF)

        assert not is_sparse(pool.summarize_company("companyA"), policy)
        assert is_sparse(pool.summarize_company("companyB"), policy)


class TestRunNas:

    # --- Test Case 1: The "Happy Path" ---
    def test_single_pass_report(self, pool, runtime, journal, tmp_path):
        report = run_nas("companyA", pool, runtime, run_id="r1", journal=journal, output_dir=tmp_path)

        assert [t.topic for t in report.topics] == [
            "Industry Growth Outlook",
            "Industry Competitive Intensity",
            "Certifications",
        ]
        assert len(report.favorable_summary) == 2
        assert report.metadata.company_id == "companyA"
        assert report.metadata.run_id == "r1"
        assert report.metadata.model_id == runtime.backend.model_id

        written = json.loads((tmp_path / "companyA_r1_nas_report.json").read_text(encoding="utf-8"))
        assert report_from_document(written) == report

    def test_stages_run_in_order_with_one_generation(self, pool, runtime, journal):
        run_nas("companyA", pool, runtime, run_id="r1", journal=journal)

        assert [e["stage"] for e in journal.select("stage")] == list(STAGES)
        assert len(journal.select("generate")) == 1
        search = journal.select("pipeline_search")[0]
        assert search["query"] == "Hanbit Robotics latest news"
        assert search["items"] == 2

    def test_if_sparse_skips_search_for_well_covered_companies(self, pool, make_runtime, script, journal):
        runtime = make_runtime(script, search_mode=SearchMode.IF_SPARSE)

        run_nas("companyA", pool, runtime, run_id="r1", journal=journal)

        assert journal.select("pipeline_search") == []
        assert journal.select("stage")[1]["skipped"] is True

    def test_if_sparse_searches_for_sparse_companies(self, pool, make_runtime, script, journal):
        runtime = make_runtime(script, search_mode=SearchMode.IF_SPARSE)

        run_nas("companyB", pool, runtime, run_id="r1", journal=journal)

        assert journal.select("pipeline_search")[0]["query"] == "Daon Foods latest news"

    def test_zero_budget_still_produces_a_report(self, pool, make_runtime, script, journal):
        runtime = make_runtime(script, max_search=0)

        report = run_nas("companyA", pool, runtime, run_id="r1", journal=journal)

        assert journal.select("pipeline_search")[0]["budget_exhausted"] is True
        assert len(report.topics) == 3


class TestStageErrors:

    def test_unknown_company_fails_at_summarize(self, pool, runtime, journal):
        with pytest.raises(StageError) as excinfo:
            run_nas("nobody", pool, runtime, run_id="r1", journal=journal)

        assert excinfo.value.stage == "summarize"
        assert isinstance(excinfo.value.cause, InsufficientDataError)
        assert journal.select("aborted")[0]["completed_stages"] == []

    def test_unreadable_answer_fails_at_post_process(self, pool, make_runtime, script, journal):
        script["nas_analyst"]["nas"] = "I would rather not."

        with pytest.raises(StageError) as excinfo:
            run_nas("companyA", pool, make_runtime(script), run_id="r1", journal=journal)

        assert excinfo.value.stage == "post_process"
        assert excinfo.value.exit_code == 5
        aborted = journal.select("aborted")[0]
        assert aborted["completed_stages"] == ["summarize", "search", "compose", "generate"]
        assert aborted["raw"] == "I would rather not."

    def test_schema_mismatch_fails_at_post_process(self, pool, make_runtime, script, journal):
        script["nas_analyst"]["nas"] = json.dumps({"Analysis Summary": {"topics": []}})

        with pytest.raises(StageError) as excinfo:
            run_nas("companyA", pool, make_runtime(script), run_id="r1", journal=journal)

        assert isinstance(excinfo.value.cause, ReportSchemaError)
        assert "Analysis Summary.Favorable Factors Summary" in excinfo.value.cause.paths

    def test_malformed_search_results_fail_at_search(self, pool, make_runtime, script, journal):
        script["search_results"] = {"*": [{"title": None, "source": "Yonhap"}]}

        with pytest.raises(StageError) as excinfo:
            run_nas("companyA", pool, make_runtime(script), run_id="r1", journal=journal)

        assert excinfo.value.stage == "search"
        assert excinfo.value.exit_code == 4
        assert "0.title" in str(excinfo.value.cause)
        assert journal.select("aborted")[0]["completed_stages"] == ["summarize"]
