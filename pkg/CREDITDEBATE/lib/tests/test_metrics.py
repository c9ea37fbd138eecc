import json

import pytest

from credit_debate.debate import run_debate
from credit_debate.errors import TreeFormatError
from credit_debate.metrics import (
    Relation,
    ReiResult,
    build_tree_from_report,
    compute_rei,
    load_tree,
    load_tree_file,
    summarize_rei,
)
from credit_debate.nas import post_process
from credit_debate.synthesis import aggregate

from .conftest import TREES_DIR


def _rei(name):
    return compute_rei(load_tree_file(TREES_DIR / f"{name}.json"))


class TestHandAuthoredTrees:

    @pytest.mark.parametrize(
        "name, expected",
        [
            ("nas_companyA", 7),
            ("nas_companyB", 8),
            ("nas_companyC", 9),
            ("kpd_companyA", 12),
            ("kpd_companyB", 13),
            ("kpd_companyC", 18),
        ],
    )
    def test_rei_of_fixture_trees(self, name, expected):
        assert _rei(name).rei == expected

    def test_depth_profile_counts_levels(self):
        result = _rei("kpd_companyA")

        assert result.depth_profile == [3, 3, 3, 1, 1, 1]
        assert result.breadth == 6

    def test_summaries_over_companies(self):
        nas = summarize_rei([_rei(f"nas_company{c}") for c in "ABC"])
        kpd = summarize_rei([_rei(f"kpd_company{c}") for c in "ABC"])

        assert str(nas) == "8.00 ± 1.00"
        assert str(kpd) == "14.33 ± 3.21"
        assert kpd.count == 3

    def test_single_result_has_zero_spread(self):
        assert summarize_rei([ReiResult(breadth=1, depth_profile=[2], rei=2)]).std == 0.0

    def test_inconsistent_result_is_rejected(self):
        with pytest.raises(ValueError):
            ReiResult(breadth=2, depth_profile=[1], rei=1)

    def test_node_objects_carry_relations(self):
        tree = load_tree(
            {
                "root_claim": "Credit standing",
                "branches": [
                    {
                        "topic": "Certifications",
                        "nodes": [["Renewed INNOBIZ"], [{"statement": "Loans get cheaper", "relation": "implies"}]],
                    }
                ],
            }
        )

        assert tree.branches[0].levels[1][0].relation is Relation.IMPLIES
        assert compute_rei(tree).rei == 2
        assert load_tree(tree.to_json()) == tree


class TestTreeFormatErrors:

    def test_branch_without_levels(self):
        document = {"root_claim": "x", "branches": [{"topic": "a", "nodes": [["c"]]}, {"topic": "b", "nodes": []}]}

        with pytest.raises(TreeFormatError, match="Branch has no argumentation levels") as excinfo:
            load_tree(document)

        assert excinfo.value.position == "branches[1]"

    def test_empty_level(self):
        with pytest.raises(TreeFormatError) as excinfo:
            load_tree({"root_claim": "x", "branches": [{"topic": "a", "nodes": [["c"], []]}]})

        assert excinfo.value.position == "branches[0].nodes[1]"

    def test_missing_root_claim(self):
        with pytest.raises(TreeFormatError) as excinfo:
            load_tree({"branches": []})

        assert excinfo.value.position == "<root>"
        assert excinfo.value.exit_code == 5

    def test_unknown_relation(self):
        with pytest.raises(TreeFormatError):
            load_tree({"root_claim": "x", "branches": [{"topic": "a", "nodes": [[{"statement": "s", "relation": "maybe"}]]}]})

    def test_invalid_json_file(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"root_claim": ', encoding="utf-8")

        with pytest.raises(TreeFormatError) as excinfo:
            load_tree_file(path)

        assert excinfo.value.position.startswith("line 1")


class TestHeuristicTrees:

    def test_nas_report_tree(self, script):
        report = post_process(script["nas_analyst"]["nas"], company_id="companyA")

        tree = build_tree_from_report(report)

        assert compute_rei(tree).depth_profile == [3, 3, 3]
        assert tree.metadata == {"heuristic": True, "report": "nas"}
        assert tree.branches[0].levels[1][0].statement == "(2025-03-31, KOSIS)"
        assert tree.branches[0].levels[2][0].relation is Relation.IMPLIES

    def test_claim_without_citation_stays_one_level(self):
        report = post_process(
            json.dumps(
                {
                    "Analysis Summary": {
                        "Favorable Factors Summary": [],
                        "Adverse Factors Summary": [],
                        "topics": [{"topic": "Certifications", "Affirmative": "Certified.", "Adverse": ""}],
                    }
                }
            ),
            company_id="acme",
        )

        assert compute_rei(build_tree_from_report(report)).depth_profile == [1]

    def test_debate_summary_tree(self, pool, runtime, journal):
        transcript = run_debate("companyA", pool, runtime, run_id="r1", journal=journal)
        report = aggregate(transcript)

        tree = build_tree_from_report(report)
        result = compute_rei(tree)

        assert [b.topic for b in tree.branches] == report.topic_labels()
        assert result.depth_profile == [3] * 6
        assert tree.metadata["report"] == "debate"
