import json
import re
from collections.abc import Sequence
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np
from jsonschema import Draft202012Validator
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..debate.extraction import find_citations, split_sentences
from ..errors import TreeFormatError
from ..nas.report import AnalysisReport, format_error_path
from ..synthesis import DebateSummaryReport

IMPLICATION = re.compile(
    r"→|->|=>|\btherefore\b|\bthus\b|\bhence\b|\bimplies\b|\bwhich means\b|repayment|따라서|그러므로|상환",
    re.IGNORECASE,
)

_NODE_SCHEMA = {
    "oneOf": [
        {"type": "string", "minLength": 1},
        {
            "type": "object",
            "required": ["statement"],
            "properties": {
                "statement": {"type": "string", "minLength": 1},
                "relation": {"enum": ["supports", "counters", "implies"]},
            },
        },
    ]
}

TREE_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["root_claim", "branches"],
    "properties": {
        "root_claim": {"type": "string"},
        "branches": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["topic", "nodes"],
                "properties": {
                    "topic": {"type": "string", "minLength": 1},
                    "nodes": {"type": "array", "items": {"type": "array", "items": _NODE_SCHEMA}},
                },
            },
        },
        "metadata": {"type": "object"},
    },
}

_VALIDATOR = Draft202012Validator(TREE_SCHEMA)


class Relation(str, Enum):
    SUPPORTS = "supports"
    COUNTERS = "counters"
    IMPLIES = "implies"


class TreeNode(BaseModel):
    model_config = ConfigDict(frozen=True)

    statement: str
    relation: Relation = Relation.SUPPORTS


class Branch(BaseModel):
    topic: str
    levels: list[list[TreeNode]] = Field(min_length=1)

    @property
    def depth(self) -> int:
        return len(self.levels)


class ReasoningTree(BaseModel):
    root_claim: str
    branches: list[Branch]
    metadata: dict[str, Any] = {}

    def to_json(self) -> dict[str, Any]:
        document = {
            "root_claim": self.root_claim,
            "branches": [
                {
                    "topic": b.topic,
                    "nodes": [[{"statement": n.statement, "relation": n.relation.value} for n in level] for level in b.levels],
                }
                for b in self.branches
            ],
        }
        if self.metadata:
            document["metadata"] = self.metadata
        return document


class ReiResult(BaseModel):
    breadth: int
    depth_profile: list[int]
    rei: int

    @model_validator(mode="after")
    def _consistent(self):
        if self.breadth != len(self.depth_profile) or self.rei != sum(self.depth_profile):
            raise ValueError("REI result does not match its depth profile")
        return self


class ReiSummary(BaseModel):
    count: int
    mean: float
    std: float

    def __str__(self) -> str:
        return f"{self.mean:.2f} ± {self.std:.2f}"


def load_tree(document: Any) -> ReasoningTree:
    """Read a hand-authored tree document. Each branch lists its levels; depth is the level count."""
    if isinstance(document, dict) and isinstance(document.get("branches"), list):
        for i, branch in enumerate(document["branches"]):
            if isinstance(branch, dict) and branch.get("nodes") == []:
                raise TreeFormatError("Branch has no argumentation levels", position=f"branches[{i}]")

    errors = sorted(_VALIDATOR.iter_errors(document), key=lambda e: [str(p) for p in e.absolute_path])
    if errors:
        error = errors[0]
        raise TreeFormatError(error.message, position=format_error_path(list(error.absolute_path)) or "<root>")

    branches = []
    for i, branch in enumerate(document["branches"]):
        levels = []
        for j, level in enumerate(branch["nodes"]):
            if not level:
                raise TreeFormatError("Empty argumentation level", position=f"branches[{i}].nodes[{j}]")
            levels.append([TreeNode(statement=n) if isinstance(n, str) else TreeNode(**n) for n in level])
        branches.append(Branch(topic=branch["topic"], levels=levels))
    return ReasoningTree(root_claim=document["root_claim"], branches=branches, metadata=document.get("metadata", {}))


def load_tree_file(path: Path) -> ReasoningTree:
    try:
        document = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise TreeFormatError(f"Invalid JSON in {path}: {e.msg}", position=f"line {e.lineno} column {e.colno}")
    return load_tree(document)


def _citations(text: str) -> list[str]:
    found = []
    for sentence in split_sentences(text):
        citations, _ = find_citations(sentence)
        found.extend(f"({c.date}, {c.source})" for c in citations if c.is_complete)
    return found


def _branch(topic: str, claim: str, counter: str, cited: list[str], chained: bool) -> Branch:
    claim_text = claim.strip() or counter.strip() or topic
    levels = [[TreeNode(statement=claim_text)]]
    if cited:
        levels.append([TreeNode(statement=c) for c in cited])
        implication = [s for s in split_sentences(f"{claim} {counter}") if IMPLICATION.search(s)]
        if implication:
            levels.append([TreeNode(statement=s, relation=Relation.IMPLIES) for s in implication])
        elif chained:
            levels.append([TreeNode(statement=counter.strip(), relation=Relation.COUNTERS)])
    return Branch(topic=topic, levels=levels)


def build_tree_from_report(report: AnalysisReport | DebateSummaryReport) -> ReasoningTree:
    """
    Heuristic tree: one branch per topic. Level 1 is the claim, level 2 the dated citations,
    level 3 an implication or, in a debate summary, the answer from the other side.
    """
    branches = []
    if isinstance(report, DebateSummaryReport):
        for topic in report.topics:
            cited = [f"({s.date}, {s.source})" for s in topic.sources if s.date and s.source]
            cited = cited or _citations(f"{topic.pro} {topic.con}")
            branches.append(_branch(topic.topic, topic.pro, topic.con, cited, bool(topic.pro and topic.con)))
        root, kind = report.objective_statement or report.company_id, "debate"
    else:
        for topic in report.topics:
            cited = _citations(f"{topic.affirmative} {topic.adverse}")
            branches.append(_branch(topic.topic, topic.affirmative, topic.adverse, cited, False))
        root, kind = f"Non-financial credit assessment of {report.company_id}".strip(), "nas"
    return ReasoningTree(root_claim=root, branches=branches, metadata={"heuristic": True, "report": kind})


def compute_rei(tree: ReasoningTree) -> ReiResult:
    depths = [branch.depth for branch in tree.branches]
    return ReiResult(breadth=len(depths), depth_profile=depths, rei=sum(depths))


def summarize_rei(results: Sequence[ReiResult]) -> ReiSummary:
    """Mean and sample standard deviation of REI across reports."""
    values = np.array([r.rei for r in results], dtype=float)
    if values.size == 0:
        raise ValueError("No REI results to summarize")
    std = float(values.std(ddof=1)) if values.size > 1 else 0.0
    return ReiSummary(count=int(values.size), mean=float(values.mean()), std=std)
