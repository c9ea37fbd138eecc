from .rei import (
    Branch,
    ReasoningTree,
    ReiResult,
    ReiSummary,
    Relation,
    TreeNode,
    build_tree_from_report,
    compute_rei,
    load_tree,
    load_tree_file,
    summarize_rei,
)

__all__ = [
    "Branch",
    "ReasoningTree",
    "ReiResult",
    "ReiSummary",
    "Relation",
    "TreeNode",
    "build_tree_from_report",
    "compute_rei",
    "load_tree",
    "load_tree_file",
    "summarize_rei",
]
