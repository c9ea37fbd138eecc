import logging
from functools import partial

from langgraph.graph import END, StateGraph

from .edges import edge_after_stage
from .nodes import (
    node_compose,
    node_generate,
    node_handle_error,
    node_persist,
    node_post_process,
    node_search,
    node_summarize,
)
from .session import NasSession
from .state import STAGES, NasState

_NODES = {
    "summarize": node_summarize,
    "search": node_search,
    "compose": node_compose,
    "generate": node_generate,
    "post_process": node_post_process,
    "persist": node_persist,
}


class NasGraph:

    def __init__(self, session: NasSession):
        self.session = session
        logging.debug("NasGraph initialized.")

    def build(self):
        """Builds and compiles the single-pass analysis pipeline."""
        workflow = StateGraph(NasState)

        for stage in STAGES:
            workflow.add_node(stage, partial(_NODES[stage], session=self.session))
        workflow.add_node("handle_error", partial(node_handle_error, session=self.session))

        workflow.set_entry_point(STAGES[0])

        for current, following in zip(STAGES, [*STAGES[1:], None]):
            workflow.add_conditional_edges(
                current,
                edge_after_stage,
                path_map={"continue": following or END, "error": "handle_error"},
            )

        workflow.add_edge("handle_error", END)

        return workflow.compile()
