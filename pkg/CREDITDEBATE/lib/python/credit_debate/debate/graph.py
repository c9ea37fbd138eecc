import logging
from collections.abc import Sequence
from functools import partial

from langgraph.graph import END, StateGraph

from .edges import edge_after_step
from .nodes import node_debate_step, node_handle_error
from .schedule import SCHEDULE, DebateStepSpec
from .session import DebateSession
from .state import DebateState


class DebateGraph:
    """
    Wires the ten-step schedule into a linear state machine.

    `step_order` exists so tests can attempt an out-of-order execution; the step nodes detect
    it against `next_step` and halt the session.
    """

    def __init__(self, session: DebateSession, step_order: Sequence[int] | None = None):
        self.session = session
        self.steps: list[DebateStepSpec] = [SCHEDULE[i - 1] for i in (step_order or range(1, len(SCHEDULE) + 1))]
        logging.debug("DebateGraph initialized with order %s.", [s.index for s in self.steps])

    @staticmethod
    def node_name(spec: DebateStepSpec) -> str:
        return f"step_{spec.index}"

    def build(self):
        """Builds and compiles the debate state machine."""
        workflow = StateGraph(DebateState)

        for spec in self.steps:
            workflow.add_node(self.node_name(spec), partial(node_debate_step, spec=spec, session=self.session))
        workflow.add_node("handle_error", partial(node_handle_error, session=self.session))

        workflow.set_entry_point(self.node_name(self.steps[0]))

        for current, following in zip(self.steps, [*self.steps[1:], None]):
            workflow.add_conditional_edges(
                self.node_name(current),
                edge_after_step,
                path_map={
                    "continue": self.node_name(following) if following else END,
                    "halt": END,
                    "error": "handle_error",
                },
            )

        workflow.add_edge("handle_error", END)

        return workflow.compile()
