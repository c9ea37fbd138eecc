import logging

from .state import DebateState


def edge_after_step(state: DebateState) -> str:
    if state.get("error"):
        logging.debug("Error detected in state, routing to 'error'.")
        return "error"
    if state.get("halted_at"):
        logging.debug("Debate halted at step %s, routing to 'halt'.", state["halted_at"])
        return "halt"
    logging.debug("Step done, routing to step %s.", state["next_step"])
    return "continue"
