import logging

from .state import NasState


def edge_after_stage(state: NasState) -> str:
    if state.get("error"):
        logging.debug("Stage %s failed, routing to 'error'.", state.get("failed_stage"))
        return "error"
    return "continue"
