import logging

from ..agent import PromptBundle, generate, web_search
from ..agent.helpers import requested_searches
from ..errors import CreditDebateError, ToolPermissionError
from ..journal import digest_text
from ..violations import Violation, ViolationKind
from .schedule import DebateStepSpec
from .session import DebateSession
from .state import DebateState, utterance_at
from .validation import build_utterance, record_step_usage, validate_step


def node_debate_step(state: DebateState, spec: DebateStepSpec, session: DebateSession):
    logging.debug("ENTERING NODE: step_%d (%s, %s)", spec.index, spec.speaker, spec.kind.value)

    expected = state["next_step"]
    if spec.index != expected:
        detail = f"step {spec.index} attempted while step {expected} is due"
        logging.error("Order breach: %s", detail)
        session.journal.record("order_breach", step=spec.index, expected=expected)
        return {
            "protocol_violations": [Violation.of(ViolationKind.ORDER_BREACH, spec.index, detail)],
            "halted_at": spec.index,
        }

    agent = session.agents[spec.speaker]
    context = [utterance_at(state, index) for index in spec.context_indices]
    bundle = PromptBundle(
        role=agent.id,
        step=spec.index,
        system=agent.system_prompt,
        task=session.runtime.prompts.task(spec.template_name, **session.task_variables(spec)),
        context=tuple(u.text for u in context),
        context_indices=spec.context_indices,
        locale=session.runtime.settings.locale,
    )
    session.journal.record(
        "step_started",
        step=spec.index,
        speaker=agent.id,
        context_indices=list(spec.context_indices),
        context_digests=[digest_text(text) for text in bundle.context],
    )

    clock = session.runtime.clock
    started = clock.monotonic()
    violations: list[Violation] = []
    web_items = []
    try:
        text = generate(agent.role, bundle, session.runtime.backend, session.journal)

        queries = requested_searches(text)
        if len(queries) > 1:
            logging.warning("%s asked for %d searches at step %d; only the first runs", agent.id, len(queries), spec.index)
        if queries:
            try:
                outcome = web_search(
                    agent.role,
                    queries[0],
                    session.policy,
                    session.budget,
                    provider=session.runtime.search_provider,
                    company_id=session.company_id,
                    clock=clock,
                    journal=session.journal,
                    step=spec.index,
                )
            except ToolPermissionError as e:
                logging.error("Tool permission breach at step %d: %s", spec.index, e)
                violations.append(Violation.of(ViolationKind.TOOL_PERMISSION, spec.index, str(e)))
            else:
                if outcome.items:
                    web_items = outcome.items
                    follow_up = bundle.model_copy(
                        update={"round": 2, "web_evidence": tuple(str(item) for item in web_items)}
                    )
                    text = generate(agent.role, follow_up, session.runtime.backend, session.journal)
    except CreditDebateError as e:
        logging.error("Step %d failed: %s", spec.index, e)
        return {"error": f"step {spec.index}: {e}", "failure": e}

    elapsed = max(0.0, clock.monotonic() - started)
    utterance = build_utterance(spec, agent.id, text, elapsed)
    violations.extend(validate_step(utterance, spec, state["ledger"], context=context, web_items=web_items))
    utterance = utterance.model_copy(update={"violations": violations})

    hard = [v for v in violations if v.is_hard]
    session.journal.record(
        "step_completed",
        step=spec.index,
        speaker=agent.id,
        factors=utterance.factors,
        citations=len(utterance.citations),
        violations=[v.kind.value for v in violations],
        hard_violations=len(hard),
        meta={"elapsed_seconds": elapsed},
    )

    update = {
        "utterances": [utterance],
        "ledger": record_step_usage(state["ledger"], utterance, spec),
        "next_step": spec.index + 1,
    }
    if hard and session.strict:
        logging.error("Hard violation at step %d in strict mode: %s", spec.index, hard[0].detail)
        update["halted_at"] = spec.index
    return update


def node_handle_error(state: DebateState, session: DebateSession):
    logging.debug("ENTERING NODE: handle_error")

    error = state.get("error", "An unknown error occurred.")
    session.journal.record(
        "aborted",
        reason=error,
        completed_steps=[u.step_index for u in state["utterances"]],
    )
    return {}
