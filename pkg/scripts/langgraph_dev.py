import os

from dotenv import load_dotenv

load_dotenv()


from credit_debate.agent.build import AgentBuilder
from credit_debate.config import ProjectSettings
from credit_debate.debate import DebateGraph, prepare_session
from credit_debate.journal import RunJournal
from credit_debate.knowledge import KnowledgePool

# Graph served by `langgraph dev`; the company comes from DEBUG_COMPANY or the first pool entry.
settings = ProjectSettings()
pool, _ = KnowledgePool.from_directory(settings.pool_dir)
runtime = AgentBuilder(settings).build()
session = prepare_session(
    os.environ.get("DEBUG_COMPANY", pool.companies()[0]),
    pool,
    runtime,
    run_id="langgraph-dev",
    journal=RunJournal(clock=runtime.clock),
)
graph = DebateGraph(session).build()
