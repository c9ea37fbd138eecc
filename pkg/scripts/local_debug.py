import json
import os
import sys

from dotenv import load_dotenv

load_dotenv()


from credit_debate.agent.build import AgentBuilder
from credit_debate.config import ProjectSettings
from credit_debate.debate import run_debate
from credit_debate.knowledge import KnowledgePool
from credit_debate.synthesis import aggregate, render_report


if __name__ == '__main__':

    # Expects CREDIT_DEBATE_POOL_DIR and CREDIT_DEBATE_SCRIPT_PATH (or a remote backend) in .env
    settings = ProjectSettings()
    pool, _ = KnowledgePool.from_directory(settings.pool_dir)
    company_id = sys.argv[1] if len(sys.argv) > 1 else os.environ.get("DEBUG_COMPANY", pool.companies()[0])

    runtime = AgentBuilder(settings).build()
    transcript = run_debate(company_id, pool, runtime, run_id="local-debug")

    for utterance in transcript.utterances:
        print(f"--- Step {utterance.step_index} ({utterance.speaker}, {utterance.kind.value}) ---")
        print(utterance.text)
        for violation in utterance.violations:
            print(f"  ! {violation.severity.value} {violation.kind.value}: {violation.detail}")

    print(json.dumps(render_report(aggregate(transcript)), ensure_ascii=False, indent=2))
