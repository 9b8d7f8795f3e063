"""Walk the three-phase live protocol against an in-process service.

The same flow the browser client drives, here exercised end to end without
a network: create a session, acknowledge the problem, read the state and
goal, pick a policy, and watch the record land in the JSON Lines log.

Run:  python demos/06_live_session_walkthrough.py
"""

import tempfile
from pathlib import Path

from whmm.eventlog import read_records
from whmm.service import ChoiceLog, ProblemStore, SessionService

log_path = Path(tempfile.mkdtemp()) / "choices.jsonl"
service = SessionService(ProblemStore(), ChoiceLog(log_path))

session = service.create_session("war_on_drugs", cohort_id="demo")
print(f"phase 1 [{session.phase}]")
print(" ", service.phase_payload(session)["description"][:72], "...")

session = service.advance_phase(session.session_id)
payload = service.phase_payload(session)
print(f"\nphase 2 [{session.phase}]")
print(f"  current state: {payload['current_state']}")
print(f"  goal:          {', '.join(payload['goal'])}")

session = service.advance_phase(session.session_id)
payload = service.phase_payload(session)
print(f"\nphase 3 [{session.phase}] (display order is per-session)")
for i, policy in enumerate(payload["policies"], start=1):
    print(f"  {i}. ({policy['key']}) {policy['text']}")

record = service.submit_choice(session.session_id, "B")
print(f"\nsubmitted: {record.chosen}   latency {record.latency_ms} ms")

try:
    service.submit_choice(session.session_id, "A")
except Exception as exc:
    print(f"second submission rejected: {exc}")

stored = list(read_records(log_path))
print(f"\nlog holds {len(stored)} record(s); timestamps strictly increase:",
      stored[0].phase_timestamps)
