import json
from pathlib import Path

import pytest

from logtrust import Log, LogRole, event_from_dict

REPO_ROOT = Path(__file__).resolve().parent.parent
SCENARIOS = REPO_ROOT / "scenarios"
DATA = Path(__file__).resolve().parent / "data"


@pytest.fixture()
def paper_scenario():
    with open(SCENARIOS / "paper_example.json", encoding="utf-8") as handle:
        return json.load(handle)


@pytest.fixture()
def paper_golden():
    with open(DATA / "paper_example_golden.json", encoding="utf-8") as handle:
        return json.load(handle)


def logs_from_state(state):
    """Rebuild Log objects from one serialized trace state entry."""
    edit = Log.from_events(
        LogRole.EDIT, [event_from_dict(e) for e in state["edit"]]
    )
    comm = Log.from_events(
        LogRole.COMM, [event_from_dict(e) for e in state["comm"]]
    )
    return edit, comm
