import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rulecf import parse_scenario  # noqa: E402
from rulecf.engine import replay  # noqa: E402

ROOT = Path(__file__).resolve().parent.parent
SCENARIOS = ROOT / "scenarios"
DATA = Path(__file__).resolve().parent / "data"


def load_scenario(name: str):
    return parse_scenario((SCENARIOS / name).read_text())


@pytest.fixture(scope="session")
def lamp_scenario():
    return load_scenario("lamp.json")


@pytest.fixture(scope="session")
def door_scenario():
    return load_scenario("meeting_room_door.json")


@pytest.fixture(scope="session")
def speaker_scenario():
    return load_scenario("office_speaker.json")


@pytest.fixture(scope="session")
def lamp_doc():
    return json.loads((SCENARIOS / "lamp.json").read_text())


@pytest.fixture()
def lamp_live(lamp_scenario):
    """(state, history) of the lamp scenario at its recorded clock."""
    return replay(lamp_scenario)


@pytest.fixture(scope="session")
def topsis_golden():
    return json.loads((DATA / "topsis_golden.json").read_text())
