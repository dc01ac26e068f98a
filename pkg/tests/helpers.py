import json
from importlib import resources

SCENARIOS = resources.files("integral_points").joinpath("data/scenarios")


def scenario_doc(name: str) -> dict:
    return json.loads(SCENARIOS.joinpath(name + ".json").read_text())


def scenario_path(name: str) -> str:
    return str(SCENARIOS.joinpath(name + ".json"))
