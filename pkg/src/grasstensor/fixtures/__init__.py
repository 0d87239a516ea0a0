"""Setup files bundled with the package."""

import json
from importlib import resources

from ..geometry import ProjectionSetup


def names() -> list[str]:
    return sorted(p.name[:-5] for p in resources.files(__name__).iterdir() if p.name.endswith(".json"))


def path(name: str):
    return resources.files(__name__) / f"{name}.json"


def load_json(name: str) -> dict:
    return json.loads(path(name).read_text(encoding="utf-8"))


def load(name: str) -> ProjectionSetup:
    return ProjectionSetup.from_json(load_json(name))
