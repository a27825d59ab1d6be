"""Named experiment presets, stored as checked-in JSON config files."""

from __future__ import annotations

import json
from importlib import resources

from .errors import ConfigError


def preset_names():
    out = []
    for entry in resources.files("arithdyn._preset_data").iterdir():
        if entry.name.endswith(".json"):
            out.append(entry.name[:-5])
    return sorted(out)


def load_preset(name: str) -> dict:
    try:
        data = resources.files("arithdyn._preset_data").joinpath(name + ".json").read_text()
    except FileNotFoundError:
        raise ConfigError(f"unknown preset {name!r}; available: {preset_names()}")
    return json.loads(data)
