"""Scenario configuration files.

Flat ``key = value`` text grouped into sections::

    [species]
    name = Na

    [cavity]
    q_opt = 1e8
    area = 1e-4          # m^2

    [ensemble]
    n_atoms = 6e5

Sections are species, cavity, drive, ensemble, environment and detection;
values are SI. Unknown sections or keys are rejected.
"""

from __future__ import annotations

import configparser
import hashlib
import json
from pathlib import Path

from .design_bench import CONFIG_SCHEMA, ConfigError, ExperimentScenario, build_scenario

__all__ = ["read_config", "parse_config", "config_hash", "load_scenario", "render_config"]


def parse_config(text: str) -> dict[str, dict[str, str]]:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    parser.optionxform = str  # keys are case-sensitive
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError("config", f"cannot parse: {exc}") from None
    if parser.defaults():
        raise ConfigError("DEFAULT", "keys outside a section are not allowed")
    return {section: dict(parser.items(section, raw=True)) for section in parser.sections()}


def read_config(path) -> dict[str, dict[str, str]]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror or exc}") from None
    return parse_config(text)


def config_hash(config: dict[str, dict[str, str]]) -> str:
    """SHA-256 of the parsed config; comments, spacing and order do not count."""
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def load_scenario(path) -> tuple[ExperimentScenario, dict[str, dict[str, str]]]:
    config = read_config(path)
    return build_scenario(config), config


def render_config(values: dict[str, dict[str, object]]) -> str:
    """Write sections back out in schema order."""
    lines = []
    for section in CONFIG_SCHEMA:
        if section not in values:
            continue
        lines.append(f"[{section}]")
        for key, value in values[section].items():
            lines.append(f"{key} = {value}")
        lines.append("")
    return "\n".join(lines)
