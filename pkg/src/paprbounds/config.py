"""Pinned defaults, optionally overridden by a user JSON file.

Lookup order: explicit path, then ``$PAPRBOUNDS_CONFIG``, then the packaged
``defaults.json``.  A user file only needs the keys it changes.
"""
from __future__ import annotations

import copy
import json
import os
from importlib import resources
from pathlib import Path

ENV_VAR = "PAPRBOUNDS_CONFIG"


def _merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = v
    return out


def packaged_defaults() -> dict:
    text = resources.files("paprbounds").joinpath("defaults.json").read_text()
    return json.loads(text)


def load_config(path: str | os.PathLike | None = None) -> dict:
    cfg = packaged_defaults()
    cfg["source"] = "packaged"
    path = path or os.environ.get(ENV_VAR)
    if path:
        user = json.loads(Path(path).read_text())
        cfg = _merge(cfg, user)
        cfg["source"] = str(path)
    return cfg
