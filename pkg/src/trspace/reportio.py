"""Canonical JSON for blocks, approximations and reports.

Reports must be byte-identical across reruns with the same seeds, so
everything here sorts keys, avoids wall-clock values and serializes
containers in the documented order.
"""

from __future__ import annotations

import json
import math
from typing import Optional

from .model import Approx, Block, Config, SpaceModel


def block_to_json(block: Block) -> dict:
    return {"atoms": list(block.atoms), "source": list(block.source)}


def block_from_json(payload: dict) -> Block:
    return Block(source=tuple(payload["source"]), atoms=tuple(payload["atoms"]))


def approx_to_json(s: Approx) -> dict:
    return {"blocks": [block_to_json(b) for b in s.blocks]}


def approx_from_json(payload: dict) -> Approx:
    return Approx(tuple(block_from_json(b) for b in payload["blocks"]))


def depth_to_json(d) -> object:
    return "inf" if d == math.inf else int(d)


def config_to_json(config: Config) -> dict:
    return {
        "mu": config.mu,
        "depth_budget": config.depth_budget,
        "retries": config.retries,
        "max_reducts": config.max_reducts,
        "max_kernels": config.max_kernels,
        "seed": config.seed,
    }


def to_jsonable(obj):
    """Recursively rewrite engine objects into JSON-safe structures."""
    if isinstance(obj, Block):
        return block_to_json(obj)
    if isinstance(obj, Approx):
        return approx_to_json(obj)
    if isinstance(obj, Config):
        return config_to_json(obj)
    if obj is math.inf:
        return "inf"
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    if hasattr(obj, "to_json"):
        return to_jsonable(obj.to_json())
    return str(obj)


def canonical_json(obj) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2) + "\n"


def report_envelope(model: SpaceModel, body: dict, config: Optional[Config] = None) -> dict:
    out = {"instance": model.instance_payload(), "instance_tag": model.instance_tag()}
    if config is not None:
        out["config"] = config_to_json(config)
    out.update(body)
    return out
