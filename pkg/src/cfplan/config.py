"""One JSON file configures a whole run: planner settings, cost weights,
tuner bounds and budget, scene randomizer, and the k of the gain predictor.
Every key is optional; missing sections keep their defaults, unknown keys are
rejected so typos fail loudly."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cost import AgentCostWeights, TrajectoryCostWeights
from .params import BoundsBox, default_bounds
from .planner import PlannerConfig
from .scene import (
    Cuboid,
    Cylinder,
    SceneRandomizerConfig,
    SphereShape,
    WorkspaceBounds,
    default_desk_randomizer,
)


@dataclass(frozen=True)
class RunConfig:
    planner: PlannerConfig
    agent_weights: AgentCostWeights
    trajectory_weights: TrajectoryCostWeights
    bounds: BoundsBox
    randomizer: SceneRandomizerConfig
    n_init: int = 8
    n_iter: int = 48
    knn_k: int = 3


def default_run_config() -> RunConfig:
    return RunConfig(
        planner=PlannerConfig(),
        agent_weights=AgentCostWeights(),
        trajectory_weights=TrajectoryCostWeights(),
        bounds=default_bounds(),
        randomizer=default_desk_randomizer(),
    )


def _check_keys(section: str, data: dict, allowed) -> None:
    unknown = set(data) - set(allowed)
    if unknown:
        raise ValueError(f"unknown {section} config keys: {sorted(unknown)}")


def _merge_dataclass(section: str, default, data: dict):
    names = [f.name for f in dataclasses.fields(default)]
    _check_keys(section, data, names)
    return dataclasses.replace(default, **data)


def _planner_from_dict(data: dict) -> PlannerConfig:
    data = dict(data)
    if data.get("jacobian") is not None:
        data["jacobian"] = np.asarray(data["jacobian"], dtype=float)
    return _merge_dataclass("planner", PlannerConfig(), data)


def _bounds_from_dict(data: dict, n_agents: int) -> BoundsBox:
    if "low" in data or "high" in data:
        _check_keys("bounds", data, ("low", "high"))
        return BoundsBox(data["low"], data["high"])
    _check_keys("bounds", data, ("gain_high", "r_d_range"))
    return default_bounds(
        n_agents,
        gain_high=float(data.get("gain_high", 200.0)),
        r_d_range=tuple(data.get("r_d_range", (0.05, 1.0))),
    )


def _shape_from_dict(data: dict):
    kind = data.get("kind")
    if kind == "cuboid":
        return Cuboid(data["center"], data["half_extents"])
    if kind == "sphere":
        return SphereShape(data["center"], data["radius"])
    if kind == "cylinder":
        return Cylinder(data["center"], data["axis"], data["radius"], data["half_length"])
    raise ValueError(f"unknown shape kind: {kind!r}")


def _workspace_from_dict(data: dict) -> WorkspaceBounds:
    _check_keys("workspace", data, ("min", "max"))
    return WorkspaceBounds(data["min"], data["max"])


def _randomizer_from_dict(data: dict) -> SceneRandomizerConfig:
    data = dict(data)
    if "workspace" in data:
        data["workspace"] = _workspace_from_dict(data["workspace"])
    if "goal_region" in data:
        data["goal_region"] = _workspace_from_dict(data["goal_region"])
    if "fixed_shapes" in data:
        data["fixed_shapes"] = tuple(_shape_from_dict(s) for s in data["fixed_shapes"])
    for key in (
        "sphere_radius_range",
        "cuboid_half_range",
        "cylinder_radius_range",
        "cylinder_half_length_range",
    ):
        if key in data:
            data[key] = tuple(data[key])
    return _merge_dataclass("randomizer", default_desk_randomizer(), data)


def run_config_from_dict(data: dict) -> RunConfig:
    _check_keys(
        "run",
        data,
        (
            "planner",
            "agent_weights",
            "trajectory_weights",
            "bounds",
            "randomizer",
            "tuner",
            "knn_k",
        ),
    )
    planner = _planner_from_dict(data.get("planner", {}))
    tuner = dict(data.get("tuner", {}))
    _check_keys("tuner", tuner, ("n_init", "n_iter"))
    return RunConfig(
        planner=planner,
        agent_weights=_merge_dataclass(
            "agent_weights", AgentCostWeights(), data.get("agent_weights", {})
        ),
        trajectory_weights=_merge_dataclass(
            "trajectory_weights",
            TrajectoryCostWeights(),
            data.get("trajectory_weights", {}),
        ),
        bounds=_bounds_from_dict(data.get("bounds", {}), planner.n_agents),
        randomizer=_randomizer_from_dict(data.get("randomizer", {})),
        n_init=int(tuner.get("n_init", 8)),
        n_iter=int(tuner.get("n_iter", 48)),
        knn_k=int(data.get("knn_k", 3)),
    )


def load_run_config(path=None) -> RunConfig:
    if path is None:
        return default_run_config()
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ValueError(f"{path}: config root must be a JSON object")
    return run_config_from_dict(data)
