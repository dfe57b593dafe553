"""Artificial-current heuristics.

Each predictive agent assigns every obstacle a unit "current" vector; the
circular field then bends the trajectory around the obstacle in the plane
normal to that current.  Agents 1-5 use the named deterministic heuristics
below, agents 6 and up draw random currents from their own seeded stream.

All heuristics share one degenerate-case fallback: whenever a defining cross
product has norm below 1e-9, the current becomes ``normalize(d x e_z)`` (or
``normalize(d x e_x)`` if that is degenerate too), with ``d`` the unit vector
from the agent to the obstacle center.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .fields import AgentKinematics
from .scene import SphereObstacle, as_vec3

_EPS = 1e-9
_EZ = np.array([0.0, 0.0, 1.0])
_EX = np.array([1.0, 0.0, 0.0])


class HeuristicKind(Enum):
    VELOCITY = "velocity"
    PATH_LENGTH = "path_length"
    GOAL_VECTOR = "goal_vector"
    OBSTACLE_DISTANCE = "obstacle_distance"
    PATH_LENGTH_OBSTACLE_DISTANCE = "path_length_obstacle_distance"
    RANDOM = "random"


@dataclass(frozen=True)
class CurrentHeuristic:
    kind: HeuristicKind
    stream: int = 0  # distinguishes independent random heuristics


def agent_heuristic(agent_id: int) -> CurrentHeuristic:
    """Heuristic assignment by 1-based agent id: five deterministic agents,
    then independent random streams."""
    order = (
        HeuristicKind.VELOCITY,
        HeuristicKind.PATH_LENGTH,
        HeuristicKind.GOAL_VECTOR,
        HeuristicKind.OBSTACLE_DISTANCE,
        HeuristicKind.PATH_LENGTH_OBSTACLE_DISTANCE,
    )
    if agent_id < 1:
        raise ValueError("agent ids are 1-based")
    if agent_id <= len(order):
        return CurrentHeuristic(order[agent_id - 1])
    return CurrentHeuristic(HeuristicKind.RANDOM, stream=agent_id - len(order))


def _normalize_rows(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    norms = np.linalg.norm(m, axis=1)
    safe = np.where(norms > _EPS, norms, 1.0)
    return m / safe[:, None], norms


def _fallback_rows(dhat: np.ndarray) -> np.ndarray:
    c = np.cross(dhat, _EZ)
    unit, norms = _normalize_rows(c)
    bad = norms <= _EPS
    if np.any(bad):
        alt, _ = _normalize_rows(np.cross(dhat[bad], _EX))
        unit[bad] = alt
    return unit


def _with_fallback(raw: np.ndarray, dhat: np.ndarray) -> np.ndarray:
    unit, norms = _normalize_rows(raw)
    bad = norms <= _EPS
    if np.any(bad):
        unit[bad] = _fallback_rows(dhat[bad])
    return unit


def _velocity_rows(dhat, velocity):
    return _with_fallback(np.cross(dhat, velocity), dhat)


def _goal_rows(dhat, position, goal):
    return _with_fallback(np.cross(dhat, goal - position), dhat)


def _path_length_rows(dhat, position, velocity, goal):
    # keep the velocity-heuristic current, but flip its sign if the opposite
    # rotation produces a force better aligned with the goal direction
    c = _velocity_rows(dhat, velocity)
    force = c * float(velocity @ velocity) - velocity[None, :] * (c @ velocity)[:, None]
    score = force @ (goal - position)
    return np.where(score[:, None] < 0.0, -c, c)


def _obstacle_distance_rows(dhat, position, goal, nn_centers):
    if nn_centers is None:
        return _goal_rows(dhat, position, goal)
    return _with_fallback(np.cross(dhat, position - nn_centers), dhat)


def batch_currents(
    heuristic: CurrentHeuristic,
    position: np.ndarray,
    velocity: np.ndarray,
    centers: np.ndarray,
    goal: np.ndarray,
    nn_centers: np.ndarray | None,
    rng: np.random.Generator,
) -> np.ndarray:
    """Unit current per obstacle, vectorized over the rows of ``centers``.

    ``nn_centers`` carries, per obstacle, the center of its nearest other
    obstacle (None when the scene has fewer than two obstacles).  Random
    currents consume ``rng`` in row order, so a batched call matches repeated
    single-obstacle calls on the same generator state.
    """
    m = centers.shape[0]
    if m == 0:
        return np.zeros((0, 3))
    dhat, _ = _normalize_rows(centers - position)
    if heuristic.kind is HeuristicKind.RANDOM:
        return _with_fallback(rng.standard_normal((m, 3)), dhat)
    if heuristic.kind is HeuristicKind.VELOCITY:
        return _velocity_rows(dhat, velocity)
    if heuristic.kind is HeuristicKind.GOAL_VECTOR:
        return _goal_rows(dhat, position, goal)
    if heuristic.kind is HeuristicKind.PATH_LENGTH:
        return _path_length_rows(dhat, position, velocity, goal)
    if heuristic.kind is HeuristicKind.OBSTACLE_DISTANCE:
        return _obstacle_distance_rows(dhat, position, goal, nn_centers)
    if heuristic.kind is HeuristicKind.PATH_LENGTH_OBSTACLE_DISTANCE:
        combined = _path_length_rows(dhat, position, velocity, goal) + _obstacle_distance_rows(
            dhat, position, goal, nn_centers
        )
        return _with_fallback(combined, dhat)
    raise ValueError(f"unknown heuristic kind: {heuristic.kind}")


def compute_current(
    heuristic: CurrentHeuristic,
    kin: AgentKinematics,
    obstacle: SphereObstacle,
    goal,
    others: tuple[SphereObstacle, ...] = (),
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Unit current for a single obstacle; the scalar counterpart of
    batch_currents.

    ``others`` lists the remaining obstacles (used by the obstacle-distance
    heuristics to find the nearest neighbor of ``obstacle``).  ``rng`` is
    required for random heuristics.
    """
    goal = as_vec3(goal)
    nn = None
    if others:
        centers = np.stack([o.center for o in others])
        nn = centers[
            int(np.argmin(np.linalg.norm(centers - obstacle.center, axis=1)))
        ][None, :]
    if heuristic.kind is HeuristicKind.RANDOM and rng is None:
        raise ValueError("random heuristics need an rng")
    row = batch_currents(
        heuristic,
        kin.position,
        kin.velocity,
        obstacle.center[None, :],
        goal,
        nn,
        rng if rng is not None else np.random.default_rng(0),
    )
    return row[0]
